#include "svev/specfun.hpp"

#include "svev/detail/specfun_impl.hpp"
#include "svev/errors.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

namespace svev {

double ln_gamma(double x) {
    if (!(x > 0)) throw DomainError("ln_gamma: x must be positive");
    return boost::math::lgamma(x);
}

double lower_inc_gamma(double s, double x) {
    if (!(s > 0) || !(x >= 0)) throw DomainError("lower_inc_gamma: need s > 0, x >= 0");
    if (x == 0) return 0.0;
    return boost::math::tgamma_lower(s, x);
}

double inc_beta(double x, double a, double b) {
    if (!(x >= 0 && x <= 1) || !(a > 0) || !(b > 0))
        throw DomainError("inc_beta: need 0 <= x <= 1, a > 0, b > 0");
    if (x == 0) return 0.0;
    return boost::math::beta(a, b, x);
}

double laguerre_poly(int j, double alpha, double x) {
    if (!(alpha > -1)) throw DomainError("laguerre_poly: alpha must exceed -1");
    if (j >= 8 || std::abs(x) > 8.0)
        return static_cast<double>(detail::laguerre_sum<ext_real>(j, alpha, x));
    return detail::laguerre_sum<double>(j, alpha, x);
}

double jacobi_poly(int j, double alpha, double beta, double x) {
    if (!(alpha > -1) || !(beta > -1)) throw DomainError("jacobi_poly: alpha, beta must exceed -1");
    if (j >= 8 || std::abs(x) > 8.0)
        return static_cast<double>(detail::jacobi_sum<ext_real>(j, alpha, beta, x));
    return detail::jacobi_sum<double>(j, alpha, beta, x);
}

HypSeriesResult hyp_pfq(const HypSeriesParams& p) {
    std::vector<ext_real> up(p.upper.begin(), p.upper.end());
    std::vector<ext_real> lo(p.lower.begin(), p.lower.end());
    auto r = detail::pfq_sum<ext_real>(up, lo, ext_real(p.argument), p.term_tol, p.max_terms);
    return {static_cast<double>(r.value), static_cast<double>(r.achieved), r.terms};
}

}  // namespace svev
