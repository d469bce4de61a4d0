#pragma once

// Precision-generic numerics behind EnsembleModel. R is double or ext_real.

#include "svev/detail/ext.hpp"
#include "svev/detail/specfun_impl.hpp"
#include "svev/ensembles.hpp"
#include "svev/errors.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

namespace svev::detail {

template <class R>
R binom_r(int n, int k) {
    if (k < 0 || k > n) return R(0);
    R b = 1;
    for (int i = 1; i <= k; ++i) b = b * R(n - k + i) / R(i);
    return b;
}

template <class R>
R factorial_r(int n) {
    R f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

template <class R>
class ModelCore {
public:
    explicit ModelCore(const ModelParams& p)
        : n(p.n), family(p.family), alpha(p.alpha), beta(p.beta) {
        using std::exp;
        mellin.resize(n);
        for (int c = 0; c < n; ++c) mellin[c] = mellin_w(R(c + 1));
        coef.assign(n, std::vector<R>(n, R(0)));
        for (int j = 0; j < n; ++j)
            for (int c = 0; c <= j; ++c)
                coef[j][c] = binom_r<R>(j, c) * ((c % 2) ? R(-1) : R(1)) / mellin[c];
        nfact = factorial_r<R>(n);
    }

    int n;
    Family family;
    R alpha, beta;
    std::vector<R> mellin;               // w~(c+1), c = 0..n-1
    std::vector<std::vector<R>> coef;    // p_j(x) = sum_c coef[j][c] x^c
    R nfact;

    bool jacobi() const { return family == Family::Jacobi; }

    R weight(const R& x) const {
        using std::exp;
        using std::pow;
        if (!(x > 0)) return R(0);
        if (!jacobi()) return pow(x, alpha) * exp(-x);
        if (x >= 1) return R(0);
        return pow(x, alpha) * pow(R(1) - x, beta + R(n - 1));
    }

    R weight_derivative(const R& x) const {
        if (!(x > 0)) return R(0);
        if (!jacobi()) return (alpha / x - 1) * weight(x);
        if (x >= 1) return R(0);
        return (alpha / x - (beta + R(n - 1)) / (R(1) - x)) * weight(x);
    }

    R mellin_w(const R& s) const {
        using boost::math::lgamma;
        using std::exp;
        if (!(s + alpha > 0)) throw DomainError("mellin_w: diverges for s <= -alpha");
        if (!jacobi()) return boost::math::tgamma(s + alpha);
        return exp(lgamma(s + alpha) + lgamma(R(n) + beta) - lgamma(R(n) + alpha + beta + s));
    }

    R incomplete_mellin_w(const R& x, const R& s) const {
        if (!(s + alpha > 0)) throw DomainError("incomplete_mellin_w: diverges for s <= -alpha");
        if (!(x > 0)) return R(0);
        if (!jacobi()) return boost::math::tgamma_lower(s + alpha, x);
        const R xx = x < 1 ? x : R(1);
        if (xx >= 1) return mellin_w(s);
        return boost::math::beta(s + alpha, beta + R(n), xx);
    }

    R p_generic(int j, const R& x) const {
        CompensatedSum<R> acc;
        R xp = 1;
        for (int c = 0; c <= j; ++c) {
            acc.add(coef[j][c] * xp);
            xp *= x;
        }
        return acc.value();
    }

    R p_family(int j, const R& x) const {
        using boost::math::lgamma;
        using std::exp;
        if (!jacobi())
            return exp(lgamma(R(j + 1)) - lgamma(R(j) + alpha + 1)) * laguerre_sum<R>(j, alpha, x);
        const R pref = exp(lgamma(R(j + 1)) + lgamma(R(n) + alpha + beta + 1) -
                           lgamma(R(j) + alpha + 1) - lgamma(R(n) + beta));
        return pref * jacobi_sum<R>(j, alpha, beta + R(n - j), R(1) - 2 * x);
    }

    // q_j(x) = (1/j!) d^j [x^j w(x)]
    R q(int j, const R& x) const {
        using std::exp;
        using std::pow;
        if (!(x > 0)) return R(0);
        if (!jacobi()) return laguerre_sum<R>(j, alpha, x) * pow(x, alpha) * exp(-x);
        if (x >= 1) return R(0);
        const R b = beta + R(n - 1 - j);
        return jacobi_sum<R>(j, alpha, b, R(1) - 2 * x) * pow(x, alpha) * pow(R(1) - x, b);
    }

    R kernel(const R& x, const R& y) const {
        CompensatedSum<R> acc;
        for (int b = 0; b < n; ++b) acc.add(q(b, x) * p_generic(b, y));
        return acc.value();
    }

    // coefficients of y -> K(x, y)
    std::vector<R> kernel_coeffs(const R& x) const {
        std::vector<R> out(n, R(0));
        for (int b = 0; b < n; ++b) {
            const R qb = q(b, x);
            for (int c = 0; c <= b; ++c) out[c] += qb * coef[b][c];
        }
        return out;
    }

    // d^m [y^n w(y)], 0 <= m <= n-1, via the Rodrigues formulas
    R deriv_ynw(int m, const R& y) const {
        using std::exp;
        using std::pow;
        if (!(y > 0)) return R(0);
        const R mf = factorial_r<R>(m);
        if (!jacobi()) {
            const R nu = R(n - m) + alpha;
            return mf * pow(y, nu) * exp(-y) * laguerre_sum<R>(m, nu, y);
        }
        if (y >= 1) return R(0);
        const R a = R(n - m) + alpha;
        const R b = beta + R(n - 1 - m);
        return mf * pow(y, a) * pow(R(1) - y, b) * jacobi_sum<R>(m, a, b, R(1) - 2 * y);
    }

    void require_qn() const {
        if (jacobi() && !(beta > 0))
            throw DomainError("q_n requires beta > 0 for the Jacobi ensemble");
    }

    // n! q~_{n,y}(c+1) = sum_{p=0}^c binom(c,p) p! (-1)^p y^{c-p} d^{n-1-p}[y^n w](y)
    R qn_tilde(const R& y, int c) const {
        using std::pow;
        require_qn();
        if (c < 0 || c >= n) throw IndexError("incomplete_mellin_qn: c must lie in 0..n-1");
        if (!(y > 0)) return R(0);
        const R yy = (jacobi() && y > 1) ? R(1) : y;
        CompensatedSum<R> acc;
        R pf = 1;  // p!
        for (int p = 0; p <= c; ++p) {
            if (p > 0) pf *= p;
            const R term = binom_r<R>(c, p) * pf * ((p % 2) ? R(-1) : R(1)) * pow(yy, c - p) *
                           deriv_ynw(n - 1 - p, yy);
            acc.add(term);
        }
        return acc.value() / nfact;
    }

    R qn_tilde_hyp(const R& y, int c) const {
        using boost::math::lgamma;
        using std::exp;
        using std::pow;
        require_qn();
        if (c < 0 || c >= n) throw IndexError("incomplete_mellin_qn: c must lie in 0..n-1");
        if (!(y > 0)) return R(0);
        const ext_real yy = (jacobi() && y > 1) ? ext_real(1) : to_ext(y);
        const ext_real al = to_ext(alpha);
        std::vector<ext_real> up{al + c + 1, al + n + 1};
        std::vector<ext_real> lo{al + 1, al + c + 2};
        ext_real arg = -yy;
        if (jacobi()) {
            up.push_back(ext_real(1 - n) - to_ext(beta));
            arg = yy;
        }
        auto s = pfq_sum<ext_real>(up, lo, arg, 1e-30, 200000);
        const ext_real pref = exp(lgamma(al + n + 1) - lgamma(al + 1) - lgamma(ext_real(n + 1))) *
                              pow(yy, al + c + 1) / (al + c + 1);
        return from_ext(pref * s.value);
    }

private:
    static R from_ext(const ext_real& v) {
        if constexpr (std::is_same_v<R, ext_real>)
            return v;
        else
            return static_cast<R>(v);
    }
    static ext_real to_ext(const R& v) {
        if constexpr (std::is_same_v<R, ext_real>)
            return v;
        else
            return ext_real(v);
    }
};

}  // namespace svev::detail
