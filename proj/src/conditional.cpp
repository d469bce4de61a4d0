#include "svev/correlations.hpp"

#include "svev/detail/ext.hpp"
#include "svev/detail/linalg.hpp"
#include "svev/detail/model_core.hpp"
#include "svev/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace svev {

namespace {

// N/D and optionally its r-derivative. M[c][b] = binom(n-1,c) (-a_b/r)^c,
// M x = (1,...,1), N/D = sum_b g_b x_b with g_b = (1-a_b/r)^{n-1} Theta(r-a_b).
template <class R>
bool ratio_t(double rd, const std::vector<double>& ad, bool deriv, double& out) {
    using std::abs;
    using std::pow;
    const int n = static_cast<int>(ad.size());
    const R r = rd;
    std::vector<R> M(n * n), x(n, R(1));
    for (int c = 0; c < n; ++c) {
        const R bc = detail::binom_r<R>(n - 1, c);
        for (int b = 0; b < n; ++b) M[c * n + b] = bc * pow(-R(ad[b]) / r, c);
    }
    const R growth = detail::solve_lu<R>(M, x, n);
    if (growth < 0) throw PrecisionInsufficient("conditional density: singular moment system");
    if constexpr (std::is_same_v<R, double>) {
        if (growth > 1e8) return false;
    }
    std::vector<R> g(n), dg(n);
    for (int b = 0; b < n; ++b) {
        const R a = ad[b];
        if (r >= a) {
            g[b] = pow(R(1) - a / r, n - 1);
            dg[b] = n >= 2 ? R(n - 1) * pow(R(1) - a / r, n - 2) * a / (r * r) : R(0);
        } else {
            g[b] = dg[b] = R(0);
        }
    }
    if (!deriv) {
        detail::CompensatedSum<R> s;
        for (int b = 0; b < n; ++b) s.add(g[b] * x[b]);
        out = static_cast<double>(s.value());
        return true;
    }
    // x' = -M^{-1} M' x, M'[c][b] = -(c/r) M[c][b]
    std::vector<R> rhs(n, R(0));
    for (int c = 0; c < n; ++c) {
        R s = 0;
        for (int b = 0; b < n; ++b) s += M[c * n + b] * x[b];
        rhs[c] = R(c) / r * s;
    }
    if (detail::solve_lu<R>(M, rhs, n) < 0) throw PrecisionInsufficient("conditional density: singular moment system");
    detail::CompensatedSum<R> s;
    for (int b = 0; b < n; ++b) s.add(dg[b] * x[b] + g[b] * rhs[b]);
    out = static_cast<double>(s.value());
    return true;
}

bool needs_extended(const std::vector<double>& a) {
    if (a.size() > 10) return true;
    std::vector<double> s = a;
    std::sort(s.begin(), s.end());
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i] - s[i - 1] < 1e-4 * s[i]) return true;
    return false;
}

double ratio(double r, const std::vector<double>& a, bool deriv) {
    double out = 0.0;
    if (!needs_extended(a) && ratio_t<double>(r, a, deriv, out)) return out;
    ratio_t<ext_real>(r, a, deriv, out);
    return out;
}

void check_inputs(double r, const std::vector<double>& a) {
    if (a.empty()) throw DomainError("conditional density: need at least one squared singular value");
    if (!(r > 0)) throw DomainError("conditional density: r must be positive");
    for (double x : a)
        if (!(x > 0)) throw DomainError("conditional density: squared singular values must be positive");
}

template <class F>
double with_ties(const std::vector<double>& a, const ConditionalOptions& opt, const F& eval) {
    if (!is_degenerate(a)) return eval(a, 1.0);
    if (!opt.allow_degenerate)
        throw DegenerateInput("conditional density: coinciding squared singular values");
    const double v1 = eval(perturb_ties(a, opt.epsilon), opt.epsilon);
    if (!opt.richardson) return v1;
    const double v2 = eval(perturb_ties(a, 2 * opt.epsilon), 2 * opt.epsilon);
    return 2 * v1 - v2;
}

}  // namespace

bool is_degenerate(const std::vector<double>& a) {
    double scale = 0.0;
    for (double x : a) scale = std::max(scale, std::abs(x));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j)
            if (std::abs(a[i] - a[j]) <= 1e-9 * scale) return true;
    return false;
}

std::vector<double> perturb_ties(const std::vector<double>& a, double eps) {
    std::vector<size_t> idx(a.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](size_t i, size_t j) { return a[i] < a[j]; });
    double scale = 0.0;
    for (double x : a) scale = std::max(scale, std::abs(x));
    std::vector<double> out = a;
    size_t i = 0;
    while (i < idx.size()) {
        size_t j = i + 1;
        while (j < idx.size() && std::abs(a[idx[j]] - a[idx[i]]) <= 1e-9 * scale) ++j;
        const size_t m = j - i;
        if (m > 1) {
            const double v = a[idx[i]];
            for (size_t k = 0; k < m; ++k)
                out[idx[i + k]] = v * (1.0 + eps * (static_cast<double>(k) - 0.5 * static_cast<double>(m - 1)));
        }
        i = j;
    }
    return out;
}

double conditional_cdf(double r, const std::vector<double>& a, const ConditionalOptions& opt) {
    check_inputs(r, a);
    const double n = static_cast<double>(a.size());
    return with_ties(a, opt, [&](const std::vector<double>& aa, double) { return ratio(r, aa, false) / n; });
}

double conditional_density(int n, double r, const std::vector<double>& a, const ConditionalOptions& opt) {
    check_inputs(r, a);
    if (n != static_cast<int>(a.size())) throw DomainError("conditional density: need exactly n squared singular values");
    if (!(opt.rel_step > 0 && opt.rel_step < 0.1)) throw DomainError("conditional density: rel_step out of range");
    return with_ties(a, opt, [&](const std::vector<double>& aa, double eps) {
        // eigenradii lie in [min a, max a]: below, N = 0; above, N/D = n identically
        const auto [lo, hi] = std::minmax_element(aa.begin(), aa.end());
        if (r < *lo || r > *hi) return 0.0;
        if (opt.derivative == ConditionalOptions::Derivative::Analytic) return ratio(r, aa, true) / n;
        // step well below the spread of perturbed ties
        const double h = r * std::min(opt.rel_step, eps < 1.0 ? 0.1 * eps : opt.rel_step);
        auto f = [&](double x) { return ratio(x, aa, false); };
        // the ratio has kinks at r = a_b; keep the stencil on one side of them
        int side = 0;
        for (double x : aa)
            if (std::abs(r - x) < 2.5 * h) side = r >= x ? 1 : -1;
        if (side != 0) {
            const double s = side * h;
            return (-25 * f(r) + 48 * f(r + s) - 36 * f(r + 2 * s) + 16 * f(r + 3 * s) - 3 * f(r + 4 * s)) / (12 * s) / n;
        }
        return (f(r - 2 * h) - 8 * f(r - h) + 8 * f(r + h) - f(r + 2 * h)) / (12 * h) / n;
    });
}

}  // namespace svev
