#include "svev/quad.hpp"

#include "svev/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>

namespace svev {

namespace {

// Kronrod rule with embedded Gauss weights on [-1, 1], expanded to the full node list.
struct KronrodRule {
    std::vector<double> x, wk, wg;
};

template <unsigned N>
KronrodRule make_kronrod() {
    using GK = boost::math::quadrature::gauss_kronrod<double, N>;
    using G = boost::math::quadrature::gauss<double, (N - 1) / 2>;
    const auto& abs = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    const unsigned gauss_order = (N - 1) / 2;
    KronrodRule r;
    r.x.push_back(0.0);
    r.wk.push_back(wk[0]);
    r.wg.push_back((gauss_order & 1) ? wg[0] : 0.0);
    const unsigned gauss_start = (gauss_order & 1) ? 2 : 1;
    for (unsigned i = 1; i < abs.size(); ++i) {
        const bool is_gauss = i >= gauss_start && (i - gauss_start) % 2 == 0;
        const double g = is_gauss ? wg[i / 2] : 0.0;
        for (double s : {1.0, -1.0}) {
            r.x.push_back(s * abs[i]);
            r.wk.push_back(wk[i]);
            r.wg.push_back(g);
        }
    }
    return r;
}

const KronrodRule& kronrod(int order) {
    static const KronrodRule k15 = make_kronrod<15>();
    static const KronrodRule k21 = make_kronrod<21>();
    static const KronrodRule k31 = make_kronrod<31>();
    static const KronrodRule k41 = make_kronrod<41>();
    static const KronrodRule k51 = make_kronrod<51>();
    static const KronrodRule k61 = make_kronrod<61>();
    switch (order) {
        case 15: return k15;
        case 21: return k21;
        case 31: return k31;
        case 41: return k41;
        case 51: return k51;
        case 61: return k61;
        default:
            throw DomainError("adaptive quadrature order must be one of 15, 21, 31, 41, 51, 61");
    }
}

struct Panel {
    double lo, hi, value, err;
    int depth;
    bool operator<(const Panel& o) const { return err < o.err; }
};

// Integrate g over [0,1] in s; g already includes the smoothing Jacobian.
template <class G>
Panel eval_panel(const G& g, const KronrodRule& rule, double lo, double hi, int depth, int& evals) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double k = 0.0, gs = 0.0;
    for (size_t i = 0; i < rule.x.size(); ++i) {
        const double v = g(c + h * rule.x[i]);
        k += rule.wk[i] * v;
        gs += rule.wg[i] * v;
    }
    evals += static_cast<int>(rule.x.size());
    return {lo, hi, k * h, std::abs(k - gs) * h, depth};
}

constexpr int kMaxPanels = 20000;

}  // namespace

void QuadratureSpec::validate() const {
    if (order < 2) throw DomainError("QuadratureSpec: order must be >= 2");
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw DomainError("QuadratureSpec: tolerances must be positive");
    if (max_depth < 1) throw DomainError("QuadratureSpec: max_depth must be >= 1");
}

const GaussRule& gauss_legendre(int m) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    if (m < 1) throw DomainError("gauss_legendre: order must be >= 1");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    GaussRule r;
    r.x.resize(m);
    r.w.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        // Newton iteration on P_m from the Chebyshev-like initial guess
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 1.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= m; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = m * (z * p1 - p0) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.x[i] = -z;
        r.x[m - 1 - i] = z;
        r.w[i] = w;
        r.w[m - 1 - i] = w;
    }
    if (m % 2 == 1) r.x[m / 2] = 0.0;
    return cache.emplace(m, std::move(r)).first->second;
}

QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (!(a <= b)) throw DomainError("integrate: need a <= b");
    QuadResult out;
    if (a == b) return out;
    const double L = b - a;

    if (spec.kind == QuadratureSpec::Kind::FixedGauss) {
        const GaussRule& g = gauss_legendre(spec.order);
        const double c = 0.5 * (a + b), h = 0.5 * L;
        double s = 0.0;
        for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(c + h * g.x[i]);
        out.value = s * h;
        out.evaluations = spec.order;
        out.err_est = 0.0;  // a single fixed rule carries no internal error estimate
        return out;
    }

    const KronrodRule& rule = kronrod(spec.order);
    // x = a + L psi(s), psi(s) = 3 s^2 - 2 s^3, psi'(s) = 6 s (1 - s)
    auto g = [&](double s) {
        const double psi = s * s * (3.0 - 2.0 * s);
        const double jac = 6.0 * s * (1.0 - s);
        if (jac == 0.0) return 0.0;
        return f(a + L * psi) * L * jac;
    };

    int evals = 0;
    std::priority_queue<Panel> heap;
    Panel first = eval_panel(g, rule, 0.0, 1.0, 0, evals);
    heap.push(first);
    double total = first.value, err = first.err;
    std::vector<Panel> done;  // panels at max depth
    double done_val = 0.0, done_err = 0.0;
    while (!heap.empty()) {
        const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (err <= target) break;
        if (static_cast<int>(heap.size() + done.size()) >= kMaxPanels) break;
        Panel p = heap.top();
        heap.pop();
        if (p.depth >= spec.max_depth) {
            done.push_back(p);
            done_val += p.value;
            done_err += p.err;
            continue;
        }
        const double mid = 0.5 * (p.lo + p.hi);
        Panel l = eval_panel(g, rule, p.lo, mid, p.depth + 1, evals);
        Panel r = eval_panel(g, rule, mid, p.hi, p.depth + 1, evals);
        total += l.value + r.value - p.value;
        err += l.err + r.err - p.err;
        heap.push(l);
        heap.push(r);
    }
    // resum to avoid drift from the incremental updates
    double v = done_val, e = done_err;
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().err;
        heap.pop();
    }
    out.value = v;
    out.err_est = e;
    out.evaluations = evals;
    out.converged = e <= std::max(spec.abs_tol, spec.rel_tol * std::abs(v)) && std::isfinite(v);
    return out;
}

QuadResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec) {
    auto g = [&](double tau) {
        if (tau >= 1.0) return 0.0;
        const double om = 1.0 - tau;
        return f(tau / om) / (om * om);
    };
    return integrate(g, 0.0, 1.0, spec);
}

QuadResult integrate_pieces(const Integrand& f, const std::vector<double>& pts, const QuadratureSpec& spec) {
    QuadResult out;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i] < pts[i + 1])) continue;
        QuadResult r = integrate(f, pts[i], pts[i + 1], spec);
        out.value += r.value;
        out.err_est += r.err_est;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }
    return out;
}

double value_or_throw(const QuadResult& r, const char* what) {
    if (!r.converged)
        throw ToleranceNotMet(std::string(what) + ": quadrature tolerance not met", r.value, r.err_est);
    return r.value;
}

}  // namespace svev
