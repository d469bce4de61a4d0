#include "svev/correlations.hpp"

#include "svev/detail/linalg.hpp"
#include "svev/detail/model_core.hpp"
#include "svev/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace svev {

using detail::CompensatedSum;
using detail::ModelCore;

CovContext::CovContext(EnsembleModel m, QuadratureSpec q, double derivative_step)
    : model(std::move(m)), quad(q), derivative_step(derivative_step) {
    quad.validate();
    if (!(derivative_step > 1e-8 && derivative_step < 1e-3))
        throw DomainError("CovContext: derivative_step must lie in (1e-8, 1e-3)");
}

namespace {

template <class R>
double dbl(const R& v) {
    return static_cast<double>(v);
}

void require_cov_n(const CovContext& ctx) {
    if (ctx.model.n() > 2) return;
    if (ctx.model.n() == 2 && ctx.allow_n2) return;
    throw DomainError("cross-covariance formulas need n > 2 (n = 2 only with the explicit opt-in)");
}

void require_support(const CovContext& ctx, double x, const char* what) {
    if (!(x > 0)) throw DomainError(std::string(what) + ": argument must be positive");
    if (ctx.model.family() == Family::Jacobi && x >= 1.0)
        throw DomainError(std::string(what) + ": argument outside the Jacobi support (0,1)");
}

void require_distinct(const std::vector<double>& a) {
    if (is_degenerate(a))
        throw DegenerateInput("coinciding squared singular values; use the epsilon-perturbation path");
}

// polynomial y -> sum_c coef[c] y^c
double horner(const std::vector<double>& coef, double y) {
    double s = 0.0;
    for (size_t i = coef.size(); i-- > 0;) s = s * y + coef[i];
    return s;
}

QuadratureSpec tight(const QuadratureSpec& q) {
    QuadratureSpec t = q;
    t.abs_tol = std::min(q.abs_tol, 1e-14);
    t.rel_tol = std::min(q.rel_tol, 1e-13);
    return t;
}

// Caches for the closed-form covariance; everything in the model's precision.
template <class R>
struct CovRowCache {  // depends on r only
    R r, wr;
    std::vector<R> ratio;  // binom(n-1,j) w~_r(j+1) / (w~(j+1) r^{j+1})
    std::vector<R> rpow;   // r^c
};

template <class R>
struct CovColCache {  // depends on a only
    R a, pn1;
    std::vector<R> qa;    // q~_{n,a}(c+1) / (w~(c+1) a^c)
    std::vector<R> apow;  // (-a)^j
};

template <class R>
CovRowCache<R> make_row(const ModelCore<R>& m, const R& r) {
    using std::pow;
    CovRowCache<R> c;
    c.r = r;
    c.wr = m.weight(r);
    c.ratio.resize(m.n);
    c.rpow.resize(m.n);
    R rp = r;  // r^{j+1}
    R rc = 1;
    for (int j = 0; j < m.n; ++j) {
        c.ratio[j] = detail::binom_r<R>(m.n - 1, j) * m.incomplete_mellin_w(r, R(j + 1)) / (m.mellin[j] * rp);
        c.rpow[j] = rc;
        rp *= r;
        rc *= r;
    }
    return c;
}

template <class R>
CovColCache<R> make_col(const ModelCore<R>& m, const R& a) {
    CovColCache<R> c;
    c.a = a;
    c.pn1 = m.p_generic(m.n - 1, a);
    c.qa.resize(m.n);
    c.apow.resize(m.n);
    R ap = 1, ma = 1;
    for (int j = 0; j < m.n; ++j) {
        c.qa[j] = m.qn_tilde(a, j) / (m.mellin[j] * ap);
        c.apow[j] = ma;
        ap *= a;
        ma *= -a;
    }
    return c;
}

template <class R>
R cov_from_cache(const ModelCore<R>& m, const CovRowCache<R>& rc, const CovColCache<R>& ac) {
    using std::pow;
    const int n = m.n;
    const R& r = rc.r;
    const R& a = ac.a;
    CompensatedSum<R> t0, t1;
    for (int j = 0; j < n; ++j) {
        const R u = rc.ratio[j] * ac.apow[j];
        t0.add(u);
        t1.add(R(j) * u);
    }
    const R T0 = t0.value(), T1 = t1.value();
    const R base = rc.wr * ac.pn1;
    CompensatedSum<R> s1, s2;
    for (int c = 0; c < n; ++c) {
        const R g = rc.rpow[c] * ac.qa[c];  // (r/a)^c q~ / w~
        if (r >= a) s1.add(g * (R(n - c - 1) * a / r + R(c)));
        s2.add(g * (base + R(c) * T0 - T1));
    }
    R out = -s2.value() / (R(n) * a);
    if (r >= a) out += s1.value() * pow(R(1) - a / r, n - 2) / (R(n) * a * r);
    return out;
}

// Two-variable function C^(r; a1, a2) in the closed-form argument order.
template <class R>
R chat_t(const ModelCore<R>& m, const R& r, const R& a1, const R& a2, bool flip) {
    using std::pow;
    const int n = m.n;
    // H_gamma(r, a2)
    CompensatedSum<R> h0, h1;
    R ratio = 1;
    for (int c = 0; c < n; ++c) {
        const R g = ratio * m.qn_tilde(a2, c) / (m.mellin[c] * a2);
        h0.add(g);
        h1.add(R(c + 1) * g);
        ratio *= r / a2;
    }
    const R H0 = h0.value() / R(n), H1 = h1.value() / R(n);
    // V_gamma(r, a1)
    CompensatedSum<R> v1, dv;
    R z = 1;  // (-a1/r)^j
    for (int j = 0; j < n; ++j) {
        const R u = detail::binom_r<R>(n - 1, j) * z * m.incomplete_mellin_w(r, R(j + 1)) / (m.mellin[j] * r);
        v1.add(u);
        dv.add(R(j + 1) * u);
        z *= -a1 / r;
    }
    const R V1 = v1.value();
    const R V0 = m.weight(r) * m.p_generic(n - 1, a1) - dv.value();
    R psi0 = 0, psi1 = 0;
    if (r >= a1) {
        const R x = a1 / r;
        psi0 = x * pow(R(1) - x, n - 2) * (R(n) * x - 1) / a1;
        psi1 = x * pow(R(1) - x, n - 1) / a1;
        if (flip) psi0 = -psi0;
    }
    return H0 * (psi0 - V0) + H1 * (psi1 - V1);
}

struct OmegaParts {
    double A, B;   // coefficients of (1+t)^{-(n+1)} and (1+t)^{-(n+2)}
    double theta;  // Theta(r - a) / a
};

// Omega(r,a,t) = A (1+t)^{-(n+1)} - B (1+t)^{-(n+2)} - Theta(r-a) phi(a/r,t) / a
OmegaParts omega_parts(const CovContext& ctx, double r, double a) {
    const int n = ctx.model.n();
    const double vu = std::min(r, ctx.model.support_upper());
    std::vector<double> pts{0.0};
    if (a < vu) pts.push_back(a);
    pts.push_back(vu);
    auto fa = [&](double v) {
        const double x = v / r;
        return std::pow(1 - x, n - 2) * (1 - x / n) * ctx.model.kernel(v, a) / r;
    };
    auto fb = [&](double v) {
        const double x = v / r;
        return std::pow(1 - x, n - 1) * (1 + 1.0 / n) * ctx.model.kernel(v, a) / r;
    };
    OmegaParts o;
    o.A = value_or_throw(integrate_pieces(fa, pts, ctx.quad), "Omega");
    o.B = value_or_throw(integrate_pieces(fb, pts, ctx.quad), "Omega");
    o.theta = r >= a ? 1.0 / a : 0.0;
    return o;
}

double omega_at(const OmegaParts& o, int n, double r, double a, double t) {
    const double s = 1.0 / (1.0 + t);
    double v = o.A * std::pow(s, n + 1) - o.B * std::pow(s, n + 2);
    if (o.theta != 0.0) v -= o.theta * phi_weight(n, a / r, t);
    return v;
}

// Moments of the kernel coefficients: M00(t) = sum_c (-rt)^c [Ac (1+t)^{-(n+1)} - Bc (1+t)^{-(n+2)}]
struct M00Parts {
    std::vector<double> A, B;
};

M00Parts m00_parts(const CovContext& ctx, double r) {
    const int n = ctx.model.n();
    const double vu = std::min(r, ctx.model.support_upper());
    M00Parts m;
    m.A.resize(n);
    m.B.resize(n);
    for (int c = 0; c < n; ++c) {
        auto fa = [&](double v) {
            const double x = v / r;
            return std::pow(1 - x, n - 2) * (1 - x / n) * ctx.model.kernel_coefficients(v)[c] / r;
        };
        auto fb = [&](double v) {
            const double x = v / r;
            return std::pow(1 - x, n - 1) * (1 + 1.0 / n) * ctx.model.kernel_coefficients(v)[c] / r;
        };
        m.A[c] = value_or_throw(integrate(fa, 0.0, vu, ctx.quad), "M00");
        m.B[c] = value_or_throw(integrate(fb, 0.0, vu, ctx.quad), "M00");
    }
    return m;
}

double m00_at(const M00Parts& m, int n, double r, double t) {
    const double s = 1.0 / (1.0 + t);
    const double y = -r * t;
    double a = 0.0, b = 0.0;
    for (int c = n - 1; c >= 0; --c) {
        a = a * y + m.A[c];
        b = b * y + m.B[c];
    }
    return a * std::pow(s, n + 1) - b * std::pow(s, n + 2);
}

double factorial_ratio(int n, int k) {  // (n-k)!/(n-1)!
    double f = 1.0;
    for (int i = n - k + 1; i <= n - 1; ++i) f /= i;
    return f;
}

// five-point central difference
template <class F>
double central_diff(const F& f, double x, double h) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

}  // namespace

double phi_weight(int n, double x, double t) {
    const double s = 1.0 / (1.0 + t);
    return x * std::pow(1 - x, n - 2) * std::pow(s, n + 2) * ((1 - x / n) * (1 + t) - (1 - x) * (1 + 1.0 / n));
}

double rho_sv(const CovContext& ctx, double a) {
    if (!(a > 0)) throw DomainError("rho_sv: a must be positive");
    return ctx.model.kernel(a, a) / ctx.model.n();
}

double rho_ev_polya(const CovContext& ctx, double r) {
    if (!(r > 0)) throw DomainError("rho_ev_polya: r must be positive");
    return ctx.model.visit([&](const auto& m) {
        using R = std::decay_t<decltype(m.alpha)>;
        const R rr = r;
        CompensatedSum<R> s;
        R rp = 1;
        for (int c = 0; c < m.n; ++c) {
            s.add(rp / m.mellin[c]);
            rp *= rr;
        }
        return dbl(m.weight(rr) * s.value() / R(m.n));
    });
}

double rho_ev_cdf(const CovContext& ctx, double r) {
    if (!(r > 0)) return 0.0;
    return ctx.model.visit([&](const auto& m) {
        using R = std::decay_t<decltype(m.alpha)>;
        CompensatedSum<R> s;
        for (int c = 0; c < m.n; ++c) s.add(m.incomplete_mellin_w(R(r), R(c + 1)) / m.mellin[c]);
        return dbl(s.value() / R(m.n));
    });
}

double rho_ev_polynomial(const CovContext& ctx, double r) {
    if (!(r > 0)) throw DomainError("rho_ev_polynomial: r must be positive");
    const int n = ctx.model.n();
    const M00Parts m = m00_parts(ctx, r);
    auto f = [&](double t) { return m00_at(m, n, r, t); };
    return n * value_or_throw(integrate_semi_infinite(f, ctx.quad), "rho_ev_polynomial");
}

namespace {

// beta_c = int_0^inf t^c (1+t)^{-(n+1)} dt
std::vector<double> t_moments(const CovContext& ctx) {
    const int n = ctx.model.n();
    std::vector<double> b(n);
    for (int c = 0; c < n; ++c) {
        auto f = [&](double t) { return std::pow(t, c) * std::pow(1.0 + t, -(n + 1)); };
        b[c] = value_or_throw(integrate_semi_infinite(f, tight(ctx.quad)), "t moments");
    }
    return b;
}

// G(r) = int dt (1+t)^{-(n+1)} int_0^r dv (1-v/r)^{n-1} K(v,-rt)
double G_first_form(const CovContext& ctx, const std::vector<double>& beta, double r) {
    const int n = ctx.model.n();
    const double vu = std::min(r, ctx.model.support_upper());
    auto f = [&](double v) {
        const auto kc = ctx.model.kernel_coefficients(v);
        double s = 0.0, y = 1.0;
        for (int c = 0; c < n; ++c) {
            s += kc[c] * y * beta[c];
            y *= -r;
        }
        return std::pow(1 - v / r, n - 1) * s;
    };
    return value_or_throw(integrate(f, 0.0, vu, tight(ctx.quad)), "first form");
}

double omega_hat(const CovContext& ctx, double r, double a) {
    const int n = ctx.model.n();
    const double vu = std::min(r, ctx.model.support_upper());
    std::vector<double> pts{0.0};
    if (a < vu) pts.push_back(a);
    pts.push_back(vu);
    auto f = [&](double v) { return ctx.model.kernel(v, a) * std::pow(1 - v / r, n - 1); };
    double v = value_or_throw(integrate_pieces(f, pts, tight(ctx.quad)), "Omega hat");
    if (r >= a) v -= std::pow(1 - a / r, n - 1);
    return v;
}

}  // namespace

double rho_ev_differentiated(const CovContext& ctx, double r) {
    if (!(r > 0)) throw DomainError("rho_ev_differentiated: r must be positive");
    const auto beta = t_moments(ctx);
    const double h = 1e-3 * r;
    return central_diff([&](double x) { return G_first_form(ctx, beta, x); }, r, h);
}

double rho_sv_mass(const CovContext& ctx, double lo, double hi) {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, ctx.model.support_upper());
    if (!(hi > lo)) return 0.0;
    auto f = [&](double a) { return a > 0 ? rho_sv(ctx, a) : 0.0; };
    if (std::isinf(hi)) {
        auto g = [&](double t) { return f(lo + t); };
        return value_or_throw(integrate_semi_infinite(g, ctx.quad), "rho_sv_mass");
    }
    return value_or_throw(integrate(f, lo, hi, ctx.quad), "rho_sv_mass");
}

double cov_closed(const CovContext& ctx, double r, double a) {
    require_cov_n(ctx);
    require_support(ctx, r, "cov_closed");
    require_support(ctx, a, "cov_closed");
    return ctx.model.visit([&](const auto& m) {
        using R = std::decay_t<decltype(m.alpha)>;
        const auto rc = make_row<R>(m, R(r));
        const auto ac = make_col<R>(m, R(a));
        return dbl(cov_from_cache<R>(m, rc, ac));
    });
}

std::vector<double> cov_closed_grid(const CovContext& ctx, const std::vector<double>& rs,
                                    const std::vector<double>& as, int threads) {
    require_cov_n(ctx);
    for (double r : rs) require_support(ctx, r, "cov_closed_grid");
    for (double a : as) require_support(ctx, a, "cov_closed_grid");
    threads = std::max(1, threads);
    std::vector<double> out(rs.size() * as.size());
    ctx.model.visit([&](const auto& m) {
        using R = std::decay_t<decltype(m.alpha)>;
        std::vector<CovColCache<R>> cols(as.size());
        std::vector<CovRowCache<R>> rows(rs.size());
        auto work = [&](int tid) {
            for (size_t j = tid; j < as.size(); j += threads) cols[j] = make_col<R>(m, R(as[j]));
            for (size_t i = tid; i < rs.size(); i += threads) rows[i] = make_row<R>(m, R(rs[i]));
        };
        auto fill = [&](int tid) {
            for (size_t i = tid; i < rs.size(); i += threads)
                for (size_t j = 0; j < as.size(); ++j)
                    out[i * as.size() + j] = dbl(cov_from_cache<R>(m, rows[i], cols[j]));
        };
        auto run = [&](auto&& fn) {
            if (threads == 1) return fn(0);
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) pool.emplace_back(fn, t);
            for (auto& th : pool) th.join();
        };
        run(work);
        run(fill);
        return 0;
    });
    return out;
}

double cov_integral(const CovContext& ctx, double r, double a) {
    require_cov_n(ctx);
    require_support(ctx, r, "cov_integral");
    require_support(ctx, a, "cov_integral");
    const int n = ctx.model.n();
    const OmegaParts o = omega_parts(ctx, r, a);
    const auto kc = ctx.model.kernel_coefficients(a);
    auto f = [&](double t) { return omega_at(o, n, r, a, t) * horner(kc, -r * t); };
    return -value_or_throw(integrate_semi_infinite(f, ctx.quad), "cov_integral");
}

double chat(const CovContext& ctx, double r, double a1, double a2) {
    require_cov_n(ctx);
    require_support(ctx, r, "chat");
    require_support(ctx, a1, "chat");
    require_support(ctx, a2, "chat");
    return ctx.model.visit([&](const auto& m) {
        using R = std::decay_t<decltype(m.alpha)>;
        return dbl(chat_t<R>(m, R(r), R(a1), R(a2), ctx.psi0_sign_flip));
    });
}

double cov_1k(const CovContext& ctx, double r, const std::vector<double>& a) {
    require_cov_n(ctx);
    const int n = ctx.model.n();
    const int k = static_cast<int>(a.size());
    if (k < 1 || k > n) throw DomainError("cov_1k: need 1 <= k <= n");
    require_support(ctx, r, "cov_1k");
    for (double x : a) require_support(ctx, x, "cov_1k");
    require_distinct(a);
    return ctx.model.visit([&](const auto& m) {
        using R = std::decay_t<decltype(m.alpha)>;
        std::vector<R> K(k * k), C(k * k);
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c) {
                K[b * k + c] = m.kernel(R(a[b]), R(a[c]));
                // entry (b,c) = -int dt K(a_b,-rt) Omega(r,a_c,t) = C^(r; a_c, a_b)
                C[b * k + c] = chat_t<R>(m, R(r), R(a[c]), R(a[b]), ctx.psi0_sign_flip);
            }
        // d/dmu det[K + mu C] at mu = 0: sum over single-row replacements
        CompensatedSum<R> s;
        for (int b = 0; b < k; ++b) {
            std::vector<R> M = K;
            for (int c = 0; c < k; ++c) M[b * k + c] = C[b * k + c];
            s.add(detail::det_lu<R>(M, k));
        }
        return dbl(s.value()) * factorial_ratio(n, k);
    });
}

double cov_bin_integral(const CovContext& ctx, double rlo, double rhi, double alo, double ahi, int order) {
    const GaussRule& g = gauss_legendre(order);
    double total = 0.0;
    const double ac = 0.5 * (alo + ahi), ah = 0.5 * (ahi - alo);
    for (size_t i = 0; i < g.x.size(); ++i) {
        const double a = ac + ah * g.x[i];
        std::vector<double> edges{rlo};
        if (a > rlo && a < rhi) edges.push_back(a);
        edges.push_back(rhi);
        std::vector<double> rs, ws;
        for (size_t e = 0; e + 1 < edges.size(); ++e) {
            const double c = 0.5 * (edges[e] + edges[e + 1]), h = 0.5 * (edges[e + 1] - edges[e]);
            for (size_t q = 0; q < g.x.size(); ++q) {
                rs.push_back(c + h * g.x[q]);
                ws.push_back(h * g.w[q]);
            }
        }
        const auto vals = cov_closed_grid(ctx, rs, {a});
        double inner = 0.0;
        for (size_t q = 0; q < rs.size(); ++q) inner += ws[q] * vals[q];
        total += ah * g.w[i] * inner;
    }
    return total;
}

double f_0k(const CovContext& ctx, const std::vector<double>& a) {
    const int n = ctx.model.n();
    const int k = static_cast<int>(a.size());
    if (k < 1 || k > n) throw DomainError("f_0k: need 1 <= k <= n");
    for (double x : a)
        if (!(x > 0)) throw DomainError("f_0k: arguments must be positive");
    return ctx.model.visit([&](const auto& m) {
        using R = std::decay_t<decltype(m.alpha)>;
        std::vector<R> K(k * k);
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c) K[b * k + c] = m.kernel(R(a[b]), R(a[c]));
        R f = 1;
        for (int i = n - k + 1; i <= n; ++i) f /= R(i);
        return dbl(detail::det_lu<R>(K, k) * f);
    });
}

double f_sv(const CovContext& ctx, const std::vector<double>& a) {
    if (static_cast<int>(a.size()) != ctx.model.n()) throw DomainError("f_sv: need exactly n arguments");
    return f_0k(ctx, a);
}

double f_1k(const CovContext& ctx, double r, const std::vector<double>& a) {
    require_cov_n(ctx);
    const int n = ctx.model.n();
    const int k = static_cast<int>(a.size());
    if (k < 1 || k > n) throw DomainError("f_1k: need 1 <= k <= n");
    require_support(ctx, r, "f_1k");
    for (double x : a) require_support(ctx, x, "f_1k");
    require_distinct(a);
    const M00Parts m0 = m00_parts(ctx, r);
    std::vector<OmegaParts> om;
    std::vector<std::vector<double>> kc;
    for (double x : a) {
        om.push_back(omega_parts(ctx, r, x));
        kc.push_back(ctx.model.kernel_coefficients(x));
    }
    std::vector<double> K(k * k);
    for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c) K[b * k + c] = ctx.model.kernel(a[b], a[c]);
    const int d = k + 1;
    auto f = [&](double t) {
        std::vector<double> M(d * d);
        M[0] = m00_at(m0, n, r, t);
        for (int c = 0; c < k; ++c) M[c + 1] = omega_at(om[c], n, r, a[c], t);
        for (int b = 0; b < k; ++b) {
            M[(b + 1) * d] = horner(kc[b], -r * t);
            for (int c = 0; c < k; ++c) M[(b + 1) * d + c + 1] = K[b * k + c];
        }
        return detail::det_lu<double>(M, d);
    };
    return factorial_ratio(n, k) * value_or_throw(integrate_semi_infinite(f, ctx.quad), "f_1k");
}

double f_1k_differentiated(const CovContext& ctx, double r, const std::vector<double>& a) {
    require_cov_n(ctx);
    const int n = ctx.model.n();
    const int k = static_cast<int>(a.size());
    if (k < 1 || k > n) throw DomainError("f_1k_differentiated: need 1 <= k <= n");
    require_support(ctx, r, "f_1k_differentiated");
    for (double x : a) require_support(ctx, x, "f_1k_differentiated");
    require_distinct(a);
    const auto beta = t_moments(ctx);
    std::vector<std::vector<double>> kc;
    for (double x : a) kc.push_back(ctx.model.kernel_coefficients(x));
    std::vector<double> K(k * k);
    for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c) K[b * k + c] = ctx.model.kernel(a[b], a[c]);
    double pref = 1.0;  // (n-k)!/n!
    for (int i = n - k + 1; i <= n; ++i) pref /= i;
    const int d = k + 1;
    auto F = [&](double x) {
        std::vector<double> M(d * d);
        M[0] = G_first_form(ctx, beta, x);
        for (int c = 0; c < k; ++c) M[c + 1] = omega_hat(ctx, x, a[c]);
        for (int b = 0; b < k; ++b) {
            double s = 0.0, y = 1.0;
            for (int c = 0; c < n; ++c) {
                s += kc[b][c] * y * beta[c];
                y *= -x;
            }
            M[(b + 1) * d] = s;
            for (int c = 0; c < k; ++c) M[(b + 1) * d + c + 1] = K[b * k + c];
        }
        return pref * detail::det_lu<double>(M, d);
    };
    return central_diff(F, r, 1e-3 * r);
}

double n1_identity(const CovContext& ctx, double x) {
    if (ctx.model.n() != 1) throw DomainError("n1_identity: requires n = 1");
    if (!(x > 0)) throw DomainError("n1_identity: x must be positive");
    const double fsv = ctx.model.weight(x) / ctx.model.mellin_w(1.0);
    const double ev = rho_ev_polya(ctx, x);
    const double sv = rho_sv(ctx, x);
    const double tol = 1e-12 * std::max(1.0, std::abs(fsv));
    if (std::abs(ev - fsv) > tol || std::abs(sv - fsv) > tol)
        throw std::logic_error("n1_identity: rho_EV, rho_SV and f_SV disagree");
    return fsv;
}

KinkProbe kink_probe(const CovContext& ctx, double a, double r0, double rel_h, int points) {
    const int n = ctx.model.n();
    if (n < 3) throw DomainError("kink_probe: needs n >= 3");
    if (r0 <= 0) r0 = a;
    KinkProbe kp;
    kp.order = n - 2;
    const double h = rel_h * a;
    auto eval = [&](double step, bool right, int order, double* wsum, double* vmax) {
        std::vector<double> xs;
        for (int i = 0; i < points; ++i) xs.push_back(right ? r0 + i * step : r0 - (i + 1) * step);
        const auto vals = cov_closed_grid(ctx, xs, {a});
        const auto w = detail::fornberg_weights(r0, xs, order);
        double s = 0.0, ws = 0.0, vm = 0.0;
        for (int i = 0; i < points; ++i) {
            s += w[order][i] * vals[i];
            ws += std::abs(w[order][i]);
            vm = std::max(vm, std::abs(vals[i]));
        }
        if (wsum) *wsum = ws;
        if (vmax) *vmax = vm;
        return s;
    };
    const int m = kp.order;
    double wsL = 0, wsR = 0, vmL = 0, vmR = 0;
    const double L1 = eval(h, false, m, nullptr, nullptr);
    const double R1 = eval(h, true, m, nullptr, nullptr);
    const double L2 = eval(h / 2, false, m, &wsL, &vmL);
    const double R2 = eval(h / 2, true, m, &wsR, &vmR);
    kp.left_deriv = L2;
    kp.right_deriv = R2;
    const double roundoff = 1e-14 * (wsL * vmL + wsR * vmR);
    kp.noise_floor = std::abs(L1 - L2) + std::abs(R1 - R2) + roundoff;
    const double VL = eval(h / 2, false, m - 1, nullptr, nullptr);
    const double VR = eval(h / 2, true, m - 1, nullptr, nullptr);
    kp.value_gap = std::abs(VL - VR);
    return kp;
}

DensityTable tabulate_1d(const std::vector<double>& xs, const std::vector<double>& vals,
                         std::map<std::string, std::string> meta) {
    DensityTable t;
    t.axes.push_back(xs);
    t.values = vals;
    t.meta = std::move(meta);
    return t;
}

}  // namespace svev
