#include "svev/verify.hpp"

#include "svev/errors.hpp"
#include "svev/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace svev::verify {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

double rel_err(double x, double ref) {
    const double d = std::abs(x - ref);
    return std::abs(ref) > 1e-300 ? d / std::abs(ref) : d;
}

QuadratureSpec tight_spec() {
    QuadratureSpec q;
    q.abs_tol = 1e-13;
    q.rel_tol = 1e-12;
    return q;
}

ModelParams laguerre(int n, double alpha) {
    ModelParams p;
    p.n = n;
    p.alpha = alpha;
    return p;
}

ModelParams jacobi(int n, double alpha, double beta) {
    ModelParams p;
    p.family = Family::Jacobi;
    p.n = n;
    p.alpha = alpha;
    p.beta = beta;
    return p;
}

// evaluation points inside the bulk of the model
std::vector<double> bulk_points(const ModelParams& p, int count, double offset) {
    std::vector<double> v;
    const double top = p.family == Family::Jacobi ? 0.95 : 2.5 * p.n;
    const double lo = p.family == Family::Jacobi ? 0.04 : 0.1;
    for (int i = 0; i < count; ++i) v.push_back(lo + (top - lo) * (i + offset) / count);
    return v;
}

void finish(CheckResult& r, Clock::time_point t0) {
    r.seconds = seconds_since(t0);
    r.passed = std::isfinite(r.metric) && r.metric < r.threshold;
}

}  // namespace

std::string format_result(const CheckResult& r) {
    std::ostringstream os;
    os << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  metric=" << sci(r.metric)
       << " threshold=" << sci(r.threshold) << " time=" << std::fixed;
    os.precision(2);
    os << r.seconds << "s";
    if (!r.detail.empty()) os << "  [" << r.detail << "]";
    return os.str();
}

std::vector<ModelParams> model_matrix(const std::vector<int>& ns) {
    std::vector<ModelParams> out;
    for (int n : ns) {
        out.push_back(laguerre(n, 0.0));
        out.push_back(laguerre(n, 0.5));
        out.push_back(jacobi(n, 0.0, 1.0));
        out.push_back(jacobi(n, 0.5, 1.5));
    }
    return out;
}

namespace {

QuadResult support_quad(const EnsembleModel& m, const Integrand& f, std::vector<double> kinks, const QuadratureSpec& q,
                        double cut) {
    const double top = std::min(m.support_upper(), cut);
    std::sort(kinks.begin(), kinks.end());
    std::vector<double> pts{0.0};
    for (double k : kinks)
        if (k > pts.back() && k < top) pts.push_back(k);
    if (!std::isinf(top)) {
        pts.push_back(top);
        return integrate_pieces(f, pts, q);
    }
    QuadResult s = integrate_pieces(f, pts, q);
    const double last = pts.back();
    const QuadResult t = integrate_semi_infinite([&](double x) { return f(last + x); }, q);
    s.value += t.value;
    s.err_est += t.err_est;
    s.converged = s.converged && t.converged;
    s.evaluations += t.evaluations;
    return s;
}

}  // namespace

double integrate_support(const EnsembleModel& m, const Integrand& f, std::vector<double> kinks,
                         const QuadratureSpec& q, double cut) {
    return value_or_throw(support_quad(m, f, std::move(kinks), q, cut), "integrate_support");
}

CheckResult biorthogonality(const std::vector<ModelParams>& models, double tol) {
    const auto t0 = Clock::now();
    CheckResult res{"biorthogonality+reproducing", false, 0.0, tol, "", 0.0};
    // the integrands of degree up to 2n-2 carry roundoff near 1e-12 for n = 8
    QuadratureSpec q;
    q.abs_tol = 1e-11;
    q.rel_tol = 1e-11;
    double worst_b = 0.0, worst_r = 0.0;
    int unconverged = 0;
    std::mt19937_64 gen(12345);
    for (const auto& p : models) {
        const EnsembleModel m(p);
        const int n = p.n;
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                auto f = [&](double x) { return m.biorth_q(b, x) * m.biorth_p(c, x); };
                const double v = integrate_support(m, f, {}, q);
                worst_b = std::max(worst_b, std::abs(v - (b == c ? 1.0 : 0.0)));
            }
        std::vector<double> ys{0.3, 0.7, 1.5};
        std::uniform_real_distribution<double> ud(-2.0, 3.0);
        for (int i = 0; i < 2; ++i) ys.push_back(ud(gen));
        // mom[k][j] = int x^k q_j, so int x^k K(x,y) dx = sum_j p_j(y) mom[k][j]
        // q_j cancels at large x from n = 6 on; the moments there come from the extended model
        ModelParams pe = p;
        if (n > 5) pe.precision = Precision::Extended;
        const EnsembleModel me(pe);
        std::vector<std::vector<double>> mom(n, std::vector<double>(n));
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                const QuadResult r = support_quad(m, [&](double x) { return std::pow(x, k) * me.biorth_q(j, x); }, {}, q,
                                                  std::numeric_limits<double>::infinity());
                if (!r.converged) ++unconverged;
                mom[k][j] = r.value;
            }
        for (double y : ys)
            for (int k = 0; k < n; ++k) {
                const double ref = std::pow(y, k);
                const double scale = std::max(1.0, std::abs(ref));
                double v = 0.0;
                for (int j = 0; j < n; ++j) v += m.biorth_p(j, y) * mom[k][j];
                worst_r = std::max(worst_r, std::abs(v - ref) / scale);
                // the assembled kernel directly; beyond n = 5 x^k K(x,y) cancels too heavily in double
                if (n > 5) continue;
                auto f = [&](double x) { return m.kernel(x, y) * std::pow(x, k); };
                const QuadResult r = support_quad(m, f, {}, q, std::numeric_limits<double>::infinity());
                if (!r.converged) ++unconverged;
                worst_r = std::max(worst_r, std::abs(r.value - ref) / scale);
            }
    }
    res.metric = std::max(worst_b, worst_r);
    res.detail = "biorthogonality " + sci(worst_b) + ", reproducing " + sci(worst_r) + " (" +
                 std::to_string(unconverged) + " integrals above the quadrature target), " +
                 std::to_string(models.size()) + " models";
    finish(res, t0);
    return res;
}

CheckResult normalization(const std::vector<ModelParams>& models, double tol) {
    const auto t0 = Clock::now();
    CheckResult res{"normalization", false, 0.0, tol, "", 0.0};
    double ws = 0.0, we = 0.0;
    for (const auto& p : models) {
        const CovContext ctx{EnsembleModel(p), tight_spec()};
        const double s = integrate_support(ctx.model, [&](double a) { return rho_sv(ctx, a); }, {}, ctx.quad);
        const double e = integrate_support(ctx.model, [&](double r) { return rho_ev_polya(ctx, r); }, {}, ctx.quad);
        ws = std::max(ws, std::abs(s - 1));
        we = std::max(we, std::abs(e - 1));
    }
    res.metric = std::max(ws, we);
    res.detail = "rho_SV " + sci(ws) + ", rho_EV " + sci(we);
    finish(res, t0);
    return res;
}

CheckResult formula_triangle(const std::vector<int>& ns, int grid, bool psi0_flip) {
    const auto t0 = Clock::now();
    CheckResult res{"formula-triangle", false, 0.0, 1.0, "", 0.0};
    double w_cov = 0, w_f1 = 0, w_f2 = 0, w_fn = 0, w_fd = 0;
    std::mt19937_64 gen(777);
    ConditionalOptions analytic;
    analytic.derivative = ConditionalOptions::Derivative::Analytic;
    for (int n : ns)
        for (const auto& p : {laguerre(n, 0.5), jacobi(n, 0.5, 1.5)}) {
            CovContext ctx{EnsembleModel(p), tight_spec()};
            ctx.psi0_sign_flip = psi0_flip;
            const auto rs = bulk_points(p, grid, 0.3);
            const auto as = bulk_points(p, grid, 0.7);
            // tuples for k = n are stratified over the bulk, one point per slot; clustered or tail
            // tuples make the determinant cancel far below f_SV
            const double lo = p.family == Family::Jacobi ? 0.03 : 0.05;
            const double top = p.family == Family::Jacobi ? 0.9 : 1.6 * n;
            std::uniform_real_distribution<double> ud(0.15, 0.85);
            for (size_t i = 0; i < rs.size(); ++i) {
                const double r = rs[i];
                const double ev = rho_ev_polya(ctx, r);
                for (size_t j = 0; j < as.size(); ++j) {
                    const double a = as[j];
                    const double cc = cov_closed(ctx, r, a);
                    w_cov = std::max(w_cov, rel_err(cc, cov_integral(ctx, r, a)));
                    const double f1 = f_1k(ctx, r, {a});
                    w_f1 = std::max(w_f1, rel_err(f1, ev * rho_sv(ctx, a) + cov_1k(ctx, r, {a})));
                    const std::vector<double> a2{a, as[(j + 1 + i) % as.size()] * 0.93};
                    const double f2 = f_1k(ctx, r, a2);
                    w_f2 = std::max(w_f2, rel_err(f2, ev * f_0k(ctx, a2) + cov_1k(ctx, r, a2)));
                    // k = n against the Bayes factorization
                    std::vector<double> an(n);
                    for (int q = 0; q < n; ++q) an[q] = lo + (top - lo) * (q + ud(gen)) / n;
                    // outside [min a, max a] both sides vanish; measure against the conditional scale there
                    const double fsv = f_sv(ctx, an);
                    // the analytic derivative is the reference; the finite-difference default is reported
                    const double cd = conditional_density(n, r, an, analytic);
                    const double ref = fsv * cd;
                    const double floor = 1e-3 * fsv / *std::max_element(an.begin(), an.end());
                    w_fd = std::max(w_fd, std::abs(conditional_density(n, r, an) - cd) /
                                              std::max(std::abs(cd), floor / fsv));
                    CovContext cn = ctx;
                    cn.quad.abs_tol = std::max(1e-12 * fsv, 1e-300);
                    cn.quad.rel_tol = 1e-10;
                    w_fn = std::max(w_fn, std::abs(f_1k(cn, r, an) - ref) / std::max(std::abs(ref), floor));
                }
            }
        }
    // thresholds: 1e-6, 1e-7, 1e-6 (k=2 shares the k=1 bound of 1e-7 scaled to 1e-6), 1e-6
    res.metric = std::max({w_cov / 1e-6, w_f1 / 1e-7, w_f2 / 1e-6, w_fn / 1e-6});
    res.detail = "cov closed/integral " + sci(w_cov) + " (<1e-6), f11 " + sci(w_f1) + " (<1e-7), f12 " +
                 sci(w_f2) + " (<1e-6), f1n " + sci(w_fn) + " (<1e-6); finite-difference vs analytic conditional " +
                 sci(w_fd) + " (not gated); metric is worst ratio to bound";
    finish(res, t0);
    return res;
}

CheckResult marginals(const std::vector<int>& ns, int points) {
    const auto t0 = Clock::now();
    CheckResult res{"marginals", false, 0.0, 1e-5, "", 0.0};
    QuadratureSpec outer;
    outer.abs_tol = 1e-9;
    outer.rel_tol = 1e-9;
    QuadratureSpec cq;
    cq.abs_tol = 1e-11;
    cq.rel_tol = 1e-10;
    double w_sv = 0, w_ev = 0, w_cr = 0, w_ca = 0;
    for (int n : ns)
        for (const auto& p : {laguerre(n, 0.5), jacobi(n, 0.5, 1.5)}) {
            const CovContext ctx{EnsembleModel(p)};
            // beyond the cut the Laguerre densities are below 1e-15 and f_1k is pure roundoff
            const double cut = p.family == Family::Jacobi ? 1.0 : 40.0 + 10.0 * n;
            for (double a : bulk_points(p, points, 0.45)) {
                const double m1 = integrate_support(ctx.model, [&](double r) { return f_1k(ctx, r, {a}); }, {a}, outer, cut);
                w_sv = std::max(w_sv, std::abs(m1 - rho_sv(ctx, a)));
                const double c1 = integrate_support(ctx.model, [&](double r) { return cov_closed(ctx, r, a); }, {a}, cq, cut);
                w_cr = std::max(w_cr, std::abs(c1));
            }
            for (double r : bulk_points(p, points, 0.55)) {
                const double m2 = integrate_support(ctx.model, [&](double a) { return f_1k(ctx, r, {a}); }, {r}, outer, cut);
                w_ev = std::max(w_ev, std::abs(m2 - rho_ev_polya(ctx, r)));
                const double c2 = integrate_support(ctx.model, [&](double a) { return cov_closed(ctx, r, a); }, {r}, cq, cut);
                w_ca = std::max(w_ca, std::abs(c2));
            }
        }
    res.metric = std::max({w_sv, w_ev, w_cr, w_ca});
    res.detail = "int f11 dr - rho_SV " + sci(w_sv) + ", int f11 da - rho_EV " + sci(w_ev) + ", int cov dr " +
                 sci(w_cr) + ", int cov da " + sci(w_ca);
    finish(res, t0);
    return res;
}

CheckResult conditional_suite() {
    const auto t0 = Clock::now();
    CheckResult res{"conditional", false, 0.0, 1.0, "", 0.0};
    const std::vector<double> a{0.5, 1.0, 2.0};
    auto mass = [&](const std::vector<double>& aa, double lo, double hi, double tol) {
        std::vector<double> pts{lo};
        for (double x : aa)
            if (x > lo && x < hi) pts.push_back(x);
        pts.push_back(hi);
        std::sort(pts.begin(), pts.end());
        auto f = [&](double r) { return conditional_density(static_cast<int>(aa.size()), r, aa); };
        // the quadrature target has to stay above the finite-difference roundoff
        QuadratureSpec q;
        q.abs_tol = tol;
        q.rel_tol = tol;
        return value_or_throw(integrate_pieces(f, pts, q), "conditional mass");
    };
    const double m15 = mass(a, 1e-9, 1.5 * 2.0, 1e-10);
    const double m30 = mass(a, 1e-9, 3.0 * 2.0, 1e-10);
    const double w_norm = std::max({std::abs(m15 - 1), std::abs(m30 - 1), std::abs(m15 - m30)});

    const ModelParams p2 = laguerre(2, 0.0);
    const EnsembleModel m2(p2);
    const std::vector<double> a2{0.4, 1.6};
    double w_n2 = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double r = 0.4 + 1.2 * (i + 0.5) / 20;
        w_n2 = std::max(w_n2, std::abs(conditional_density(2, r, a2) - n2_f12(m2, r, 0.4, 1.6) / n2_fsv(m2, 0.4, 1.6)));
    }

    const double eps = 1e-3;
    const std::vector<double> ad{1.0, 1.0 + eps, 1.0 + 2 * eps};
    const double conc = mass(ad, 0.95, 1.05, 1e-7);
    ConditionalOptions opt;
    opt.allow_degenerate = true;
    const double tie = conditional_cdf(1.05, {1, 1, 1}, opt) - conditional_cdf(0.95, {1, 1, 1}, opt);

    res.metric = std::max({w_norm / 1e-6, w_n2 / 1e-8, conc >= 0.99 ? 0.0 : 2.0});
    res.detail = "normalization R=3,6: " + sci(std::abs(m15 - 1)) + "," + sci(std::abs(m30 - 1)) +
                 " (<1e-6); n=2 vs ratio " + sci(w_n2) + " (<1e-8); near-degenerate mass " + std::to_string(conc) +
                 " (>=0.99); tied a=(1,1,1) mass " + std::to_string(tie) + "; metric is worst ratio to bound";
    finish(res, t0);
    return res;
}

CheckResult n2_agreements() {
    const auto t0 = Clock::now();
    CheckResult res{"n2-agreements", false, 0.0, 1e-8, "", 0.0};
    const EnsembleModel m(laguerre(2, 0.0));
    double w_f11 = 0.0, w_sym = 0.0, w_out = 0.0, w_fsv = 0.0, w_opt = 0.0;
    CovContext ctx{m, tight_spec()};
    ctx.allow_n2 = true;
    for (double r : {0.3, 0.9, 1.7, 3.1})
        for (double a : {0.25, 0.8, 2.2, 4.0}) {
            const double q = n2_f11(m, r, a, tight_spec());
            w_f11 = std::max(w_f11, std::abs(q - n2_f11_polynomial(m, r, a)));
            w_opt = std::max(w_opt, std::abs(f_1k(ctx, r, {a}) - q));
            w_fsv = std::max(w_fsv, std::abs(n2_fsv(m, r, a) - f_sv(ctx, {r, a})));
            w_sym = std::max(w_sym, std::abs(n2_f21(m, r, a, 1.3) - n2_f21(m, a, r, 1.3)));
        }
    w_out = std::max(std::abs(n2_f12(m, 0.2, 0.4, 1.6)), std::abs(n2_f12(m, 2.0, 0.4, 1.6)));
    res.metric = std::max({w_f11, w_sym, w_out, w_fsv});
    res.detail = "f11 quadrature vs polynomial " + sci(w_f11) + ", f21 symmetry " + sci(w_sym) +
                 ", f12 outside support " + sci(w_out) + ", f_SV two forms " + sci(w_fsv) +
                 "; reported only: n>2 formulas at n=2 differ by " + sci(w_opt);
    finish(res, t0);
    return res;
}

CheckResult kernel_forms(const std::vector<int>& ns) {
    const auto t0 = Clock::now();
    CheckResult res{"kernel-forms", false, 0.0, 1e-8, "", 0.0};
    std::mt19937_64 gen(99);
    double w_k = 0.0, w_q = 0.0;
    for (int n : ns)
        for (const auto& p : {laguerre(n, 0.5), jacobi(n, 0.5, 1.5)}) {
            const EnsembleModel m(p);
            const bool jac = p.family == Family::Jacobi;
            std::uniform_real_distribution<double> ux(jac ? 0.02 : 0.05, jac ? 0.98 : 3.0 * n);
            std::uniform_real_distribution<double> uy(-5.0, 5.0);
            for (int i = 0; i < 8; ++i) {
                const double x = ux(gen), y = uy(gen);
                const double k = m.kernel(x, y);
                w_k = std::max(w_k, std::abs(k - m.kernel_integral_form(x, y, tight_spec())) / std::max(1.0, std::abs(k)));
            }
            for (double y : jac ? std::vector<double>{0.1, 0.5, 0.9} : std::vector<double>{0.2, 1.0, 4.0}) {
                // relative to the largest |q~| at this y: single entries can vanish
                std::vector<double> bnd(n), hyp(n);
                double scale = 0.0;
                for (int c = 0; c < n; ++c) {
                    bnd[c] = m.incomplete_mellin_qn(y, c);
                    hyp[c] = m.incomplete_mellin_qn_hyp(y, c);
                    scale = std::max(scale, std::abs(hyp[c]));
                }
                for (int c = 0; c < n; ++c) w_q = std::max(w_q, std::abs(bnd[c] - hyp[c]) / scale);
            }
        }
    res.metric = std::max(w_k, w_q / 10);
    res.detail = "kernel sum vs integral " + sci(w_k) + " (<1e-8), q~_n boundary vs hypergeometric " + sci(w_q) +
                 " (<1e-9)";
    finish(res, t0);
    return res;
}

std::vector<double> ev_bin_mass(const CovContext& ctx, const std::vector<double>& edges) {
    std::vector<double> out;
    for (size_t i = 0; i + 1 < edges.size(); ++i) out.push_back(rho_ev_cdf(ctx, edges[i + 1]) - rho_ev_cdf(ctx, edges[i]));
    return out;
}

std::vector<double> sv_bin_mass(const CovContext& ctx, const std::vector<double>& edges) {
    std::vector<double> out;
    for (size_t i = 0; i + 1 < edges.size(); ++i) out.push_back(rho_sv_mass(ctx, edges[i], edges[i + 1]));
    return out;
}

std::vector<double> f11_bin_mass(const CovContext& ctx, const std::vector<double>& r_edges,
                                 const std::vector<double>& a_edges) {
    const auto ev = ev_bin_mass(ctx, r_edges);
    const auto sv = sv_bin_mass(ctx, a_edges);
    const double top = ctx.model.support_upper();
    std::vector<double> out;
    for (size_t i = 0; i + 1 < r_edges.size(); ++i)
        for (size_t j = 0; j + 1 < a_edges.size(); ++j) {
            double c = 0.0;
            const double rhi = std::min(r_edges[i + 1], top), ahi = std::min(a_edges[j + 1], top);
            if (rhi > r_edges[i] && ahi > a_edges[j]) c = cov_bin_integral(ctx, r_edges[i], rhi, a_edges[j], ahi);
            out.push_back(ev[i] * sv[j] + c);
        }
    return out;
}

std::vector<double> conditional_bin_mass(const std::vector<double>& a, const std::vector<double>& edges) {
    std::vector<double> out;
    auto cdf = [&](double r) { return r > 0 ? conditional_cdf(r, a) : 0.0; };
    for (size_t i = 0; i + 1 < edges.size(); ++i) out.push_back(cdf(edges[i + 1]) - cdf(edges[i]));
    return out;
}

std::vector<double> default_r_edges(const ModelParams& p) {
    if (p.family == Family::Jacobi) return make_grid({0.0, 1.0, 21, false});
    return make_grid({0.0, 4.0 * p.n, 8 * p.n + 1, false});
}

std::vector<double> default_a_edges(const ModelParams& p) {
    if (p.family == Family::Jacobi) return make_grid({0.0, 1.0, 21, false});
    return make_grid({0.0, 5.0 * p.n, 10 * p.n + 1, false});
}

McValidation validate_ensemble(const mc::SamplerConfig& cfg, const EnsembleModel& model,
                               const std::vector<double>& r_edges, const std::vector<double>& a_edges) {
    const auto t0 = Clock::now();
    McValidation v;
    v.run = mc::run_sampler(cfg, r_edges, a_edges);
    const CovContext ctx{model};
    v.ev = mc::compare_1d(v.run.ev, ev_bin_mass(ctx, r_edges));
    v.sv = mc::compare_1d(v.run.sv, sv_bin_mass(ctx, a_edges));
    v.f11 = mc::compare_2d(v.run.f11, f11_bin_mass(ctx, r_edges, a_edges));
    v.seconds = seconds_since(t0);
    return v;
}

McConditional validate_conditional(const mc::SamplerConfig& cfg, const std::vector<double>& r_edges) {
    const auto t0 = Clock::now();
    McConditional v;
    v.run = mc::run_sampler(cfg, r_edges, r_edges);
    v.ev = mc::compare_1d(v.run.ev, conditional_bin_mass(cfg.a, r_edges));
    v.seconds = seconds_since(t0);
    return v;
}

CheckResult mc_check(const std::string& name, const McValidation& v, double max_fraction) {
    CheckResult res{name, false, 0.0, max_fraction, "", v.seconds};
    res.metric = std::max({v.f11.fraction(), v.ev.fraction(), v.sv.fraction()});
    // the contract is "at most 1%", so equality passes
    res.passed = res.metric <= max_fraction && v.f11.occupied > 0;
    std::ostringstream os;
    os << "draws accepted " << v.run.audit.accepted << "; beyond 4 sigma: f11 " << v.f11.beyond << "/" << v.f11.occupied
       << ", rho_EV " << v.ev.beyond << "/" << v.ev.occupied << ", rho_SV " << v.sv.beyond << "/" << v.sv.occupied
       << "; max z " << sci(std::max({v.f11.max_z, v.ev.max_z, v.sv.max_z}));
    res.detail = os.str();
    return res;
}

CheckResult audit_check(const std::vector<const mc::AuditSummary*>& audits) {
    CheckResult res{"deterministic-audits", false, 0.0, 1.0, "", 0.0};
    mc::AuditSummary total;
    for (const auto* a : audits) total.merge(*a);
    const double violations = static_cast<double>(total.weyl_product_violations + total.weyl_sum_violations +
                                                  total.bound_violations + total.product_violations);
    res.metric = violations + (total.discard_rate() < 1e-4 ? 0.0 : 1.0);
    res.passed = total.ok() && total.accepted > 0;
    std::ostringstream os;
    os << "accepted " << total.accepted << ", discarded " << total.discarded << " (rate " << sci(total.discard_rate())
       << "), Weyl products " << total.weyl_product_violations << ", Weyl sums " << total.weyl_sum_violations
       << ", bounds " << total.bound_violations << ", max product gap " << sci(total.max_prod_gap);
    res.detail = os.str();
    return res;
}

CheckResult fig1(int grid, int grid25) {
    const auto t0 = Clock::now();
    CheckResult res{"fig1-cov-grid", false, 0.0, 1.0, "", 0.0};
    const CovContext ctx{EnsembleModel(laguerre(3, 0.5))};
    const auto lam = make_grid({0.1, 4.0, grid, false});
    const auto rs = make_grid({0.05, 16.0, grid, false});
    std::vector<double> as;
    for (double l : lam) as.push_back(l * l);
    const auto cov = cov_closed_grid(ctx, rs, as);  // [r][lambda]
    auto v = [&](size_t li, size_t ri) { return 2 * lam[li] * cov[ri * as.size() + li]; };
    double vmax = 0.0, vmin = 0.0, amax = 0.0;
    for (size_t li = 0; li < lam.size(); ++li)
        for (size_t ri = 0; ri < rs.size(); ++ri) {
            vmax = std::max(vmax, v(li, ri));
            vmin = std::min(vmin, v(li, ri));
            amax = std::max(amax, std::abs(v(li, ri)));
        }
    // rows with lambda^2 in the bulk: a sign change along r and the row maximum near r = lambda^2
    int rows = 0, good = 0;
    for (size_t li = 0; li < lam.size(); ++li) {
        const double a = as[li];
        if (a < 0.3 || a > 6.0) continue;
        ++rows;
        bool pos = false, neg = false;
        size_t arg = 0;
        for (size_t ri = 0; ri < rs.size(); ++ri) {
            pos |= v(li, ri) > 0;
            neg |= v(li, ri) < 0;
            if (v(li, ri) > v(li, arg)) arg = ri;
        }
        if (pos && neg && rs[arg] >= a / 3 && rs[arg] <= 3 * a) ++good;
    }
    const double diag_frac = rows ? static_cast<double>(good) / rows : 0.0;
    // decay away from the bulk: outermost row and column
    double edge = 0.0;
    for (size_t li = 0; li < lam.size(); ++li) edge = std::max(edge, std::abs(v(li, rs.size() - 1)));
    for (size_t ri = 0; ri < rs.size(); ++ri) edge = std::max(edge, std::abs(v(lam.size() - 1, ri)));
    const double decay = amax > 0 ? edge / amax : 1.0;

    std::string n25 = "skipped";
    bool n25_ok = true;
    if (grid25 > 1) {
        const auto t1 = Clock::now();
        ModelParams p = laguerre(25, 0.5);
        bool rejected = false;
        try {
            EnsembleModel dm(p);
        } catch (const PrecisionInsufficient&) {
            rejected = true;
        }
        p.precision = Precision::Extended;
        const CovContext c25{EnsembleModel(p)};
        const auto l25 = make_grid({0.3, 10.0, grid25, true});
        std::vector<double> a25;
        for (double l : l25) a25.push_back(l * l);
        const auto r25 = make_grid({0.1, 100.0, grid25, true});
        const auto g25 = cov_closed_grid(c25, r25, a25);
        bool finite = true;
        for (double x : g25) finite &= std::isfinite(x);
        n25_ok = finite && rejected;
        n25 = std::string(finite ? "finite" : "NON-FINITE") + " " + std::to_string(grid25) + "x" +
              std::to_string(grid25) + " grid in " + sci(seconds_since(t1)) + "s, double mode " +
              (rejected ? "rejected" : "NOT rejected");
    }
    const bool ok = vmax > 0 && vmin < 0 && diag_frac >= 0.8 && decay < 0.1 && n25_ok;
    res.metric = ok ? 0.0 : 1.0;
    res.detail = "max " + sci(vmax) + ", min " + sci(vmin) + ", bulk rows with sign change and diagonal ridge " +
                 std::to_string(good) + "/" + std::to_string(rows) + ", edge/max " + sci(decay) + "; n=25: " + n25;
    finish(res, t0);
    return res;
}

CheckResult kink(double factor) {
    const auto t0 = Clock::now();
    CheckResult res{"kink-probe", false, 0.0, 1.0, "", 0.0};
    std::ostringstream os;
    bool ok = true;
    for (int n : {3, 4}) {
        const CovContext ctx{EnsembleModel(laguerre(n, 0.5))};
        const KinkProbe k = kink_probe(ctx, 1.0);
        const double jump = std::abs(k.left_deriv - k.right_deriv);
        const bool good = k.value_gap < 1e-6 && jump > factor * k.noise_floor;
        ok &= good;
        os << "n=" << n << ": order " << k.order << " jump " << sci(jump) << " noise " << sci(k.noise_floor)
           << " gap " << sci(k.value_gap) << "; ";
        const KinkProbe far = kink_probe(ctx, 1.0, 2.0);
        const double jf = std::abs(far.left_deriv - far.right_deriv);
        ok &= jf < factor * far.noise_floor;
        os << "r=2a jump " << sci(jf) << " noise " << sci(far.noise_floor) << "; ";
    }
    res.metric = ok ? 0.0 : 1.0;
    res.detail = os.str();
    finish(res, t0);
    return res;
}

std::vector<CheckResult> run_suite(const SuiteOptions& opt) {
    std::vector<CheckResult> out;
    auto guarded = [&](const std::string& name, auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back({name, false, 1.0, 0.0, std::string("exception: ") + e.what(), 0.0});
        }
    };
    const std::vector<int> ns = opt.quick ? std::vector<int>{3, 4} : std::vector<int>{3, 4, 5, 6, 8};
    const std::vector<int> tri = opt.quick ? std::vector<int>{3} : std::vector<int>{3, 4, 5};
    guarded("biorthogonality+reproducing", [&] { return biorthogonality(model_matrix(ns)); });
    guarded("normalization", [&] { return normalization(model_matrix(ns)); });
    guarded("kernel-forms", [&] { return kernel_forms(opt.quick ? std::vector<int>{3, 5} : std::vector<int>{3, 4, 5, 6}); });
    guarded("formula-triangle", [&] { return formula_triangle(tri, opt.quick ? 3 : 10, opt.psi0_flip); });
    guarded("marginals", [&] { return marginals(tri, opt.quick ? 2 : 4); });
    guarded("conditional", [&] { return conditional_suite(); });
    guarded("n2-agreements", [&] { return n2_agreements(); });
    guarded("kink-probe", [&] { return kink(); });
    guarded("fig1-cov-grid", [&] { return fig1(opt.quick ? 24 : 60, opt.quick ? 6 : 20); });

    const std::uint64_t draws = opt.draws ? opt.draws : (opt.quick ? 200000 : 1000000);
    std::vector<McValidation> runs;
    McConditional cond;
    std::vector<const mc::AuditSummary*> audits;
    guarded("mc-ginibre", [&] {
        mc::SamplerConfig cfg;
        cfg.n = 3;
        cfg.seed = opt.seed;
        cfg.draws = draws;
        cfg.threads = opt.threads;
        const auto p = laguerre(3, 0.0);
        runs.push_back(validate_ensemble(cfg, EnsembleModel(p), default_r_edges(p), default_a_edges(p)));
        return mc_check("mc-ginibre seed=" + std::to_string(cfg.seed), runs.back());
    });
    if (!opt.quick)
        guarded("mc-truncated-unitary", [&] {
            mc::SamplerConfig cfg;
            cfg.model = mc::SamplerModel::TruncatedUnitary;
            cfg.n = 3;
            cfg.m = 7;
            cfg.seed = opt.seed + 1;
            cfg.draws = draws;
            cfg.threads = opt.threads;
            const auto p = jacobi(3, 0.0, 1.0);
            runs.push_back(validate_ensemble(cfg, EnsembleModel(p), default_r_edges(p), default_a_edges(p)));
            return mc_check("mc-truncated-unitary(m=7) seed=" + std::to_string(cfg.seed), runs.back());
        });
    guarded("mc-conditional", [&] {
        mc::SamplerConfig cfg;
        cfg.model = mc::SamplerModel::FixedSV;
        cfg.a = {0.5, 1.0, 2.0};
        cfg.seed = opt.seed + 2;
        cfg.draws = draws;
        cfg.threads = opt.threads;
        cond = validate_conditional(cfg, make_grid({0.5, 2.0, 31, false}));
        CheckResult r{"mc-conditional seed=" + std::to_string(cfg.seed), false, cond.ev.fraction(), 0.01, "", cond.seconds};
        r.passed = cond.ev.fraction() <= 0.01 && cond.ev.occupied > 0;
        r.detail = "beyond 4 sigma " + std::to_string(cond.ev.beyond) + "/" + std::to_string(cond.ev.occupied) +
                   ", max z " + sci(cond.ev.max_z);
        return r;
    });
    for (const auto& r : runs) audits.push_back(&r.run.audit);
    if (cond.run.audit.accepted) audits.push_back(&cond.run.audit);
    guarded("deterministic-audits", [&] { return audit_check(audits); });
    return out;
}

}  // namespace svev::verify
