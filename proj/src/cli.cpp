#include "svev/cli.hpp"

#include "svev/correlations.hpp"
#include "svev/ensembles.hpp"
#include "svev/errors.hpp"
#include "svev/io.hpp"
#include "svev/montecarlo.hpp"
#include "svev/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

namespace svev::cli {

namespace {

namespace fs = std::filesystem;
using KV = std::vector<std::pair<std::string, std::string>>;

struct ModelOpts {
    std::string family = "laguerre";
    int n = 3;
    double alpha = 0.0;
    double beta = 1.0;
    std::string precision = "double";
};

// unset fields fall back to the command's default grid
struct GridOpts {
    std::optional<double> min, max;
    std::optional<int> count;
    bool log = false;
    bool linear = false;
};

struct QuadOpts {
    std::optional<double> abs_tol, rel_tol;
    std::optional<int> order;
};

struct Common {
    std::string out = ".";
    std::string config;
    int threads = 1;
};

void add_common(CLI::App* s, Common& c) {
    s->add_option("--out", c.out, "output directory")->capture_default_str();
    s->add_option("--config", c.config, "key=value file; flags given on the command line take precedence");
    s->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
}

void add_model(CLI::App* s, ModelOpts& m) {
    s->add_option("--family", m.family, "laguerre or jacobi")
        ->check(CLI::IsMember({"laguerre", "jacobi"}))
        ->capture_default_str();
    s->add_option("--n", m.n, "matrix size")->capture_default_str();
    s->add_option("--alpha", m.alpha, "weight exponent alpha > -1")->capture_default_str();
    s->add_option("--beta", m.beta, "Jacobi exponent beta > -1")->capture_default_str();
    s->add_option("--precision", m.precision, "double or double-double")
        ->check(CLI::IsMember({"double", "double-double", "extended"}))
        ->capture_default_str();
}

void add_grid(CLI::App* s, GridOpts& g, const std::string& prefix, const std::string& what) {
    s->add_option("--" + prefix + "min", g.min, "smallest " + what);
    s->add_option("--" + prefix + "max", g.max, "largest " + what);
    s->add_option("--" + prefix + "count", g.count, "number of " + what + " points (>= 2)");
    s->add_flag("--" + prefix + "log", g.log, "log-spaced " + what + " grid");
    s->add_flag("--" + prefix + "linear", g.linear, "linearly spaced " + what + " grid");
}

void add_quad(CLI::App* s, QuadOpts& q) {
    s->add_option("--quad-abs", q.abs_tol, "quadrature absolute tolerance");
    s->add_option("--quad-rel", q.rel_tol, "quadrature relative tolerance");
    s->add_option("--quad-order", q.order, "Kronrod points per panel");
}

ModelParams to_params(const ModelOpts& m) {
    return model_from_config({{"family", m.family},
                              {"n", std::to_string(m.n)},
                              {"alpha", format_double(m.alpha)},
                              {"beta", format_double(m.beta)},
                              {"precision", m.precision}});
}

GridSpec resolve(const GridOpts& g, GridSpec def) {
    if (g.log && g.linear) throw ConfigError("grid cannot be both log and linear");
    if (g.min) def.min = *g.min;
    if (g.max) def.max = *g.max;
    if (g.count) def.count = *g.count;
    if (g.log) def.log = true;
    if (g.linear) def.log = false;
    return def;
}

QuadratureSpec to_quad(const QuadOpts& q) {
    QuadratureSpec s;
    if (q.abs_tol) s.abs_tol = *q.abs_tol;
    if (q.rel_tol) s.rel_tol = *q.rel_tol;
    if (q.order) s.order = *q.order;
    try {
        s.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return s;
}

void push_model(KV& kv, const ModelParams& p) {
    kv.emplace_back("family", family_name(p.family));
    kv.emplace_back("n", std::to_string(p.n));
    kv.emplace_back("alpha", format_double(p.alpha));
    if (p.family == Family::Jacobi) kv.emplace_back("beta", format_double(p.beta));
    kv.emplace_back("precision", precision_name(p.precision));
}

void push_grid(KV& kv, const std::string& prefix, const GridSpec& g) {
    kv.emplace_back(prefix + "min", format_double(g.min));
    kv.emplace_back(prefix + "max", format_double(g.max));
    kv.emplace_back(prefix + "count", std::to_string(g.count));
    kv.emplace_back(prefix + "spacing", g.log ? "log" : "linear");
}

void push_quad(KV& kv, const QuadratureSpec& q) {
    kv.emplace_back("quad_abs", format_double(q.abs_tol));
    kv.emplace_back("quad_rel", format_double(q.rel_tol));
    kv.emplace_back("quad_order", std::to_string(q.order));
}

std::string prepare_out(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir);
    return dir;
}

std::string join(const std::string& dir, const std::string& file) { return (fs::path(dir) / file).string(); }

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(parse_double(cell, what));
    if (v.empty()) throw ConfigError(what + ": empty list");
    return v;
}

// ---- density

struct DensityCmd {
    ModelOpts model;
    GridOpts grid;
    QuadOpts quad;
};

int cmd_density(const Common& c, const DensityCmd& d, std::ostream& out) {
    const ModelParams p = to_params(d.model);
    const CovContext ctx{EnsembleModel(p), to_quad(d.quad)};
    const GridSpec def = p.family == Family::Jacobi ? GridSpec{1e-4, 1.0 - 1e-4, 1001, false}
                                                    : GridSpec{1e-4, 4.0 * p.n + 12.0, 1001, true};
    const GridSpec g = resolve(d.grid, def);
    const auto xs = make_grid(g);
    if (!(xs.front() > 0) || xs.back() > ctx.model.support_upper())
        throw ConfigError("density grid must lie inside the support");
    CsvTable ev{{"x", "value"}, {}}, sv{{"x", "value"}, {}};
    for (double x : xs) {
        double e, s;
        if (p.n == 1) {
            // rho_EV = rho_SV = f_SV; write the common value to both files
            e = s = n1_identity(ctx, x);
        } else {
            e = rho_ev_polya(ctx, x);
            s = rho_sv(ctx, x);
        }
        ev.rows.push_back({x, e});
        sv.rows.push_back({x, s});
    }
    const std::string dir = prepare_out(c.out);
    write_csv(join(dir, "rho_ev.csv"), ev);
    write_csv(join(dir, "rho_sv.csv"), sv);
    KV kv{{"command", "density"}};
    push_model(kv, p);
    push_grid(kv, "x_", g);
    push_quad(kv, ctx.quad);
    write_key_value_file(join(dir, "density.meta"), kv);
    out << "wrote " << join(dir, "rho_ev.csv") << " and " << join(dir, "rho_sv.csv") << "\n";
    return kOk;
}

// ---- cov-grid

struct CovCmd {
    ModelOpts model;
    GridOpts r, lambda;
    QuadOpts quad;
    bool rescale = false;
};

int cmd_cov(const Common& c, const CovCmd& d, std::ostream& out) {
    const ModelParams p = to_params(d.model);
    if (p.n <= 2) throw ConfigError("cov-grid needs n > 2");
    const CovContext ctx{EnsembleModel(p), to_quad(d.quad)};
    const bool jac = p.family == Family::Jacobi;
    const GridSpec gr = resolve(d.r, jac ? GridSpec{0.01, 0.99, 99, false} : GridSpec{0.01, 4.0 * p.n + 4.0, 121, true});
    const GridSpec gl = resolve(d.lambda, jac ? GridSpec{0.01, 0.99, 99, false}
                                              : GridSpec{0.05, std::sqrt(4.0 * p.n + 4.0), 121, true});
    const auto rs = make_grid(gr);
    const auto ls = make_grid(gl);
    if (!(rs.front() > 0) || !(ls.front() > 0)) throw ConfigError("cov-grid needs positive grids");
    if (jac && (rs.back() >= 1 || ls.back() >= 1)) throw ConfigError("Jacobi grids must lie inside (0, 1)");
    std::vector<double> as;
    for (double l : ls) as.push_back(l * l);
    const auto vals = cov_closed_grid(ctx, rs, as, c.threads);
    const double scale = d.rescale && !jac ? std::pow(static_cast<double>(p.n), 1.5) : 1.0;
    CsvTable t{{"lambda", "r", "value"}, {}};
    for (size_t j = 0; j < ls.size(); ++j)
        for (size_t i = 0; i < rs.size(); ++i) t.rows.push_back({ls[j], rs[i], 2 * ls[j] * vals[i * as.size() + j] * scale});
    const std::string dir = prepare_out(c.out);
    write_csv(join(dir, "cov.csv"), t);
    KV kv{{"command", "cov-grid"}};
    push_model(kv, p);
    push_grid(kv, "r_", gr);
    push_grid(kv, "lambda_", gl);
    push_quad(kv, ctx.quad);
    kv.emplace_back("value", "2*lambda*cov(r;lambda^2)");
    kv.emplace_back("rescale_n32", d.rescale && !jac ? "true" : "false");
    kv.emplace_back("threads", std::to_string(c.threads));
    write_key_value_file(join(dir, "cov.meta"), kv);
    out << "wrote " << join(dir, "cov.csv") << " (" << t.rows.size() << " rows)\n";
    return kOk;
}

// ---- conditional

struct CondCmd {
    std::string a;
    GridOpts grid;
    bool analytic = false;
    double epsilon = 1e-6;
    bool richardson = false;
};

int cmd_conditional(const Common& c, const CondCmd& d, std::ostream& out) {
    const auto a = parse_list(d.a, "--a");
    for (double x : a)
        if (!(x > 0)) throw ConfigError("--a: squared singular values must be positive");
    const int n = static_cast<int>(a.size());
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    const GridSpec g = resolve(d.grid, GridSpec{0.9 * *lo, 1.1 * *hi, 401, false});
    const auto rs = make_grid(g);
    if (!(rs.front() > 0)) throw ConfigError("conditional grid must be positive");
    ConditionalOptions opt;
    opt.allow_degenerate = true;
    opt.epsilon = d.epsilon;
    opt.richardson = d.richardson;
    if (d.analytic) opt.derivative = ConditionalOptions::Derivative::Analytic;
    const bool degenerate = is_degenerate(a);
    CsvTable t{{"r", "value"}, {}};
    if (n == 2) {
        // the ratio f_12 / f_SV does not depend on the weight; any n = 2 model serves
        ModelParams p2;
        p2.n = 2;
        const EnsembleModel m(p2);
        const auto aa = degenerate ? perturb_ties(a, d.epsilon) : a;
        const double fsv = n2_fsv(m, aa[0], aa[1]);
        for (double r : rs) t.rows.push_back({r, n2_closed(m, N2Which::F12, {r, aa[0], aa[1]}) / fsv});
    } else {
        for (double r : rs) t.rows.push_back({r, conditional_density(n, r, a, opt)});
    }
    const std::string dir = prepare_out(c.out);
    write_csv(join(dir, "conditional.csv"), t);
    KV kv{{"command", "conditional"}, {"n", std::to_string(n)}, {"a", d.a}};
    push_grid(kv, "r_", g);
    kv.emplace_back("path", n == 2 ? "n2_closed" : "determinant-ratio");
    kv.emplace_back("derivative", d.analytic ? "analytic" : "finite-difference");
    kv.emplace_back("epsilon", format_double(d.epsilon));
    kv.emplace_back("richardson", d.richardson ? "true" : "false");
    if (degenerate)
        kv.emplace_back("warning", "coinciding squared singular values; perturbed by relative epsilon");
    write_key_value_file(join(dir, "conditional.meta"), kv);
    if (degenerate) out << "warning: coinciding squared singular values, using the perturbed limit\n";
    out << "wrote " << join(dir, "conditional.csv") << "\n";
    return kOk;
}

// ---- sample

struct SampleCmd {
    std::string model = "ginibre";
    int n = 3;
    int m = 7;
    double alpha = 0.0;
    std::string a;
    std::uint64_t draws = 100000;
    std::uint64_t seed = 1;
    GridOpts r, av;
    bool compare = true;
};

void write_hist1d(const std::string& path, const mc::Histogram1D& h) {
    CsvTable t{{"lo", "hi", "density", "stderr"}, {}};
    for (size_t i = 0; i + 1 < h.edges.size(); ++i) t.rows.push_back({h.edges[i], h.edges[i + 1], h.density(i), h.stderr_(i)});
    write_csv(path, t);
}

void push_report(KV& kv, const std::string& prefix, const mc::DeviationReport& r) {
    kv.emplace_back(prefix + "_occupied_bins", std::to_string(r.occupied));
    kv.emplace_back(prefix + "_beyond_4sigma", std::to_string(r.beyond));
    kv.emplace_back(prefix + "_fraction", format_double(r.fraction()));
    kv.emplace_back(prefix + "_max_z", format_double(r.max_z));
}

int cmd_sample(const Common& c, const SampleCmd& d, std::ostream& out) {
    mc::SamplerConfig cfg;
    try {
        cfg.model = mc::sampler_from_name(d.model);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (d.draws < 1) throw ConfigError("--draws must be >= 1");
    cfg.n = d.n;
    cfg.m = d.m;
    cfg.alpha = d.alpha;
    cfg.seed = d.seed;
    cfg.draws = d.draws;
    cfg.threads = c.threads;
    // analytic counterpart of the sampled model, if any
    std::optional<ModelParams> analytic;
    ModelParams p;
    p.n = d.n;
    GridSpec rdef, adef;
    switch (cfg.model) {
        case mc::SamplerModel::Ginibre:
            analytic = p;
            break;
        case mc::SamplerModel::LaguerreBidiagonal:
            p.alpha = d.alpha;
            analytic = p;
            break;
        case mc::SamplerModel::TruncatedUnitary:
            if (d.m <= d.n) throw ConfigError("truncated-unitary needs m > n");
            p.family = Family::Jacobi;
            p.beta = d.m - 2 * d.n;
            if (p.beta > -1) analytic = p;
            break;
        case mc::SamplerModel::FixedSV:
            if (d.a.empty()) throw ConfigError("fixed-sv needs --a");
            cfg.a = parse_list(d.a, "--a");
            cfg.n = static_cast<int>(cfg.a.size());
            break;
    }
    std::vector<double> re, ae;
    if (cfg.model == mc::SamplerModel::FixedSV) {
        const double top = *std::max_element(cfg.a.begin(), cfg.a.end());
        const double bot = *std::min_element(cfg.a.begin(), cfg.a.end());
        re = make_grid(resolve(d.r, GridSpec{bot, top, 31, false}));
        ae = make_grid(resolve(d.av, GridSpec{0.0, 1.25 * top, 11, false}));
    } else {
        ModelParams q = p;
        if (q.family == Family::Jacobi && !(q.beta > -1)) q.beta = 0.0;  // bins only
        const auto dr = verify::default_r_edges(q), da = verify::default_a_edges(q);
        re = make_grid(resolve(d.r, GridSpec{dr.front(), dr.back(), static_cast<int>(dr.size()), false}));
        ae = make_grid(resolve(d.av, GridSpec{da.front(), da.back(), static_cast<int>(da.size()), false}));
    }
    const auto run = mc::run_sampler(cfg, re, ae);

    const std::string dir = prepare_out(c.out);
    CsvTable t{{"r_lo", "r_hi", "a_lo", "a_hi", "density", "stderr"}, {}};
    for (size_t i = 0; i < run.f11.nr(); ++i)
        for (size_t j = 0; j < run.f11.na(); ++j)
            t.rows.push_back({re[i], re[i + 1], ae[j], ae[j + 1], run.f11.density(i, j), run.f11.stderr_(i, j)});
    write_csv(join(dir, "histogram.csv"), t);
    write_hist1d(join(dir, "ev_hist.csv"), run.ev);
    write_hist1d(join(dir, "sv_hist.csv"), run.sv);

    KV kv{{"command", "sample"}, {"model", mc::sampler_name(cfg.model)}, {"n", std::to_string(cfg.n)}};
    if (cfg.model == mc::SamplerModel::TruncatedUnitary) kv.emplace_back("m", std::to_string(cfg.m));
    if (cfg.model == mc::SamplerModel::LaguerreBidiagonal) kv.emplace_back("alpha", format_double(cfg.alpha));
    if (cfg.model == mc::SamplerModel::FixedSV) kv.emplace_back("a", d.a);
    kv.emplace_back("family", cfg.model == mc::SamplerModel::FixedSV ? "fixed" : family_name(p.family));
    kv.emplace_back("seed", std::to_string(cfg.seed));
    kv.emplace_back("draws", std::to_string(cfg.draws));
    kv.emplace_back("chunk", std::to_string(cfg.chunk));
    kv.emplace_back("threads", std::to_string(cfg.threads));
    push_grid(kv, "r_", {re.front(), re.back(), static_cast<int>(re.size()), false});
    push_grid(kv, "a_", {ae.front(), ae.back(), static_cast<int>(ae.size()), false});
    const auto& au = run.audit;
    kv.emplace_back("accepted", std::to_string(au.accepted));
    kv.emplace_back("discards", std::to_string(au.discarded));
    kv.emplace_back("discard_rate", format_double(au.discard_rate()));
    kv.emplace_back("weyl_product_violations", std::to_string(au.weyl_product_violations));
    kv.emplace_back("weyl_sum_violations", std::to_string(au.weyl_sum_violations));
    kv.emplace_back("bound_violations", std::to_string(au.bound_violations));
    kv.emplace_back("product_violations", std::to_string(au.product_violations));
    kv.emplace_back("max_prod_gap", format_double(au.max_prod_gap));

    bool deviation_ok = true;
    if (d.compare && cfg.model == mc::SamplerModel::FixedSV) {
        const auto r = mc::compare_1d(run.ev, verify::conditional_bin_mass(cfg.a, re));
        push_report(kv, "ev", r);
        deviation_ok = r.fraction() <= 0.01;
    } else if (d.compare && analytic) {
        const CovContext ctx{EnsembleModel(*analytic)};
        const auto ev = mc::compare_1d(run.ev, verify::ev_bin_mass(ctx, re));
        const auto sv = mc::compare_1d(run.sv, verify::sv_bin_mass(ctx, ae));
        push_report(kv, "ev", ev);
        push_report(kv, "sv", sv);
        deviation_ok = ev.fraction() <= 0.01 && sv.fraction() <= 0.01;
        if (analytic->n > 2) {
            const auto f11 = mc::compare_2d(run.f11, verify::f11_bin_mass(ctx, re, ae));
            push_report(kv, "f11", f11);
            deviation_ok = deviation_ok && f11.fraction() <= 0.01;
        }
    } else {
        kv.emplace_back("deviation_report", d.compare ? "no analytic counterpart" : "disabled");
    }
    kv.emplace_back("audit_ok", au.ok() ? "true" : "false");
    write_key_value_file(join(dir, "sample.meta"), kv);
    out << "wrote " << join(dir, "histogram.csv") << "; accepted " << au.accepted << ", discarded " << au.discarded
        << ", Weyl violations " << au.weyl_product_violations + au.weyl_sum_violations + au.bound_violations
        << ", deviation " << (deviation_ok ? "ok" : "exceeds 1% of bins") << "\n";
    if (!au.ok()) return kVerificationFailed;
    return kOk;
}

// ---- verify

struct VerifyCmd {
    std::string suite = "quick";
    bool psi0_flip = false;
    std::uint64_t seed = 20240607;
    std::uint64_t draws = 0;
    std::string report;
};

int cmd_verify(const Common& c, const VerifyCmd& d, std::ostream& out) {
    verify::SuiteOptions opt;
    opt.quick = d.suite == "quick";
    opt.psi0_flip = d.psi0_flip;
    opt.threads = c.threads;
    opt.seed = d.seed;
    opt.draws = d.draws;
    const auto results = verify::run_suite(opt);
    std::vector<std::string> failed;
    std::ostringstream table;
    for (const auto& r : results) {
        table << verify::format_result(r) << "\n";
        if (!r.passed) failed.push_back(r.name);
    }
    out << table.str();
    if (!d.report.empty()) {
        std::ofstream f(d.report);
        if (!f) throw ConfigError("cannot write " + d.report);
        f << table.str();
    }
    if (failed.empty()) {
        out << "all " << results.size() << " checks passed\n";
        return kOk;
    }
    out << "failed:";
    for (const auto& f : failed) out << " " << f;
    out << "\n";
    return kVerificationFailed;
}

// flags on the command line win; config entries fill in the rest
std::vector<std::string> merge_config(CLI::App& app, const std::vector<std::string>& args) {
    std::string path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty() || args.empty()) return args;
    CLI::App* sub = nullptr;
    try {
        sub = app.get_subcommand(args[0]);
    } catch (const CLI::OptionNotFound&) {
        throw ConfigError("--config needs a subcommand first");
    }
    std::vector<std::string> merged = args;
    for (const auto& [key, value] : read_key_value_file(path)) {
        const std::string flag = "--" + key;
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (!opt || key == "config") throw ConfigError("config " + path + ": unknown key '" + key + "'");
        const bool given = std::any_of(args.begin(), args.end(),
                                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
        if (given) continue;
        if (opt->get_expected_min() == 0) {
            if (value == "true" || value == "1")
                merged.push_back(flag);
            else if (value != "false" && value != "0")
                throw ConfigError("config " + path + ": '" + key + "' expects true or false");
        } else {
            merged.push_back(flag);
            merged.push_back(value);
        }
    }
    return merged;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"svev: singular value and eigenvalue cross-correlations of Polya ensembles"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "svev 0.1.0");

    Common common;
    DensityCmd den;
    CovCmd cov;
    CondCmd cond;
    SampleCmd smp;
    VerifyCmd ver;

    auto* s_den = app.add_subcommand("density", "rho_EV and rho_SV on a grid (rho_ev.csv, rho_sv.csv)");
    add_common(s_den, common);
    add_model(s_den, den.model);
    add_grid(s_den, den.grid, "", "x");
    add_quad(s_den, den.quad);

    auto* s_cov = app.add_subcommand("cov-grid", "2 lambda cov(r; lambda^2) on a grid (cov.csv)");
    add_common(s_cov, common);
    add_model(s_cov, cov.model);
    add_grid(s_cov, cov.r, "r-", "r");
    add_grid(s_cov, cov.lambda, "lambda-", "lambda");
    add_quad(s_cov, cov.quad);
    s_cov->add_flag("--rescale", cov.rescale, "multiply by n^{3/2} (Laguerre only)");

    auto* s_cond = app.add_subcommand("conditional", "eigenradius density given all squared singular values (conditional.csv)");
    add_common(s_cond, common);
    s_cond->add_option("--a", cond.a, "comma separated squared singular values")->required();
    add_grid(s_cond, cond.grid, "", "r");
    s_cond->add_flag("--analytic", cond.analytic, "analytic r-derivative instead of finite differences");
    s_cond->add_option("--epsilon", cond.epsilon, "relative spread for coinciding values")->capture_default_str();
    s_cond->add_flag("--richardson", cond.richardson, "extrapolate the epsilon limit");

    auto* s_smp = app.add_subcommand("sample", "Monte-Carlo histograms and audits (histogram.csv, sample.meta)");
    add_common(s_smp, common);
    s_smp->add_option("--model", smp.model, "ginibre, truncated-unitary, fixed-sv or laguerre-bidiagonal")
        ->capture_default_str();
    s_smp->add_option("--n", smp.n, "matrix size")->capture_default_str();
    s_smp->add_option("--m", smp.m, "embedding dimension for truncated-unitary")->capture_default_str();
    s_smp->add_option("--alpha", smp.alpha, "alpha for laguerre-bidiagonal")->capture_default_str();
    s_smp->add_option("--a", smp.a, "squared singular values for fixed-sv");
    s_smp->add_option("--draws", smp.draws, "number of matrices")->capture_default_str();
    s_smp->add_option("--seed", smp.seed, "master seed")->capture_default_str();
    add_grid(s_smp, smp.r, "r-", "r bin edge");
    add_grid(s_smp, smp.av, "a-", "a bin edge");
    s_smp->add_flag("!--no-compare", smp.compare, "skip the comparison with the analytic densities");

    auto* s_ver = app.add_subcommand("verify", "run the verification suite; exit 0 iff every check passes");
    add_common(s_ver, common);
    s_ver->add_option("--suite", ver.suite, "quick or full")->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
    s_ver->add_flag("--psi0-flip", ver.psi0_flip, "test hook: flip the sign of Psi_0");
    s_ver->add_option("--seed", ver.seed, "Monte-Carlo master seed")->capture_default_str();
    s_ver->add_option("--draws", ver.draws, "Monte-Carlo draws (0: suite default)");
    s_ver->add_option("--report", ver.report, "also write the table to this file");

    try {
        auto merged = merge_config(app, args);
        std::reverse(merged.begin(), merged.end());
        app.parse(merged);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (s_den->parsed()) return cmd_density(common, den, out);
        if (s_cov->parsed()) return cmd_cov(common, cov, out);
        if (s_cond->parsed()) return cmd_conditional(common, cond, out);
        if (s_smp->parsed()) return cmd_sample(common, smp, out);
        if (s_ver->parsed()) return cmd_verify(common, ver, out);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const PrecisionInsufficient& e) {
        err << "precision insufficient: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kConfigError;
    } catch (const IndexError& e) {
        err << "index error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DegenerateInput& e) {
        err << "degenerate input: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
    return kConfigError;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace svev::cli
