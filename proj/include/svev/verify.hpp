#pragma once

#include "svev/correlations.hpp"
#include "svev/ensembles.hpp"
#include "svev/montecarlo.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace svev::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    double metric = 0.0;     // worst observed error (or violation fraction)
    double threshold = 0.0;  // pass iff metric < threshold
    std::string detail;
    double seconds = 0.0;
};

std::string format_result(const CheckResult& r);

// n in ns; Laguerre alpha in {0, 0.5}; Jacobi (alpha, beta) in {(0,1), (0.5,1.5)}
std::vector<ModelParams> model_matrix(const std::vector<int>& ns);

// integral of f over the model's support truncated at cut, split at the given interior points
double integrate_support(const EnsembleModel& m, const Integrand& f, std::vector<double> kinks,
                         const QuadratureSpec& q = {}, double cut = std::numeric_limits<double>::infinity());

// max |int q_b p_c - delta_bc| and max |int K(x,y) x^k dx - y^k| over the models
CheckResult biorthogonality(const std::vector<ModelParams>& models, double tol = 1e-8);
// |int rho_SV - 1| and |int rho_EV - 1|
CheckResult normalization(const std::vector<ModelParams>& models, double tol = 1e-6);
// cov_closed vs cov_integral, f_1k (k=1) vs rho_EV rho_SV + cov, f_1k (k=2) vs rho_EV f_02 + cov_1k,
// f_1k (k=n) vs f_SV conditional_density on grid x grid points
CheckResult formula_triangle(const std::vector<int>& ns, int grid, bool psi0_flip = false);
// |int f_11 dr - rho_SV|, |int f_11 da - rho_EV|, |int cov dr|, |int cov da|
CheckResult marginals(const std::vector<int>& ns, int points);
// R-independent normalization, n = 2 agreement, near-degenerate concentration
CheckResult conditional_suite();
// n = 2 dual formulas; the n > 2 formulas at n = 2 are reported in the detail only
CheckResult n2_agreements();
// kernel sum vs integral form; q~_n boundary sum vs hypergeometric form
CheckResult kernel_forms(const std::vector<int>& ns);

// analytic bin masses for the Monte-Carlo comparisons
std::vector<double> ev_bin_mass(const CovContext& ctx, const std::vector<double>& edges);
std::vector<double> sv_bin_mass(const CovContext& ctx, const std::vector<double>& edges);
std::vector<double> f11_bin_mass(const CovContext& ctx, const std::vector<double>& r_edges,
                                 const std::vector<double>& a_edges);
std::vector<double> conditional_bin_mass(const std::vector<double>& a, const std::vector<double>& edges);

struct McValidation {
    mc::SampleRun run;
    mc::DeviationReport f11, ev, sv;
    double seconds = 0.0;
};
// samples the matrix model and compares with the analytic model on the given bins
McValidation validate_ensemble(const mc::SamplerConfig& cfg, const EnsembleModel& model,
                               const std::vector<double>& r_edges, const std::vector<double>& a_edges);
struct McConditional {
    mc::SampleRun run;
    mc::DeviationReport ev;
    double seconds = 0.0;
};
McConditional validate_conditional(const mc::SamplerConfig& cfg, const std::vector<double>& r_edges);

// default bins used by the Monte-Carlo checks and the CLI
std::vector<double> default_r_edges(const ModelParams& p);
std::vector<double> default_a_edges(const ModelParams& p);

CheckResult mc_check(const std::string& name, const McValidation& v, double max_fraction = 0.01);
CheckResult audit_check(const std::vector<const mc::AuditSummary*>& audits);

// sign pattern and decay of 2 lambda cov(r; lambda^2) for n = 3 Laguerre alpha = 0.5, plus an
// n = 25 grid in extended precision
CheckResult fig1(int grid, int grid25);
// n = 3 and n = 4 probes at a = 1 (Laguerre alpha = 0.5), plus a probe away from the diagonal
CheckResult kink(double factor = 10.0);

struct SuiteOptions {
    bool quick = false;
    bool psi0_flip = false;
    int threads = 1;
    std::uint64_t seed = 20240607;
    std::uint64_t draws = 0;  // 0: 2e5 for quick, 1e6 otherwise
};
std::vector<CheckResult> run_suite(const SuiteOptions& opt);

}  // namespace svev::verify
