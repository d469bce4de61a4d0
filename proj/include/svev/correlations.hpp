#pragma once

#include "svev/ensembles.hpp"
#include "svev/quad.hpp"

#include <map>
#include <string>
#include <vector>

namespace svev {

struct CovContext {
    explicit CovContext(EnsembleModel m, QuadratureSpec q = {}, double derivative_step = 1e-5);

    EnsembleModel model;
    QuadratureSpec quad;
    double derivative_step;  // relative step of the finite-difference d/dr
    // evaluate the n > 2 formulas at n = 2 as well (results are reported, not asserted)
    bool allow_n2 = false;
    // mutation hook: flips the sign of Psi_0 inside cov_1k
    bool psi0_sign_flip = false;
};

struct DensityTable {
    std::vector<std::vector<double>> axes;  // one or two strictly increasing grids
    std::vector<double> values;             // row-major over axes[0] x axes[1]
    std::map<std::string, std::string> meta;
};

// ---- 1-point functions
double rho_sv(const CovContext& ctx, double a);
double rho_ev_polya(const CovContext& ctx, double r);
// int_0^r rho_EV = (1/n) sum_c w~_r(c+1)/w~(c+1)
double rho_ev_cdf(const CovContext& ctx, double r);
// derivative-free integral form n int dt int_0^r dv/v phi(v/r,t) K(v,-rt)
double rho_ev_polynomial(const CovContext& ctx, double r);
// d/dr of int dt (1+t)^{-(n+1)} int_0^r dv (1-v/r)^{n-1} K(v,-rt); cross-check only
double rho_ev_differentiated(const CovContext& ctx, double r);
// int_lo^hi rho_SV by quadrature
double rho_sv_mass(const CovContext& ctx, double lo, double hi);

// phi(x, t) of the integral forms
double phi_weight(int n, double x, double t);

// ---- cross-covariance
double cov_closed(const CovContext& ctx, double r, double a);
// cov_closed on a tensor grid, values[i*as.size()+j] = cov(rs[i], as[j]); evaluated in the
// model's precision with per-r and per-a caches
std::vector<double> cov_closed_grid(const CovContext& ctx, const std::vector<double>& rs,
                                    const std::vector<double>& as, int threads = 1);
double cov_integral(const CovContext& ctx, double r, double a);
// C^(r; a1, a2) with the argument order of the closed form: H(r, a2), Psi/V at a1
double chat(const CovContext& ctx, double r, double a1, double a2);
double cov_1k(const CovContext& ctx, double r, const std::vector<double>& a);
// int over the bin [rlo,rhi] x [alo,ahi] of cov_closed (tensor Gauss, split at r = a)
double cov_bin_integral(const CovContext& ctx, double rlo, double rhi, double alo, double ahi, int order = 12);

// ---- joint functions
// ((n-k)!/n!) det[K(a_b, a_c)]
double f_0k(const CovContext& ctx, const std::vector<double>& a);
// joint density of all n squared singular values
double f_sv(const CovContext& ctx, const std::vector<double>& a);
double f_1k(const CovContext& ctx, double r, const std::vector<double>& a);
// first (differentiated) determinant form; cross-check only
double f_1k_differentiated(const CovContext& ctx, double r, const std::vector<double>& a);

// ---- conditional eigenradius density given all squared singular values
struct ConditionalOptions {
    enum class Derivative { FiniteDifference, Analytic };
    Derivative derivative = Derivative::FiniteDifference;
    double rel_step = 1e-5;
    bool allow_degenerate = false;  // perturb tied values instead of throwing
    double epsilon = 1e-6;          // relative spread for tied values
    bool richardson = false;        // combine epsilon and 2 epsilon
};
// (1/n) N/D, the cumulative mass of r' <= r
double conditional_cdf(double r, const std::vector<double>& a, const ConditionalOptions& opt = {});
double conditional_density(int n, double r, const std::vector<double>& a, const ConditionalOptions& opt = {});
// true when some pair is closer than 1e-9 times the scale
bool is_degenerate(const std::vector<double>& a);
// spread tied values symmetrically by relative eps
std::vector<double> perturb_ties(const std::vector<double>& a, double eps);

// ---- n = 1 and n = 2
enum class N2Which { F12, F21, F11, F11Polynomial };
// f_SV(a1, a2) for n = 2 from the two-weight polynomial formula (w0 = w, w1 = -x w')
double n2_fsv(const EnsembleModel& m, double a1, double a2);
double n2_f12(const EnsembleModel& m, double r, double a1, double a2);
double n2_f21(const EnsembleModel& m, double r1, double r2, double a1);
double n2_f11(const EnsembleModel& m, double r, double a, const QuadratureSpec& q = {});
double n2_f11_polynomial(const EnsembleModel& m, double r, double a);
// args: F12 (r,a1,a2), F21 (r1,r2,a1), F11 / F11Polynomial (r,a)
double n2_closed(const EnsembleModel& m, N2Which which, const std::vector<double>& args);

// f_SV(x) = w(x)/w~(1) for n = 1; checks rho_EV = rho_SV = f_SV
double n1_identity(const CovContext& ctx, double x);

// ---- non-smoothness probe at r = r0 for cov(., a)
struct KinkProbe {
    int order = 0;               // derivative order probed, n - 2
    double left_deriv = 0.0;
    double right_deriv = 0.0;
    double value_gap = 0.0;      // jump of the (n-3)rd derivative
    double noise_floor = 0.0;
};
KinkProbe kink_probe(const CovContext& ctx, double a, double r0 = -1.0, double rel_h = 0.01, int points = 6);

// ---- DensityTable helpers
DensityTable tabulate_1d(const std::vector<double>& xs, const std::vector<double>& vals,
                         std::map<std::string, std::string> meta);

}  // namespace svev
