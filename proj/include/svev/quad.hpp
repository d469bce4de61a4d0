#pragma once

#include <functional>
#include <vector>

namespace svev {

struct QuadratureSpec {
    enum class Kind { FixedGauss, Adaptive };
    Kind kind = Kind::Adaptive;
    int order = 15;  // Gauss points (fixed) or Kronrod points per panel (adaptive)
    double abs_tol = 1e-11;
    double rel_tol = 1e-10;
    int max_depth = 30;

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
    bool converged = true;
    int evaluations = 0;
};

using Integrand = std::function<double(double)>;

// int_a^b f. Adaptive panels work in a smoothed variable x = a + (b-a)(3s^2 - 2s^3),
// which absorbs algebraic endpoint behaviour u^alpha (alpha > -1).
QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec = {});

// int_0^inf f via t = tau/(1-tau).
QuadResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec = {});

// Sum of integrals over consecutive pieces [pts[i], pts[i+1]] (caller-provided kink split).
QuadResult integrate_pieces(const Integrand& f, const std::vector<double>& pts,
                            const QuadratureSpec& spec = {});

// Throws ToleranceNotMet when r did not converge, otherwise returns r.value.
double value_or_throw(const QuadResult& r, const char* what);

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};
const GaussRule& gauss_legendre(int m);

}  // namespace svev
