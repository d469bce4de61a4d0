#pragma once

#include <vector>

namespace svev {

struct HypSeriesParams {
    std::vector<double> upper;  // a_1..a_p
    std::vector<double> lower;  // b_1..b_q
    double argument = 0.0;
    double term_tol = 1e-15;
    int max_terms = 20000;
};

struct HypSeriesResult {
    double value;
    double achieved_tol;  // |last term| / |partial sum|
    int terms;
};

// ln Gamma(x), x > 0.
double ln_gamma(double x);

// gamma(s, x) = int_0^x u^{s-1} e^{-u} du.
double lower_inc_gamma(double s, double x);

// B(x; a, b) = int_0^x u^{a-1} (1-u)^{b-1} du (not regularized).
double inc_beta(double x, double a, double b);

// Generalized Laguerre polynomial L_j^{(alpha)}(x) from its explicit finite sum.
double laguerre_poly(int j, double alpha, double x);

// Jacobi polynomial P_j^{(alpha,beta)}(x) from its series in (x-1)/2.
double jacobi_poly(int j, double alpha, double beta, double x);

// Truncated generalized hypergeometric series pFq(upper; lower; x).
// Throws NonConvergence when max_terms is reached first.
HypSeriesResult hyp_pfq(const HypSeriesParams& params);

}  // namespace svev
