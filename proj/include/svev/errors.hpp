#pragma once

#include <stdexcept>
#include <string>

namespace svev {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Index outside the admissible range (e.g. p_j with j >= n).
struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Series or iteration did not converge; carries the best value reached.
struct NonConvergence : std::runtime_error {
    NonConvergence(const std::string& what, double best, double achieved)
        : std::runtime_error(what), best_estimate(best), achieved_tol(achieved) {}
    double best_estimate;
    double achieved_tol;
};

// Quadrature could not meet the requested tolerance.
struct ToleranceNotMet : std::runtime_error {
    ToleranceNotMet(const std::string& what, double best, double err)
        : std::runtime_error(what), best_estimate(best), err_est(err) {}
    double best_estimate;
    double err_est;
};

// Requested evaluation needs the extended precision mode.
struct PrecisionInsufficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coinciding squared singular values where a determinant formula needs distinct ones.
struct DegenerateInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed configuration (CLI flags, config files).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace svev
