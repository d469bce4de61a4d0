#pragma once

#include "svev/detail/ext.hpp"
#include "svev/quad.hpp"

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace svev {

enum class Family { Laguerre, Jacobi };
enum class Precision { Double, Extended };

struct ModelParams {
    Family family = Family::Laguerre;
    int n = 1;
    double alpha = 0.0;
    double beta = 1.0;  // Jacobi only
    Precision precision = Precision::Double;
};

std::string family_name(Family f);
std::string precision_name(Precision p);

// key=value lines: family, n, alpha, beta, precision
std::string model_to_config(const ModelParams& p);
ModelParams model_from_config(const std::map<std::string, std::string>& kv);
ModelParams model_from_config_text(const std::string& text);

namespace detail {
template <class R>
class ModelCore;
}

// Polya ensemble with weight w (Laguerre x^a e^{-x} or Jacobi x^a (1-x)^{b+n-1}),
// its biorthogonal pair (p_j, q_j) and correlation kernel. Immutable once built.
class EnsembleModel {
public:
    explicit EnsembleModel(const ModelParams& p);

    const ModelParams& params() const { return params_; }
    int n() const { return params_.n; }
    Family family() const { return params_.family; }
    bool extended() const { return params_.precision == Precision::Extended; }
    // upper end of the support (1 for Jacobi, +inf for Laguerre)
    double support_upper() const;

    double weight(double x) const;
    double weight_derivative(double x) const;
    double mellin_w(double s) const;
    double incomplete_mellin_w(double x, double s) const;

    // p_j from the generic binomial sum (cached monomial coefficients)
    double biorth_p(int j, double x) const;
    // p_j from the family's classical polynomial
    double biorth_p_family(int j, double x) const;
    double p_coefficient(int j, int c) const;
    // q_j, 0 <= j <= n, from the family closed form
    double biorth_q(int j, double x) const;

    double kernel(double x, double y) const;
    // n int_0^1 q_n(x t) p_{n-1}(y t) dt
    double kernel_integral_form(double x, double y, const QuadratureSpec& spec = {}) const;
    // K(x, y) = sum_c out[c] y^c, out has n entries
    std::vector<double> kernel_coefficients(double x) const;

    // q~_{n,x}(c+1) = (1/n!) int_0^x u^c d^n[u^n w(u)] du via the boundary-term sum
    double incomplete_mellin_qn(double x, int c) const;
    // same via the 2F2 (Laguerre) / 3F2 (Jacobi) representation
    double incomplete_mellin_qn_hyp(double x, int c) const;

    template <class F>
    decltype(auto) visit(F&& f) const {
        return std::visit([&](const auto& core) -> decltype(auto) { return f(*core); }, core_);
    }

private:
    ModelParams params_;
    std::variant<std::shared_ptr<const detail::ModelCore<double>>,
                 std::shared_ptr<const detail::ModelCore<ext_real>>>
        core_;
};

}  // namespace svev
