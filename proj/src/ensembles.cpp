#include "svev/ensembles.hpp"

#include "svev/detail/model_core.hpp"
#include "svev/errors.hpp"
#include "svev/io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace svev {

namespace {

template <class R>
double d(const R& v) {
    return static_cast<double>(v);
}

}  // namespace

std::string family_name(Family f) { return f == Family::Laguerre ? "laguerre" : "jacobi"; }

std::string precision_name(Precision p) { return p == Precision::Double ? "double" : "double-double"; }

std::string model_to_config(const ModelParams& p) {
    std::ostringstream os;
    os << "family=" << family_name(p.family) << "\n";
    os << "n=" << p.n << "\n";
    os << "alpha=" << format_double(p.alpha) << "\n";
    if (p.family == Family::Jacobi) os << "beta=" << format_double(p.beta) << "\n";
    os << "precision=" << precision_name(p.precision) << "\n";
    return os.str();
}

ModelParams model_from_config(const std::map<std::string, std::string>& kv) {
    ModelParams p;
    for (const auto& [k, v] : kv) {
        if (k == "family") {
            if (v == "laguerre" || v == "Laguerre")
                p.family = Family::Laguerre;
            else if (v == "jacobi" || v == "Jacobi")
                p.family = Family::Jacobi;
            else
                throw ConfigError("unknown family '" + v + "'");
        } else if (k == "n") {
            p.n = static_cast<int>(parse_long(v, "n"));
        } else if (k == "alpha") {
            p.alpha = parse_double(v, "alpha");
        } else if (k == "beta") {
            p.beta = parse_double(v, "beta");
        } else if (k == "precision") {
            if (v == "double")
                p.precision = Precision::Double;
            else if (v == "double-double" || v == "extended")
                p.precision = Precision::Extended;
            else
                throw ConfigError("unknown precision '" + v + "'");
        }
    }
    return p;
}

ModelParams model_from_config_text(const std::string& text) { return model_from_config(parse_key_values(text)); }

EnsembleModel::EnsembleModel(const ModelParams& p) : params_(p) {
    if (p.n < 1) throw DomainError("EnsembleModel: n must be >= 1");
    if (!(p.alpha > -1)) throw DomainError("EnsembleModel: alpha must exceed -1");
    if (p.family == Family::Jacobi && !(p.beta > -1)) throw DomainError("EnsembleModel: beta must exceed -1");
    if (p.n > 15 && p.precision == Precision::Double)
        throw PrecisionInsufficient(
            "n > 15 needs precision=double-double (alternating binomial sums lose all significance in double)");
    if (p.precision == Precision::Double)
        core_ = std::make_shared<const detail::ModelCore<double>>(p);
    else
        core_ = std::make_shared<const detail::ModelCore<ext_real>>(p);
    visit([](const auto& c) {
        for (const auto& m : c.mellin) {
            using std::isfinite;
            if (!(m > 0) || !isfinite(static_cast<double>(m)))
                throw DomainError("EnsembleModel: Mellin values must be finite and positive");
        }
        return 0;
    });
}

double EnsembleModel::support_upper() const {
    return family() == Family::Jacobi ? 1.0 : std::numeric_limits<double>::infinity();
}

double EnsembleModel::weight(double x) const {
    if (!(x > 0)) throw DomainError("weight: x must be positive");
    return visit([&](const auto& c) { return d(c.weight(x)); });
}

double EnsembleModel::weight_derivative(double x) const {
    if (!(x > 0)) throw DomainError("weight_derivative: x must be positive");
    return visit([&](const auto& c) { return d(c.weight_derivative(x)); });
}

double EnsembleModel::mellin_w(double s) const {
    return visit([&](const auto& c) { return d(c.mellin_w(s)); });
}

double EnsembleModel::incomplete_mellin_w(double x, double s) const {
    if (x < 0) throw DomainError("incomplete_mellin_w: x must be nonnegative");
    return visit([&](const auto& c) { return d(c.incomplete_mellin_w(x, s)); });
}

double EnsembleModel::biorth_p(int j, double x) const {
    if (j < 0 || j >= n()) throw IndexError("biorth_p: j must lie in 0..n-1");
    return visit([&](const auto& c) { return d(c.p_generic(j, x)); });
}

double EnsembleModel::biorth_p_family(int j, double x) const {
    if (j < 0 || j >= n()) throw IndexError("biorth_p_family: j must lie in 0..n-1");
    return visit([&](const auto& c) { return d(c.p_family(j, x)); });
}

double EnsembleModel::p_coefficient(int j, int c) const {
    if (j < 0 || j >= n() || c < 0 || c > j) throw IndexError("p_coefficient: index out of range");
    return visit([&](const auto& core) { return d(core.coef[j][c]); });
}

double EnsembleModel::biorth_q(int j, double x) const {
    if (j < 0 || j > n()) throw IndexError("biorth_q: j must lie in 0..n");
    if (!(x > 0)) throw DomainError("biorth_q: x must be positive");
    return visit([&](const auto& c) {
        if (j == n()) c.require_qn();
        return d(c.q(j, x));
    });
}

double EnsembleModel::kernel(double x, double y) const {
    if (!(x > 0)) throw DomainError("kernel: x must be positive");
    return visit([&](const auto& c) { return d(c.kernel(x, y)); });
}

double EnsembleModel::kernel_integral_form(double x, double y, const QuadratureSpec& spec) const {
    if (!(x > 0)) throw DomainError("kernel_integral_form: x must be positive");
    const int nn = n();
    auto f = [&](double t) { return biorth_q(nn, x * t) * biorth_p(nn - 1, y * t); };
    double upper = 1.0;
    if (family() == Family::Jacobi && x > 1) upper = 1.0 / x;  // q_n vanishes beyond the support
    return nn * value_or_throw(integrate(f, 0.0, upper, spec), "kernel_integral_form");
}

std::vector<double> EnsembleModel::kernel_coefficients(double x) const {
    return visit([&](const auto& c) {
        auto v = c.kernel_coeffs(x);
        std::vector<double> out(v.size());
        for (size_t i = 0; i < v.size(); ++i) out[i] = d(v[i]);
        return out;
    });
}

double EnsembleModel::incomplete_mellin_qn(double x, int c) const {
    if (x < 0) throw DomainError("incomplete_mellin_qn: x must be nonnegative");
    return visit([&](const auto& core) { return d(core.qn_tilde(x, c)); });
}

double EnsembleModel::incomplete_mellin_qn_hyp(double x, int c) const {
    if (x < 0) throw DomainError("incomplete_mellin_qn_hyp: x must be nonnegative");
    return visit([&](const auto& core) { return d(core.qn_tilde_hyp(x, c)); });
}

}  // namespace svev
