#include "svev/correlations.hpp"

#include "svev/errors.hpp"

#include <algorithm>
#include <cmath>

namespace svev {

namespace {

void require_n2(const EnsembleModel& m, const char* what) {
    if (m.n() != 2) throw DomainError(std::string(what) + ": requires n = 2");
}

double w1(const EnsembleModel& m, double x) { return -x * m.weight_derivative(x); }

// int_0^r x^{s-1} w1(x) dx by parts
double w1_incomplete(const EnsembleModel& m, double r, double s) {
    const double rr = std::min(r, m.support_upper());
    return -std::pow(rr, s) * m.weight(rr) + s * m.incomplete_mellin_w(rr, s);
}

}  // namespace

double n2_fsv(const EnsembleModel& m, double a1, double a2) {
    require_n2(m, "n2_fsv");
    if (!(a1 > 0 && a2 > 0)) return 0.0;
    const double den = m.mellin_w(1.0) * m.mellin_w(2.0);
    return (a2 - a1) * (m.weight(a1) * w1(m, a2) - w1(m, a1) * m.weight(a2)) / (2 * den);
}

double n2_f12(const EnsembleModel& m, double r, double a1, double a2) {
    require_n2(m, "n2_f12");
    if (!(r > 0)) throw DomainError("n2_f12: r must be positive");
    if (a1 == a2) throw DegenerateInput("n2_f12: coinciding squared singular values");
    if (r < std::min(a1, a2) || r > std::max(a1, a2)) return 0.0;
    return n2_fsv(m, a1, a2) / (2 * std::abs(a1 - a2)) * (1 + a1 * a2 / (r * r));
}

double n2_f21(const EnsembleModel& m, double r1, double r2, double a1) {
    require_n2(m, "n2_f21");
    if (!(r1 > 0 && r2 > 0 && a1 > 0)) throw DomainError("n2_f21: arguments must be positive");
    const double p = r1 * r2;
    if (a1 * a1 == p) throw DegenerateInput("n2_f21: a1^2 = r1 r2");
    const bool inside = a1 > std::max(r1, r2) || a1 < std::min(r1, r2);
    if (!inside) return 0.0;
    return n2_fsv(m, a1, p / a1) / (2 * std::abs(a1 * a1 - p)) * (r1 + r2);
}

double n2_f11(const EnsembleModel& m, double r, double a, const QuadratureSpec& q) {
    require_n2(m, "n2_f11");
    if (!(r > 0 && a > 0)) throw DomainError("n2_f11: arguments must be positive");
    if (r == a) throw DegenerateInput("n2_f11: r = a");
    auto f = [&](double a2) { return a2 == a ? 0.0 : n2_f12(m, r, a, a2); };
    const double top = m.support_upper();
    if (a > r) return value_or_throw(integrate(f, 0.0, r, q), "n2_f11");
    if (r >= top) return 0.0;
    if (std::isinf(top)) {
        auto g = [&](double t) { return f(r + t); };
        return value_or_throw(integrate_semi_infinite(g, q), "n2_f11");
    }
    return value_or_throw(integrate(f, r, top, q), "n2_f11");
}

double n2_f11_polynomial(const EnsembleModel& m, double r, double a) {
    require_n2(m, "n2_f11_polynomial");
    if (!(r > 0 && a > 0)) throw DomainError("n2_f11_polynomial: arguments must be positive");
    if (r == a) throw DegenerateInput("n2_f11_polynomial: r = a");
    const double den = m.mellin_w(1.0) * m.mellin_w(2.0);
    const double k = a / (r * r);
    // J_w = int over the a2-region of w(a2) (1 + a a2 / r^2), signed by sgn(a2 - a)
    double J0, J1;
    if (r > a) {
        J0 = (m.mellin_w(1.0) - m.incomplete_mellin_w(r, 1.0)) + k * (m.mellin_w(2.0) - m.incomplete_mellin_w(r, 2.0));
        J1 = (m.mellin_w(1.0) - w1_incomplete(m, r, 1.0)) + k * (2 * m.mellin_w(2.0) - w1_incomplete(m, r, 2.0));
    } else {
        J0 = -(m.incomplete_mellin_w(r, 1.0) + k * m.incomplete_mellin_w(r, 2.0));
        J1 = -(w1_incomplete(m, r, 1.0) + k * w1_incomplete(m, r, 2.0));
    }
    return (m.weight(a) * J1 - w1(m, a) * J0) / (4 * den);
}

double n2_closed(const EnsembleModel& m, N2Which which, const std::vector<double>& args) {
    const size_t need = (which == N2Which::F11 || which == N2Which::F11Polynomial) ? 2 : 3;
    if (args.size() != need) throw DomainError("n2_closed: wrong number of arguments");
    switch (which) {
        case N2Which::F12: return n2_f12(m, args[0], args[1], args[2]);
        case N2Which::F21: return n2_f21(m, args[0], args[1], args[2]);
        case N2Which::F11: return n2_f11(m, args[0], args[1]);
        case N2Which::F11Polynomial: return n2_f11_polynomial(m, args[0], args[1]);
    }
    return 0.0;
}

}  // namespace svev
