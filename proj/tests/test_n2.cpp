#include "doctest.h"
#include "oracle_values.hpp"

#include "svev/correlations.hpp"
#include "svev/errors.hpp"

#include <cmath>

using namespace svev;

namespace {

EnsembleModel laguerre2(double alpha) {
    ModelParams p;
    p.n = 2;
    p.alpha = alpha;
    return EnsembleModel(p);
}

}  // namespace

TEST_CASE("n = 2 closed forms match reference values") {
    for (const auto& o : oracle::n2) {
        const auto m = laguerre2(o.alpha);
        INFO("alpha = " << o.alpha << ", kind = " << o.kind);
        double got = 0.0;
        if (o.kind == 0) got = n2_f12(m, o.x0, o.x1, o.x2);
        if (o.kind == 1) got = n2_fsv(m, o.x0, o.x1);
        if (o.kind == 2) got = n2_f11(m, o.x0, o.x1);
        CHECK(std::abs(got - o.value) < 1e-10 * std::max(1.0, o.value));
        if (o.kind == 2) CHECK(std::abs(n2_f11_polynomial(m, o.x0, o.x1) - o.value) < 1e-10);
    }
}

TEST_CASE("n = 2 dual forms agree") {
    const auto m = laguerre2(0.5);
    // f12 = f_SV times the conditional density of the eigenradius
    ConditionalOptions an;
    an.derivative = ConditionalOptions::Derivative::Analytic;
    const double r = 0.9, a1 = 0.4, a2 = 1.6;
    CHECK(std::abs(n2_f12(m, r, a1, a2) - n2_fsv(m, a1, a2) * conditional_density(2, r, {a1, a2}, an)) < 1e-10);
    CHECK(n2_closed(m, N2Which::F12, {r, a1, a2}) == n2_f12(m, r, a1, a2));
    CHECK(std::isfinite(n2_f21(m, 0.7, 1.1, 0.9)));
    CHECK_THROWS(n2_closed(m, N2Which::F11, {r}));
}

TEST_CASE("n = 2 formulas need n = 2") {
    ModelParams p;
    p.n = 3;
    CHECK_THROWS_AS(n2_fsv(EnsembleModel(p), 0.5, 1.0), DomainError);
}
