#include "doctest.h"
#include "oracle_values.hpp"

#include "svev/ensembles.hpp"
#include "svev/errors.hpp"
#include "svev/verify.hpp"

#include <cmath>

using namespace svev;

namespace {

bool close(double got, double want, double rel, double abs) {
    return std::abs(got - want) <= std::max(abs, rel * std::abs(want));
}

EnsembleModel model(int i, Precision pr = Precision::Double) {
    ModelParams p = oracle::params(oracle::models[i]);
    p.precision = pr;
    return EnsembleModel(p);
}

}  // namespace

TEST_CASE("Mellin transforms") {
    for (const auto& o : oracle::mellin) {
        INFO("model " << o.model << ", s = " << o.s);
        CHECK(close(model(o.model).mellin_w(o.s), o.value, 1e-13, 0.0));
    }
    for (const auto& o : oracle::inc_mellin) {
        INFO("model " << o.model << ", x = " << o.x);
        CHECK(close(model(o.model).incomplete_mellin_w(o.x, o.s), o.value, 1e-12, 1e-15));
    }
}

TEST_CASE("biorthogonal functions and kernel") {
    for (Precision pr : {Precision::Double, Precision::Extended}) {
        for (const auto& o : oracle::poly_p) {
            const auto m = model(o.model, pr);
            INFO("model " << o.model << ", j = " << o.j << ", x = " << o.x);
            CHECK(close(m.biorth_p(o.j, o.x), o.value, 1e-11, 1e-12));
            CHECK(close(m.biorth_p_family(o.j, o.x), o.value, 1e-11, 1e-12));
        }
        for (const auto& o : oracle::func_q) {
            INFO("model " << o.model << ", j = " << o.j << ", x = " << o.x);
            CHECK(close(model(o.model, pr).biorth_q(o.j, o.x), o.value, 1e-11, 1e-12));
        }
        for (const auto& o : oracle::kernel) {
            const auto m = model(o.model, pr);
            INFO("model " << o.model << ", x = " << o.x << ", y = " << o.y);
            CHECK(close(m.kernel(o.x, o.y), o.value, 1e-10, 1e-11));
            const auto c = m.kernel_coefficients(o.x);
            double s = 0.0;
            for (size_t k = c.size(); k-- > 0;) s = s * o.y + c[k];
            CHECK(close(s, o.value, 1e-10, 1e-11));
        }
    }
}

TEST_CASE("kernel integral form agrees with the sum") {
    for (int i = 0; i < 4; ++i) {
        const auto m = model(i);
        const double top = m.family() == Family::Jacobi ? 0.8 : 3.0;
        for (double x : {0.2 * top, 0.7 * top})
            for (double y : {0.1 * top, 0.9 * top, -1.0}) {
                INFO("model " << i << ", x = " << x << ", y = " << y);
                CHECK(close(m.kernel_integral_form(x, y), m.kernel(x, y), 1e-9, 1e-10));
            }
    }
}

TEST_CASE("incomplete Mellin transform of q_n in two forms") {
    for (const auto& o : oracle::qtilde) {
        const auto m = model(o.model);
        INFO("model " << o.model << ", c = " << o.c << ", x = " << o.x);
        CHECK(close(m.incomplete_mellin_qn(o.x, o.c), o.value, 1e-10, 1e-12));
        CHECK(close(m.incomplete_mellin_qn_hyp(o.x, o.c), o.value, 1e-10, 1e-12));
    }
}

TEST_CASE("biorthogonality for a small model") {
    const auto r = verify::biorthogonality({oracle::params({Family::Jacobi, 4, 0.5, 1.5}),
                                            oracle::params({Family::Laguerre, 4, 0.0, 1.0})});
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("domain and index errors") {
    ModelParams p;
    p.n = 0;
    CHECK_THROWS_AS(EnsembleModel{p}, DomainError);
    p.n = 3;
    p.alpha = -1.0;
    CHECK_THROWS_AS(EnsembleModel{p}, DomainError);
    p.alpha = 0.0;
    const EnsembleModel m(p);
    CHECK_THROWS_AS(m.biorth_p(3, 1.0), IndexError);
    CHECK_THROWS_AS(m.biorth_q(4, 1.0), IndexError);
    CHECK_THROWS_AS(m.weight(-0.5), DomainError);
}

TEST_CASE("model config round trip") {
    ModelParams p;
    p.family = Family::Jacobi;
    p.n = 5;
    p.alpha = 0.25;
    p.beta = 2.5;
    p.precision = Precision::Extended;
    const ModelParams q = model_from_config_text(model_to_config(p));
    CHECK(q.family == p.family);
    CHECK(q.n == p.n);
    CHECK(q.alpha == p.alpha);
    CHECK(q.beta == p.beta);
    CHECK(q.precision == p.precision);
    CHECK_THROWS_AS(model_from_config_text("family=hermite\nn=3\n"), ConfigError);
}
