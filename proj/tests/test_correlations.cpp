#include "doctest.h"
#include "oracle_values.hpp"

#include "svev/correlations.hpp"
#include "svev/errors.hpp"
#include "svev/verify.hpp"

#include <cmath>

using namespace svev;

namespace {

bool close(double got, double want, double rel, double abs) {
    return std::abs(got - want) <= std::max(abs, rel * std::abs(want));
}

CovContext context(int i, Precision pr = Precision::Double) {
    ModelParams p = oracle::params(oracle::cov_models[i]);
    p.precision = pr;
    return CovContext(EnsembleModel(p));
}

// cov for k = 2 with the single-row replacement of [K] by C(b, c)
template <class F>
double cov_k2(const CovContext& ctx, double r, double a1, double a2, F entry) {
    const double a[2] = {a1, a2};
    double K[2][2], C[2][2];
    for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
            K[b][c] = ctx.model.kernel(a[b], a[c]);
            C[b][c] = entry(a[b], a[c]);
        }
    const double row0 = C[0][0] * K[1][1] - C[0][1] * K[1][0];
    const double row1 = K[0][0] * C[1][1] - K[0][1] * C[1][0];
    return (row0 + row1) / (ctx.model.n() - 1);
}

}  // namespace

TEST_CASE("one-point functions match reference values") {
    for (const auto& o : oracle::rho_sv) {
        INFO("model " << o.model << ", a = " << o.a);
        CHECK(close(rho_sv(context(o.model), o.a), o.value, 1e-10, 1e-12));
    }
    for (const auto& o : oracle::rho_ev) {
        const auto ctx = context(o.model);
        INFO("model " << o.model << ", r = " << o.r);
        CHECK(close(rho_ev_polya(ctx, o.r), o.value, 1e-10, 1e-12));
        CHECK(close(rho_ev_polynomial(ctx, o.r), o.value, 1e-8, 1e-10));
        CHECK(close(rho_ev_differentiated(ctx, o.r), o.value, 1e-6, 1e-8));
    }
}

TEST_CASE("eigenradius cdf is the integral of the density") {
    const auto ctx = context(1);
    const auto& m = ctx.model;
    const double v = verify::integrate_support(m, [&](double r) { return rho_ev_polya(ctx, r); }, {}, {}, 2.5);
    CHECK(close(rho_ev_cdf(ctx, 2.5), v, 1e-9, 1e-11));
}

TEST_CASE("covariance matches reference values in both forms and precisions") {
    for (const auto& o : oracle::cov) {
        INFO("model " << o.model << ", r = " << o.r << ", a = " << o.a);
        for (Precision pr : {Precision::Double, Precision::Extended}) {
            const auto ctx = context(o.model, pr);
            CHECK(close(cov_closed(ctx, o.r, o.a), o.value, 1e-8, 1e-11));
            CHECK(close(f_1k(ctx, o.r, {o.a}), o.f11, 1e-8, 1e-11));
        }
        CHECK(close(cov_integral(context(o.model), o.r, o.a), o.value, 1e-7, 1e-10));
    }
}

TEST_CASE("covariance grid agrees with pointwise evaluation") {
    const auto ctx = context(0);
    const std::vector<double> rs{0.4, 1.3, 2.9}, as{0.7, 1.3, 3.3};
    const auto g = cov_closed_grid(ctx, rs, as, 2);
    REQUIRE(g.size() == 9);
    for (size_t i = 0; i < rs.size(); ++i)
        for (size_t j = 0; j < as.size(); ++j) CHECK(close(g[i * 3 + j], cov_closed(ctx, rs[i], as[j]), 1e-11, 1e-14));
}

TEST_CASE("k = 2 covariance needs the closed-form argument order") {
    // entry (b, c) of the replacement rows is C^(r; a_c, a_b); the transposed order gives a
    // different, wrong value
    for (int i : {2, 1}) {
        const auto ctx = context(i);
        const bool jac = ctx.model.family() == Family::Jacobi;
        const double r = jac ? 0.55 : 1.1, a1 = jac ? 0.3 : 0.6, a2 = jac ? 0.8 : 2.0;
        const double ref = f_1k(ctx, r, {a1, a2}) - rho_ev_polya(ctx, r) * f_0k(ctx, {a1, a2});
        const double ours = cov_k2(ctx, r, a1, a2, [&](double ab, double ac) { return chat(ctx, r, ac, ab); });
        const double swapped = cov_k2(ctx, r, a1, a2, [&](double ab, double ac) { return chat(ctx, r, ab, ac); });
        INFO("model " << i << ": reference " << ref << ", ours " << ours << ", swapped " << swapped);
        CHECK(close(ours, ref, 1e-8, 1e-11));
        CHECK(close(cov_1k(ctx, r, {a1, a2}), ref, 1e-8, 1e-11));
        CHECK(std::abs(swapped - ref) > 1e-5 * std::abs(ref));
    }
}

TEST_CASE("joint densities") {
    const auto ctx = context(1);
    const std::vector<double> a{0.5, 1.4, 2.6};
    CHECK(close(f_1k_differentiated(ctx, 1.2, a), f_1k(ctx, 1.2, a), 1e-5, 1e-9));
    const std::vector<double> all{0.5, 1.4, 2.6, 4.1};
    ConditionalOptions an;
    an.derivative = ConditionalOptions::Derivative::Analytic;
    CHECK(close(f_1k(ctx, 1.9, all), f_sv(ctx, all) * conditional_density(4, 1.9, all, an), 1e-7, 1e-14));
    // symmetric in the squared singular values
    CHECK(close(f_0k(ctx, {0.5, 1.4}), f_0k(ctx, {1.4, 0.5}), 1e-13, 0.0));
}

TEST_CASE("the sign mutation changes the covariance") {
    auto ctx = context(0);
    const double v = cov_1k(ctx, 1.1, {0.6});
    ctx.psi0_sign_flip = true;
    CHECK(std::abs(cov_1k(ctx, 1.1, {0.6}) - v) > 1e-6);
}

TEST_CASE("the covariance is not smooth on the diagonal") {
    const auto ctx = context(0);
    const auto k = kink_probe(ctx, 1.0);
    // n = 3: continuous, with a jump in the first derivative at r = a
    CHECK(k.order == 1);
    CHECK(k.value_gap < 10 * k.noise_floor + 1e-9);
    CHECK(std::abs(k.left_deriv - k.right_deriv) > 10 * k.noise_floor);
}

TEST_CASE("n = 1 identity and n = 2 gating") {
    ModelParams p;
    p.n = 1;
    p.alpha = 0.5;
    const CovContext c1{EnsembleModel(p)};
    CHECK(n1_identity(c1, 0.8) == doctest::Approx(std::pow(0.8, 0.5) * std::exp(-0.8) / std::tgamma(1.5)));
    p.n = 2;
    CovContext c2{EnsembleModel(p)};
    CHECK_THROWS_AS(cov_closed(c2, 1.0, 0.5), DomainError);
    c2.allow_n2 = true;
    CHECK(std::isfinite(cov_closed(c2, 1.0, 0.5)));
}

TEST_CASE("argument validation") {
    const auto ctx = context(2);
    CHECK_THROWS_AS(cov_closed(ctx, 1.5, 0.5), DomainError);
    CHECK_THROWS_AS(rho_sv(ctx, -0.1), DomainError);
    CHECK_THROWS_AS(f_1k(ctx, 0.5, {0.3, 0.3}), DegenerateInput);
    CHECK_THROWS_AS(f_1k(ctx, 0.5, {0.1, 0.2, 0.3, 0.4}), DomainError);
}
