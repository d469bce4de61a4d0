#include "doctest.h"
#include "oracle_values.hpp"

#include "svev/correlations.hpp"
#include "svev/errors.hpp"
#include "svev/quad.hpp"

#include <algorithm>
#include <cmath>

using namespace svev;

namespace {

double mass(const std::vector<double>& a, double lo, double hi, const ConditionalOptions& opt = {}) {
    std::vector<double> pts{lo};
    for (double x : a)
        if (x > lo && x < hi) pts.push_back(x);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    const int n = static_cast<int>(a.size());
    return value_or_throw(integrate_pieces([&](double r) { return conditional_density(n, r, a, opt); }, pts), "mass");
}

}  // namespace

TEST_CASE("conditional density matches reference values") {
    ConditionalOptions an;
    an.derivative = ConditionalOptions::Derivative::Analytic;
    for (const auto& o : oracle::conditional) {
        const int n = static_cast<int>(o.a.size());
        INFO("n = " << n << ", r = " << o.r);
        CHECK(std::abs(conditional_density(n, o.r, o.a, an) - o.value) < 1e-11 * std::max(1.0, o.value));
        CHECK(std::abs(conditional_density(n, o.r, o.a) - o.value) < 1e-5 * std::max(1.0, o.value));
    }
}

TEST_CASE("support and normalization") {
    const std::vector<double> a{0.3, 0.8, 1.1, 2.5};
    CHECK(conditional_density(4, 0.29, a) == 0.0);
    CHECK(conditional_density(4, 2.51, a) == 0.0);
    CHECK(conditional_cdf(0.2, a) == 0.0);
    CHECK(std::abs(conditional_cdf(3.0, a) - 1.0) < 1e-13);
    ConditionalOptions an;
    an.derivative = ConditionalOptions::Derivative::Analytic;
    CHECK(std::abs(mass(a, 0.1, 3.0, an) - 1.0) < 1e-9);
    CHECK(std::abs(mass(a, 0.1, 7.0, an) - 1.0) < 1e-9);
    // the cdf at an interior point equals the integrated density
    CHECK(std::abs(mass(a, 0.1, 1.0, an) - conditional_cdf(1.0, a)) < 1e-9);
}

TEST_CASE("extended precision path for many values") {
    std::vector<double> a;
    for (int i = 1; i <= 12; ++i) a.push_back(0.2 * i + 0.01 * i * i);
    ConditionalOptions an;
    an.derivative = ConditionalOptions::Derivative::Analytic;
    CHECK(std::abs(mass(a, 0.1, 4.0, an) - 1.0) < 1e-7);
}

TEST_CASE("ties are rejected unless perturbation is allowed") {
    const std::vector<double> a{0.5, 1.0, 1.0};
    CHECK(is_degenerate(a));
    CHECK_THROWS_AS(conditional_density(3, 0.9, a), DegenerateInput);
    ConditionalOptions opt;
    opt.allow_degenerate = true;
    const auto p = perturb_ties(a, 1e-6);
    CHECK(p[0] == 0.5);
    CHECK(p[1] < p[2]);
    CHECK(std::abs(p[1] + p[2] - 2.0) < 1e-15);
    CHECK(std::isfinite(conditional_density(3, 0.9, a, opt)));
    opt.richardson = true;
    CHECK(std::isfinite(conditional_density(3, 0.9, a, opt)));
}

TEST_CASE("near-degenerate values concentrate the density") {
    const double eps = 1e-4;
    const std::vector<double> a{1.0 - eps, 1.0, 1.0 + eps};
    ConditionalOptions an;
    an.derivative = ConditionalOptions::Derivative::Analytic;
    CHECK(mass(a, 1.0 - 2 * eps, 1.0 + 2 * eps, an) > 0.99);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(conditional_density(2, 1.0, {0.5, 1.5, 2.0}), DomainError);
    CHECK_THROWS_AS(conditional_density(1, -1.0, {0.5}), DomainError);
    CHECK_THROWS_AS(conditional_density(2, 1.0, {-0.5, 1.5}), DomainError);
    CHECK_THROWS_AS(conditional_cdf(1.0, {}), DomainError);
}
