#include "doctest.h"

#include "svev/errors.hpp"
#include "svev/io.hpp"
#include "svev/montecarlo.hpp"
#include "svev/verify.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <numeric>

using namespace svev;
using namespace svev::mc;

TEST_CASE("generator streams are reproducible and distinct") {
    Rng a(7), b(7), c(8);
    for (int i = 0; i < 5; ++i) {
        const auto x = a();
        CHECK(x == b());
        CHECK(x != c());
    }
    Rng s0 = Rng::stream(7, 0), s0b = Rng::stream(7, 0), s1 = Rng::stream(7, 1);
    const auto v = s0();
    CHECK(v == s0b());
    CHECK(v != s1());
}

TEST_CASE("Haar unitaries are unitary") {
    Rng rng(11);
    for (int d : {1, 3, 7}) {
        const CMatrix U = haar_unitary(d, rng);
        CHECK((U.adjoint() * U - CMatrix::Identity(d, d)).norm() < 1e-12);
    }
}

TEST_CASE("Ginibre entries have unit variance") {
    Rng rng(3);
    double s = 0.0;
    const int draws = 4000;
    for (int i = 0; i < draws; ++i) s += sample_ginibre(3, rng).squaredNorm();
    // mean 9 per draw; the standard error of the mean of |X|_F^2 is 3/sqrt(draws)
    CHECK(std::abs(s / draws - 9.0) < 5 * 3.0 / std::sqrt(double(draws)));
}

TEST_CASE("fixed singular values survive the Haar dressing") {
    Rng rng(5);
    const std::vector<double> a{0.4, 1.3, 2.2};
    const auto s = spectra(compose_fixed_sv(a, rng));
    REQUIRE(s.sv2.size() == 3);
    std::vector<double> sv = s.sv2;
    std::sort(sv.begin(), sv.end());
    for (int i = 0; i < 3; ++i) CHECK(std::abs(sv[i] - a[i]) < 1e-12);
    CHECK(s.prod_gap < 1e-10);
    CHECK(s.weyl_ok[0]);
    CHECK(s.weyl_ok[1]);
    CHECK(s.weyl_ok[2]);
}

TEST_CASE("singular matrices are discarded") {
    CMatrix X = CMatrix::Zero(2, 2);
    X(0, 0) = 1.0;
    CHECK_THROWS_AS(spectra(X), DegenerateInput);
    CHECK_THROWS_AS(sample_truncated_unitary(3, 3, *std::make_unique<Rng>(1)), DomainError);
}

TEST_CASE("histograms are normalized densities") {
    Histogram1D h(make_grid({0.0, 1.0, 11, false}), 2);
    h.add_sample({0.05, 0.95});
    h.add_sample({0.55, 1.5});
    CHECK(h.samples == 2);
    CHECK(h.outside == 1);
    double mass = 0.0;
    for (size_t i = 0; i + 1 < h.edges.size(); ++i) mass += h.density(i) * (h.edges[i + 1] - h.edges[i]);
    CHECK(mass == doctest::Approx(0.75));
    CHECK(h.stderr_(0) > 0.0);
}

TEST_CASE("sampler output does not depend on the thread count") {
    SamplerConfig cfg;
    cfg.model = SamplerModel::Ginibre;
    cfg.n = 3;
    cfg.draws = 3000;
    cfg.chunk = 500;
    cfg.seed = 99;
    const auto re = make_grid({0.0, 8.0, 9, false}), ae = make_grid({0.0, 10.0, 11, false});
    cfg.threads = 1;
    const auto r1 = run_sampler(cfg, re, ae);
    cfg.threads = 3;
    const auto r3 = run_sampler(cfg, re, ae);
    CHECK(r1.f11.counts == r3.f11.counts);
    CHECK(r1.f11.sumsq == r3.f11.sumsq);
    CHECK(r1.ev.counts == r3.ev.counts);
    CHECK(r1.sv.counts == r3.sv.counts);
    CHECK(r1.audit.accepted == r3.audit.accepted);
    CHECK(r1.audit.ok());
}

TEST_CASE("in-memory estimator agrees with the streaming histograms") {
    Rng rng(21);
    std::vector<SpectralSample> ss;
    for (int i = 0; i < 500; ++i) ss.push_back(spectra(sample_ginibre(3, rng)));
    const auto re = make_grid({0.0, 8.0, 5, false}), ae = make_grid({0.0, 10.0, 6, false});
    const auto j11 = estimate_jk(ss, 1, 1, re, ae);
    const auto j10 = estimate_jk(ss, 1, 0, re, ae);
    const auto j01 = estimate_jk(ss, 0, 1, re, ae);
    JointHistogram h(re, ae, 3);
    for (const auto& s : ss) h.add_sample(s);
    CHECK(j11.joint.counts == h.counts);
    CHECK(j11.cov.size() == h.counts.size());
    CHECK(j10.marginal.samples == 500);
    CHECK(j01.marginal.samples == 500);
    CHECK_THROWS(estimate_jk(ss, 2, 1, re, ae));
}

TEST_CASE("truncated unitary matches the Jacobi ensemble only with beta = m - 2n") {
    // n = 3: m = 7 gives beta = 1; m = 6 gives beta = 0 and must disagree with beta = 1
    ModelParams p;
    p.family = Family::Jacobi;
    p.n = 3;
    p.alpha = 0.0;
    p.beta = 1.0;
    const CovContext ctx{EnsembleModel(p)};
    const auto edges = make_grid({0.0, 1.0, 21, false});
    const auto sv_mass = verify::sv_bin_mass(ctx, edges);
    const auto ev_mass = verify::ev_bin_mass(ctx, edges);
    SamplerConfig cfg;
    cfg.model = SamplerModel::TruncatedUnitary;
    cfg.n = 3;
    cfg.draws = 100000;
    cfg.seed = 4242;
    cfg.m = 7;
    const auto good = run_sampler(cfg, edges, edges);
    cfg.m = 6;
    const auto bad = run_sampler(cfg, edges, edges);
    const auto g_sv = compare_1d(good.sv, sv_mass), g_ev = compare_1d(good.ev, ev_mass);
    const auto b_sv = compare_1d(bad.sv, sv_mass), b_ev = compare_1d(bad.ev, ev_mass);
    INFO("m=7 sv " << g_sv.beyond << "/" << g_sv.occupied << ", m=6 sv " << b_sv.beyond << "/" << b_sv.occupied);
    CHECK(g_sv.fraction() <= 0.05);
    CHECK(g_ev.fraction() <= 0.05);
    CHECK(b_sv.fraction() > 0.3);
    CHECK(b_ev.fraction() > 0.3);
}

TEST_CASE("fixed singular values reproduce the conditional density") {
    SamplerConfig cfg;
    cfg.model = SamplerModel::FixedSV;
    cfg.n = 3;
    cfg.a = {0.5, 1.0, 2.0};
    cfg.draws = 50000;
    cfg.seed = 77;
    const auto re = make_grid({0.45, 2.05, 17, false});
    const auto run = run_sampler(cfg, re, re);
    const auto d = compare_1d(run.ev, verify::conditional_bin_mass(cfg.a, re));
    INFO(d.beyond << "/" << d.occupied);
    CHECK(d.fraction() <= 0.1);
    CHECK(run.audit.ok());
}

TEST_CASE("sampler names round trip") {
    for (auto m : {SamplerModel::Ginibre, SamplerModel::TruncatedUnitary, SamplerModel::FixedSV,
                   SamplerModel::LaguerreBidiagonal})
        CHECK(sampler_from_name(sampler_name(m)) == m);
    CHECK_THROWS(sampler_from_name("wishart"));
}
