// Acceptance run: one pass/fail line per criterion, exit status 1 when any criterion fails.
#include "svev/io.hpp"
#include "svev/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

using namespace svev;
using namespace svev::verify;

namespace {

constexpr std::uint64_t kSeed = 20240607;
constexpr std::uint64_t kDraws = 1000000;

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

ModelParams model(Family f, int n, double alpha, double beta = 1.0) {
    ModelParams p;
    p.family = f;
    p.n = n;
    p.alpha = alpha;
    p.beta = beta;
    return p;
}

struct Line {
    int id;
    bool passed;
    std::string text;
};

Line from(int id, const CheckResult& r, const std::string& extra = "") {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e < %.1e", r.metric, r.threshold);
    return {id, r.passed, std::string(buf) + " (" + r.detail + ")" + extra};
}

Line guarded(int id, const std::function<Line()>& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return {id, false, std::string("exception: ") + e.what()};
    }
}

std::string secs(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f s", s);
    return buf;
}

}  // namespace

int main() {
    std::vector<Line> lines;
    auto emit = [&](Line l) {
        std::cout << "criterion " << l.id << ": " << (l.passed ? "PASS" : "FAIL") << "  " << l.text << std::endl;
        lines.push_back(std::move(l));
    };
    const std::vector<int> ns{3, 4, 5, 6, 8};

    emit(guarded(1, [&] {
        const auto r = biorthogonality(model_matrix(ns));
        Line l = from(1, r, ", runtime " + secs(r.seconds) + " (limit 10 s)");
        l.passed = r.passed && r.seconds < 10.0;
        return l;
    }));
    emit(guarded(2, [&] { return from(2, normalization(model_matrix(ns))); }));
    emit(guarded(3, [&] { return from(3, formula_triangle({3, 4, 5}, 10)); }));
    emit(guarded(4, [&] { return from(4, marginals({3, 4, 5}, 4)); }));
    emit(guarded(5, [&] { return from(5, conditional_suite()); }));

    // Monte-Carlo ensembles: Ginibre and the n = 3 truncation of a 7 x 7 Haar unitary, whose
    // squared singular values are Jacobi with alpha = 0 and beta = m - 2n = 1
    std::vector<McValidation> runs;
    emit(guarded(6, [&] {
        bool ok = true;
        std::string text;
        struct Case {
            std::string name;
            mc::SamplerModel sampler;
            ModelParams p;
            std::uint64_t seed;
        };
        const std::vector<Case> cases{
            {"ginibre", mc::SamplerModel::Ginibre, model(Family::Laguerre, 3, 0.0), kSeed},
            {"truncated-unitary m=7", mc::SamplerModel::TruncatedUnitary, model(Family::Jacobi, 3, 0.0, 1.0), kSeed + 1},
        };
        for (const auto& c : cases) {
            mc::SamplerConfig cfg;
            cfg.model = c.sampler;
            cfg.n = 3;
            cfg.m = 7;
            cfg.seed = c.seed;
            cfg.draws = kDraws;
            cfg.threads = threads();
            runs.push_back(validate_ensemble(cfg, EnsembleModel(c.p), default_r_edges(c.p), default_a_edges(c.p)));
            const auto r = mc_check(c.name, runs.back());
            const bool fast = runs.back().seconds < 600.0;
            ok = ok && r.passed && fast;
            text += (text.empty() ? "" : "; ") + c.name + " seed=" + std::to_string(c.seed) + ": " + r.detail + ", " +
                    secs(runs.back().seconds);
        }
        return Line{6, ok, text};
    }));

    McConditional cond;
    emit(guarded(7, [&] {
        mc::SamplerConfig cfg;
        cfg.model = mc::SamplerModel::FixedSV;
        cfg.a = {0.5, 1.0, 2.0};
        cfg.n = 3;
        cfg.seed = kSeed + 2;
        cfg.draws = kDraws;
        cfg.threads = threads();
        cond = validate_conditional(cfg, make_grid({0.5, 2.0, 31, false}));
        const bool ok = cond.ev.occupied > 0 && cond.ev.fraction() <= 0.01;
        return Line{7, ok,
                    "seed=" + std::to_string(cfg.seed) + ", beyond 4 sigma " + std::to_string(cond.ev.beyond) + "/" +
                        std::to_string(cond.ev.occupied) + ", " + secs(cond.seconds)};
    }));

    emit(guarded(8, [&] {
        std::vector<const mc::AuditSummary*> audits;
        for (const auto& r : runs) audits.push_back(&r.run.audit);
        if (cond.run.audit.accepted) audits.push_back(&cond.run.audit);
        if (audits.size() < 3) return Line{8, false, "Monte-Carlo runs missing"};
        return from(8, audit_check(audits));
    }));
    emit(guarded(9, [&] { return from(9, fig1(60, 20)); }));
    emit(guarded(10, [&] { return from(10, kink()); }));

    int failed = 0;
    for (const auto& l : lines) failed += l.passed ? 0 : 1;
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << "\n";
    return failed ? 1 : 0;
}
