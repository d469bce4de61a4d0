#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace svev::mc {

using CMatrix = Eigen::MatrixXcd;

// xoshiro256** seeded through splitmix64
class Rng {
public:
    using result_type = std::uint64_t;
    explicit Rng(std::uint64_t seed = 0);
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();
    // independent sub-stream for chunk/worker `stream` of a master seed
    static Rng stream(std::uint64_t master, std::uint64_t stream);

private:
    std::array<std::uint64_t, 4> s_;
};

CMatrix haar_unitary(int dim, Rng& rng);
// unit total variance per complex entry
CMatrix sample_ginibre(int n, Rng& rng);
// top-left n x n block of an m x m Haar unitary; squared singular values follow the
// Jacobi ensemble with alpha = 0 and beta = m - 2n
CMatrix sample_truncated_unitary(int n, int m, Rng& rng);
// U diag(sqrt a) V with independent Haar U, V
CMatrix compose_fixed_sv(const std::vector<double>& a, Rng& rng);
// Laguerre ensemble with real alpha > -1 through the beta = 2 bidiagonal model, dressed
// with Haar unitaries on both sides
CMatrix sample_laguerre_bidiagonal(int n, double alpha, Rng& rng);

struct SpectralSample {
    std::vector<double> sv2;
    std::vector<double> ev2;
    double prod_gap = 0.0;  // |prod ev2 - prod sv2| / prod sv2
    double cond = 0.0;
    // Weyl partial products, Weyl partial sums (moduli and squares), extreme-value bounds
    std::array<bool, 3> weyl_ok{true, true, true};
};

// throws DegenerateInput for condition number >= cond_limit, std::runtime_error when a
// decomposition fails
SpectralSample spectra(const CMatrix& X, double cond_limit = 1e12, double slack = 1e-10);

struct Histogram1D {
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;   // values per bin
    std::vector<std::uint64_t> sumsq;    // sum over samples of (values per bin in that sample)^2
    std::uint64_t outside = 0;
    std::uint64_t samples = 0;
    int per_sample = 1;                  // values contributed per sample (weight 1/per_sample)

    explicit Histogram1D(std::vector<double> e = {}, int per_sample = 1);
    void add_sample(const std::vector<double>& values);
    void merge(const Histogram1D& o);
    double total_weight() const;
    double density(size_t i) const;
    double stderr_(size_t i) const;
};

// j = k = 1 estimator; every ordered (r_l, a_m) pair carries weight 1/n^2
struct JointHistogram {
    std::vector<double> r_edges, a_edges;
    std::vector<std::uint64_t> counts;  // row-major r x a
    std::vector<std::uint64_t> sumsq;
    std::uint64_t outside = 0;
    std::uint64_t samples = 0;
    int n = 1;

    JointHistogram(std::vector<double> re = {}, std::vector<double> ae = {}, int n = 1);
    void add_sample(const SpectralSample& s);
    void merge(const JointHistogram& o);
    double total_weight() const;
    double density(size_t i, size_t j) const;
    double stderr_(size_t i, size_t j) const;
    size_t nr() const { return r_edges.size() - 1; }
    size_t na() const { return a_edges.size() - 1; }
};

struct AuditSummary {
    std::uint64_t accepted = 0;
    std::uint64_t discarded = 0;
    std::uint64_t weyl_product_violations = 0;
    std::uint64_t weyl_sum_violations = 0;
    std::uint64_t bound_violations = 0;
    std::uint64_t product_violations = 0;  // prod_gap >= 1e-6
    double max_prod_gap = 0.0;

    void merge(const AuditSummary& o);
    double discard_rate() const;
    bool ok() const;  // no violations and discard rate < 1e-4
};

enum class SamplerModel { Ginibre, TruncatedUnitary, FixedSV, LaguerreBidiagonal };
std::string sampler_name(SamplerModel m);
SamplerModel sampler_from_name(const std::string& s);

struct SamplerConfig {
    SamplerModel model = SamplerModel::Ginibre;
    int n = 3;
    int m = 7;                  // truncated unitary dimension
    double alpha = 0.0;         // bidiagonal Laguerre only
    std::vector<double> a;      // fixed squared singular values
    std::uint64_t seed = 1;
    std::uint64_t draws = 100000;
    int threads = 1;
    std::uint64_t chunk = 16384;  // draws per RNG sub-stream; results do not depend on threads
};

struct SampleRun {
    JointHistogram f11;
    Histogram1D ev;  // weight 1/n per eigenradius
    Histogram1D sv;
    AuditSummary audit;
};

SampleRun run_sampler(const SamplerConfig& cfg, const std::vector<double>& r_edges,
                      const std::vector<double>& a_edges);

// in-memory estimator over an explicit sample list; (j,k) in {(1,0), (0,1), (1,1)}
struct JkEstimate {
    int j = 0, k = 0;
    Histogram1D marginal;          // (1,0) or (0,1)
    JointHistogram joint;          // (1,1)
    std::vector<double> cov;       // f11 - rho_EV x rho_SV per joint bin, (1,1) only
};
JkEstimate estimate_jk(const std::vector<SpectralSample>& samples, int j, int k,
                       const std::vector<double>& r_edges, const std::vector<double>& a_edges);

// empirical f11 - rho_EV (x) rho_SV, row-major like the joint histogram
std::vector<double> empirical_cov(const JointHistogram& f11, const Histogram1D& ev, const Histogram1D& sv);

struct DeviationReport {
    std::uint64_t occupied = 0;
    std::uint64_t beyond = 0;  // bins with |empirical - analytic| > sigmas * stderr
    double max_z = 0.0;
    double fraction() const { return occupied ? static_cast<double>(beyond) / occupied : 0.0; }
};

// analytic bin masses are integrals of the density over each bin
DeviationReport compare_1d(const Histogram1D& h, const std::vector<double>& analytic_mass, double sigmas = 4.0);
DeviationReport compare_2d(const JointHistogram& h, const std::vector<double>& analytic_mass, double sigmas = 4.0);

}  // namespace svev::mc
