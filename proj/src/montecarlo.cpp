#include "svev/montecarlo.hpp"

#include "svev/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <thread>

namespace svev::mc {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

CMatrix gaussian_matrix(int rows, int cols, double var, Rng& rng) {
    std::normal_distribution<double> nd(0.0, std::sqrt(var));
    CMatrix X(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            const double re = nd(rng);
            const double im = nd(rng);
            X(i, j) = {re, im};
        }
    return X;
}

size_t bin_of(const std::vector<double>& edges, double x) {
    if (edges.size() < 2 || x < edges.front() || x >= edges.back()) return static_cast<size_t>(-1);
    return static_cast<size_t>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin()) - 1;
}

// adds per-bin counts of one sample and their squares
void accumulate(std::vector<size_t>& idx, std::vector<std::uint64_t>& counts, std::vector<std::uint64_t>& sumsq,
                std::uint64_t& outside) {
    std::sort(idx.begin(), idx.end());
    size_t i = 0;
    while (i < idx.size()) {
        size_t j = i;
        while (j < idx.size() && idx[j] == idx[i]) ++j;
        const std::uint64_t c = j - i;
        if (idx[i] == static_cast<size_t>(-1)) {
            outside += c;
        } else {
            counts[idx[i]] += c;
            sumsq[idx[i]] += c * c;
        }
        i = j;
    }
}

double bin_stderr(std::uint64_t count, std::uint64_t sumsq, std::uint64_t samples, double w, double area) {
    if (samples < 2) return 0.0;
    const double N = static_cast<double>(samples);
    const double mean = w * static_cast<double>(count) / N;
    const double m2 = w * w * static_cast<double>(sumsq) / N;
    const double var = std::max(0.0, m2 - mean * mean) * N / (N - 1);
    return std::sqrt(var / N) / area;
}

void check_edges(const std::vector<double>& e, const char* what) {
    if (e.size() < 2) throw ConfigError(std::string(what) + ": need at least two bin edges");
    for (size_t i = 1; i < e.size(); ++i)
        if (!(e[i] > e[i - 1])) throw ConfigError(std::string(what) + ": bin edges must increase strictly");
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
    for (auto& w : s_) w = splitmix64(seed);
}

Rng::result_type Rng::operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

Rng Rng::stream(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t x = master;
    const std::uint64_t a = splitmix64(x);
    std::uint64_t y = stream ^ 0x6a09e667f3bcc909ULL;
    const std::uint64_t b = splitmix64(y);
    return Rng(a ^ rotl(b, 23));
}

CMatrix haar_unitary(int dim, Rng& rng) {
    if (dim < 1) throw DomainError("haar_unitary: dim must be >= 1");
    const CMatrix Z = gaussian_matrix(dim, dim, 0.5, rng);
    Eigen::HouseholderQR<CMatrix> qr(Z);
    CMatrix Q = qr.householderQ();
    const CMatrix& R = qr.matrixQR();
    for (int j = 0; j < dim; ++j) {
        const std::complex<double> d = R(j, j);
        const double m = std::abs(d);
        Q.col(j) *= (m > 0 ? d / m : std::complex<double>(1.0));
    }
    return Q;
}

CMatrix sample_ginibre(int n, Rng& rng) {
    if (n < 1) throw DomainError("sample_ginibre: n must be >= 1");
    return gaussian_matrix(n, n, 0.5, rng);
}

CMatrix sample_truncated_unitary(int n, int m, Rng& rng) {
    if (n < 1) throw DomainError("sample_truncated_unitary: n must be >= 1");
    if (m <= n) throw DomainError("sample_truncated_unitary: need m > n");
    return haar_unitary(m, rng).topLeftCorner(n, n);
}

CMatrix compose_fixed_sv(const std::vector<double>& a, Rng& rng) {
    const int n = static_cast<int>(a.size());
    if (n < 1) throw DomainError("compose_fixed_sv: empty a");
    Eigen::VectorXcd d(n);
    for (int i = 0; i < n; ++i) {
        if (!(a[i] > 0)) throw DomainError("compose_fixed_sv: a must be strictly positive");
        d(i) = std::sqrt(a[i]);
    }
    const CMatrix U = haar_unitary(n, rng);
    const CMatrix V = haar_unitary(n, rng);
    return U * d.asDiagonal() * V;
}

CMatrix sample_laguerre_bidiagonal(int n, double alpha, Rng& rng) {
    if (n < 1) throw DomainError("sample_laguerre_bidiagonal: n must be >= 1");
    if (!(alpha > -1)) throw DomainError("sample_laguerre_bidiagonal: alpha must exceed -1");
    // chi_k^2 / 2 ~ Gamma(k/2, 1); diagonal dof 2(alpha+n-i), off-diagonal 2(n-1-i) for i = 0..n-1
    CMatrix B = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        std::gamma_distribution<double> gd(alpha + n - i, 1.0);
        B(i, i) = std::sqrt(gd(rng));
        if (i + 1 < n) {
            std::gamma_distribution<double> go(n - 1 - i, 1.0);
            B(i + 1, i) = std::sqrt(go(rng));
        }
    }
    const CMatrix U = haar_unitary(n, rng);
    const CMatrix V = haar_unitary(n, rng);
    return U * B * V;
}

SpectralSample spectra(const CMatrix& X, double cond_limit, double slack) {
    const int n = static_cast<int>(X.rows());
    if (n < 1 || X.cols() != n) throw DomainError("spectra: need a non-empty square matrix");
    if (!X.allFinite()) throw DomainError("spectra: non-finite matrix entries");
    Eigen::JacobiSVD<CMatrix> svd(X);
    const Eigen::VectorXd s = svd.singularValues();
    SpectralSample out;
    out.cond = s(n - 1) > 0 ? s(0) / s(n - 1) : std::numeric_limits<double>::infinity();
    if (!(out.cond < cond_limit)) throw DegenerateInput("spectra: condition number above the discard threshold");
    Eigen::ComplexEigenSolver<CMatrix> es(X, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectra: eigenvalue iteration failed");
    out.sv2.resize(n);
    out.ev2.resize(n);
    for (int i = 0; i < n; ++i) {
        out.sv2[i] = s(i) * s(i);
        out.ev2[i] = std::norm(es.eigenvalues()(i));
    }
    std::vector<double> sv = out.sv2, ev = out.ev2;
    std::sort(sv.rbegin(), sv.rend());
    std::sort(ev.rbegin(), ev.rend());
    double ls = 0, le = 0, ss = 0, se = 0, qs = 0, qe = 0;
    for (int k = 0; k < n; ++k) {
        ls += std::log(sv[k]);
        le += std::log(ev[k]);
        if (le > ls + slack * (k + 1)) out.weyl_ok[0] = false;
        ss += std::sqrt(sv[k]);
        se += std::sqrt(ev[k]);
        qs += sv[k];
        qe += ev[k];
        if (se > ss * (1 + slack) || qe > qs * (1 + slack)) out.weyl_ok[1] = false;
    }
    if (ev.front() > sv.front() * (1 + slack) || ev.back() < sv.back() * (1 - slack)) out.weyl_ok[2] = false;
    out.prod_gap = std::abs(std::expm1(le - ls));
    return out;
}

Histogram1D::Histogram1D(std::vector<double> e, int per) : edges(std::move(e)), per_sample(per) {
    if (!edges.empty()) check_edges(edges, "Histogram1D");
    const size_t nb = edges.size() > 1 ? edges.size() - 1 : 0;
    counts.assign(nb, 0);
    sumsq.assign(nb, 0);
}

void Histogram1D::add_sample(const std::vector<double>& values) {
    std::vector<size_t> idx;
    idx.reserve(values.size());
    for (double v : values) idx.push_back(bin_of(edges, v));
    accumulate(idx, counts, sumsq, outside);
    ++samples;
}

void Histogram1D::merge(const Histogram1D& o) {
    if (o.edges != edges) throw std::logic_error("Histogram1D::merge: edge mismatch");
    for (size_t i = 0; i < counts.size(); ++i) {
        counts[i] += o.counts[i];
        sumsq[i] += o.sumsq[i];
    }
    outside += o.outside;
    samples += o.samples;
}

double Histogram1D::total_weight() const {
    std::uint64_t c = outside;
    for (auto v : counts) c += v;
    return static_cast<double>(c) / per_sample;
}

double Histogram1D::density(size_t i) const {
    if (samples == 0) return 0.0;
    return static_cast<double>(counts.at(i)) / per_sample / static_cast<double>(samples) / (edges[i + 1] - edges[i]);
}

double Histogram1D::stderr_(size_t i) const {
    return bin_stderr(counts.at(i), sumsq.at(i), samples, 1.0 / per_sample, edges[i + 1] - edges[i]);
}

JointHistogram::JointHistogram(std::vector<double> re, std::vector<double> ae, int nn)
    : r_edges(std::move(re)), a_edges(std::move(ae)), n(nn) {
    if (!r_edges.empty()) check_edges(r_edges, "JointHistogram r");
    if (!a_edges.empty()) check_edges(a_edges, "JointHistogram a");
    const size_t nb = (r_edges.size() > 1 && a_edges.size() > 1) ? nr() * na() : 0;
    counts.assign(nb, 0);
    sumsq.assign(nb, 0);
}

void JointHistogram::add_sample(const SpectralSample& s) {
    if (static_cast<int>(s.ev2.size()) != n || static_cast<int>(s.sv2.size()) != n)
        throw DomainError("JointHistogram: sample size does not match n");
    std::vector<size_t> idx;
    idx.reserve(n * n);
    for (double r : s.ev2) {
        const size_t i = bin_of(r_edges, r);
        for (double a : s.sv2) {
            const size_t j = bin_of(a_edges, a);
            idx.push_back((i == static_cast<size_t>(-1) || j == static_cast<size_t>(-1)) ? static_cast<size_t>(-1)
                                                                                         : i * na() + j);
        }
    }
    accumulate(idx, counts, sumsq, outside);
    ++samples;
}

void JointHistogram::merge(const JointHistogram& o) {
    if (o.r_edges != r_edges || o.a_edges != a_edges || o.n != n)
        throw std::logic_error("JointHistogram::merge: layout mismatch");
    for (size_t i = 0; i < counts.size(); ++i) {
        counts[i] += o.counts[i];
        sumsq[i] += o.sumsq[i];
    }
    outside += o.outside;
    samples += o.samples;
}

double JointHistogram::total_weight() const {
    std::uint64_t c = outside;
    for (auto v : counts) c += v;
    return static_cast<double>(c) / (static_cast<double>(n) * n);
}

double JointHistogram::density(size_t i, size_t j) const {
    if (samples == 0) return 0.0;
    const double area = (r_edges[i + 1] - r_edges[i]) * (a_edges[j + 1] - a_edges[j]);
    return static_cast<double>(counts.at(i * na() + j)) / (static_cast<double>(n) * n) /
           static_cast<double>(samples) / area;
}

double JointHistogram::stderr_(size_t i, size_t j) const {
    const double area = (r_edges[i + 1] - r_edges[i]) * (a_edges[j + 1] - a_edges[j]);
    return bin_stderr(counts.at(i * na() + j), sumsq.at(i * na() + j), samples, 1.0 / (static_cast<double>(n) * n),
                      area);
}

void AuditSummary::merge(const AuditSummary& o) {
    accepted += o.accepted;
    discarded += o.discarded;
    weyl_product_violations += o.weyl_product_violations;
    weyl_sum_violations += o.weyl_sum_violations;
    bound_violations += o.bound_violations;
    product_violations += o.product_violations;
    max_prod_gap = std::max(max_prod_gap, o.max_prod_gap);
}

double AuditSummary::discard_rate() const {
    const std::uint64_t total = accepted + discarded;
    return total ? static_cast<double>(discarded) / static_cast<double>(total) : 0.0;
}

bool AuditSummary::ok() const {
    return weyl_product_violations == 0 && weyl_sum_violations == 0 && bound_violations == 0 &&
           product_violations == 0 && discard_rate() < 1e-4;
}

std::string sampler_name(SamplerModel m) {
    switch (m) {
        case SamplerModel::Ginibre: return "ginibre";
        case SamplerModel::TruncatedUnitary: return "truncated-unitary";
        case SamplerModel::FixedSV: return "fixed-sv";
        case SamplerModel::LaguerreBidiagonal: return "laguerre-bidiagonal";
    }
    return "?";
}

SamplerModel sampler_from_name(const std::string& s) {
    if (s == "ginibre") return SamplerModel::Ginibre;
    if (s == "truncated-unitary") return SamplerModel::TruncatedUnitary;
    if (s == "fixed-sv") return SamplerModel::FixedSV;
    if (s == "laguerre-bidiagonal") return SamplerModel::LaguerreBidiagonal;
    throw ConfigError("unknown sampler model '" + s + "'");
}

SampleRun run_sampler(const SamplerConfig& cfg, const std::vector<double>& r_edges,
                      const std::vector<double>& a_edges) {
    int n = cfg.n;
    if (cfg.model == SamplerModel::FixedSV) n = static_cast<int>(cfg.a.size());
    if (n < 1) throw ConfigError("sampler: n must be >= 1");
    if (cfg.draws < 1) throw ConfigError("sampler: draws must be >= 1");
    if (cfg.chunk < 1) throw ConfigError("sampler: chunk must be >= 1");
    if (cfg.model == SamplerModel::TruncatedUnitary && cfg.m <= n) throw ConfigError("sampler: need m > n");
    const std::uint64_t nchunks = (cfg.draws + cfg.chunk - 1) / cfg.chunk;
    const SampleRun empty{JointHistogram(r_edges, a_edges, n), Histogram1D(r_edges, n), Histogram1D(a_edges, n), {}};
    std::vector<SampleRun> parts(nchunks, empty);

    auto draw = [&](Rng& rng) -> CMatrix {
        switch (cfg.model) {
            case SamplerModel::Ginibre: return sample_ginibre(n, rng);
            case SamplerModel::TruncatedUnitary: return sample_truncated_unitary(n, cfg.m, rng);
            case SamplerModel::FixedSV: return compose_fixed_sv(cfg.a, rng);
            case SamplerModel::LaguerreBidiagonal: return sample_laguerre_bidiagonal(n, cfg.alpha, rng);
        }
        throw std::logic_error("unreachable");
    };
    auto run_chunk = [&](std::uint64_t c) {
        SampleRun& p = parts[c];
        Rng rng = Rng::stream(cfg.seed, c);
        const std::uint64_t lo = c * cfg.chunk;
        const std::uint64_t hi = std::min(cfg.draws, lo + cfg.chunk);
        for (std::uint64_t d = lo; d < hi; ++d) {
            SpectralSample s;
            try {
                s = spectra(draw(rng));
            } catch (const DegenerateInput&) {
                ++p.audit.discarded;
                continue;
            } catch (const std::runtime_error&) {
                ++p.audit.discarded;
                continue;
            }
            ++p.audit.accepted;
            if (!s.weyl_ok[0]) ++p.audit.weyl_product_violations;
            if (!s.weyl_ok[1]) ++p.audit.weyl_sum_violations;
            if (!s.weyl_ok[2]) ++p.audit.bound_violations;
            if (!(s.prod_gap < 1e-6)) ++p.audit.product_violations;
            p.audit.max_prod_gap = std::max(p.audit.max_prod_gap, s.prod_gap);
            p.f11.add_sample(s);
            p.ev.add_sample(s.ev2);
            p.sv.add_sample(s.sv2);
        }
    };
    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::uint64_t c = t; c < nchunks; c += threads) run_chunk(c);
            });
        for (auto& th : pool) th.join();
    }
    SampleRun out = empty;
    for (const auto& p : parts) {
        out.f11.merge(p.f11);
        out.ev.merge(p.ev);
        out.sv.merge(p.sv);
        out.audit.merge(p.audit);
    }
    return out;
}

JkEstimate estimate_jk(const std::vector<SpectralSample>& samples, int j, int k,
                       const std::vector<double>& r_edges, const std::vector<double>& a_edges) {
    if (samples.empty()) throw DomainError("estimate_jk: empty sample stream");
    const int n = static_cast<int>(samples.front().sv2.size());
    JkEstimate e;
    e.j = j;
    e.k = k;
    if (j == 1 && k == 0) {
        e.marginal = Histogram1D(r_edges, n);
        for (const auto& s : samples) e.marginal.add_sample(s.ev2);
    } else if (j == 0 && k == 1) {
        e.marginal = Histogram1D(a_edges, n);
        for (const auto& s : samples) e.marginal.add_sample(s.sv2);
    } else if (j == 1 && k == 1) {
        e.joint = JointHistogram(r_edges, a_edges, n);
        Histogram1D ev(r_edges, n), sv(a_edges, n);
        for (const auto& s : samples) {
            e.joint.add_sample(s);
            ev.add_sample(s.ev2);
            sv.add_sample(s.sv2);
        }
        e.cov = empirical_cov(e.joint, ev, sv);
    } else {
        throw DomainError("estimate_jk: supported (j,k) are (1,0), (0,1) and (1,1)");
    }
    return e;
}

std::vector<double> empirical_cov(const JointHistogram& f11, const Histogram1D& ev, const Histogram1D& sv) {
    std::vector<double> out(f11.nr() * f11.na());
    for (size_t i = 0; i < f11.nr(); ++i)
        for (size_t j = 0; j < f11.na(); ++j) out[i * f11.na() + j] = f11.density(i, j) - ev.density(i) * sv.density(j);
    return out;
}

DeviationReport compare_1d(const Histogram1D& h, const std::vector<double>& analytic_mass, double sigmas) {
    if (analytic_mass.size() != h.counts.size()) throw DomainError("compare_1d: size mismatch");
    DeviationReport rep;
    for (size_t i = 0; i < h.counts.size(); ++i) {
        if (h.counts[i] == 0) continue;
        ++rep.occupied;
        const double expect = analytic_mass[i] / (h.edges[i + 1] - h.edges[i]);
        const double se = h.stderr_(i);
        const double z = se > 0 ? std::abs(h.density(i) - expect) / se : std::numeric_limits<double>::infinity();
        rep.max_z = std::max(rep.max_z, z);
        if (z > sigmas) ++rep.beyond;
    }
    return rep;
}

DeviationReport compare_2d(const JointHistogram& h, const std::vector<double>& analytic_mass, double sigmas) {
    if (analytic_mass.size() != h.counts.size()) throw DomainError("compare_2d: size mismatch");
    DeviationReport rep;
    for (size_t i = 0; i < h.nr(); ++i)
        for (size_t j = 0; j < h.na(); ++j) {
            const size_t b = i * h.na() + j;
            if (h.counts[b] == 0) continue;
            ++rep.occupied;
            const double area = (h.r_edges[i + 1] - h.r_edges[i]) * (h.a_edges[j + 1] - h.a_edges[j]);
            const double se = h.stderr_(i, j);
            const double z = se > 0 ? std::abs(h.density(i, j) - analytic_mass[b] / area) / se
                                    : std::numeric_limits<double>::infinity();
            rep.max_z = std::max(rep.max_z, z);
            if (z > sigmas) ++rep.beyond;
        }
    return rep;
}

}  // namespace svev::mc
