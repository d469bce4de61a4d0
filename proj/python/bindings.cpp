#include "svev/correlations.hpp"
#include "svev/ensembles.hpp"
#include "svev/errors.hpp"
#include "svev/io.hpp"
#include "svev/montecarlo.hpp"
#include "svev/specfun.hpp"
#include "svev/verify.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace svev;

namespace {

struct Model {
    explicit Model(const ModelParams& p) : ctx(EnsembleModel(p)) {}
    CovContext ctx;
};

// applies f elementwise over a float array, keeping its shape
template <class F>
py::array_t<double> vectorize(py::array_t<double, py::array::c_style | py::array::forcecast> x, F f) {
    py::array_t<double> out(x.request().shape);
    const double* in = x.data();
    double* o = out.mutable_data();
    for (py::ssize_t i = 0; i < x.size(); ++i) o[i] = f(in[i]);
    return out;
}

ModelParams make_params(const std::string& family, int n, double alpha, double beta, const std::string& precision) {
    return model_from_config({{"family", family},
                              {"n", std::to_string(n)},
                              {"alpha", format_double(alpha)},
                              {"beta", format_double(beta)},
                              {"precision", precision}});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Singular value and eigenvalue cross-correlations of Polya ensembles";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<IndexError>(m, "IndexError", PyExc_IndexError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);
    py::register_exception<PrecisionInsufficient>(m, "PrecisionInsufficient", PyExc_ArithmeticError);
    py::register_exception<ToleranceNotMet>(m, "ToleranceNotMet", PyExc_ArithmeticError);
    py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_ArithmeticError);

    m.def("ln_gamma", &ln_gamma, py::arg("x"));
    m.def("lower_inc_gamma", &lower_inc_gamma, py::arg("s"), py::arg("x"));
    m.def("inc_beta", &inc_beta, py::arg("x"), py::arg("a"), py::arg("b"));
    m.def("laguerre_poly", &laguerre_poly, py::arg("j"), py::arg("alpha"), py::arg("x"));
    m.def("jacobi_poly", &jacobi_poly, py::arg("j"), py::arg("alpha"), py::arg("beta"), py::arg("x"));

    py::class_<Model>(m, "Model")
        .def(py::init([](const std::string& family, int n, double alpha, double beta, const std::string& precision) {
                 return Model(make_params(family, n, alpha, beta, precision));
             }),
             py::arg("family") = "laguerre", py::arg("n") = 3, py::arg("alpha") = 0.0, py::arg("beta") = 1.0,
             py::arg("precision") = "double")
        .def_property_readonly("n", [](const Model& s) { return s.ctx.model.n(); })
        .def_property_readonly("family", [](const Model& s) { return family_name(s.ctx.model.family()); })
        .def("weight", [](const Model& s, py::array_t<double> x) {
            return vectorize(x, [&](double v) { return s.ctx.model.weight(v); });
        })
        .def("p", [](const Model& s, int j, double x) { return s.ctx.model.biorth_p(j, x); })
        .def("q", [](const Model& s, int j, double x) { return s.ctx.model.biorth_q(j, x); })
        .def("kernel", [](const Model& s, double x, double y) { return s.ctx.model.kernel(x, y); })
        .def("rho_sv", [](const Model& s, py::array_t<double> a) {
            return vectorize(a, [&](double v) { return rho_sv(s.ctx, v); });
        })
        .def("rho_ev", [](const Model& s, py::array_t<double> r) {
            return vectorize(r, [&](double v) { return rho_ev_polya(s.ctx, v); });
        })
        .def("cov", [](const Model& s, double r, double a) { return cov_closed(s.ctx, r, a); })
        .def("cov_grid",
             [](const Model& s, const std::vector<double>& rs, const std::vector<double>& as, int threads) {
                 const auto v = cov_closed_grid(s.ctx, rs, as, threads);
                 py::array_t<double> out({rs.size(), as.size()});
                 std::copy(v.begin(), v.end(), out.mutable_data());
                 return out;
             },
             py::arg("r"), py::arg("a"), py::arg("threads") = 1)
        .def("f_1k", [](const Model& s, double r, const std::vector<double>& a) { return f_1k(s.ctx, r, a); })
        .def("f_sv", [](const Model& s, const std::vector<double>& a) { return f_sv(s.ctx, a); });

    m.def("conditional_density",
          [](double r, const std::vector<double>& a, bool analytic, bool allow_degenerate) {
              ConditionalOptions o;
              if (analytic) o.derivative = ConditionalOptions::Derivative::Analytic;
              o.allow_degenerate = allow_degenerate;
              return conditional_density(static_cast<int>(a.size()), r, a, o);
          },
          py::arg("r"), py::arg("a"), py::arg("analytic") = false, py::arg("allow_degenerate") = false);
    m.def("conditional_cdf", [](double r, const std::vector<double>& a) { return conditional_cdf(r, a); });

    m.def("sample_spectra",
          [](const std::string& model, int n, int draws, std::uint64_t seed, int m_dim) {
              mc::Rng rng(seed);
              const auto kind = mc::sampler_from_name(model);
              if (kind == mc::SamplerModel::FixedSV || kind == mc::SamplerModel::LaguerreBidiagonal)
                  throw ConfigError("sample_spectra supports ginibre and truncated-unitary");
              py::array_t<double> sv({draws, n}), ev({draws, n});
              double* ps = sv.mutable_data();
              double* pe = ev.mutable_data();
              for (int i = 0; i < draws; ++i) {
                  const auto X = kind == mc::SamplerModel::Ginibre ? mc::sample_ginibre(n, rng)
                                                                    : mc::sample_truncated_unitary(n, m_dim, rng);
                  const auto s = mc::spectra(X);
                  for (int k = 0; k < n; ++k) {
                      ps[i * n + k] = s.sv2[k];
                      pe[i * n + k] = s.ev2[k];
                  }
              }
              return py::make_tuple(sv, ev);
          },
          py::arg("model") = "ginibre", py::arg("n") = 3, py::arg("draws") = 1000, py::arg("seed") = 1,
          py::arg("m") = 7);

    m.def("verify_quick", [] {
        verify::SuiteOptions o;
        o.quick = true;
        py::list out;
        for (const auto& r : verify::run_suite(o)) out.append(py::make_tuple(r.name, r.passed, r.metric, r.detail));
        return out;
    });
}
