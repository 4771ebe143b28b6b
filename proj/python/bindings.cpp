#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hardcore/errors.hpp"
#include "hardcore/experiments.hpp"
#include "hardcore/gibbs_lab.hpp"
#include "hardcore/graph_lab.hpp"
#include "hardcore/model_core.hpp"
#include "hardcore/moment_engine.hpp"
#include "hardcore/report_io.hpp"
#include "hardcore/tree_recon.hpp"

namespace py = pybind11;
using namespace hardcore;

namespace {

std::pair<std::string, std::string> split_rational(const Rational& r) {
  std::ostringstream num, den;
  num << boost::multiprecision::numerator(r);
  den << boost::multiprecision::denominator(r);
  return {num.str(), den.str()};
}

Rational to_rational(const std::pair<std::int64_t, std::int64_t>& q) { return Rational(q.first, q.second); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hardcore model on random regular graphs";
  m.attr("__version__") = kVersion;

  static py::exception<Error> base(m, "HardcoreError");
  static py::exception<DomainError> domain(m, "DomainError", base.ptr());
  static py::exception<ArgumentError> argument(m, "ArgumentError", base.ptr());
  static py::exception<ResourceError> resource(m, "ResourceError", base.ptr());
  static py::exception<ShapeError> shape(m, "ShapeError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      domain(e.what());
    } catch (const ArgumentError& e) {
      argument(e.what());
    } catch (const ResourceError& e) {
      resource(e.what());
    } catch (const ShapeError& e) {
      shape(e.what());
    } catch (const Error& e) {
      base(e.what());
    }
  });

  m.def("lambda_of_alpha", &lambda_of_alpha, py::arg("d"), py::arg("alpha"));
  m.def("alpha_of_lambda", [](int d, double lam) { return params_from_lambda(d, lam).alpha; }, py::arg("d"),
        py::arg("lam"));
  m.def("kernel", [](int d, double alpha) {
    const auto k = markov_kernel(params_from_alpha(d, alpha));
    return py::dict(py::arg("p11") = k.p11, py::arg("p10") = k.p10, py::arg("p01") = k.p01, py::arg("p00") = k.p00);
  }, py::arg("d"), py::arg("alpha"));
  m.def("thresholds_json", [](int d, std::optional<double> alpha, double c) {
    return to_json(threshold_table(d, alpha, c)).dump();
  }, py::arg("d"), py::arg("alpha") = py::none(), py::arg("c") = 3.01);

  m.def("phi", &phi, py::arg("alpha"), py::arg("lam"), py::arg("d"));
  m.def("f", [](double a, double g, double e, double lam, int d) { return f_point({a, g, e}, lam, d); },
        py::arg("alpha"), py::arg("gamma"), py::arg("epsilon"), py::arg("lam"), py::arg("d"));
  m.def("eps_bar", &eps_bar, py::arg("alpha"), py::arg("gamma"));
  m.def("alpha_star", [](double lam, int d) { return alpha_star(lam, d).alpha; }, py::arg("lam"), py::arg("d"));
  m.def("first_moment_rational", [](int n, int s, std::pair<std::int64_t, std::int64_t> lam, int d) {
    return split_rational(first_moment_rational(n, s, to_rational(lam), d));
  }, py::arg("n"), py::arg("s"), py::arg("lam"), py::arg("d"));
  m.def("second_moment_sum_rational", [](int n, int s, std::pair<std::int64_t, std::int64_t> lam, int d) {
    return split_rational(second_moment_sum_rational(n, s, to_rational(lam), d));
  }, py::arg("n"), py::arg("s"), py::arg("lam"), py::arg("d"));
  m.def("first_moment_log", &first_moment_log, py::arg("n"), py::arg("s"), py::arg("lam"), py::arg("d"));
  m.def("max_report_json", [](double lam, int d, double resolution) {
    return to_json(verify_global_max(lam, d, resolution)).dump();
  }, py::arg("lam"), py::arg("d"), py::arg("resolution") = 1e-3);

  m.def("xbar_exact", [](int d, double lam, int depth) {
    const auto p = params_from_lambda(d, lam);
    return to_json(xbar_from_atoms(posterior_atoms(p, depth), p)).dump();
  }, py::arg("d"), py::arg("lam"), py::arg("depth"));
  m.def("xbar_mc", [](int d, double lam, int depth, std::int64_t samples, std::uint64_t seed) {
    Rng rng = make_stream(seed, 0);
    return to_json(xbar(params_from_lambda(d, lam), depth, Method::mc, samples, rng)).dump();
  }, py::arg("d"), py::arg("lam"), py::arg("depth"), py::arg("samples"), py::arg("seed") = 1);
  m.def("posterior_root", [](const std::vector<std::uint8_t>& leaves, int d, double lam) {
    const auto r = posterior_root(leaves, params_from_lambda(d, lam));
    return py::make_tuple(r.p_root_zero, r.p_root_one, r.x);
  }, py::arg("leaves"), py::arg("d"), py::arg("lam"));
  m.def("depth3_json", [](int d, double beta) {
    return to_json(depth3_check(params_from_alpha(d, depth3_alpha(d, beta)), beta)).dump();
  }, py::arg("d"), py::arg("beta"));

  m.def("sample_pairing", [](int n, int d, std::uint64_t seed) {
    Rng rng = make_stream(seed, 0);
    return sample_configuration_model(n, d, rng).pairing;
  }, py::arg("n"), py::arg("d"), py::arg("seed") = 1);
  m.def("partition_function", [](int n, const std::vector<std::pair<int, int>>& edges, double lam) {
    const auto r = brute_force_partition(Graph(n, edges), lam);
    return py::make_tuple(r.z, r.marginals);
  }, py::arg("n"), py::arg("edges"), py::arg("lam"));
  m.def("glauber_marginals", [](int n, const std::vector<std::pair<int, int>>& edges, double lam,
                                std::int64_t sweeps, std::uint64_t seed) {
    const Graph g(n, edges);
    GlauberChain c(g, lam, make_stream(seed, 0));
    c.sweeps(100);
    std::vector<double> occ(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t s = 0; s < sweeps; ++s) {
      c.sweep();
      for (int v = 0; v < n; ++v) occ[static_cast<std::size_t>(v)] += c.state()[static_cast<std::size_t>(v)];
    }
    for (double& x : occ) x /= static_cast<double>(sweeps);
    return occ;
  }, py::arg("n"), py::arg("edges"), py::arg("lam"), py::arg("sweeps"), py::arg("seed") = 1);

  m.def("lwc_json", [](int n, int d, double lam, int r, std::uint64_t seed) {
    LwcConfig c;
    c.n = n, c.d = d, c.lambda = lam, c.r = r, c.seed = seed;
    return to_json(run_lwc_experiment(c)).dump();
  }, py::arg("n"), py::arg("d") = 3, py::arg("lam") = 1.0, py::arg("r") = 1, py::arg("seed") = 1);
  m.def("oracle_json", [](std::uint64_t seed, const std::vector<std::string>& corpus) {
    return to_json(run_oracle_suite(seed, corpus)).dump();
  }, py::arg("seed") = 1, py::arg("corpus") = std::vector<std::string>{});
}
