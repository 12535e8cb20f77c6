#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "sofic/analytics.hpp"
#include "sofic/errors.hpp"
#include "sofic/exact_count.hpp"
#include "sofic/harness.hpp"
#include "sofic/hypergraph.hpp"
#include "sofic/io.hpp"
#include "sofic/samplers.hpp"
#include "sofic/structure.hpp"

namespace py = pybind11;
using namespace sofic;

namespace {

using Images = std::vector<std::vector<int>>;

py::object to_py(const BigInt& x) { return py::module_::import("builtins").attr("int")(to_string(x)); }
py::object to_py(const Rational& x) { return py::module_::import("fractions").attr("Fraction")(to_string(x)); }

Rational to_rational(const py::object& x) { return parse_rational(py::str(x)); }

Coloring coloring_or_default(const std::optional<std::string>& chi, int n) {
  return chi ? Coloring::from_string(*chi) : Coloring::first_half_zero(n);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Random hypergraph colourings of free products of cyclic groups";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ScaleError>(m, "ScaleError", PyExc_OverflowError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def(
      "sample_uniform",
      [](int k, int d, int n, std::uint64_t seed, std::uint64_t stream) {
        Rng rng(seed, stream);
        return sample_uniform_hom(ModelParams{d, k, n}, rng).images();
      },
      py::arg("k"), py::arg("d"), py::arg("n"), py::arg("seed") = 0, py::arg("stream") = 0,
      "Generator images of a uniform-model draw.");
  m.def(
      "sample_planted",
      [](int k, int d, int n, std::optional<std::string> chi, std::uint64_t seed, std::uint64_t stream) {
        Rng rng(seed, stream);
        return sample_planted_hom(ModelParams{d, k, n}, coloring_or_default(chi, n), rng).images();
      },
      py::arg("k"), py::arg("d"), py::arg("n"), py::arg("chi") = py::none(), py::arg("seed") = 0,
      py::arg("stream") = 0);

  m.def("count_uniform_homs", [](int k, int d, int n) { return to_py(count_uniform_homs(ModelParams{d, k, n})); },
        py::arg("k"), py::arg("d"), py::arg("n"));
  m.def(
      "count_proper",
      [](int k, Images images, py::object eps) {
        auto g = build_hypergraph(UniformHom::from_images(k, std::move(images)));
        return to_py(count_proper(g, to_rational(eps)).value);
      },
      py::arg("k"), py::arg("images"), py::arg("eps") = 0);
  m.def(
      "count_equitable",
      [](int k, Images images) {
        return to_py(count_equitable(build_hypergraph(UniformHom::from_images(k, std::move(images)))).value);
      },
      py::arg("k"), py::arg("images"));
  m.def(
      "is_proper",
      [](int k, Images images, const std::string& chi) {
        return is_proper(build_hypergraph(UniformHom::from_images(k, std::move(images))), Coloring::from_string(chi));
      },
      py::arg("k"), py::arg("images"), py::arg("chi"));
  m.def(
      "exact_first_moment", [](int k, int d, int n) { return to_py(exact_first_moment(ModelParams{d, k, n})); },
      py::arg("k"), py::arg("d"), py::arg("n"));
  m.def(
      "exact_planted_distance_moment",
      [](int k, int d, int n, py::object delta) {
        return to_py(exact_planted_distance_moment(ModelParams{d, k, n}, to_rational(delta)));
      },
      py::arg("k"), py::arg("d"), py::arg("n"), py::arg("delta"));

  m.def(
      "f_dk",
      [](int d, int k) {
        PrecisionScope scope;
        return f_dk(d, k).convert_to<double>();
      },
      py::arg("d"), py::arg("k"));
  m.def(
      "psi0",
      [](py::object delta, int d, int k) {
        PrecisionScope scope;
        return psi0(Real(to_rational(delta)), d, k).convert_to<double>();
      },
      py::arg("delta"), py::arg("d"), py::arg("k"));
  m.def(
      "t_star",
      [](int k) {
        py::list out;
        for (const Rational& t : t_star(k)) out.append(to_py(t));
        return out;
      },
      py::arg("k"));
  m.def(
      "d_of_eta",
      [](int k, double eta) {
        PrecisionScope scope;
        EtaRounding r = d_of_eta(k, Real(eta));
        return py::make_tuple(r.d, r.eta_prime.convert_to<double>(), r.valid);
      },
      py::arg("k"), py::arg("eta"));
  m.def(
      "core_fixed_point",
      [](int d, int k, int max_levels) {
        PrecisionScope scope;
        FixedPointTrace t = core_fixed_point(d, k, Real("1e-30"), max_levels);
        py::dict out;
        out["p_inf"] = t.p_inf.convert_to<double>();
        out["mu_core"] = t.mu_core.convert_to<double>();
        out["mu_core_attached"] = t.mu_core_attached.convert_to<double>();
        out["converged"] = t.converged;
        return out;
      },
      py::arg("d"), py::arg("k"), py::arg("max_levels") = 200);

  m.def(
      "density_report",
      [](int k, Images images, std::optional<std::string> chi, int level) {
        auto hom = UniformHom::from_images(k, std::move(images));
        return to_py(density_report(build_hypergraph(hom), coloring_or_default(chi, hom.n()), level));
      },
      py::arg("k"), py::arg("images"), py::arg("chi") = py::none(), py::arg("level") = 4);
  m.def(
      "check_sofic",
      [](int k, Images images, double delta) {
        auto hom = UniformHom::from_images(k, std::move(images));
        const ModelParams& p = hom.params();
        std::vector<ReducedWord> D;
        for (int i = 0; i < p.d; ++i) D.push_back(generator_power(p, i, 1));
        for (int i = 0; i < p.d; ++i)
          for (int j = 0; j < p.d; ++j)
            if (i != j) D.push_back(reduce_word(p, {Letter{i, 1}, Letter{j, 1}}));
        SoficReport rep = check_sofic(hom, D, delta);
        py::dict out;
        out["mult_fraction"] = rep.mult_fraction;
        out["trace_fraction"] = rep.trace_fraction;
        out["sofic"] = rep.sofic;
        return out;
      },
      py::arg("k"), py::arg("images"), py::arg("delta") = 0.1);

  m.def(
      "hom_to_json", [](int k, Images images) { return hom_to_json(UniformHom::from_images(k, std::move(images))); },
      py::arg("k"), py::arg("images"));
  m.def(
      "hom_from_json",
      [](const std::string& text) {
        UniformHom hom = hom_from_json(text);
        return py::make_tuple(hom.k(), hom.images());
      },
      py::arg("text"));

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        ExperimentReport rep;
        {
          py::gil_scoped_release release;
          rep = run_experiment(parse_experiment_config(config_json));
        }
        py::dict out;
        out["csv"] = rep.csv;
        out["summary"] = py::module_::import("json").attr("loads")(rep.summary_json);
        out["pass"] = rep.pass;
        out["failed_rows"] = rep.failed_rows;
        return out;
      },
      py::arg("config_json"), "Runs an experiment given its JSON config text.");
}
