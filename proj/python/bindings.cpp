#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "rank1horn/batch.hpp"
#include "rank1horn/densities.hpp"
#include "rank1horn/error.hpp"
#include "rank1horn/oracle.hpp"
#include "rank1horn/secular.hpp"
#include "rank1horn/stats.hpp"

namespace py = pybind11;
using namespace rank1horn;

namespace {

using Values = std::vector<double>;
using Mult = std::optional<std::vector<int>>;

SpectrumSpec spectrum(Values values, const Mult& m, bool allow_sort = false) {
  std::vector<int> mult = m ? *m : std::vector<int>(values.size(), 1);
  return validate_spectrum(std::move(values), std::move(mult), allow_sort);
}

AngularSpectrum angles(Values values, const Mult& m) {
  std::vector<int> mult = m ? *m : std::vector<int>(values.size(), 1);
  return validate_angular_spectrum(std::move(values), std::move(mult), false);
}

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict report(const TestReport& r) {
  py::dict d;
  d["test_name"] = r.test_name;
  d["statistic"] = r.statistic;
  d["threshold"] = r.threshold;
  d["n_samples"] = r.n_samples;
  d["pass"] = r.pass;
  d["details"] = to_python(r.details);
  return d;
}

py::dict sample_dict(const EigenSample& s) {
  py::dict d;
  d["eigenvalues"] = s.eigenvalues;
  d["deterministic_part"] = s.deterministic_part;
  d["constraint_residual"] = s.constraint_residual;
  return d;
}

py::array_t<double> sample(const std::string& case_name, Values values, const Mult& mult,
                           double b, double phi, const std::string& field,
                           const std::string& method, std::size_t n, std::uint64_t seed,
                           std::uint64_t stream, unsigned threads, int p) {
  SampleConfig c;
  c.case_tag = parse_case_tag(case_name);
  c.method = parse_method(method);
  c.field = parse_field(field);
  c.b = b;
  c.phi = phi;
  c.p = p;
  if (c.case_tag == CaseTag::multiplicative) {
    c.angles = angles(std::move(values), mult);
  } else {
    const bool any_order =
        c.case_tag == CaseTag::quadratic_form || c.case_tag == CaseTag::diagonal_entries;
    c.spectrum = spectrum(std::move(values), mult, any_order);
  }
  validate_config(c);
  std::vector<std::vector<double>> rows;
  {
    py::gil_scoped_release release;
    rows = sample_batch(c, n, seed, stream, threads);
  }
  const std::size_t width = rows.empty() ? 0 : rows.front().size();
  py::array_t<double> out({n, width});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < width; ++k) view(i, k) = rows[i][k];
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_rank1horn, m) {
  m.doc() = "Rank-one randomized Horn problems: secular and matrix samplers, densities, checks";

  py::register_exception<Error>(m, "Rank1HornError", PyExc_ValueError);

  m.def("sample", &sample, py::arg("case"), py::arg("values"), py::arg("multiplicities") = py::none(),
        py::arg("b") = 0.0, py::arg("phi") = 0.0, py::arg("field") = "complex",
        py::arg("method") = "secular", py::arg("n") = 1, py::arg("seed") = 0,
        py::arg("stream") = 0, py::arg("threads") = 1, py::arg("p") = 0,
        "Draw n rows (random eigenvalues, angles or entries) as an (n, k) array.");

  m.def(
      "additive_roots",
      [](Values a, const Values& w, double b) {
        return sample_dict(additive_roots(spectrum(std::move(a), std::nullopt), WeightVector(w), b));
      },
      py::arg("a"), py::arg("weights"), py::arg("b"));
  m.def(
      "projection_roots",
      [](Values a, const Values& w) {
        return sample_dict(projection_roots(spectrum(std::move(a), std::nullopt), WeightVector(w)));
      },
      py::arg("a"), py::arg("weights"));
  m.def(
      "multiplicative_roots",
      [](Values theta, const Values& q, double phi) {
        return sample_dict(
            multiplicative_roots(angles(std::move(theta), std::nullopt), WeightVector(q), phi));
      },
      py::arg("theta"), py::arg("weights"), py::arg("phi"));
  m.def(
      "weights_from_roots_additive",
      [](Values a, const Values& roots, double b) {
        const auto w = weights_from_roots_additive(spectrum(std::move(a), std::nullopt), roots, b);
        return Values(w.weights().begin(), w.weights().end());
      },
      py::arg("a"), py::arg("roots"), py::arg("b"));
  m.def(
      "weights_from_roots_projection",
      [](Values a, const Values& roots) {
        const auto w = weights_from_roots_projection(spectrum(std::move(a), std::nullopt), roots);
        return Values(w.weights().begin(), w.weights().end());
      },
      py::arg("a"), py::arg("roots"));
  m.def(
      "weights_from_roots_multiplicative",
      [](Values theta, const Values& psi, double phi) {
        const auto w =
            weights_from_roots_multiplicative(angles(std::move(theta), std::nullopt), psi, phi);
        return Values(w.weights().begin(), w.weights().end());
      },
      py::arg("theta"), py::arg("angles"), py::arg("phi"));
  m.def(
      "cauchy_double_alternant",
      [](const Values& a, const Values& l) { return cauchy_double_alternant(a, l); }, py::arg("a"),
      py::arg("lam"));

  m.def(
      "pdf_additive",
      [](Values a, double b, const Values& x, const Mult& mult, const std::string& field) {
        const SpectrumSpec s = spectrum(std::move(a), mult);
        if (parse_field(field) == Field::real) return pdf_additive_real(s, b, x);
        return s.unit_multiplicities() ? pdf_additive(s, b, x) : pdf_additive_degenerate(s, b, x);
      },
      py::arg("a"), py::arg("b"), py::arg("lam_free"), py::arg("multiplicities") = py::none(),
      py::arg("field") = "complex");
  m.def(
      "pdf_projection",
      [](Values a, const Values& x, const Mult& mult, const std::string& field) {
        const SpectrumSpec s = spectrum(std::move(a), mult);
        if (parse_field(field) == Field::real) return pdf_projection_real(s, x);
        return s.unit_multiplicities() ? pdf_projection(s, x) : pdf_projection_degenerate(s, x);
      },
      py::arg("a"), py::arg("lam"), py::arg("multiplicities") = py::none(),
      py::arg("field") = "complex");
  m.def("pdf_spacing_n2", &pdf_spacing_n2, py::arg("a1"), py::arg("a2"), py::arg("b"),
        py::arg("s"));
  m.def(
      "pdf_multiplicative",
      [](Values theta, double phi, const Values& psi, const Mult& mult) {
        return pdf_multiplicative(angles(std::move(theta), mult), phi, psi);
      },
      py::arg("theta"), py::arg("phi"), py::arg("psi_free"), py::arg("multiplicities") = py::none());
  m.def(
      "pdf_quadratic_form", [](const Values& b, double x) { return pdf_quadratic_form(b, x); },
      py::arg("b"), py::arg("x"));
  m.def(
      "pdf_heckman_n3", [](const Values& b, const Values& x) { return pdf_heckman_n3(b, x); },
      py::arg("b"), py::arg("x_free"));
  m.def(
      "hciz", [](const Values& x, const Values& y) { return hciz(x, y); }, py::arg("x"),
      py::arg("y"));
  m.def(
      "hciz_monte_carlo",
      [](const Values& x, const Values& y, std::size_t draws, std::uint64_t seed) {
        RngState rng(seed, 0);
        const MonteCarloEstimate e = hciz_monte_carlo(x, y, draws, rng);
        return py::make_tuple(e.mean, e.standard_error);
      },
      py::arg("x"), py::arg("y"), py::arg("draws"), py::arg("seed") = 0,
      "Returns (mean, standard error).");

  m.def(
      "ks_two_sample",
      [](const Values& x, const Values& y, double level) { return report(ks_two_sample(x, y, level)); },
      py::arg("x"), py::arg("y"), py::arg("level") = kDefaultLevel);
  m.def(
      "roundtrip_additive",
      [](Values a, double b, std::size_t trials, std::uint64_t seed) {
        RngState rng(seed, 0);
        return report(roundtrip_additive(spectrum(std::move(a), std::nullopt), b, trials, rng));
      },
      py::arg("a"), py::arg("b"), py::arg("trials"), py::arg("seed") = 0);
  m.def(
      "change_of_variables_check",
      [](Values a, double b, std::size_t trials, std::uint64_t seed) {
        RngState rng(seed, 0);
        return report(
            change_of_variables_check(spectrum(std::move(a), std::nullopt), b, trials, rng));
      },
      py::arg("a"), py::arg("b"), py::arg("trials"), py::arg("seed") = 0);
}
