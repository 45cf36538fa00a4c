#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "rank1horn/densities.hpp"
#include "rank1horn/error.hpp"
#include "rank1horn/stats.hpp"

using namespace rank1horn;

namespace {

std::vector<double> uniforms(std::size_t n, double shift, RngState& rng) {
  std::vector<double> out(n);
  for (auto& x : out) x = shift + rng.uniform();
  return out;
}

}  // namespace

TEST_CASE("Kolmogorov survival function") {
  CHECK(kolmogorov_q(0.0) == 1.0);
  CHECK(kolmogorov_q(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_q(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
  // Both series agree where they meet.
  CHECK(kolmogorov_q(1.18 - 1e-12) == doctest::Approx(kolmogorov_q(1.18)).epsilon(1e-9));
}

TEST_CASE("two-sample KS") {
  RngState rng(41, 0);
  const auto x = uniforms(10000, 0.0, rng);
  const auto same = ks_two_sample(x, x);
  CHECK(same.statistic == 0.0);
  CHECK(same.pass);

  const auto shifted = uniforms(10000, 0.5, rng);
  const auto r = ks_two_sample(x, shifted);
  CHECK_FALSE(r.pass);
  CHECK(r.statistic > 0.45);

  const auto y = uniforms(10000, 0.0, rng);
  const auto ok = ks_two_sample(x, y);
  CHECK(ok.pass);
  CHECK(ok.statistic <= ok.threshold);
  const auto swapped = ks_two_sample(y, x);
  CHECK(swapped.statistic == ok.statistic);

  CHECK_THROWS_AS(ks_two_sample(std::vector<double>{}, y), Error);
}

TEST_CASE("one-sample KS") {
  RngState rng(44, 0);
  const auto x = uniforms(10000, 0.0, rng);
  CHECK(ks_one_sample(x, [](double t) { return std::clamp(t, 0.0, 1.0); }).pass);
  CHECK_FALSE(ks_one_sample(x, [](double t) { return std::clamp(t * t, 0.0, 1.0); }).pass);
}

TEST_CASE("chi-square") {
  const std::vector<double> p{0.25, 0.25, 0.5};
  const std::vector<double> exact{250, 250, 500};
  const auto r = chi_square(exact, p);
  CHECK(r.statistic == doctest::Approx(0.0));
  CHECK(r.pass);
  const std::vector<double> off{400, 100, 500};
  CHECK_FALSE(chi_square(off, p).pass);
  const std::vector<double> bad{0.5, 0.1, 0.1};
  CHECK_THROWS_AS(chi_square(exact, bad), Error);
}

TEST_CASE("adaptive quadrature handles edge singularities") {
  const auto a = integrate_1d([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-12);
  CHECK(a.value == doctest::Approx(2.0).epsilon(1e-11));
  const auto b = integrate_1d([](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }, 0.0, 1.0, 1e-12);
  CHECK(b.value == doctest::Approx(kPi).epsilon(1e-11));
  const auto c = integrate_1d([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-13);
  CHECK(c.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-12));
  // Endpoints are never evaluated, so an infinite edge value is harmless.
  const auto d = integrate_1d(
      [](double x) { return x <= 0.0 ? std::numeric_limits<double>::infinity() : 0.5 / std::sqrt(x); },
      0.0, 1.0, 1e-12);
  CHECK(d.value == doctest::Approx(1.0).epsilon(1e-11));
  CHECK_THROWS_AS(integrate_1d([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10), Error);
}

TEST_CASE("normalization integrals") {
  const SpectrumSpec two = make_spectrum({1.0, 0.0});
  for (double b : {0.5, 2.0}) {
    const double v = normalization_integral(
        [&](std::span<const double> x) { return pdf_additive(two, b, x); }, additive_region(two, b), 1e-8);
    CHECK(std::abs(v - 1.0) < 1e-6);
  }
  const SpectrumSpec three = make_spectrum({1.0, 0.0, -1.0});
  auto dens = [&](std::span<const double> x) { return pdf_additive(three, 1.0, x); };
  const double coarse = normalization_integral(dens, additive_region(three, 1.0), 1e-7);
  const double fine = normalization_integral(dens, additive_region(three, 1.0), 5e-8);
  CHECK(std::abs(coarse - 1.0) < 1e-6);
  CHECK(std::abs(coarse - fine) < 2e-7);

  for (double b : {0.5, 1.0, 3.0}) {
    const double s = normalization_integral(
        [&](std::span<const double> x) { return pdf_spacing_n2(1.0, 0.0, b, x[0]); },
        spacing_region(1.0, 0.0, b), 1e-9);
    CHECK(std::abs(s - 1.0) < 1e-6);
  }
}

TEST_CASE("CDF from a density") {
  const auto cdf = cdf_from_density([](double x) { return 2.0 * x; }, 0.0, 1.0, 256);
  CHECK(cdf(-1.0) == 0.0);
  CHECK(cdf(2.0) == 1.0);
  CHECK(cdf(0.5) == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("round trip and change of variables reports") {
  RngState rng(43, 0);
  const SpectrumSpec spec = make_spectrum({1.5, 0.7, 0.0, -0.6});
  CHECK(roundtrip_additive(spec, 0.9, 200, rng).pass);
  CHECK(roundtrip_projection(spec, 200, rng).pass);
  CHECK(roundtrip_multiplicative(make_angular_spectrum({0.1, 1.0, 3.0, 5.0}), 0.8, 200, rng).pass);
  const auto cov = change_of_variables_check(spec, 0.9, 100, rng);
  CHECK(cov.pass);
  CHECK(cov.statistic < 1e-8);
}

TEST_CASE("constraint report counts failures") {
  const SpectrumSpec spec = make_spectrum({1.0, 0.0});
  EigenSample good;
  good.eigenvalues = {1.5, 0.5};
  EigenSample bad;
  bad.eigenvalues = {1.5, 0.6};
  const std::vector<EigenSample> samples{good, bad, good};
  const auto r = constraint_report("c", samples, [&](const EigenSample& s) {
    return check_additive_sample(s, spec, 1.0);
  });
  CHECK(r.statistic == 1.0);
  CHECK_FALSE(r.pass);
  CHECK(r.details["constraint_failures"] == 1);
}
