#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "rank1horn/densities.hpp"
#include "rank1horn/error.hpp"
#include "rank1horn/secular.hpp"
#include "rank1horn/stats.hpp"

using namespace rank1horn;
using testing::rel_err;

namespace {

// |det d(w_1..w_k)/d(x_1..x_k)| by central differences, where weights(x)
// maps free coordinates to the full weight vector.
double fd_jacobian(const std::function<std::vector<double>(const std::vector<double>&)>& weights,
                   std::vector<double> x, double h = 1e-6) {
  const std::size_t k = x.size();
  Eigen::MatrixXd jac(k, k);
  for (std::size_t c = 0; c < k; ++c) {
    auto xp = x;
    auto xm = x;
    xp[c] += h;
    xm[c] -= h;
    const auto wp = weights(xp);
    const auto wm = weights(xm);
    for (std::size_t r = 0; r < k; ++r) {
      jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (wp[r] - wm[r]) / (2 * h);
    }
  }
  return std::abs(jac.determinant());
}

std::vector<double> additive_weights(const SpectrumSpec& spec, double b,
                                     const std::vector<double>& free) {
  std::vector<double> lam(free);
  lam.push_back(spec.distinct_sum() + b - std::accumulate(free.begin(), free.end(), 0.0));
  const auto w = weights_from_roots_additive(spec, lam, b);
  return {w.weights().begin(), w.weights().end()};
}

double dirichlet_density(std::span<const double> w, std::span<const double> s) {
  double log_v = std::lgamma(std::accumulate(s.begin(), s.end(), 0.0));
  for (std::size_t j = 0; j < w.size(); ++j) log_v += (s[j] - 1.0) * std::log(w[j]) - std::lgamma(s[j]);
  return std::exp(log_v);
}

// (n - 1) sum_j (b_j - x)_+^{n-2} / prod_{k != j} (b_j - b_k): the B-spline form
// of the quadratic form density.
double bspline_quadform(std::span<const double> b, double x) {
  const std::size_t n = b.size();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (b[j] <= x) continue;
    double denom = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) denom *= b[j] - b[k];
    }
    s += std::pow(b[j] - x, static_cast<double>(n - 2)) / denom;
  }
  return static_cast<double>(n - 1) * s;
}

}  // namespace

TEST_CASE("additive density equals the Dirichlet push-forward (finite differences)") {
  RngState rng(21, 0);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 10; ++trial) {
      const SpectrumSpec spec = make_spectrum(testing::random_spectrum(n, 0.2, rng));
      const double b = 0.3 + rng.uniform();
      const auto s = draw_additive_secular(spec, b, Field::complex, rng);
      std::vector<double> free(s.eigenvalues.begin(), s.eigenvalues.end() - 1);
      const double fd = std::tgamma(n) * fd_jacobian([&](const auto& x) { return additive_weights(spec, b, x); }, free);
      CHECK(rel_err(pdf_additive(spec, b, free), fd) < 1e-5);
    }
  }
}

TEST_CASE("real additive density equals the Dirichlet(1/2) push-forward") {
  RngState rng(22, 0);
  for (int n : {2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const SpectrumSpec spec = make_spectrum(testing::random_spectrum(n, 0.2, rng));
      const double b = 0.3 + rng.uniform();
      const auto s = draw_additive_secular(spec, b, Field::real, rng);
      std::vector<double> free(s.eigenvalues.begin(), s.eigenvalues.end() - 1);
      const auto w = additive_weights(spec, b, free);
      const std::vector<double> halves(static_cast<std::size_t>(n), 0.5);
      const double fd = dirichlet_density(w, halves) *
                        fd_jacobian([&](const auto& x) { return additive_weights(spec, b, x); }, free);
      CHECK(rel_err(pdf_additive_real(spec, b, free), fd) < 1e-5);
    }
  }
}

TEST_CASE("degenerate additive density equals the Dirichlet(m) push-forward") {
  const SpectrumSpec spec = validate_spectrum({1.0, 0.0}, {2, 1});
  const SpectrumSpec simple = make_spectrum({1.0, 0.0});
  const double b = 1.0;
  for (double l1 : {1.1, 1.4, 1.8}) {
    const std::vector<double> free{l1};
    const auto w = additive_weights(simple, b, free);
    const std::vector<double> m{2.0, 1.0};
    const double fd = dirichlet_density(w, m) *
                      fd_jacobian([&](const auto& x) { return additive_weights(simple, b, x); }, free);
    CHECK(rel_err(pdf_additive_degenerate(spec, b, free), fd) < 1e-6);
  }
}

TEST_CASE("projection density equals the Dirichlet push-forward") {
  RngState rng(23, 0);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 10; ++trial) {
      const SpectrumSpec spec = make_spectrum(testing::random_spectrum(n, 0.2, rng));
      const auto s = draw_projection_secular(spec, Field::complex, rng);
      auto weights = [&](const std::vector<double>& x) {
        const auto w = weights_from_roots_projection(spec, x);
        return std::vector<double>(w.weights().begin(), w.weights().end());
      };
      const double fd = std::tgamma(n) * fd_jacobian(weights, s.eigenvalues);
      CHECK(rel_err(pdf_projection(spec, s.eigenvalues), fd) < 1e-5);
    }
  }
}

TEST_CASE("multiplicative density equals the Dirichlet push-forward") {
  RngState rng(24, 0);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 10; ++trial) {
      const AngularSpectrum spec = make_angular_spectrum(testing::random_angles(n, 0.3, rng));
      const double phi = 0.3 + 5.5 * rng.uniform();
      const auto s = draw_multiplicative_secular(spec, phi, rng);
      std::vector<double> free(s.eigenvalues.begin(), s.eigenvalues.end() - 1);
      auto weights = [&](const std::vector<double>& x) {
        std::vector<double> psi(x);
        psi.push_back(wrap_angle(phi + spec.distinct_sum() - std::accumulate(x.begin(), x.end(), 0.0)));
        const auto q = weights_from_roots_multiplicative(spec, psi, phi);
        return std::vector<double>(q.weights().begin(), q.weights().end());
      };
      const double fd = std::tgamma(n) * fd_jacobian(weights, free);
      CHECK(rel_err(pdf_multiplicative(spec, phi, free), fd) < 1e-5);
    }
  }
}

TEST_CASE("densities vanish off the interlacing support") {
  const SpectrumSpec spec = make_spectrum({1.0, 0.0});
  const std::vector<double> below{0.5};
  const std::vector<double> above{2.5};
  CHECK(pdf_additive(spec, 1.0, below) == 0.0);
  CHECK(pdf_additive(spec, 1.0, above) == 0.0);
  CHECK(pdf_additive_real(spec, 1.0, above) == 0.0);
  const std::vector<double> out{1.5};
  CHECK(pdf_projection(spec, out) == 0.0);
  CHECK(pdf_spacing_n2(1.0, 0.0, 0.5, 2.0) == 0.0);
  CHECK(pdf_quadratic_form(std::vector<double>{2.0, 1.0, 0.0}, 3.0) == 0.0);
}

TEST_CASE("spacing density is the real additive density of lambda_1 rescaled") {
  for (double b : {0.5, 1.0, 2.0}) {
    const SpectrumSpec spec = make_spectrum({1.0, 0.0});
    const double c = 1.0 + b;
    const double lo = std::abs(1.0 - b);
    const double hi = 1.0 + b;
    for (int i = 1; i < 10; ++i) {
      const double s = lo + (hi - lo) * i / 10.0;
      const std::vector<double> l1{0.5 * (c + s)};
      CHECK(rel_err(pdf_spacing_n2(1.0, 0.0, b, s), 0.5 * pdf_additive_real(spec, b, l1)) < 1e-12);
    }
  }
}

TEST_CASE("projection and additive densities integrate to one") {
  const SpectrumSpec two = make_spectrum({1.0, 0.0});
  const SpectrumSpec three = make_spectrum({1.0, 0.0, -1.0});
  for (double b : {0.5, 1.0, 2.0}) {
    const double v = normalization_integral(
        [&](std::span<const double> x) { return pdf_additive(two, b, x); }, additive_region(two, b), 1e-9);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-7));
    const double r = normalization_integral(
        [&](std::span<const double> x) { return pdf_additive_real(two, b, x); }, additive_region(two, b), 1e-8);
    CHECK(r == doctest::Approx(1.0).epsilon(1e-6));
  }
  for (double b : {0.5, 1.0, 3.0}) {
    const double v = normalization_integral(
        [&](std::span<const double> x) { return pdf_additive(three, b, x); }, additive_region(three, b), 1e-9);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-7));
  }
  const double p = normalization_integral(
      [&](std::span<const double> x) { return pdf_projection(three, x); }, projection_region(three), 1e-9);
  CHECK(p == doctest::Approx(1.0).epsilon(1e-7));
  const double pr = normalization_integral(
      [&](std::span<const double> x) { return pdf_projection_real(three, x); }, projection_region(three), 1e-7);
  CHECK(pr == doctest::Approx(1.0).epsilon(1e-5));
  const SpectrumSpec deg = validate_spectrum({1.0, 0.0}, {2, 1});
  const double d = normalization_integral(
      [&](std::span<const double> x) { return pdf_additive_degenerate(deg, 1.0, x); }, additive_region(deg, 1.0), 1e-9);
  CHECK(d == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("multiplicative density integrates to one for n = 2") {
  const AngularSpectrum spec = make_angular_spectrum({0.5, 2.5});
  const double phi = 1.3;
  Region r;
  r.outer = {0.0, kTwoPi};
  const double total = phi + 3.0;
  r.outer_breakpoints = {0.5, 2.5, wrap_angle(0.5 * total), wrap_angle(0.5 * total + kPi),
                         wrap_angle(total - 0.5), wrap_angle(total - 2.5)};
  const double v = normalization_integral(
      [&](std::span<const double> x) { return pdf_multiplicative(spec, phi, x); }, r, 1e-9);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("HCIZ closed form") {
  const std::vector<double> x1{3.0};
  const std::vector<double> y1{2.0};
  CHECK(hciz(x1, y1) == doctest::Approx(std::exp(6.0)).epsilon(1e-14));
  const std::vector<double> x{1.0, 0.0};
  CHECK(std::abs(hciz(x, x) - (std::exp(1.0) - 1.0)) < 1e-12);
  // 2 x 2 determinant by hand.
  const std::vector<double> u{0.7, -0.4};
  const std::vector<double> v{1.3, 0.2};
  const double det = std::exp(u[0] * v[0]) * std::exp(u[1] * v[1]) -
                     std::exp(u[0] * v[1]) * std::exp(u[1] * v[0]);
  CHECK(rel_err(hciz(u, v), det / ((u[1] - u[0]) * (v[1] - v[0]))) < 1e-13);
  CHECK(rel_err(hciz(u, v), hciz(v, u)) < 1e-13);
  const std::vector<double> close{1.0, 1.0 + 1e-9};
  CHECK_THROWS_AS(hciz(close, v), Error);
}

TEST_CASE("quadratic form density matches the B-spline form") {
  const std::vector<double> b2{2.0, -1.0};
  CHECK(pdf_quadratic_form(b2, 0.3) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  for (const std::vector<double>& b :
       {std::vector<double>{2.0, 1.0, 0.0}, std::vector<double>{0.0, 3.0, 1.0, -0.5},
        std::vector<double>{1.0, 0.4, 0.1, -0.3, -1.0}}) {
    const auto [lo, hi] = std::minmax_element(b.begin(), b.end());
    for (int i = 1; i < 20; ++i) {
      const double x = *lo + (*hi - *lo) * i / 20.0;
      CHECK(std::abs(pdf_quadratic_form(b, x) - bspline_quadform(b, x)) < 1e-11);
    }
  }
}

TEST_CASE("Heckman density integrates to one over the ordered sector") {
  for (const std::vector<double>& b : {std::vector<double>{2.0, 1.0, 0.0}, std::vector<double>{3.0, 1.0, 0.0}}) {
    const double tr = b[0] + b[1] + b[2];
    Region r;
    r.dimension = 2;
    r.outer_coordinate = 1;
    r.outer = {b[2], b[0]};
    r.outer_breakpoints = {b[1], 0.5 * (tr - b[2]), 0.5 * (tr - b[0]), tr / 3.0, tr - b[0] - b[1], tr - b[1] - b[2]};
    r.inner = [&](double x2) {
      return Interval{std::max(x2, tr - 2.0 * x2), std::min(b[0], tr - x2 - b[2])};
    };
    const double v = normalization_integral(
        [&](std::span<const double> x) { return pdf_heckman_n3(b, x); }, r, 1e-6);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-4));
  }
}
