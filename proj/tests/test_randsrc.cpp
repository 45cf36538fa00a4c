#include <doctest.h>

#include <cmath>
#include <complex>

#include "rank1horn/error.hpp"
#include "rank1horn/randsrc.hpp"
#include "rank1horn/stats.hpp"

using namespace rank1horn;

TEST_CASE("equal seed and stream replay the same draws") {
  RngState a(42, 7);
  RngState b(42, 7);
  RngState c(42, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x > 0.0);
    CHECK(x < 1.0);
    differs = differs || x != c.uniform();
  }
  CHECK(differs);
}

TEST_CASE("Dirichlet draws") {
  RngState rng(1, 0);
  const std::vector<double> single{3.0};
  CHECK(dirichlet(single, rng)[0] == 1.0);
  const std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS(dirichlet(bad, rng), Error);

  const std::vector<double> two{1.0, 1.0};
  const int draws = 100000;
  double sum = 0.0;
  double sumsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double w = dirichlet(two, rng)[0];
    sum += w;
    sumsq += w * w;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sumsq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - 0.5) < 3 * se);

  // Marginal of Dirichlet(1,1,1) is Beta(1,2).
  const std::vector<double> three{1.0, 1.0, 1.0};
  std::vector<double> w1;
  for (int i = 0; i < draws; ++i) w1.push_back(dirichlet(three, rng)[0]);
  const auto r = ks_one_sample(w1, [](double x) { return 1.0 - (1.0 - x) * (1.0 - x); });
  CHECK(r.pass);

  // Half-integer shapes: E w_1 = s_1 / sum s.
  const std::vector<double> halves{0.5, 0.5, 1.0};
  double m = 0.0;
  for (int i = 0; i < draws; ++i) m += dirichlet(halves, rng)[0];
  CHECK(std::abs(m / draws - 0.25) < 0.005);

  // Tiny shapes must not underflow to an invalid simplex point.
  const std::vector<double> tiny{0.01, 0.01};
  for (int i = 0; i < 1000; ++i) {
    const auto w = dirichlet(tiny, rng);
    CHECK(std::isfinite(w[0]));
  }
}

TEST_CASE("unit Gaussian vectors") {
  RngState rng(2, 0);
  const auto x = unit_gaussian_vector(1, Field::real, rng);
  CHECK(std::abs(std::abs(x(0).real()) - 1.0) < 1e-15);
  CHECK(x(0).imag() == 0.0);

  std::vector<double> first;
  for (int i = 0; i < 20000; ++i) {
    const auto v = unit_gaussian_vector(2, Field::complex, rng);
    CHECK(std::abs(v.norm() - 1.0) < 1e-14);
    first.push_back(std::norm(v(0)));
  }
  CHECK(ks_one_sample(first, [](double t) { return t; }).pass);

  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) mean += unit_gaussian_vector(3, Field::real, rng).cwiseAbs2().real();
  mean /= draws;
  for (int k = 0; k < 3; ++k) CHECK(std::abs(mean(k) - 1.0 / 3.0) < 0.005);
}

TEST_CASE("Haar matrices") {
  RngState rng(3, 0);
  for (int dim : {1, 2, 5, 12}) {
    const auto u = haar_unitary(dim, rng);
    const Eigen::MatrixXcd e = u.adjoint() * u - Eigen::MatrixXcd::Identity(dim, dim);
    CHECK(e.cwiseAbs().maxCoeff() < 1e-12);
    const auto o = haar_orthogonal(dim, rng);
    const Eigen::MatrixXd f = o.transpose() * o - Eigen::MatrixXd::Identity(dim, dim);
    CHECK(f.cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(std::abs(std::abs(haar_unitary(1, rng)(0, 0)) - 1.0) < 1e-15);

  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  std::vector<double> col;
  std::vector<double> ref;
  for (int i = 0; i < 10000; ++i) {
    const auto u = haar_unitary(4, rng);
    mean += u.row(0).cwiseAbs2().transpose();
    col.push_back(std::norm(u(0, 0)));
    ref.push_back(std::norm(unit_gaussian_vector(4, Field::complex, rng)(0)));
  }
  mean /= 10000.0;
  for (int k = 0; k < 4; ++k) CHECK(std::abs(mean(k) - 0.25) < 0.01);
  CHECK(ks_two_sample(col, ref).pass);
}
