#include "rank1horn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>

#include "rank1horn/error.hpp"

namespace rank1horn {

namespace {

using Complex = std::complex<double>;

// Removes from `values` the entry closest to `target` (in the metric
// `dist`) and returns it. Fails when nothing lies within `tol`.
template <typename Dist>
double take_closest(std::vector<double>& values, double target, double tol, Dist dist) {
  if (values.empty()) throw Error(ErrorCode::EigensolverFailure, "no eigenvalue left to match");
  auto best = values.begin();
  for (auto it = values.begin(); it != values.end(); ++it) {
    if (dist(*it, target) < dist(*best, target)) best = it;
  }
  if (dist(*best, target) > tol) {
    throw Error(ErrorCode::EigensolverFailure,
                "expected a deterministic eigenvalue at " + std::to_string(target) +
                    ", nearest is " + std::to_string(*best));
  }
  const double v = *best;
  values.erase(best);
  return v;
}

double linear_distance(double x, double y) { return std::abs(x - y); }
double circular_distance(double x, double y) { return std::abs(wrap_difference(x - y)); }

double deterministic_tolerance(const SpectrumSpec& spec, double b = 0.0) {
  return 1e-8 * std::max(1.0, spec.diameter() + b);
}

Eigen::VectorXd expanded_diagonal(const SpectrumSpec& spec) {
  Eigen::VectorXd d(spec.total_dim());
  int row = 0;
  for (std::size_t l = 0; l < spec.size(); ++l) {
    for (int s = 0; s < spec.multiplicity(l); ++s) d(row++) = spec.value(l);
  }
  return d;
}

// Splits the full spectrum into retained copies of degenerate a_l and the
// random remainder.
void strip_retained(std::vector<double>& eig, const SpectrumSpec& spec, double tol,
                    EigenSample& sample) {
  for (std::size_t l = 0; l < spec.size(); ++l) {
    for (int c = 1; c < spec.multiplicity(l); ++c) {
      sample.deterministic_part.emplace_back(
          take_closest(eig, spec.value(l), tol, linear_distance), 1);
    }
  }
}

std::vector<double> cayley_phases(const Eigen::MatrixXcd& s, double gamma, double& max_abs) {
  const Eigen::Index n = s.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd rotated = std::polar(1.0, -gamma) * s;
  const Eigen::MatrixXcd x = (id + rotated).partialPivLu().solve(id - rotated);
  Eigen::MatrixXcd h = Complex(0.0, 1.0) * x;
  h = (0.5 * (h + h.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  max_abs = std::numeric_limits<double>::infinity();
  if (es.info() != Eigen::Success || !h.allFinite()) return {};
  max_abs = es.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<double> phases(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    phases[static_cast<std::size_t>(i)] = wrap_angle(gamma + 2.0 * std::atan(es.eigenvalues()(i)));
  }
  std::sort(phases.begin(), phases.end());
  return phases;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure, "Hermitian eigensolver did not converge");
  }
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure, "symmetric eigensolver did not converge");
  }
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<double> unitary_eigenphases(const Eigen::MatrixXcd& s) {
  constexpr double kCayleyLimit = 1e2;
  double max_abs = 0.0;
  std::vector<double> phases = cayley_phases(s, 0.0, max_abs);
  if (max_abs <= kCayleyLimit) return phases;

  if (!phases.empty()) {
    // Rotate the spectrum so that -1 sits in the middle of its widest gap.
    double best_gap = -1.0;
    double best_mid = 0.0;
    for (std::size_t i = 0; i < phases.size(); ++i) {
      const double lo = phases[i];
      const double hi = i + 1 < phases.size() ? phases[i + 1] : phases.front() + kTwoPi;
      if (hi - lo > best_gap) {
        best_gap = hi - lo;
        best_mid = 0.5 * (lo + hi);
      }
    }
    phases = cayley_phases(s, best_mid - kPi, max_abs);
    if (max_abs <= kCayleyLimit) return phases;
  }

  // Dense Schur fallback.
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(s, false);
  if (ces.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure, "unitary eigensolver did not converge");
  }
  phases.clear();
  for (Eigen::Index i = 0; i < s.rows(); ++i) phases.push_back(wrap_angle(std::arg(ces.eigenvalues()(i))));
  std::sort(phases.begin(), phases.end());
  return phases;
}

EigenSample sample_additive_matrix(const SpectrumSpec& spec, double b, Field field, RngState& rng) {
  if (!(b > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "additive shift b must be > 0");
  const int dim = spec.total_dim();
  const Eigen::VectorXd diag = expanded_diagonal(spec);
  const Eigen::VectorXcd x = unit_gaussian_vector(dim, field, rng);

  std::vector<double> eig;
  if (field == Field::real) {
    const Eigen::VectorXd xr = x.real();
    Eigen::MatrixXd m = diag.asDiagonal();
    m += b * xr * xr.transpose();
    eig = symmetric_eigenvalues(m);
  } else {
    Eigen::MatrixXcd m = diag.cast<Complex>().asDiagonal();
    m += b * x * x.adjoint();
    eig = hermitian_eigenvalues(m);
  }

  EigenSample sample;
  sample.case_tag = CaseTag::additive;
  strip_retained(eig, spec, deterministic_tolerance(spec, b), sample);
  sample.eigenvalues = std::move(eig);
  sample.constraint_residual = additive_trace_residual(sample, spec, b);
  return sample;
}

EigenSample sample_projection_matrix(const SpectrumSpec& spec, Field field, RngState& rng) {
  const int dim = spec.total_dim();
  const Eigen::VectorXd diag = expanded_diagonal(spec);
  const Eigen::VectorXcd x = unit_gaussian_vector(dim, field, rng);

  std::vector<double> eig;
  if (field == Field::real) {
    const Eigen::VectorXd xr = x.real();
    const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(dim, dim) - xr * xr.transpose();
    const Eigen::MatrixXd m = proj * diag.asDiagonal() * proj;
    eig = symmetric_eigenvalues(0.5 * (m + m.transpose()));
  } else {
    const Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(dim, dim) - x * x.adjoint();
    const Eigen::MatrixXcd m = proj * diag.cast<Complex>().asDiagonal() * proj;
    eig = hermitian_eigenvalues(0.5 * (m + m.adjoint()));
  }

  EigenSample sample;
  sample.case_tag = CaseTag::projection;
  const double tol = deterministic_tolerance(spec);
  sample.deterministic_part.emplace_back(take_closest(eig, 0.0, tol, linear_distance), 1);
  strip_retained(eig, spec, tol, sample);
  sample.eigenvalues = std::move(eig);
  sample.constraint_residual = 0.0;
  return sample;
}

EigenSample sample_multiplicative_matrix(const AngularSpectrum& spec, double phi, RngState& rng) {
  const int dim = spec.total_dim();
  Eigen::VectorXcd a(dim);
  int row = 0;
  for (std::size_t l = 0; l < spec.size(); ++l) {
    for (int s = 0; s < spec.multiplicity(l); ++s) a(row++) = std::polar(1.0, spec.angle(l));
  }
  Eigen::VectorXcd bdiag = Eigen::VectorXcd::Ones(dim);
  bdiag(0) = std::polar(1.0, phi);
  const Eigen::MatrixXcd w = haar_unitary(dim, rng);
  const Eigen::MatrixXcd s = a.asDiagonal() * (w * bdiag.asDiagonal() * w.adjoint());

  std::vector<double> phases = unitary_eigenphases(s);
  EigenSample sample;
  sample.case_tag = CaseTag::multiplicative;
  for (std::size_t l = 0; l < spec.size(); ++l) {
    for (int c = 1; c < spec.multiplicity(l); ++c) {
      sample.deterministic_part.emplace_back(
          take_closest(phases, spec.angle(l), 1e-8, circular_distance), 1);
    }
  }
  sample.eigenvalues = std::move(phases);
  sample.constraint_residual = phase_residual(sample, spec, phi);
  return sample;
}

double sample_quadratic_form(std::span<const double> b, RngState& rng) {
  if (b.empty()) throw Error(ErrorCode::InvalidArgument, "quadratic form needs eigenvalues");
  const Eigen::VectorXcd z = unit_gaussian_vector(static_cast<int>(b.size()), Field::complex, rng);
  double value = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) value += std::norm(z(static_cast<Eigen::Index>(j))) * b[j];
  return value;
}

std::vector<double> sample_diagonal_entries(std::span<const double> b, int p, RngState& rng) {
  const int n = static_cast<int>(b.size());
  if (n < 1 || p < 1 || p > n) {
    throw Error(ErrorCode::InvalidArgument, "diagonal entries need 1 <= p <= n");
  }
  const Eigen::MatrixXcd u = haar_unitary(n, rng);
  std::vector<double> out(static_cast<std::size_t>(p), 0.0);
  for (int i = 0; i < p; ++i) {
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(i)] += std::norm(u(i, k)) * b[static_cast<std::size_t>(k)];
  }
  return out;
}

MonteCarloEstimate hciz_monte_carlo(std::span<const double> x, std::span<const double> y,
                                    std::size_t draws, RngState& rng) {
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "hciz needs two nonempty lists of equal length");
  }
  if (draws < 2) throw Error(ErrorCode::InvalidArgument, "Monte Carlo needs at least two draws");
  // Welford accumulation.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    const Eigen::MatrixXcd u = haar_unitary(static_cast<int>(n), rng);
    double tr = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        tr += std::norm(u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))) * x[j] * y[k];
      }
    }
    const double v = std::exp(tr);
    const double delta = v - mean;
    mean += delta / static_cast<double>(d + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(draws - 1);
  return {mean, std::sqrt(var / static_cast<double>(draws)), draws};
}

}  // namespace rank1horn
