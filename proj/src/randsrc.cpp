#include "rank1horn/randsrc.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rank1horn/error.hpp"

namespace rank1horn {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  // seed_seq's mixing is fixed by the standard, so the engine state is
  // portable across toolchains.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x5eedu};
  return std::mt19937_64(seq);
}

}  // namespace

RngState::RngState(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double RngState::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngState::normal() { return normal_(engine_); }

std::complex<double> RngState::complex_normal() {
  constexpr double kScale = 0.70710678118654752440;
  const double re = normal();
  const double im = normal();
  return {kScale * re, kScale * im};
}

double log_gamma_variate(double shape, RngState& rng) {
  if (!(shape > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "gamma shape must be > 0");
  if (shape < 1.0) {
    return log_gamma_variate(shape + 1.0, rng) + std::log(rng.uniform()) / shape;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d * v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d * v);
  }
}

WeightVector dirichlet(std::span<const double> params, RngState& rng) {
  if (params.empty()) throw Error(ErrorCode::InvalidArgument, "dirichlet needs parameters");
  for (double s : params) {
    if (!(s > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "dirichlet parameter must be > 0");
  }
  if (params.size() == 1) return WeightVector({1.0});

  std::vector<double> logs(params.size());
  for (std::size_t j = 0; j < params.size(); ++j) logs[j] = log_gamma_variate(params[j], rng);
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> w(params.size());
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] = std::exp(logs[j] - top);
    total += w[j];
  }
  for (double& x : w) x /= total;
  return WeightVector(std::move(w));
}

Eigen::VectorXcd unit_gaussian_vector(int dim, Field field, RngState& rng) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  Eigen::VectorXcd x(dim);
  for (int i = 0; i < dim; ++i) {
    x(i) = field == Field::complex ? rng.complex_normal() : std::complex<double>(rng.normal(), 0.0);
  }
  const double norm = x.norm();
  if (norm == 0.0) return unit_gaussian_vector(dim, field, rng);
  return x / norm;
}

Eigen::MatrixXcd haar_unitary(int dim, RngState& rng) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  Eigen::MatrixXcd g(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  // Fix the phase freedom of QR so that Q is Haar distributed.
  for (int j = 0; j < dim; ++j) {
    const std::complex<double> d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

Eigen::MatrixXd haar_orthogonal(int dim, RngState& rng) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  Eigen::MatrixXd g(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace rank1horn
