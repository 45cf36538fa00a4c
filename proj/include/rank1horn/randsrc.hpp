#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>

#include <Eigen/Dense>

#include "rank1horn/spectra.hpp"

namespace rank1horn {

/// Explicit random state. A (seed, stream_id) pair names an independent
/// substream; equal pairs replay identical draws.
class RngState {
 public:
  explicit RngState(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  // Uniform on the open interval (0, 1), 53 random bits.
  double uniform();
  double normal();
  // Standard complex Gaussian, E|z|^2 = 1.
  std::complex<double> complex_normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// log of a Gamma(shape, 1) variate (Marsaglia-Tsang, with the U^{1/shape}
// boost for shape < 1). Kept in log space so that small shapes never
// underflow.
double log_gamma_variate(double shape, RngState& rng);

WeightVector dirichlet(std::span<const double> params, RngState& rng);

// Uniform on the unit sphere of R^dim or C^dim. Real vectors come back with
// zero imaginary parts.
Eigen::VectorXcd unit_gaussian_vector(int dim, Field field, RngState& rng);

Eigen::MatrixXcd haar_unitary(int dim, RngState& rng);
Eigen::MatrixXd haar_orthogonal(int dim, RngState& rng);

}  // namespace rank1horn
