#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rank1horn/randsrc.hpp"
#include "rank1horn/spectra.hpp"

namespace rank1horn {

// Brute-force samplers: build the random matrix, diagonalise it densely,
// strip the structurally fixed eigenvalues and return the rest in the same
// EigenSample layout the secular samplers use.

EigenSample sample_additive_matrix(const SpectrumSpec& spec, double b, Field field, RngState& rng);
EigenSample sample_projection_matrix(const SpectrumSpec& spec, Field field, RngState& rng);
EigenSample sample_multiplicative_matrix(const AngularSpectrum& spec, double phi, RngState& rng);

// z B z^dagger with z uniform on the complex unit sphere.
double sample_quadratic_form(std::span<const double> b, RngState& rng);
// First p diagonal entries of U diag(b) U^dagger, U Haar on U(n).
std::vector<double> sample_diagonal_entries(std::span<const double> b, int p, RngState& rng);

// Descending eigenvalues of a Hermitian matrix.
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m);
std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m);

// Eigenphases in [0, 2 pi), increasing, of a unitary matrix via the Cayley
// transform i (I - S)(I + S)^{-1}, rotated so that -1 is away from the
// spectrum.
std::vector<double> unitary_eigenphases(const Eigen::MatrixXcd& s);

struct MonteCarloEstimate {
  double mean;
  double standard_error;
  std::size_t draws;
};

// Haar average of exp(tr U^dagger X U Y) for X = diag(x), Y = diag(y).
MonteCarloEstimate hciz_monte_carlo(std::span<const double> x, std::span<const double> y,
                                    std::size_t draws, RngState& rng);

}  // namespace rank1horn
