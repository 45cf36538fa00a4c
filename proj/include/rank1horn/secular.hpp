#pragma once

#include <span>
#include <vector>

#include "rank1horn/randsrc.hpp"
#include "rank1horn/spectra.hpp"

namespace rank1horn {

// Weights below this are exact zeros: the pole is dropped and the matching
// root sits exactly on a_l.
inline constexpr double kWeightFloor = 1e-14;
// Required relative residual of every converged secular root.
inline constexpr double kRootResidualTolerance = 1e-12;
inline constexpr int kMaxSecularIterations = 200;

/// Roots of 1 - b sum_l w_l / (lambda - a_l) = 0, one in each additive
/// interlacing interval. The sample also records a_l with multiplicity
/// m_l - 1 for degenerate spectra.
EigenSample additive_roots(const SpectrumSpec& spec, const WeightVector& weights, double b);

/// The n - 1 roots of sum_p w_p / (lambda - a_p) = 0 plus the deterministic
/// zero eigenvalue of the projected matrix.
EigenSample projection_roots(const SpectrumSpec& spec, const WeightVector& weights);

/// Eigenphases psi solving cot(phi/2) = sum_j q_j cot((psi - theta_j)/2),
/// one per cyclic arc, returned as increasing angles in [0, 2 pi).
EigenSample multiplicative_roots(const AngularSpectrum& spec, const WeightVector& weights,
                                 double phi);

// Residue inversions: recover the weights that produce the given roots.
// The root vectors hold only the random eigenvalues (as stored in
// EigenSample::eigenvalues). Throw SupportViolation when the roots do not
// interlace or the trace / phase constraint fails.
WeightVector weights_from_roots_additive(const SpectrumSpec& spec,
                                         std::span<const double> roots, double b);
WeightVector weights_from_roots_projection(const SpectrumSpec& spec,
                                           std::span<const double> roots);
WeightVector weights_from_roots_multiplicative(const AngularSpectrum& spec,
                                               std::span<const double> angles, double phi);

// det[1 / (a_j - lambda_l)]_{j,l} by the closed product formula. Spans must
// have equal length.
double cauchy_double_alternant(std::span<const double> a, std::span<const double> lambda);

// |det[1/(a_j - lambda_l) - 1/(a_j - lambda_n)]_{j,l=1}^{n-1}| through the
// rank-one column reduction and the Cauchy product; lambda_n is the last
// entry of roots (the coordinate eliminated by the trace constraint).
double jacobian_additive(const SpectrumSpec& spec, std::span<const double> roots, double b);

// Randomised secular samplers: Dirichlet weights with shapes m_l (complex)
// or m_l / 2 (real), then the root solver.
EigenSample draw_additive_secular(const SpectrumSpec& spec, double b, Field field, RngState& rng);
EigenSample draw_projection_secular(const SpectrumSpec& spec, Field field, RngState& rng);
EigenSample draw_multiplicative_secular(const AngularSpectrum& spec, double phi, RngState& rng);

}  // namespace rank1horn
