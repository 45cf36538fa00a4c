#pragma once

#include <span>
#include <vector>

#include "rank1horn/spectra.hpp"

namespace rank1horn {

// Closed-form eigenvalue densities.
//
// Densities constrained by a trace (or phase-sum) identity are densities in
// the free coordinates only: the last eigenvalue is rebuilt from the
// constraint and the density is taken with respect to d lambda_1 ...
// d lambda_{n-1}. Every evaluator returns exactly 0 off its support. The
// real-field densities blow up like an inverse square root at the support
// edges and return +infinity exactly on an edge.
//
// Vandermonde convention: Delta_n(u) = prod_{j<k} (u_k - u_j).

double vandermonde(std::span<const double> u);

/// Non-zero eigenvalues of P A P for a co-rank 1 projection P; lambda holds
/// n - 1 values in descending order.
double pdf_projection(const SpectrumSpec& spec, std::span<const double> lambda);

/// Eigenvalues of A + b x x^dagger; lambda_free holds lambda_1..lambda_{n-1}.
double pdf_additive(const SpectrumSpec& spec, double b, std::span<const double> lambda_free);

// Multiplicity-aware forms. Exponents come from spec.multiplicities().
double pdf_projection_degenerate(const SpectrumSpec& spec, std::span<const double> lambda);
double pdf_additive_degenerate(const SpectrumSpec& spec, double b,
                               std::span<const double> lambda_free);

// The same formulas with arbitrary positive (possibly fractional) multiplicity
// exponents; the real-field variants are the m_l = 1/2 case.
double pdf_projection_weighted(std::span<const double> values, std::span<const double> mult,
                               std::span<const double> lambda);
double pdf_additive_weighted(std::span<const double> values, std::span<const double> mult,
                             double b, std::span<const double> lambda_free);

// Real symmetric A with a real Gaussian direction.
double pdf_projection_real(const SpectrumSpec& spec, std::span<const double> lambda);
double pdf_additive_real(const SpectrumSpec& spec, double b, std::span<const double> lambda_free);

/// Density of s = lambda_1 - lambda_2 for the real additive case with n = 2,
/// supported on (|a_1 - a_2 - b|, a_1 - a_2 + b).
double pdf_spacing_n2(double a1, double a2, double b, double s);

/// Multiplicative case. psi_free holds the n - 1 smallest eigenphases in
/// [0, 2 pi), increasing; the largest is rebuilt from the phase constraint.
double pdf_multiplicative(const AngularSpectrum& spec, double phi,
                          std::span<const double> psi_free);

// prod Gamma(j) det[exp(x_j y_k)] / (Delta(x) Delta(y)). Throws NearConfluent
// when two arguments are closer than 1e-8.
double hciz(std::span<const double> x, std::span<const double> y);

/// Density of z B z^dagger for z uniform on the complex unit sphere; b holds
/// the n >= 2 distinct eigenvalues of B in any order.
double pdf_quadratic_form(std::span<const double> b, double x);

/// Joint density of the two largest diagonal entries x_1 > x_2 of U B U^dagger
/// (n = 3), with x_3 = tr B - x_1 - x_2 required to be the smallest. Density is
/// with respect to dx_1 dx_2 over the ordered sector.
double pdf_heckman_n3(std::span<const double> b, std::span<const double> x_free);

}  // namespace rank1horn
