#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rank1horn/randsrc.hpp"
#include "rank1horn/spectra.hpp"

namespace rank1horn {

inline constexpr double kDefaultLevel = 0.01;

struct TestReport {
  std::string test_name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t n_samples = 0;
  bool pass = false;
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json to_json(const TestReport& report);

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

// Globally adaptive Gauss-Kronrod (7/15) quadrature over (lo, hi). Each
// subinterval between consecutive breakpoints is split in two and mapped by
// x = edge +- u^2 toward its nearer edge, which absorbs inverse square root
// edge singularities. The integrand is never evaluated on an endpoint.
// Throws TolUnreached when the error estimate stays above tol.
QuadratureResult integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                              double tol, std::span<const double> breakpoints = {});

// Integration domain for normalization_integral. One-dimensional regions use
// only `outer`; two-dimensional regions integrate the second coordinate over
// inner(x) for each value x of the first.
struct Region {
  int dimension = 1;
  // Position of the outer variable in the point handed to the density.
  int outer_coordinate = 0;
  Interval outer{0.0, 0.0};
  std::vector<double> outer_breakpoints;
  std::function<Interval(double)> inner;
};

using Density = std::function<double(std::span<const double>)>;

double normalization_integral(const Density& density, const Region& region, double tol);

// Interlacing polytope of pdf_additive (n = 2 or 3) in its free coordinates.
Region additive_region(const SpectrumSpec& spec, double b);
// Box of pdf_projection (n = 2 or 3).
Region projection_region(const SpectrumSpec& spec);
// Support of pdf_spacing_n2.
Region spacing_region(double a1, double a2, double b);

// CDF on [lo, hi] of a one-dimensional density by cumulative quadrature.
// The tabulated values are normalised by the total mass and interpolated
// linearly between `nodes` equally spaced points.
std::function<double(double)> cdf_from_density(const std::function<double(double)>& pdf,
                                               double lo, double hi, int nodes = 2048,
                                               double tol = 1e-11);

// ---------------------------------------------------------------------------
// Goodness of fit

// Kolmogorov survival function Q(t) = 2 sum_k (-1)^{k-1} exp(-2 k^2 t^2).
double kolmogorov_q(double t);

// Asymptotic two-sample KS. Pass iff p >= level, equivalently statistic <=
// threshold (the critical distance).
TestReport ks_two_sample(std::span<const double> xs, std::span<const double> ys,
                         double level = kDefaultLevel);
TestReport ks_one_sample(std::span<const double> xs, const std::function<double(double)>& cdf,
                         double level = kDefaultLevel);

// Pearson chi-square of observed counts against cell probabilities. The
// probabilities must sum to 1 within 1e-3 (quadrature slack) and are
// renormalised. Cells are merged in order until each expected count is at
// least 5. Pass iff p >= level.
TestReport chi_square(std::span<const double> observed, std::span<const double> probabilities,
                      double level = kDefaultLevel);

// ---------------------------------------------------------------------------
// Cross-consistency checks

// Draws Dirichlet(1) weights, solves the secular equation, inverts by
// residues and reports the largest weight error over the trials.
TestReport roundtrip_additive(const SpectrumSpec& spec, double b, std::size_t n_trials,
                              RngState& rng, double tol = 1e-8);
TestReport roundtrip_projection(const SpectrumSpec& spec, std::size_t n_trials, RngState& rng,
                                double tol = 1e-8);
TestReport roundtrip_multiplicative(const AngularSpectrum& spec, double phi,
                                    std::size_t n_trials, RngState& rng, double tol = 1e-8);

// Gamma(n) prod_{j<n} w_j |det| with the determinant from the Cauchy product
// against pdf_additive at secular samples; statistic is the worst relative
// error.
TestReport change_of_variables_check(const SpectrumSpec& spec, double b, std::size_t n_trials,
                                     RngState& rng, double tol = 1e-8);

// Number of samples failing interlacing or the trace / phase constraint;
// passes only when every sample is valid.
TestReport constraint_report(std::string name, std::span<const EigenSample> samples,
                             const std::function<SampleCheck(const EigenSample&)>& check);

}  // namespace rank1horn
