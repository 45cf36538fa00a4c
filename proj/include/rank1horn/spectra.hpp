#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rank1horn {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Relative gap below which two eigenvalues count as equal.
inline constexpr double kMergeTolerance = 1e-10;
// Absolute trace / phase-sum residual allowed for O(1) spectra.
inline constexpr double kConstraintTolerance = 1e-9;
// Simplex membership tolerance for weight vectors.
inline constexpr double kSimplexTolerance = 1e-12;

enum class CaseTag { additive, projection, multiplicative, quadratic_form, diagonal_entries };
enum class Field { real, complex };

const char* to_string(CaseTag tag) noexcept;
const char* to_string(Field field) noexcept;
CaseTag parse_case_tag(const std::string& text);
Field parse_field(const std::string& text);

struct Interval {
  double lo;
  double hi;

  bool contains(double x) const noexcept { return lo < x && x < hi; }
  double length() const noexcept { return hi - lo; }
};

/// Distinct real eigenvalues a_1 > ... > a_n of a fixed Hermitian matrix,
/// each repeated m_l times so that the matrix has size N = sum m_l.
class SpectrumSpec {
 public:
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const int> multiplicities() const noexcept { return multiplicities_; }
  double value(std::size_t l) const { return values_.at(l); }
  int multiplicity(std::size_t l) const { return multiplicities_.at(l); }
  int total_dim() const noexcept { return total_dim_; }
  bool unit_multiplicities() const noexcept;

  // a_1 - a_n; zero for a single eigenvalue.
  double diameter() const noexcept { return values_.front() - values_.back(); }
  // sum_l a_l (distinct values, no multiplicities).
  double distinct_sum() const noexcept;
  // sum_l a_l m_l, the trace of the full N x N matrix.
  double trace() const noexcept;

  // Multiplicities as doubles, halved for the real field (Dirichlet shapes).
  std::vector<double> dirichlet_shapes(Field field) const;

 private:
  friend SpectrumSpec validate_spectrum(std::vector<double>, std::vector<int>, bool);
  SpectrumSpec(std::vector<double> values, std::vector<int> multiplicities);

  std::vector<double> values_;
  std::vector<int> multiplicities_;
  int total_dim_ = 0;
};

// Throws DuplicateEigenvalue, OrderViolation, NonPositiveMultiplicity or
// InvalidArgument. With allow_sort the input may come in any order.
SpectrumSpec validate_spectrum(std::vector<double> values, std::vector<int> multiplicities,
                               bool allow_sort = false);
SpectrumSpec make_spectrum(std::vector<double> values);

/// Eigenphases 0 <= theta_1 < ... < theta_n < 2 pi of a fixed unitary matrix.
class AngularSpectrum {
 public:
  std::size_t size() const noexcept { return angles_.size(); }
  std::span<const double> angles() const noexcept { return angles_; }
  std::span<const int> multiplicities() const noexcept { return multiplicities_; }
  double angle(std::size_t l) const { return angles_.at(l); }
  int multiplicity(std::size_t l) const { return multiplicities_.at(l); }
  int total_dim() const noexcept { return total_dim_; }
  bool unit_multiplicities() const noexcept;
  double distinct_sum() const noexcept;
  double weighted_sum() const noexcept;
  std::vector<double> dirichlet_shapes() const;

 private:
  friend AngularSpectrum validate_angular_spectrum(std::vector<double>, std::vector<int>, bool);
  AngularSpectrum(std::vector<double> angles, std::vector<int> multiplicities);

  std::vector<double> angles_;
  std::vector<int> multiplicities_;
  int total_dim_ = 0;
};

AngularSpectrum validate_angular_spectrum(std::vector<double> angles,
                                          std::vector<int> multiplicities,
                                          bool allow_sort = false);
AngularSpectrum make_angular_spectrum(std::vector<double> angles);

/// A point on the probability simplex.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights, double tolerance = kSimplexTolerance);

  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](std::size_t j) const { return weights_[j]; }

 private:
  std::vector<double> weights_;
};

struct EigenSample {
  // Random part of the spectrum: descending reals, or increasing angles in
  // [0, 2 pi) for the multiplicative case.
  std::vector<double> eigenvalues;
  CaseTag case_tag = CaseTag::additive;
  // Eigenvalues fixed by the structure (the zero of a projection, retained
  // copies of degenerate a_l), as (value, multiplicity) pairs.
  std::vector<std::pair<double, int>> deterministic_part;
  double constraint_residual = 0.0;
};

// Open intervals, one per random eigenvalue, listed from the top down.
// Additive: (a_1, a_1 + b), (a_2, a_1), ..., (a_n, a_{n-1}).
// Projection: (a_2, a_1), ..., (a_n, a_{n-1}).
std::vector<Interval> interlacing_support(const SpectrumSpec& spec, CaseTag case_tag,
                                          double b = 0.0);

// Cyclic arcs (theta_{i-1}, theta_i) with theta_0 = theta_n - 2 pi.
std::vector<Interval> angular_arcs(const AngularSpectrum& spec);

// Reduces an angle to [0, 2 pi).
double wrap_angle(double angle) noexcept;
// Reduces an angle difference to (-pi, pi].
double wrap_difference(double angle) noexcept;

// Tolerance for the additive trace residual, scaled by the spectral extent.
double trace_tolerance(const SpectrumSpec& spec, double b) noexcept;

// Sum of eigenvalues (random and deterministic) minus sum a_l m_l minus b.
double additive_trace_residual(const EigenSample& sample, const SpectrumSpec& spec, double b);
// |Sum psi - sum theta_l m_l - phi| reduced mod 2 pi, over the full spectrum.
double phase_residual(const EigenSample& sample, const AngularSpectrum& spec, double phi);

bool strictly_interlaces_additive(std::span<const double> eigenvalues, const SpectrumSpec& spec,
                                  double b);
bool strictly_interlaces_projection(std::span<const double> eigenvalues,
                                    const SpectrumSpec& spec);
// Exactly one angle in each cyclic arc; angles may be given in any order.
bool interlaces_cyclically(std::span<const double> angles, const AngularSpectrum& spec);

struct SampleCheck {
  bool interlaced = false;
  double residual = 0.0;
  double tolerance = 0.0;
  bool ok() const noexcept { return interlaced && residual < tolerance; }
};

SampleCheck check_additive_sample(const EigenSample& sample, const SpectrumSpec& spec, double b);
// Residual is the distance of the recorded zero eigenvalue from 0.
SampleCheck check_projection_sample(const EigenSample& sample, const SpectrumSpec& spec);
SampleCheck check_multiplicative_sample(const EigenSample& sample, const AngularSpectrum& spec,
                                        double phi);

// {"values":[...],"multiplicities":[...]}; multiplicities default to ones.
std::string to_json(const SpectrumSpec& spec);
std::string to_json(const AngularSpectrum& spec);
SpectrumSpec spectrum_from_json(const std::string& text, bool allow_sort = false);
AngularSpectrum angular_spectrum_from_json(const std::string& text, bool allow_sort = false);

}  // namespace rank1horn
