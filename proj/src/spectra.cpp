#include "rank1horn/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "rank1horn/error.hpp"

namespace rank1horn {

namespace {

bool too_close(double x, double y) {
  return std::abs(x - y) <= kMergeTolerance * std::max({1.0, std::abs(x), std::abs(y)});
}

void check_common(std::size_t n_values, const std::vector<int>& multiplicities) {
  if (n_values == 0) throw Error(ErrorCode::InvalidArgument, "spectrum must be nonempty");
  if (multiplicities.size() != n_values) {
    throw Error(ErrorCode::InvalidArgument, "values and multiplicities differ in length");
  }
  for (int m : multiplicities) {
    if (m < 1) throw Error(ErrorCode::NonPositiveMultiplicity, "multiplicity " + std::to_string(m));
  }
}

// Sort (value, multiplicity) pairs together.
template <typename Compare>
void sort_pairs(std::vector<double>& values, std::vector<int>& mult, Compare cmp) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t i, std::size_t j) { return cmp(values[i], values[j]); });
  std::vector<double> v(values.size());
  std::vector<int> m(values.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    v[k] = values[idx[k]];
    m[k] = mult[idx[k]];
  }
  values = std::move(v);
  mult = std::move(m);
}

}  // namespace

const char* to_string(CaseTag tag) noexcept {
  switch (tag) {
    case CaseTag::additive: return "additive";
    case CaseTag::projection: return "projection";
    case CaseTag::multiplicative: return "multiplicative";
    case CaseTag::quadratic_form: return "quadform";
    case CaseTag::diagonal_entries: return "diag";
  }
  return "unknown";
}

const char* to_string(Field field) noexcept {
  return field == Field::real ? "real" : "complex";
}

CaseTag parse_case_tag(const std::string& text) {
  if (text == "additive") return CaseTag::additive;
  if (text == "projection") return CaseTag::projection;
  if (text == "multiplicative") return CaseTag::multiplicative;
  if (text == "quadform" || text == "quadratic_form") return CaseTag::quadratic_form;
  if (text == "diag" || text == "diagonal_entries") return CaseTag::diagonal_entries;
  throw Error(ErrorCode::InvalidArgument, "unknown case '" + text + "'");
}

Field parse_field(const std::string& text) {
  if (text == "real") return Field::real;
  if (text == "complex") return Field::complex;
  throw Error(ErrorCode::InvalidArgument, "unknown field '" + text + "'");
}

// ---------------------------------------------------------------------------
// SpectrumSpec

SpectrumSpec::SpectrumSpec(std::vector<double> values, std::vector<int> multiplicities)
    : values_(std::move(values)), multiplicities_(std::move(multiplicities)) {
  total_dim_ = std::accumulate(multiplicities_.begin(), multiplicities_.end(), 0);
}

bool SpectrumSpec::unit_multiplicities() const noexcept {
  return std::all_of(multiplicities_.begin(), multiplicities_.end(), [](int m) { return m == 1; });
}

double SpectrumSpec::distinct_sum() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double SpectrumSpec::trace() const noexcept {
  double t = 0.0;
  for (std::size_t l = 0; l < values_.size(); ++l) t += values_[l] * multiplicities_[l];
  return t;
}

std::vector<double> SpectrumSpec::dirichlet_shapes(Field field) const {
  std::vector<double> s(multiplicities_.begin(), multiplicities_.end());
  if (field == Field::real) {
    for (double& x : s) x *= 0.5;
  }
  return s;
}

SpectrumSpec validate_spectrum(std::vector<double> values, std::vector<int> multiplicities,
                               bool allow_sort) {
  check_common(values.size(), multiplicities);
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite eigenvalue");
  }
  // Duplicates are reported ahead of ordering problems.
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (too_close(sorted[i - 1], sorted[i])) {
      throw Error(ErrorCode::DuplicateEigenvalue,
                  "eigenvalues closer than the merge tolerance; supply one entry with a "
                  "multiplicity instead");
    }
  }
  if (!std::is_sorted(values.begin(), values.end(), std::greater<>())) {
    if (!allow_sort) {
      throw Error(ErrorCode::OrderViolation, "eigenvalues must be strictly descending");
    }
    sort_pairs(values, multiplicities, std::greater<>());
  }
  return SpectrumSpec(std::move(values), std::move(multiplicities));
}

SpectrumSpec make_spectrum(std::vector<double> values) {
  std::vector<int> ones(values.size(), 1);
  return validate_spectrum(std::move(values), std::move(ones));
}

// ---------------------------------------------------------------------------
// AngularSpectrum

AngularSpectrum::AngularSpectrum(std::vector<double> angles, std::vector<int> multiplicities)
    : angles_(std::move(angles)), multiplicities_(std::move(multiplicities)) {
  total_dim_ = std::accumulate(multiplicities_.begin(), multiplicities_.end(), 0);
}

bool AngularSpectrum::unit_multiplicities() const noexcept {
  return std::all_of(multiplicities_.begin(), multiplicities_.end(), [](int m) { return m == 1; });
}

double AngularSpectrum::distinct_sum() const noexcept {
  return std::accumulate(angles_.begin(), angles_.end(), 0.0);
}

double AngularSpectrum::weighted_sum() const noexcept {
  double t = 0.0;
  for (std::size_t l = 0; l < angles_.size(); ++l) t += angles_[l] * multiplicities_[l];
  return t;
}

std::vector<double> AngularSpectrum::dirichlet_shapes() const {
  return {multiplicities_.begin(), multiplicities_.end()};
}

AngularSpectrum validate_angular_spectrum(std::vector<double> angles,
                                          std::vector<int> multiplicities, bool allow_sort) {
  check_common(angles.size(), multiplicities);
  for (double a : angles) {
    if (!std::isfinite(a) || a < 0.0 || a >= kTwoPi) {
      throw Error(ErrorCode::InvalidArgument, "angles must lie in [0, 2 pi)");
    }
  }
  std::vector<double> sorted = angles;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (too_close(sorted[i - 1], sorted[i])) {
      throw Error(ErrorCode::DuplicateEigenvalue, "eigenphases closer than the merge tolerance");
    }
  }
  if (sorted.size() > 1 && too_close(sorted.back(), sorted.front() + kTwoPi)) {
    throw Error(ErrorCode::DuplicateEigenvalue, "eigenphases coincide across 2 pi");
  }
  if (!std::is_sorted(angles.begin(), angles.end())) {
    if (!allow_sort) throw Error(ErrorCode::OrderViolation, "angles must be strictly increasing");
    sort_pairs(angles, multiplicities, std::less<>());
  }
  return AngularSpectrum(std::move(angles), std::move(multiplicities));
}

AngularSpectrum make_angular_spectrum(std::vector<double> angles) {
  std::vector<int> ones(angles.size(), 1);
  return validate_angular_spectrum(std::move(angles), std::move(ones));
}

// ---------------------------------------------------------------------------
// WeightVector

WeightVector::WeightVector(std::vector<double> weights, double tolerance)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(ErrorCode::InvalidArgument, "empty weight vector");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw Error(ErrorCode::DegenerateWeight, "negative or NaN weight");
    total += w;
  }
  if (std::abs(total - 1.0) > tolerance) {
    throw Error(ErrorCode::InvalidArgument, "weights do not sum to one");
  }
}

// ---------------------------------------------------------------------------
// Support geometry

std::vector<Interval> interlacing_support(const SpectrumSpec& spec, CaseTag case_tag, double b) {
  const auto a = spec.values();
  std::vector<Interval> out;
  switch (case_tag) {
    case CaseTag::additive:
      if (!(b > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "additive case needs b > 0");
      out.push_back({a[0], a[0] + b});
      break;
    case CaseTag::projection:
      break;
    default:
      throw Error(ErrorCode::UnsupportedCase,
                  std::string("no real interlacing support for case ") + to_string(case_tag));
  }
  for (std::size_t j = 1; j < a.size(); ++j) out.push_back({a[j], a[j - 1]});
  return out;
}

std::vector<Interval> angular_arcs(const AngularSpectrum& spec) {
  const auto th = spec.angles();
  std::vector<Interval> arcs;
  arcs.reserve(th.size());
  arcs.push_back({th.back() - kTwoPi, th.front()});
  for (std::size_t i = 1; i < th.size(); ++i) arcs.push_back({th[i - 1], th[i]});
  return arcs;
}

double wrap_angle(double angle) noexcept {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double wrap_difference(double angle) noexcept {
  double r = std::remainder(angle, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

double trace_tolerance(const SpectrumSpec& spec, double b) noexcept {
  const double scale = std::max({1.0, spec.diameter() + std::abs(b),
                                 std::abs(spec.values().front()), std::abs(spec.values().back())});
  return kConstraintTolerance * scale;
}

double additive_trace_residual(const EigenSample& sample, const SpectrumSpec& spec, double b) {
  double total = std::accumulate(sample.eigenvalues.begin(), sample.eigenvalues.end(), 0.0);
  for (const auto& [value, mult] : sample.deterministic_part) total += value * mult;
  return total - spec.trace() - b;
}

double phase_residual(const EigenSample& sample, const AngularSpectrum& spec, double phi) {
  double total = std::accumulate(sample.eigenvalues.begin(), sample.eigenvalues.end(), 0.0);
  for (const auto& [value, mult] : sample.deterministic_part) total += value * mult;
  return std::abs(wrap_difference(total - spec.weighted_sum() - phi));
}

bool strictly_interlaces_additive(std::span<const double> eigenvalues, const SpectrumSpec& spec,
                                  double b) {
  const auto a = spec.values();
  if (eigenvalues.size() != a.size()) return false;
  if (!(eigenvalues[0] < a[0] + b)) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!(eigenvalues[j] > a[j])) return false;
    if (j > 0 && !(eigenvalues[j] < a[j - 1])) return false;
  }
  return true;
}

bool strictly_interlaces_projection(std::span<const double> eigenvalues,
                                    const SpectrumSpec& spec) {
  const auto a = spec.values();
  if (eigenvalues.size() + 1 != a.size()) return false;
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
    if (!(a[j] > eigenvalues[j] && eigenvalues[j] > a[j + 1])) return false;
  }
  return true;
}

bool interlaces_cyclically(std::span<const double> angles, const AngularSpectrum& spec) {
  if (angles.size() != spec.size()) return false;
  for (const Interval& arc : angular_arcs(spec)) {
    int hits = 0;
    for (double psi : angles) {
      // Compare on the lift of psi that lands in [arc.lo, arc.lo + 2 pi).
      const double lifted = arc.lo + wrap_angle(psi - arc.lo);
      if (arc.contains(lifted)) ++hits;
    }
    if (hits != 1) return false;
  }
  return true;
}

SampleCheck check_additive_sample(const EigenSample& sample, const SpectrumSpec& spec, double b) {
  SampleCheck c;
  c.interlaced = strictly_interlaces_additive(sample.eigenvalues, spec, b);
  c.residual = std::abs(additive_trace_residual(sample, spec, b));
  c.tolerance = trace_tolerance(spec, b);
  return c;
}

SampleCheck check_projection_sample(const EigenSample& sample, const SpectrumSpec& spec) {
  SampleCheck c;
  c.interlaced = strictly_interlaces_projection(sample.eigenvalues, spec);
  c.tolerance = 1e-10 * std::max(1.0, spec.diameter());
  if (sample.deterministic_part.empty() || sample.deterministic_part.front().second != 1) {
    c.interlaced = false;
    c.residual = std::numeric_limits<double>::infinity();
  } else {
    c.residual = std::abs(sample.deterministic_part.front().first);
  }
  return c;
}

SampleCheck check_multiplicative_sample(const EigenSample& sample, const AngularSpectrum& spec,
                                        double phi) {
  SampleCheck c;
  c.interlaced = interlaces_cyclically(sample.eigenvalues, spec);
  c.residual = phase_residual(sample, spec, phi);
  c.tolerance = kConstraintTolerance;
  return c;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::pair<std::vector<double>, std::vector<int>> parse_spectrum_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("spectrum JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("values") || !j["values"].is_array()) {
    throw Error(ErrorCode::InvalidArgument, "spectrum JSON needs a \"values\" array");
  }
  std::vector<double> values;
  std::vector<int> mult;
  try {
    values = j["values"].get<std::vector<double>>();
    if (j.contains("multiplicities")) {
      mult = j["multiplicities"].get<std::vector<int>>();
    } else {
      mult.assign(values.size(), 1);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("spectrum JSON: ") + e.what());
  }
  return {std::move(values), std::move(mult)};
}

}  // namespace

std::string to_json(const SpectrumSpec& spec) {
  nlohmann::json j;
  j["values"] = std::vector<double>(spec.values().begin(), spec.values().end());
  j["multiplicities"] = std::vector<int>(spec.multiplicities().begin(), spec.multiplicities().end());
  return j.dump();
}

std::string to_json(const AngularSpectrum& spec) {
  nlohmann::json j;
  j["values"] = std::vector<double>(spec.angles().begin(), spec.angles().end());
  j["multiplicities"] = std::vector<int>(spec.multiplicities().begin(), spec.multiplicities().end());
  return j.dump();
}

SpectrumSpec spectrum_from_json(const std::string& text, bool allow_sort) {
  auto [values, mult] = parse_spectrum_json(text);
  return validate_spectrum(std::move(values), std::move(mult), allow_sort);
}

AngularSpectrum angular_spectrum_from_json(const std::string& text, bool allow_sort) {
  auto [values, mult] = parse_spectrum_json(text);
  return validate_angular_spectrum(std::move(values), std::move(mult), allow_sort);
}

}  // namespace rank1horn
