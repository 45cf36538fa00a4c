#include "rank1horn/secular.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>

#include "rank1horn/error.hpp"

namespace rank1horn {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct SecularEval {
  double value;       // increasing in tau on the bracket
  double derivative;  // > 0
  double scale;       // magnitude sum used for the relative residual
};

// Safeguarded Newton on an increasing function over the open bracket
// (lo, hi). The endpoints are never evaluated; their signs (negative at lo,
// positive at hi) are implied by the poles.
template <typename Eval>
double solve_bracketed(Eval&& eval, double lo, double hi, std::size_t n_terms) {
  const double stop = 4.0 * static_cast<double>(n_terms + 1) * kEps;
  double x = 0.5 * (lo + hi);
  double last_abs = std::numeric_limits<double>::infinity();
  bool force_bisect = false;
  SecularEval e{};
  for (int it = 0; it < kMaxSecularIterations; ++it) {
    e = eval(x);
    if (!std::isfinite(e.value)) {
      // Only reachable on a pole; step back into the bracket.
      x = 0.5 * (lo + hi);
      continue;
    }
    const double abs_f = std::abs(e.value);
    if (abs_f <= stop * e.scale) return x;
    if (e.value < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi))) {
      if (abs_f <= kRootResidualTolerance * e.scale) return x;
      break;
    }
    double next = x - e.value / e.derivative;
    if (force_bisect || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    force_bisect = abs_f > 0.5 * last_abs;
    last_abs = abs_f;
    x = next;
  }
  if (std::isfinite(e.value) && std::abs(e.value) <= kRootResidualTolerance * e.scale) return x;
  throw Error(ErrorCode::ConvergenceFailure,
              "secular root did not converge in " + std::to_string(kMaxSecularIterations) +
                  " iterations");
}

// Poles of a real secular function with the zero-weight ones removed.
struct ActivePoles {
  std::vector<double> poles;    // descending
  std::vector<double> weights;  // matching
  std::vector<double> dropped;  // a_l whose weight fell below the floor
};

ActivePoles split_poles(std::span<const double> a, const WeightVector& weights) {
  if (weights.size() != a.size()) {
    throw Error(ErrorCode::InvalidArgument, "weights and spectrum differ in length");
  }
  ActivePoles out;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const double w = weights[l];
    if (!(w >= 0.0)) throw Error(ErrorCode::DegenerateWeight, "negative weight");
    if (w < kWeightFloor) {
      out.dropped.push_back(a[l]);
    } else {
      out.poles.push_back(a[l]);
      out.weights.push_back(w);
    }
  }
  return out;
}

// Root of an increasing secular function in (lower, upper), measured from
// whichever endpoint pole is nearer to the root. `value_at` evaluates the
// function given the offset tau and the pole offsets d.
template <typename MakeEval>
double solve_between(double lower, double upper, bool has_upper_pole, std::span<const double> poles,
                     MakeEval&& make_eval) {
  std::vector<double> offsets(poles.size());
  auto build = [&](double origin, std::size_t origin_index) {
    for (std::size_t l = 0; l < poles.size(); ++l) offsets[l] = poles[l] - origin;
    offsets[origin_index] = 0.0;
  };
  const auto find_index = [&](double pole) {
    return static_cast<std::size_t>(std::find(poles.begin(), poles.end(), pole) - poles.begin());
  };

  bool use_lower = true;
  const double mid = 0.5 * (lower + upper);
  if (has_upper_pole) {
    build(lower, find_index(lower));
    use_lower = make_eval(offsets)(mid - lower).value > 0.0;
  }
  if (use_lower) {
    build(lower, find_index(lower));
    const double hi = has_upper_pole ? mid - lower : upper - lower;
    return lower + solve_bracketed(make_eval(offsets), 0.0, hi, poles.size());
  }
  build(upper, find_index(upper));
  return upper + solve_bracketed(make_eval(offsets), mid - upper, 0.0, poles.size());
}

std::vector<std::pair<double, int>> retained_copies(std::span<const double> values,
                                                    std::span<const int> mult) {
  std::vector<std::pair<double, int>> out;
  for (std::size_t l = 0; l < values.size(); ++l) {
    if (mult[l] > 1) out.emplace_back(values[l], mult[l] - 1);
  }
  return out;
}

// 2i sin((x - y)/2) e^{i(x + y)/2} = e^{ix} - e^{iy}, without cancellation.
std::complex<double> chord(double x, double y) {
  const double s = 2.0 * std::sin(0.5 * (x - y));
  const double h = 0.5 * (x + y);
  return {-s * std::sin(h), s * std::cos(h)};
}

double cot(double x) { return 1.0 / std::tan(x); }

}  // namespace

// ---------------------------------------------------------------------------
// Root solvers

EigenSample additive_roots(const SpectrumSpec& spec, const WeightVector& weights, double b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw Error(ErrorCode::NonPositiveParameter, "additive shift b must be > 0");
  }
  const ActivePoles act = split_poles(spec.values(), weights);
  const std::span<const double> poles = act.poles;
  const std::span<const double> w = act.weights;

  auto make_eval = [&](std::span<const double> d) {
    return [d, w, b](double tau) {
      double sum = 0.0;
      double dsum = 0.0;
      double asum = 0.0;
      for (std::size_t l = 0; l < d.size(); ++l) {
        const double inv = 1.0 / (tau - d[l]);
        sum += w[l] * inv;
        dsum += w[l] * inv * inv;
        asum += w[l] * std::abs(inv);
      }
      return SecularEval{1.0 - b * sum, b * dsum, 1.0 + b * asum};
    };
  };

  EigenSample sample;
  sample.case_tag = CaseTag::additive;
  sample.eigenvalues.reserve(spec.size());
  if (poles.size() == 1) {
    // 1 - b w / (lambda - a) = 0 in closed form.
    sample.eigenvalues.push_back(poles[0] + b * w[0]);
  } else {
    sample.eigenvalues.push_back(solve_between(poles[0], poles[0] + b, false, poles, make_eval));
  }
  for (std::size_t j = 1; j < poles.size(); ++j) {
    sample.eigenvalues.push_back(solve_between(poles[j], poles[j - 1], true, poles, make_eval));
  }
  for (double a : act.dropped) sample.eigenvalues.push_back(a);
  std::sort(sample.eigenvalues.begin(), sample.eigenvalues.end(), std::greater<>());
  sample.deterministic_part = retained_copies(spec.values(), spec.multiplicities());
  sample.constraint_residual = additive_trace_residual(sample, spec, b);
  return sample;
}

EigenSample projection_roots(const SpectrumSpec& spec, const WeightVector& weights) {
  const ActivePoles act = split_poles(spec.values(), weights);
  const std::span<const double> poles = act.poles;
  const std::span<const double> w = act.weights;

  auto make_eval = [&](std::span<const double> d) {
    return [d, w](double tau) {
      double sum = 0.0;
      double dsum = 0.0;
      double asum = 0.0;
      for (std::size_t l = 0; l < d.size(); ++l) {
        const double inv = 1.0 / (tau - d[l]);
        sum += w[l] * inv;
        dsum += w[l] * inv * inv;
        asum += w[l] * std::abs(inv);
      }
      return SecularEval{-sum, dsum, asum};
    };
  };

  EigenSample sample;
  sample.case_tag = CaseTag::projection;
  for (std::size_t j = 1; j < poles.size(); ++j) {
    sample.eigenvalues.push_back(solve_between(poles[j], poles[j - 1], true, poles, make_eval));
  }
  for (double a : act.dropped) sample.eigenvalues.push_back(a);
  std::sort(sample.eigenvalues.begin(), sample.eigenvalues.end(), std::greater<>());
  sample.deterministic_part.emplace_back(0.0, 1);
  for (const auto& copy : retained_copies(spec.values(), spec.multiplicities())) {
    sample.deterministic_part.push_back(copy);
  }
  sample.constraint_residual = 0.0;
  return sample;
}

EigenSample multiplicative_roots(const AngularSpectrum& spec, const WeightVector& weights,
                                 double phi) {
  if (!(phi > 0.0 && phi < kTwoPi)) {
    throw Error(ErrorCode::InvalidArgument, "phase phi must lie in (0, 2 pi)");
  }
  if (weights.size() != spec.size()) {
    throw Error(ErrorCode::InvalidArgument, "weights and spectrum differ in length");
  }
  std::vector<double> poles;
  std::vector<double> q;
  std::vector<double> dropped;
  for (std::size_t l = 0; l < spec.size(); ++l) {
    if (!(weights[l] >= 0.0)) throw Error(ErrorCode::DegenerateWeight, "negative weight");
    if (weights[l] < kWeightFloor) {
      dropped.push_back(spec.angle(l));
    } else {
      poles.push_back(spec.angle(l));
      q.push_back(weights[l]);
    }
  }
  const double target = cot(0.5 * phi);
  const std::span<const double> qs = q;

  auto make_eval = [&](std::span<const double> d) {
    return [d, qs, target](double tau) {
      double sum = 0.0;
      double dsum = 0.0;
      double asum = std::abs(target);
      for (std::size_t j = 0; j < d.size(); ++j) {
        const double c = cot(0.5 * (tau - d[j]));
        sum += qs[j] * c;
        dsum += 0.5 * qs[j] * (1.0 + c * c);
        asum += qs[j] * std::abs(c);
      }
      return SecularEval{target - sum, dsum, asum};
    };
  };

  // Arc i runs from theta_{i-1} to theta_i with theta_0 = theta_n - 2 pi. The
  // pole list handed to the solver is lifted so both endpoints appear in it.
  EigenSample sample;
  sample.case_tag = CaseTag::multiplicative;
  const std::size_t k = poles.size();
  for (std::size_t i = 0; i < k; ++i) {
    const double lower = i == 0 ? poles[k - 1] - kTwoPi : poles[i - 1];
    const double upper = poles[i];
    std::vector<double> lifted(poles);
    if (i == 0) lifted[k - 1] = lower;
    double psi;
    if (k == 1) {
      psi = solve_between(lower, upper, false, lifted, make_eval);
    } else {
      psi = solve_between(lower, upper, true, lifted, make_eval);
    }
    sample.eigenvalues.push_back(wrap_angle(psi));
  }
  for (double th : dropped) sample.eigenvalues.push_back(th);
  std::sort(sample.eigenvalues.begin(), sample.eigenvalues.end());
  sample.deterministic_part = retained_copies(spec.angles(), spec.multiplicities());
  sample.constraint_residual = phase_residual(sample, spec, phi);
  return sample;
}

// ---------------------------------------------------------------------------
// Residue inversions

WeightVector weights_from_roots_additive(const SpectrumSpec& spec,
                                         std::span<const double> roots, double b) {
  if (!(b > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "additive shift b must be > 0");
  if (!strictly_interlaces_additive(roots, spec, b)) {
    throw Error(ErrorCode::SupportViolation, "roots do not interlace the spectrum");
  }
  const auto a = spec.values();
  const double residual =
      std::accumulate(roots.begin(), roots.end(), 0.0) - spec.distinct_sum() - b;
  if (std::abs(residual) > trace_tolerance(spec, b)) {
    throw Error(ErrorCode::SupportViolation, "roots violate the trace constraint");
  }
  std::vector<double> w(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    double p = -1.0 / b;
    for (std::size_t l = 0; l < a.size(); ++l) {
      p *= a[j] - roots[l];
      if (l != j) p /= a[j] - a[l];
    }
    w[j] = p;
  }
  return WeightVector(std::move(w), 1e-10 + 4.0 * std::abs(residual) / b);
}

WeightVector weights_from_roots_projection(const SpectrumSpec& spec,
                                           std::span<const double> roots) {
  if (!strictly_interlaces_projection(roots, spec)) {
    throw Error(ErrorCode::SupportViolation, "roots do not interlace the spectrum");
  }
  const auto a = spec.values();
  std::vector<double> w(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    double p = 1.0;
    for (std::size_t l = 0; l < a.size(); ++l) {
      if (l < roots.size()) p *= a[j] - roots[l];
      if (l != j) p /= a[j] - a[l];
    }
    w[j] = p;
  }
  return WeightVector(std::move(w), 1e-10);
}

WeightVector weights_from_roots_multiplicative(const AngularSpectrum& spec,
                                               std::span<const double> angles, double phi) {
  if (std::abs(std::sin(0.5 * phi)) < 1e-14) {
    throw Error(ErrorCode::SupportViolation, "t = e^{i phi} equals 1; residues undefined");
  }
  if (!interlaces_cyclically(angles, spec)) {
    throw Error(ErrorCode::SupportViolation, "angles do not interlace the eigenphases");
  }
  const double sum_psi = std::accumulate(angles.begin(), angles.end(), 0.0);
  const double residual = std::abs(wrap_difference(sum_psi - spec.distinct_sum() - phi));
  if (residual > kConstraintTolerance) {
    throw Error(ErrorCode::SupportViolation, "angles violate the phase constraint");
  }
  const auto th = spec.angles();
  const std::complex<double> t_minus_one = chord(phi, 0.0);
  std::vector<double> q(th.size());
  for (std::size_t j = 0; j < th.size(); ++j) {
    std::complex<double> p = -1.0 / (t_minus_one * std::polar(1.0, th[j]));
    for (std::size_t l = 0; l < th.size(); ++l) {
      p *= chord(th[j], angles[l]);
      if (l != j) p /= chord(th[j], th[l]);
    }
    if (std::abs(p.imag()) > 1e-10) {
      throw Error(ErrorCode::NonRealResidue,
                  "residue has imaginary part " + std::to_string(p.imag()));
    }
    q[j] = p.real();
  }
  return WeightVector(std::move(q), 1e-10 + 4.0 * residual);
}

// ---------------------------------------------------------------------------
// Cauchy determinant and Jacobian

double cauchy_double_alternant(std::span<const double> a, std::span<const double> lambda) {
  if (a.size() != lambda.size()) {
    throw Error(ErrorCode::InvalidArgument, "Cauchy matrix must be square");
  }
  const std::size_t m = a.size();
  double num = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j + 1; k < m; ++k) num *= (a[k] - a[j]) * (lambda[j] - lambda[k]);
  }
  double den = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) den *= a[j] - lambda[k];
  }
  return num / den;
}

double jacobian_additive(const SpectrumSpec& spec, std::span<const double> roots, double b) {
  if (!strictly_interlaces_additive(roots, spec, b)) {
    throw Error(ErrorCode::SupportViolation, "roots do not interlace the spectrum");
  }
  const double residual =
      std::accumulate(roots.begin(), roots.end(), 0.0) - spec.distinct_sum() - b;
  if (std::abs(residual) > trace_tolerance(spec, b)) {
    throw Error(ErrorCode::SupportViolation, "roots violate the trace constraint");
  }
  const std::size_t n = spec.size();
  if (n == 1) return 1.0;  // empty determinant
  const auto a = spec.values().first(n - 1);
  const auto lam = roots.first(n - 1);
  const double last = roots[n - 1];
  double scale = 1.0;
  for (std::size_t j = 0; j + 1 < n; ++j) scale *= (lam[j] - last) / (a[j] - last);
  return std::abs(scale * cauchy_double_alternant(a, lam));
}

// ---------------------------------------------------------------------------
// Samplers

EigenSample draw_additive_secular(const SpectrumSpec& spec, double b, Field field, RngState& rng) {
  const auto shapes = spec.dirichlet_shapes(field);
  return additive_roots(spec, dirichlet(shapes, rng), b);
}

EigenSample draw_projection_secular(const SpectrumSpec& spec, Field field, RngState& rng) {
  const auto shapes = spec.dirichlet_shapes(field);
  return projection_roots(spec, dirichlet(shapes, rng));
}

EigenSample draw_multiplicative_secular(const AngularSpectrum& spec, double phi, RngState& rng) {
  const auto shapes = spec.dirichlet_shapes();
  return multiplicative_roots(spec, dirichlet(shapes, rng), phi);
}

}  // namespace rank1horn
