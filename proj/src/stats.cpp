#include "rank1horn/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "rank1horn/densities.hpp"
#include "rank1horn/error.hpp"
#include "rank1horn/secular.hpp"

namespace rank1horn {

nlohmann::json to_json(const TestReport& report) {
  return {{"test_name", report.test_name},
          {"statistic", report.statistic},
          {"threshold", report.threshold},
          {"n_samples", report.n_samples},
          {"pass", report.pass},
          {"details", report.details}};
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// A piece of the integration domain in the mapped variable u, with
// x = origin + sign * u^2.
struct Piece {
  double u0;
  double u1;
  double origin;
  double sign;
  double value;
  double error;
};

void evaluate(Piece& p, const std::function<double(double)>& f, double lo, double hi) {
  const double centre = 0.5 * (p.u0 + p.u1);
  const double half = 0.5 * (p.u1 - p.u0);
  auto g = [&](double u) {
    const double x = p.origin + p.sign * u * u;
    // The mapped node can round onto an endpoint; its weight is negligible.
    if (!(x > lo && x < hi)) return 0.0;
    const double v = f(x) * 2.0 * u;
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::TolUnreached, "non-finite integrand at interior node " + std::to_string(x));
    }
    return v;
  };
  const double fc = g(centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double sum = g(centre - dx) + g(centre + dx);
    kronrod += kWgk[static_cast<std::size_t>(j)] * sum;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * sum;
  }
  p.value = kronrod * half;
  p.error = std::abs((kronrod - gauss) * half);
}

}  // namespace

QuadratureResult integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                              double tol, std::span<const double> breakpoints) {
  if (!(lo < hi)) return {};
  constexpr int kMaxPieces = 20000;
  std::vector<double> edges{lo};
  for (double bp : breakpoints) {
    if (bp > lo && bp < hi) edges.push_back(bp);
  }
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double half_width = 0.5 * (edges[i + 1] - edges[i]);
    const double reach = std::sqrt(half_width);
    pieces.push_back({0.0, reach, edges[i], 1.0, 0.0, 0.0});
    pieces.push_back({0.0, reach, edges[i + 1], -1.0, 0.0, 0.0});
  }
  double total_err = 0.0;
  for (auto& p : pieces) {
    evaluate(p, f, lo, hi);
    total_err += p.error;
  }
  while (total_err > tol) {
    if (static_cast<int>(pieces.size()) >= kMaxPieces) {
      throw Error(ErrorCode::TolUnreached,
                  "quadrature error estimate " + std::to_string(total_err) + " above " +
                      std::to_string(tol));
    }
    auto worst = std::max_element(pieces.begin(), pieces.end(),
                                  [](const Piece& x, const Piece& y) { return x.error < y.error; });
    total_err -= worst->error;
    Piece right = *worst;
    const double mid = 0.5 * (worst->u0 + worst->u1);
    if (!(mid > worst->u0 && mid < worst->u1)) {
      throw Error(ErrorCode::TolUnreached, "quadrature interval cannot be split further");
    }
    worst->u1 = mid;
    right.u0 = mid;
    evaluate(*worst, f, lo, hi);
    evaluate(right, f, lo, hi);
    total_err += worst->error + right.error;
    pieces.push_back(right);
  }
  QuadratureResult out;
  for (const auto& p : pieces) {
    out.value += p.value;
    out.error += p.error;
  }
  out.intervals = static_cast<int>(pieces.size());
  return out;
}

double normalization_integral(const Density& density, const Region& region, double tol) {
  if (region.dimension == 1) {
    auto f = [&](double x) {
      const std::array<double, 1> pt{x};
      return density(pt);
    };
    return integrate_1d(f, region.outer.lo, region.outer.hi, tol, region.outer_breakpoints).value;
  }
  if (region.dimension != 2 || !region.inner) {
    throw Error(ErrorCode::InvalidArgument, "normalization_integral supports dimension 1 or 2");
  }
  const double inner_tol = 0.1 * tol / std::max(1.0, region.outer.length());
  auto outer = [&](double x) {
    const Interval in = region.inner(x);
    if (!(in.lo < in.hi)) return 0.0;
    auto g = [&](double y) {
      std::array<double, 2> pt{};
      pt[static_cast<std::size_t>(region.outer_coordinate)] = x;
      pt[static_cast<std::size_t>(1 - region.outer_coordinate)] = y;
      return density(pt);
    };
    return integrate_1d(g, in.lo, in.hi, inner_tol).value;
  };
  return integrate_1d(outer, region.outer.lo, region.outer.hi, 0.5 * tol,
                      region.outer_breakpoints)
      .value;
}

Region additive_region(const SpectrumSpec& spec, double b) {
  const std::size_t n = spec.size();
  const auto a = spec.values();
  Region r;
  if (n == 2) {
    r.dimension = 1;
    r.outer = {std::max(a[0], a[1] + b), a[0] + b};
    return r;
  }
  if (n != 3) throw Error(ErrorCode::UnsupportedCase, "additive_region needs n = 2 or 3");
  // Outer variable lambda_2 in (a_2, a_1); lambda_3 is eliminated by the trace.
  const double c = spec.distinct_sum() + b;
  const double a1 = a[0];
  const double a2 = a[1];
  const double a3 = a[2];
  r.dimension = 2;
  r.outer_coordinate = 1;
  r.outer = {a2, a1};
  r.outer_breakpoints = {a3 + b};
  r.inner = [=](double l2) {
    return Interval{std::max(a1, c - l2 - a2), std::min(a1 + b, c - l2 - a3)};
  };
  return r;
}

Region projection_region(const SpectrumSpec& spec) {
  const std::size_t n = spec.size();
  const auto a = spec.values();
  Region r;
  if (n == 2) {
    r.outer = {a[1], a[0]};
    return r;
  }
  if (n != 3) throw Error(ErrorCode::UnsupportedCase, "projection_region needs n = 2 or 3");
  const double a2 = a[1];
  const double a3 = a[2];
  r.dimension = 2;
  r.outer = {a2, a[0]};
  r.inner = [=](double) { return Interval{a3, a2}; };
  return r;
}

Region spacing_region(double a1, double a2, double b) {
  Region r;
  r.outer = {std::abs(a1 - a2 - b), a1 - a2 + b};
  return r;
}

std::function<double(double)> cdf_from_density(const std::function<double(double)>& pdf,
                                               double lo, double hi, int nodes, double tol) {
  if (!(lo < hi) || nodes < 2) throw Error(ErrorCode::InvalidArgument, "bad CDF grid");
  std::vector<double> grid(static_cast<std::size_t>(nodes));
  std::vector<double> cum(static_cast<std::size_t>(nodes), 0.0);
  const double h = (hi - lo) / (nodes - 1);
  for (int i = 0; i < nodes; ++i) grid[static_cast<std::size_t>(i)] = lo + h * i;
  grid.back() = hi;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    cum[i] = cum[i - 1] + integrate_1d(pdf, grid[i - 1], grid[i], tol).value;
  }
  const double mass = cum.back();
  if (!(mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "density has no mass on the grid");
  for (auto& c : cum) c /= mass;
  return [grid = std::move(grid), cum = std::move(cum), lo, hi, h](double x) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const auto i = std::min(static_cast<std::size_t>((x - lo) / h), grid.size() - 2);
    const double t = (x - grid[i]) / (grid[i + 1] - grid[i]);
    return std::clamp(cum[i] + t * (cum[i + 1] - cum[i]), 0.0, 1.0);
  };
}

double kolmogorov_q(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 1.18) {
    // Small-argument form of the same series (Jacobi theta transform).
    const double y = std::exp(-kPi * kPi / (8.0 * t * t));
    double s = 0.0;
    double yk = y;
    for (int k = 1; k < 50; ++k) {
      s += yk;
      const double next = std::pow(y, (2.0 * k + 1.0) * (2.0 * k + 1.0));
      if (next < 1e-300) break;
      yk = next;
    }
    return std::clamp(1.0 - std::sqrt(kTwoPi) / t * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double ks_scale(double ne) {
  const double r = std::sqrt(ne);
  return r + 0.12 + 0.11 / r;
}

// Distance D at which the asymptotic p-value equals `level`.
double ks_critical(double ne, double level) {
  double lo = 0.0;
  double hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_q(mid) > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / ks_scale(ne);
}

TestReport ks_report(std::string name, double d, double ne, std::size_t n_samples, double level) {
  TestReport r;
  r.test_name = std::move(name);
  r.statistic = d;
  r.threshold = ks_critical(ne, level);
  r.n_samples = n_samples;
  const double p = kolmogorov_q(ks_scale(ne) * d);
  r.pass = p >= level;
  r.details = {{"p_value", p}, {"level", level}};
  return r;
}

}  // namespace

TestReport ks_two_sample(std::span<const double> xs, std::span<const double> ys, double level) {
  if (xs.empty() || ys.empty()) throw Error(ErrorCode::EmptySample, "KS needs two nonempty samples");
  std::vector<double> x(xs.begin(), xs.end());
  std::vector<double> y(ys.begin(), ys.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  auto r = ks_report("ks_two_sample", d, n * m / (n + m), x.size() + y.size(), level);
  r.details["n_x"] = x.size();
  r.details["n_y"] = y.size();
  return r;
}

TestReport ks_one_sample(std::span<const double> xs, const std::function<double(double)>& cdf,
                         double level) {
  if (xs.empty()) throw Error(ErrorCode::EmptySample, "KS needs a nonempty sample");
  std::vector<double> x(xs.begin(), xs.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return ks_report("ks_one_sample", d, n, x.size(), level);
}

TestReport chi_square(std::span<const double> observed, std::span<const double> probabilities,
                      double level) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw Error(ErrorCode::InvalidArgument, "chi-square needs matching nonempty cell lists");
  }
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorCode::EmptySample, "chi-square needs observations");
  const double mass = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  if (std::abs(mass - 1.0) > 1e-3) {
    throw Error(ErrorCode::InvalidArgument,
                "cell probabilities sum to " + std::to_string(mass) + ", not 1");
  }
  std::vector<double> obs;
  std::vector<double> exp;
  double o_acc = 0.0;
  double e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += observed[i];
    e_acc += total * probabilities[i] / mass;
    if (e_acc >= 5.0) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (obs.empty()) {
    obs.push_back(o_acc);
    exp.push_back(e_acc);
  } else {
    obs.back() += o_acc;
    exp.back() += e_acc;
  }
  double stat = 0.0;
  for (std::size_t k = 0; k < obs.size(); ++k) {
    stat += (obs[k] - exp[k]) * (obs[k] - exp[k]) / exp[k];
  }
  TestReport r;
  r.test_name = "chi_square";
  r.statistic = stat;
  r.n_samples = static_cast<std::size_t>(total);
  const double dof = static_cast<double>(obs.size()) - 1.0;
  if (dof < 1.0) {
    r.threshold = 0.0;
    r.pass = stat == 0.0;
    r.details = {{"cells", obs.size()}};
    return r;
  }
  const double p = std::isfinite(stat) ? boost::math::gamma_q(0.5 * dof, 0.5 * stat) : 0.0;
  r.threshold = 2.0 * boost::math::gamma_q_inv(0.5 * dof, level);
  r.pass = p >= level;
  r.details = {{"p_value", p}, {"level", level}, {"cells", obs.size()}, {"dof", dof}};
  return r;
}

namespace {

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

template <typename Trial>
TestReport run_trials(std::string name, std::size_t n_trials, double tol, Trial trial) {
  TestReport r;
  r.test_name = std::move(name);
  r.threshold = tol;
  r.n_samples = n_trials;
  double worst = 0.0;
  std::size_t failures = 0;
  std::string first_error;
  for (std::size_t t = 0; t < n_trials; ++t) {
    try {
      worst = std::max(worst, trial());
    } catch (const Error& e) {
      if (failures++ == 0) first_error = e.what();
    }
  }
  r.statistic = failures ? std::numeric_limits<double>::infinity() : worst;
  r.pass = failures == 0 && worst <= tol;
  r.details = {{"max_error", worst}, {"failures", failures}};
  if (failures) r.details["first_error"] = first_error;
  return r;
}

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

}  // namespace

TestReport roundtrip_additive(const SpectrumSpec& spec, double b, std::size_t n_trials,
                              RngState& rng, double tol) {
  const auto shapes = ones(spec.size());
  return run_trials("roundtrip_additive", n_trials, tol, [&] {
    const WeightVector w = dirichlet(shapes, rng);
    const EigenSample s = additive_roots(spec, w, b);
    const WeightVector back = weights_from_roots_additive(spec, s.eigenvalues, b);
    return max_abs_diff(w.weights(), back.weights());
  });
}

TestReport roundtrip_projection(const SpectrumSpec& spec, std::size_t n_trials, RngState& rng,
                                double tol) {
  const auto shapes = ones(spec.size());
  return run_trials("roundtrip_projection", n_trials, tol, [&] {
    const WeightVector w = dirichlet(shapes, rng);
    const EigenSample s = projection_roots(spec, w);
    const WeightVector back = weights_from_roots_projection(spec, s.eigenvalues);
    return max_abs_diff(w.weights(), back.weights());
  });
}

TestReport roundtrip_multiplicative(const AngularSpectrum& spec, double phi,
                                    std::size_t n_trials, RngState& rng, double tol) {
  const auto shapes = ones(spec.size());
  return run_trials("roundtrip_multiplicative", n_trials, tol, [&] {
    const WeightVector w = dirichlet(shapes, rng);
    const EigenSample s = multiplicative_roots(spec, w, phi);
    const WeightVector back = weights_from_roots_multiplicative(spec, s.eigenvalues, phi);
    return max_abs_diff(w.weights(), back.weights());
  });
}

TestReport change_of_variables_check(const SpectrumSpec& spec, double b, std::size_t n_trials,
                                     RngState& rng, double tol) {
  if (!spec.unit_multiplicities()) {
    throw Error(ErrorCode::UnsupportedCase, "change of variables check needs a simple spectrum");
  }
  const std::size_t n = spec.size();
  const auto shapes = ones(n);
  const double gamma_n = std::tgamma(static_cast<double>(n));
  return run_trials("change_of_variables", n_trials, tol, [&] {
    const EigenSample s = additive_roots(spec, dirichlet(shapes, rng), b);
    const std::span<const double> roots = s.eigenvalues;
    const WeightVector w = weights_from_roots_additive(spec, roots, b);
    double lhs = gamma_n * jacobian_additive(spec, roots, b);
    for (std::size_t j = 0; j + 1 < n; ++j) lhs *= w[j];
    const double rhs = pdf_additive(spec, b, roots.first(n - 1));
    return std::abs(lhs - rhs) / std::abs(rhs);
  });
}

TestReport constraint_report(std::string name, std::span<const EigenSample> samples,
                             const std::function<SampleCheck(const EigenSample&)>& check) {
  TestReport r;
  r.test_name = std::move(name);
  r.n_samples = samples.size();
  std::size_t bad_interlace = 0;
  std::size_t bad_constraint = 0;
  double worst_ratio = 0.0;
  double worst_residual = 0.0;
  std::size_t failures = 0;
  for (const auto& s : samples) {
    const SampleCheck c = check(s);
    if (!c.ok()) ++failures;
    if (!c.interlaced) ++bad_interlace;
    if (!(c.residual < c.tolerance)) ++bad_constraint;
    worst_residual = std::max(worst_residual, c.residual);
    worst_ratio = std::max(worst_ratio, c.residual / c.tolerance);
  }
  r.statistic = static_cast<double>(failures);
  r.threshold = 0.0;
  r.pass = failures == 0;
  r.details = {{"interlacing_failures", bad_interlace},
               {"constraint_failures", bad_constraint},
               {"max_residual", worst_residual},
               {"max_residual_over_tolerance", worst_ratio}};
  return r;
}

}  // namespace rank1horn
