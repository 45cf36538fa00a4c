#include "rank1horn/densities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "rank1horn/error.hpp"

namespace rank1horn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": expected " +
                                                std::to_string(want) + " coordinates, got " +
                                                std::to_string(got));
  }
}

// log Gamma(sum m) - sum log Gamma(m)
double log_dirichlet_constant(std::span<const double> mult) {
  double total = 0.0;
  double denom = 0.0;
  for (double m : mult) {
    total += m;
    denom += std::lgamma(m);
  }
  return std::lgamma(total) - denom;
}

// Closed chain check. Returns +1 strictly inside, 0 on the boundary, -1 outside.
int projection_chain(std::span<const double> a, std::span<const double> lambda) {
  int state = 1;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (lambda[j] > a[j] || lambda[j] < a[j + 1]) return -1;
    if (lambda[j] == a[j] || lambda[j] == a[j + 1]) state = 0;
  }
  return state;
}

int additive_chain(std::span<const double> a, std::span<const double> lambda) {
  int state = 1;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (lambda[j] < a[j]) return -1;
    if (j > 0 && lambda[j] > a[j - 1]) return -1;
    if (lambda[j] == a[j] || (j > 0 && lambda[j] == a[j - 1])) state = 0;
  }
  return state;
}

double boundary_value(std::span<const double> mult) {
  const bool singular = std::any_of(mult.begin(), mult.end(), [](double m) { return m < 1.0; });
  return singular ? kInf : 0.0;
}

// prod_{j<k} |a_j - a_k|^{m_j + m_k - 1}
double log_spectrum_factor(std::span<const double> a, std::span<const double> mult) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t k = j + 1; k < a.size(); ++k) {
      s += (mult[j] + mult[k] - 1.0) * std::log(std::abs(a[j] - a[k]));
    }
  }
  return s;
}

// prod_{j,p} |lambda_j - a_p|^{m_p - 1}
double log_cross_factor(std::span<const double> a, std::span<const double> mult,
                        std::span<const double> lambda) {
  double s = 0.0;
  for (double l : lambda) {
    for (std::size_t p = 0; p < a.size(); ++p) {
      if (mult[p] != 1.0) s += (mult[p] - 1.0) * std::log(std::abs(l - a[p]));
    }
  }
  return s;
}

double log_abs_vandermonde(std::span<const double> u) {
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    for (std::size_t k = j + 1; k < u.size(); ++k) s += std::log(std::abs(u[k] - u[j]));
  }
  return s;
}

std::vector<double> unit_mult(std::size_t n, double m) { return std::vector<double>(n, m); }

std::vector<double> int_mult(std::span<const int> m) { return {m.begin(), m.end()}; }

double chordal(double x, double y) { return 2.0 * std::abs(std::sin(0.5 * (x - y))); }

}  // namespace

double vandermonde(std::span<const double> u) {
  double p = 1.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    for (std::size_t k = j + 1; k < u.size(); ++k) p *= u[k] - u[j];
  }
  return p;
}

double pdf_projection(const SpectrumSpec& spec, std::span<const double> lambda) {
  const auto a = spec.values();
  const std::size_t n = a.size();
  require_size(lambda.size(), n - 1, "pdf_projection");
  if (projection_chain(a, lambda) != 1) return 0.0;
  return std::tgamma(static_cast<double>(n)) * std::abs(vandermonde(lambda)) /
         std::abs(vandermonde(a));
}

double pdf_additive(const SpectrumSpec& spec, double b, std::span<const double> lambda_free) {
  if (!(b > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "additive shift b must be > 0");
  const auto a = spec.values();
  const std::size_t n = a.size();
  require_size(lambda_free.size(), n - 1, "pdf_additive");
  std::vector<double> lam(lambda_free.begin(), lambda_free.end());
  lam.push_back(spec.distinct_sum() + b -
                std::accumulate(lambda_free.begin(), lambda_free.end(), 0.0));
  if (additive_chain(a, lam) != 1) return 0.0;
  return std::tgamma(static_cast<double>(n)) * std::pow(b, -static_cast<double>(n - 1)) *
         std::abs(vandermonde(lam)) / std::abs(vandermonde(a));
}

double pdf_projection_weighted(std::span<const double> values, std::span<const double> mult,
                               std::span<const double> lambda) {
  require_size(mult.size(), values.size(), "pdf_projection_weighted multiplicities");
  require_size(lambda.size(), values.size() - 1, "pdf_projection_weighted");
  const int chain = projection_chain(values, lambda);
  if (chain < 0) return 0.0;
  if (chain == 0) return boundary_value(mult);
  const double log_value = log_dirichlet_constant(mult) + log_abs_vandermonde(lambda) -
                           log_spectrum_factor(values, mult) +
                           log_cross_factor(values, mult, lambda);
  return std::exp(log_value);
}

double pdf_additive_weighted(std::span<const double> values, std::span<const double> mult,
                             double b, std::span<const double> lambda_free) {
  if (!(b > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "additive shift b must be > 0");
  require_size(mult.size(), values.size(), "pdf_additive_weighted multiplicities");
  require_size(lambda_free.size(), values.size() - 1, "pdf_additive_weighted");
  std::vector<double> lam(lambda_free.begin(), lambda_free.end());
  lam.push_back(std::accumulate(values.begin(), values.end(), 0.0) + b -
                std::accumulate(lambda_free.begin(), lambda_free.end(), 0.0));
  const int chain = additive_chain(values, lam);
  if (chain < 0) return 0.0;
  if (chain == 0) return boundary_value(mult);
  const double total = std::accumulate(mult.begin(), mult.end(), 0.0);
  const double log_value = log_dirichlet_constant(mult) - (total - 1.0) * std::log(b) +
                           log_abs_vandermonde(lam) - log_spectrum_factor(values, mult) +
                           log_cross_factor(values, mult, lam);
  return std::exp(log_value);
}

double pdf_projection_degenerate(const SpectrumSpec& spec, std::span<const double> lambda) {
  const auto m = int_mult(spec.multiplicities());
  return pdf_projection_weighted(spec.values(), m, lambda);
}

double pdf_additive_degenerate(const SpectrumSpec& spec, double b,
                               std::span<const double> lambda_free) {
  const auto m = int_mult(spec.multiplicities());
  return pdf_additive_weighted(spec.values(), m, b, lambda_free);
}

double pdf_projection_real(const SpectrumSpec& spec, std::span<const double> lambda) {
  const auto m = unit_mult(spec.size(), 0.5);
  return pdf_projection_weighted(spec.values(), m, lambda);
}

double pdf_additive_real(const SpectrumSpec& spec, double b, std::span<const double> lambda_free) {
  const auto m = unit_mult(spec.size(), 0.5);
  return pdf_additive_weighted(spec.values(), m, b, lambda_free);
}

double pdf_spacing_n2(double a1, double a2, double b, double s) {
  if (!(a1 > a2)) throw Error(ErrorCode::OrderViolation, "pdf_spacing_n2 needs a1 > a2");
  if (!(b > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "additive shift b must be > 0");
  const double s_max = a1 - a2 + b;
  const double s_min = a2 - a1 + b;
  const double lo = std::abs(s_min);
  if (s < lo || s > s_max) return 0.0;
  if (s == s_max) return kInf;
  if (s == lo) return lo == 0.0 ? 2.0 / (kPi * s_max) : kInf;
  return (2.0 / kPi) * s / std::sqrt((s * s - s_min * s_min) * (s_max * s_max - s * s));
}

double pdf_multiplicative(const AngularSpectrum& spec, double phi,
                          std::span<const double> psi_free) {
  const std::size_t n = spec.size();
  require_size(psi_free.size(), n - 1, "pdf_multiplicative");
  for (std::size_t j = 0; j < psi_free.size(); ++j) {
    if (psi_free[j] < 0.0 || psi_free[j] >= kTwoPi) return 0.0;
    if (j > 0 && !(psi_free[j] > psi_free[j - 1])) return 0.0;
  }
  std::vector<double> psi(psi_free.begin(), psi_free.end());
  psi.push_back(wrap_angle(phi + spec.distinct_sum() -
                           std::accumulate(psi_free.begin(), psi_free.end(), 0.0)));
  if (n > 1 && !(psi.back() > psi[n - 2])) return 0.0;
  if (!interlaces_cyclically(psi, spec)) return 0.0;

  const auto th = spec.angles();
  const auto m = int_mult(spec.multiplicities());
  const double total = std::accumulate(m.begin(), m.end(), 0.0);
  double log_value = log_dirichlet_constant(m) - (total - 1.0) * std::log(chordal(phi, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      log_value += std::log(chordal(psi[k], psi[j]));
      log_value -= (m[j] + m[k] - 1.0) * std::log(chordal(th[k], th[j]));
    }
  }
  // The cross-factor exponent follows the multiplicity of the fixed phase.
  for (std::size_t j = 0; j < n; ++j) {
    if (m[j] == 1.0) continue;
    for (std::size_t p = 0; p < n; ++p) log_value += (m[j] - 1.0) * std::log(chordal(th[j], psi[p]));
  }
  return std::exp(log_value);
}

double hciz(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "hciz needs two nonempty lists of equal length");
  }
  for (auto u : {x, y}) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (std::abs(u[j] - u[k]) < 1e-8) {
          throw Error(ErrorCode::NearConfluent, "hciz arguments closer than 1e-8");
        }
      }
    }
  }
  Eigen::MatrixXd e(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) e(j, k) = std::exp(x[j] * y[k]);
  }
  double prefactor = 1.0;
  for (std::size_t j = 1; j <= n; ++j) prefactor *= std::tgamma(static_cast<double>(j));
  const double det = n == 1 ? e(0, 0) : e.fullPivLu().determinant();
  return prefactor * det / (vandermonde(x) * vandermonde(y));
}

double pdf_quadratic_form(std::span<const double> b, double x) {
  const std::size_t n = b.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "quadratic form needs n >= 2");
  const auto [lo_it, hi_it] = std::minmax_element(b.begin(), b.end());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      if (std::abs(b[j] - b[k]) <= kMergeTolerance * std::max(1.0, std::abs(b[j]))) {
        throw Error(ErrorCode::DuplicateEigenvalue, "quadratic form needs distinct eigenvalues");
      }
    }
  }
  if (!(x > *lo_it && x < *hi_it)) return 0.0;

  Eigen::MatrixXd mat(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double power = 1.0;
    for (std::size_t r = 0; r + 1 < n; ++r) {
      mat(r, j) = power;
      power *= b[j];
    }
    const double d = b[j] - x;
    const double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    double h = sign;
    for (std::size_t r = 2; r < n; ++r) h *= d;
    mat(n - 1, j) = h;
  }
  const double value =
      0.5 * static_cast<double>(n - 1) * mat.fullPivLu().determinant() / vandermonde(b);
  return std::max(0.0, value);
}

double pdf_heckman_n3(std::span<const double> b, std::span<const double> x_free) {
  require_size(b.size(), 3, "pdf_heckman_n3 eigenvalues");
  require_size(x_free.size(), 2, "pdf_heckman_n3");
  std::array<double, 3> s{b[0], b[1], b[2]};
  std::sort(s.begin(), s.end(), std::greater<>());
  const double b1 = s[0];
  const double b2 = s[1];
  const double b3 = s[2];
  if (!(b1 - b2 > kMergeTolerance * std::max(1.0, std::abs(b1))) ||
      !(b2 - b3 > kMergeTolerance * std::max(1.0, std::abs(b2)))) {
    throw Error(ErrorCode::DuplicateEigenvalue, "pdf_heckman_n3 needs distinct eigenvalues");
  }
  const double x1 = x_free[0];
  const double x2 = x_free[1];
  const double x3 = b1 + b2 + b3 - x1 - x2;
  if (!(x3 < x2 && x2 < x1)) return 0.0;

  double bracket = 0.0;
  if (b2 < x3 && x1 < b1) bracket += b2 - b3;
  if (b2 < x2 && x1 < b1 && b3 < x3 && x3 < b2) bracket += x3 - b3;
  if (b2 < x1 && x1 < b1 && b3 < x3 && x2 < b2) bracket += b1 - x1;
  if (b3 < x3 && x1 < b2) bracket += b1 - b2;
  return 12.0 * bracket / ((b1 - b2) * (b1 - b3) * (b2 - b3));
}

}  // namespace rank1horn
