#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "rank1horn/randsrc.hpp"
#include "rank1horn/spectra.hpp"

namespace testing {

// Descending spectrum of n values with consecutive gaps of at least min_gap.
inline std::vector<double> random_spectrum(int n, double min_gap, rank1horn::RngState& rng) {
  std::vector<double> a(static_cast<std::size_t>(n));
  double x = 4.0 * rng.uniform() - 2.0;
  for (auto& v : a) {
    v = x;
    x -= min_gap + rng.uniform();
  }
  return a;
}

// Increasing angles in [0, 2 pi) with cyclic gaps of at least min_gap.
inline std::vector<double> random_angles(int n, double min_gap, rank1horn::RngState& rng) {
  std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  const auto w = rank1horn::dirichlet(ones, rng);
  const double spare = rank1horn::kTwoPi - n * min_gap;
  std::vector<double> out;
  double x = rank1horn::kTwoPi * rng.uniform();
  for (int i = 0; i < n; ++i) {
    out.push_back(rank1horn::wrap_angle(x));
    x += min_gap + spare * w[static_cast<std::size_t>(i)];
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double rel_err(double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); }

}  // namespace testing
