#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rank1horn/randsrc.hpp"
#include "rank1horn/spectra.hpp"

namespace rank1horn {

enum class Method { secular, oracle };

const char* to_string(Method method) noexcept;
Method parse_method(const std::string& text);

// Everything needed to draw one row of a batch.
struct SampleConfig {
  CaseTag case_tag = CaseTag::additive;
  Method method = Method::secular;
  Field field = Field::complex;
  std::optional<SpectrumSpec> spectrum;     // additive, projection, quadform, diag
  std::optional<AngularSpectrum> angles;    // multiplicative
  double b = 0.0;
  double phi = 0.0;
  int p = 0;  // diag: number of leading diagonal entries, 0 means all
};

// Checks that the configuration names a supported combination; throws
// InvalidArgument or UnsupportedCase otherwise.
void validate_config(const SampleConfig& config);

// One output row: the random eigenvalues, angles or diagonal entries.
std::vector<double> draw_row(const SampleConfig& config, RngState& rng);

// Row i is drawn from RngState(seed, stream_base + i), so the result does not
// depend on the number of worker threads.
std::vector<std::vector<double>> sample_batch(const SampleConfig& config, std::size_t count,
                                              std::uint64_t seed, std::uint64_t stream_base = 0,
                                              unsigned threads = 1);

// Header `sample_index,<prefix>_1,...` followed by one row per draw, values
// printed with 17 significant digits.
void write_csv(std::ostream& out, const SampleConfig& config,
               const std::vector<std::vector<double>>& rows);

}  // namespace rank1horn
