#include "rank1horn/batch.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <thread>

#include "rank1horn/error.hpp"
#include "rank1horn/oracle.hpp"
#include "rank1horn/secular.hpp"

namespace rank1horn {

const char* to_string(Method method) noexcept {
  return method == Method::secular ? "secular" : "oracle";
}

Method parse_method(const std::string& text) {
  if (text == "secular") return Method::secular;
  if (text == "oracle") return Method::oracle;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + text + "'");
}

namespace {

std::vector<double> expanded_values(const SpectrumSpec& spec) {
  std::vector<double> out;
  for (std::size_t l = 0; l < spec.size(); ++l) {
    out.insert(out.end(), static_cast<std::size_t>(spec.multiplicity(l)), spec.value(l));
  }
  return out;
}

std::size_t row_width(const SampleConfig& c) {
  switch (c.case_tag) {
    case CaseTag::additive: return c.spectrum->size();
    case CaseTag::projection: return c.spectrum->size() - 1;
    case CaseTag::multiplicative: return c.angles->size();
    case CaseTag::quadratic_form: return 1;
    case CaseTag::diagonal_entries:
      return c.p > 0 ? static_cast<std::size_t>(c.p)
                     : static_cast<std::size_t>(c.spectrum->total_dim());
  }
  return 0;
}

const char* column_prefix(CaseTag tag) {
  switch (tag) {
    case CaseTag::multiplicative: return "angle";
    case CaseTag::quadratic_form:
    case CaseTag::diagonal_entries: return "x";
    default: return "eig";
  }
}

}  // namespace

void validate_config(const SampleConfig& c) {
  if (c.case_tag == CaseTag::multiplicative) {
    if (!c.angles) throw Error(ErrorCode::InvalidArgument, "multiplicative case needs angles");
    if (c.field == Field::real) {
      throw Error(ErrorCode::UnsupportedCase, "multiplicative case is complex only");
    }
    if (!(c.phi > 0.0 && c.phi < kTwoPi)) {
      throw Error(ErrorCode::InvalidArgument, "phi must lie in (0, 2 pi)");
    }
    return;
  }
  if (!c.spectrum) throw Error(ErrorCode::InvalidArgument, "a spectrum is required");
  switch (c.case_tag) {
    case CaseTag::additive:
      if (!(c.b > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "b must be > 0");
      break;
    case CaseTag::projection: break;
    case CaseTag::quadratic_form:
      if (c.field == Field::real) {
        throw Error(ErrorCode::UnsupportedCase, "quadratic form sampling is complex only");
      }
      break;
    case CaseTag::diagonal_entries:
      if (c.method != Method::oracle) {
        throw Error(ErrorCode::UnsupportedCase, "diagonal entries are sampled by the oracle only");
      }
      if (c.field == Field::real) {
        throw Error(ErrorCode::UnsupportedCase, "diagonal entries are sampled over U(n) only");
      }
      if (c.p < 0 || c.p > c.spectrum->total_dim()) {
        throw Error(ErrorCode::InvalidArgument, "p must lie in [1, N]");
      }
      break;
    default: break;
  }
}

std::vector<double> draw_row(const SampleConfig& c, RngState& rng) {
  const bool secular = c.method == Method::secular;
  switch (c.case_tag) {
    case CaseTag::additive:
      return (secular ? draw_additive_secular(*c.spectrum, c.b, c.field, rng)
                      : sample_additive_matrix(*c.spectrum, c.b, c.field, rng))
          .eigenvalues;
    case CaseTag::projection:
      return (secular ? draw_projection_secular(*c.spectrum, c.field, rng)
                      : sample_projection_matrix(*c.spectrum, c.field, rng))
          .eigenvalues;
    case CaseTag::multiplicative:
      return (secular ? draw_multiplicative_secular(*c.angles, c.phi, rng)
                      : sample_multiplicative_matrix(*c.angles, c.phi, rng))
          .eigenvalues;
    case CaseTag::quadratic_form: {
      if (secular) {
        const WeightVector w = dirichlet(c.spectrum->dirichlet_shapes(Field::complex), rng);
        double x = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) x += w[j] * c.spectrum->value(j);
        return {x};
      }
      const auto b = expanded_values(*c.spectrum);
      return {sample_quadratic_form(b, rng)};
    }
    case CaseTag::diagonal_entries: {
      const auto b = expanded_values(*c.spectrum);
      return sample_diagonal_entries(b, static_cast<int>(row_width(c)), rng);
    }
  }
  throw Error(ErrorCode::UnsupportedCase, "unknown case");
}

std::vector<std::vector<double>> sample_batch(const SampleConfig& config, std::size_t count,
                                              std::uint64_t seed, std::uint64_t stream_base,
                                              unsigned threads) {
  validate_config(config);
  std::vector<std::vector<double>> rows(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        RngState rng(seed, stream_base + i);
        rows[i] = draw_row(config, rng);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned k = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (k == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  // Report the failure with the smallest index, whatever the scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void write_csv(std::ostream& out, const SampleConfig& config,
               const std::vector<std::vector<double>>& rows) {
  const std::size_t width = row_width(config);
  const char* prefix = column_prefix(config.case_tag);
  out << "sample_index";
  for (std::size_t k = 1; k <= width; ++k) out << ',' << prefix << '_' << k;
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i;
    for (double v : rows[i]) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
      out << ',';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

}  // namespace rank1horn
