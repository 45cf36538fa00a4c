#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rank1horn/batch.hpp"
#include "rank1horn/densities.hpp"
#include "rank1horn/error.hpp"
#include "rank1horn/oracle.hpp"
#include "rank1horn/secular.hpp"
#include "rank1horn/stats.hpp"

namespace rank1horn {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitVerification = 4;

// Streams for oracle draws in internally generated comparisons, far from
// the secular ones.
constexpr std::uint64_t kOracleStreamOffset = std::uint64_t{1} << 40;

std::string format_number(double v, int digits) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

// Inline JSON when the argument looks like an object, a file path otherwise.
std::string load_json_text(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return arg;
  std::ifstream in(arg);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read spectrum file '" + arg + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Options {
  std::string case_name;
  std::string spectrum;
  double b = 0.0;
  double phi = 0.0;
  std::string field = "complex";
  std::string method;
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;
  std::uint64_t streams = 0;
  unsigned threads = 1;
  std::string out = "-";
  int p = 0;
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("RANK1HORN_SEED")) {
    std::uint64_t v = 0;
    const std::string s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw Error(ErrorCode::InvalidArgument, "RANK1HORN_SEED is not an unsigned integer");
    }
    return v;
  }
  return 0;
}

SampleConfig make_config(const Options& o) {
  SampleConfig c;
  c.case_tag = parse_case_tag(o.case_name);
  c.method = parse_method(o.method.empty() ? "secular" : o.method);
  c.field = parse_field(o.field);
  c.b = o.b;
  c.phi = o.phi;
  c.p = o.p;
  if (o.spectrum.empty()) throw Error(ErrorCode::InvalidArgument, "--spectrum is required");
  const std::string text = load_json_text(o.spectrum);
  if (c.case_tag == CaseTag::multiplicative) {
    c.angles = angular_spectrum_from_json(text);
  } else {
    const bool any_order =
        c.case_tag == CaseTag::quadratic_form || c.case_tag == CaseTag::diagonal_entries;
    c.spectrum = spectrum_from_json(text, any_order);
  }
  validate_config(c);
  return c;
}

int cmd_sample(const Options& o, std::ostream& out) {
  const SampleConfig config = make_config(o);
  const auto rows = sample_batch(config, o.n, resolve_seed(o), o.streams, o.threads);
  if (o.out == "-") {
    write_csv(out, config, rows);
    return kExitOk;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot open '" + o.out + "' for writing");
  write_csv(file, config, rows);
  return kExitOk;
}

// --- density ---------------------------------------------------------------

int cmd_density(const Options& o, const std::vector<double>& at, std::ostream& out) {
  if (o.spectrum.empty()) throw Error(ErrorCode::InvalidArgument, "--spectrum is required");
  const std::string text = load_json_text(o.spectrum);
  std::string name = o.case_name;
  const bool real = parse_field(o.field) == Field::real;
  if (real && (name == "additive" || name == "projection")) name += "-real";

  double value = 0.0;
  if (name == "additive") {
    const SpectrumSpec s = spectrum_from_json(text);
    value = s.unit_multiplicities() ? pdf_additive(s, o.b, at) : pdf_additive_degenerate(s, o.b, at);
  } else if (name == "additive-real") {
    value = pdf_additive_real(spectrum_from_json(text), o.b, at);
  } else if (name == "projection") {
    const SpectrumSpec s = spectrum_from_json(text);
    value = s.unit_multiplicities() ? pdf_projection(s, at) : pdf_projection_degenerate(s, at);
  } else if (name == "projection-real") {
    value = pdf_projection_real(spectrum_from_json(text), at);
  } else if (name == "spacing") {
    const SpectrumSpec s = spectrum_from_json(text);
    if (s.size() != 2 || at.size() != 1) {
      throw Error(ErrorCode::InvalidArgument, "spacing needs two eigenvalues and one point");
    }
    value = pdf_spacing_n2(s.value(0), s.value(1), o.b, at[0]);
  } else if (name == "multiplicative") {
    value = pdf_multiplicative(angular_spectrum_from_json(text), o.phi, at);
  } else if (name == "quadform") {
    const SpectrumSpec s = spectrum_from_json(text, true);
    if (at.size() != 1) throw Error(ErrorCode::InvalidArgument, "quadform takes one point");
    value = pdf_quadratic_form(s.values(), at[0]);
  } else if (name == "heckman") {
    const SpectrumSpec s = spectrum_from_json(text, true);
    value = pdf_heckman_n3(s.values(), at);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown density case '" + o.case_name + "'");
  }
  out << format_number(value, 15) << '\n';
  return kExitOk;
}

// --- verify ----------------------------------------------------------------

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // without sample_index
};

Csv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  Csv csv;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidArgument, "'" + path + "' is empty");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) csv.header.push_back(cell);
  }
  if (csv.header.empty() || csv.header.front() != "sample_index") {
    throw Error(ErrorCode::InvalidArgument, "'" + path + "' is not a sample CSV");
  }
  csv.columns.resize(csv.header.size() - 1);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    for (auto& col : csv.columns) {
      if (!std::getline(ss, cell, ',')) {
        throw Error(ErrorCode::InvalidArgument, "short row in '" + path + "'");
      }
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "bad number '" + cell + "'");
      col.push_back(v);
    }
  }
  return csv;
}

std::vector<std::vector<double>> transpose(const std::vector<std::vector<double>>& rows,
                                           std::size_t width) {
  std::vector<std::vector<double>> cols(width);
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < width && k < r.size(); ++k) cols[k].push_back(r[k]);
  }
  return cols;
}

std::vector<TestReport> verify_ks(const Options& o, const std::vector<std::string>& files,
                                  double level) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> xs;
  std::vector<std::vector<double>> ys;
  if (files.size() == 2) {
    Csv a = read_csv(files[0]);
    Csv b = read_csv(files[1]);
    if (a.header != b.header) throw Error(ErrorCode::InvalidArgument, "CSV headers differ");
    names.assign(a.header.begin() + 1, a.header.end());
    xs = std::move(a.columns);
    ys = std::move(b.columns);
  } else if (files.empty()) {
    Options so = o;
    so.method = "secular";
    SampleConfig sc = make_config(so);
    SampleConfig oc = sc;
    oc.method = Method::oracle;
    const std::size_t n = o.n ? o.n : 10000;
    const std::uint64_t seed = resolve_seed(o);
    const auto sr = sample_batch(sc, n, seed, o.streams, o.threads);
    const auto orr = sample_batch(oc, n, seed, o.streams + kOracleStreamOffset, o.threads);
    const std::size_t width = sr.empty() ? 0 : sr.front().size();
    xs = transpose(sr, width);
    ys = transpose(orr, width);
    for (std::size_t k = 0; k < width; ++k) names.push_back("column_" + std::to_string(k + 1));
  } else {
    throw Error(ErrorCode::InvalidArgument, "ks takes either no files or exactly two");
  }
  std::vector<TestReport> reports;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    TestReport r = ks_two_sample(xs[k], ys[k], level);
    r.test_name = "ks:" + names[k];
    reports.push_back(std::move(r));
  }
  return reports;
}

TestReport verify_normalization(const Options& o, double tol) {
  const std::string text = load_json_text(o.spectrum);
  const bool real = parse_field(o.field) == Field::real;
  const SpectrumSpec s = spectrum_from_json(text);
  Density density;
  Region region;
  if (o.case_name == "additive") {
    region = additive_region(s, o.b);
    density = [&](std::span<const double> x) {
      return real ? pdf_additive_real(s, o.b, x) : pdf_additive(s, o.b, x);
    };
  } else if (o.case_name == "projection") {
    region = projection_region(s);
    density = [&](std::span<const double> x) {
      return real ? pdf_projection_real(s, x) : pdf_projection(s, x);
    };
  } else if (o.case_name == "spacing") {
    if (s.size() != 2) throw Error(ErrorCode::InvalidArgument, "spacing needs two eigenvalues");
    region = spacing_region(s.value(0), s.value(1), o.b);
    density = [&](std::span<const double> x) {
      return pdf_spacing_n2(s.value(0), s.value(1), o.b, x[0]);
    };
  } else {
    throw Error(ErrorCode::UnsupportedCase,
                "normalization supports additive, projection and spacing");
  }
  const double integral = normalization_integral(density, region, 0.01 * tol);
  TestReport r;
  r.test_name = "normalization:" + o.case_name;
  r.statistic = std::abs(integral - 1.0);
  r.threshold = tol;
  r.pass = r.statistic <= tol;
  r.details = {{"integral", integral}};
  return r;
}

TestReport verify_roundtrip(const Options& o) {
  const std::string text = load_json_text(o.spectrum);
  RngState rng(resolve_seed(o), o.streams);
  const std::size_t n = o.n ? o.n : 1000;
  const CaseTag tag = parse_case_tag(o.case_name);
  switch (tag) {
    case CaseTag::additive: return roundtrip_additive(spectrum_from_json(text), o.b, n, rng);
    case CaseTag::projection: return roundtrip_projection(spectrum_from_json(text), n, rng);
    case CaseTag::multiplicative:
      return roundtrip_multiplicative(angular_spectrum_from_json(text), o.phi, n, rng);
    default: throw Error(ErrorCode::UnsupportedCase, "no round trip for this case");
  }
}

std::vector<TestReport> verify_constraints(const Options& o) {
  const SampleConfig base = make_config(o);
  const std::size_t n = o.n ? o.n : 10000;
  const std::uint64_t seed = resolve_seed(o);
  std::vector<Method> methods;
  if (o.method.empty()) {
    methods = {Method::secular, Method::oracle};
  } else {
    methods = {parse_method(o.method)};
  }
  std::vector<TestReport> reports;
  for (Method m : methods) {
    std::vector<EigenSample> samples;
    samples.reserve(n);
    const std::uint64_t streams = o.streams + (m == Method::oracle ? kOracleStreamOffset : 0);
    for (std::size_t i = 0; i < n; ++i) {
      RngState rng(seed, streams + i);
      const bool sec = m == Method::secular;
      switch (base.case_tag) {
        case CaseTag::additive:
          samples.push_back(sec ? draw_additive_secular(*base.spectrum, base.b, base.field, rng)
                                : sample_additive_matrix(*base.spectrum, base.b, base.field, rng));
          break;
        case CaseTag::projection:
          samples.push_back(sec ? draw_projection_secular(*base.spectrum, base.field, rng)
                                : sample_projection_matrix(*base.spectrum, base.field, rng));
          break;
        case CaseTag::multiplicative:
          samples.push_back(sec ? draw_multiplicative_secular(*base.angles, base.phi, rng)
                                : sample_multiplicative_matrix(*base.angles, base.phi, rng));
          break;
        default: throw Error(ErrorCode::UnsupportedCase, "constraints apply to eigenvalue cases");
      }
    }
    std::function<SampleCheck(const EigenSample&)> check;
    switch (base.case_tag) {
      case CaseTag::additive:
        check = [&](const EigenSample& s) { return check_additive_sample(s, *base.spectrum, base.b); };
        break;
      case CaseTag::projection:
        check = [&](const EigenSample& s) { return check_projection_sample(s, *base.spectrum); };
        break;
      default:
        check = [&](const EigenSample& s) {
          return check_multiplicative_sample(s, *base.angles, base.phi);
        };
    }
    reports.push_back(constraint_report(
        std::string("constraints:") + to_string(base.case_tag) + ":" + to_string(m), samples,
        check));
  }
  return reports;
}

int cmd_verify(const Options& o, const std::string& test, const std::vector<std::string>& files,
               double level, double tol, std::ostream& out) {
  std::vector<TestReport> reports;
  if (test == "ks") {
    reports = verify_ks(o, files, level);
  } else if (test == "normalization") {
    reports.push_back(verify_normalization(o, tol));
  } else if (test == "roundtrip") {
    reports.push_back(verify_roundtrip(o));
  } else if (test == "jacobian") {
    RngState rng(resolve_seed(o), o.streams);
    reports.push_back(change_of_variables_check(spectrum_from_json(load_json_text(o.spectrum)),
                                                o.b, o.n ? o.n : 100, rng));
  } else if (test == "constraints") {
    reports = verify_constraints(o);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown test '" + test + "'");
  }
  bool all = true;
  for (const auto& r : reports) {
    out << to_json(r).dump() << '\n';
    all = all && r.pass;
  }
  return all ? kExitOk : kExitVerification;
}

// --- hciz ------------------------------------------------------------------

int cmd_hciz(const std::vector<double>& x, const std::vector<double>& y, std::size_t mc,
             const Options& o, std::ostream& out) {
  out << format_number(hciz(x, y), 15) << '\n';
  if (mc > 0) {
    RngState rng(resolve_seed(o), o.streams);
    const MonteCarloEstimate est = hciz_monte_carlo(x, y, mc, rng);
    out << "mc_estimate " << format_number(est.mean, 15) << " stderr "
        << format_number(est.standard_error, 15) << '\n';
  }
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& o, bool case_required = true) {
  auto* case_opt = cmd->add_option("--case", o.case_name, "problem case");
  if (case_required) case_opt->required();
  cmd->add_option("--spectrum", o.spectrum, "spectrum JSON, inline or file path");
  cmd->add_option("--b", o.b, "rank-one strength (additive)");
  cmd->add_option("--phi", o.phi, "phase of the rank-one unitary, in (0, 2 pi)");
  cmd->add_option("--field", o.field, "real or complex")->capture_default_str();
  cmd->add_option("--seed", o.seed, "random seed (falls back to RANK1HORN_SEED, then 0)");
  cmd->add_option("--streams", o.streams, "first RNG stream id; draw i uses stream + i")
      ->capture_default_str();
  cmd->add_option("--threads", o.threads, "worker threads")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-one randomized Horn problems: sampling, densities and checks", "rank1horn"};
  app.require_subcommand(1);

  Options so;
  auto* sample = app.add_subcommand("sample", "draw eigenvalue samples as CSV");
  add_common(sample, so);
  sample->add_option("--method", so.method, "secular or oracle");
  sample->add_option("--n", so.n, "number of draws")->required();
  sample->add_option("--out", so.out, "output file, - for standard output")->capture_default_str();
  sample->add_option("--p", so.p, "diag: number of diagonal entries (default all)");

  Options dop;
  std::vector<double> at;
  auto* density = app.add_subcommand("density", "evaluate a closed-form density");
  density->add_option("--case", dop.case_name,
                      "additive, additive-real, projection, projection-real, spacing, "
                      "multiplicative, quadform, heckman")
      ->required();
  density->add_option("--spectrum", dop.spectrum, "spectrum JSON, inline or file path")->required();
  density->add_option("--b", dop.b, "rank-one strength");
  density->add_option("--phi", dop.phi, "phase of the rank-one unitary");
  density->add_option("--field", dop.field, "real or complex")->capture_default_str();
  density->add_option("--at", at, "comma-separated free coordinates")->delimiter(',')->required();

  Options vo;
  std::string test;
  std::vector<std::string> files;
  double level = kDefaultLevel;
  double tol = 1e-6;
  auto* verify = app.add_subcommand("verify", "run a verification test, JSON report per line");
  verify->add_option("--test", test, "ks, normalization, roundtrip, jacobian or constraints")
      ->required();
  add_common(verify, vo, false);
  verify->add_option("--method", vo.method, "constraints: restrict to one sampler");
  verify->add_option("--n", vo.n, "draws or trials");
  verify->add_option("--level", level, "significance level")->capture_default_str();
  verify->add_option("--tol", tol, "normalization tolerance")->capture_default_str();
  verify->add_option("files", files, "ks: two sample CSV files to compare");

  Options ho;
  std::vector<double> hx;
  std::vector<double> hy;
  std::size_t mc = 0;
  auto* hciz_cmd = app.add_subcommand("hciz", "HCIZ closed form and optional Monte Carlo");
  hciz_cmd->add_option("--x", hx, "comma-separated x")->delimiter(',')->required();
  hciz_cmd->add_option("--y", hy, "comma-separated y")->delimiter(',')->required();
  hciz_cmd->add_option("--mc", mc, "Haar Monte Carlo draws");
  hciz_cmd->add_option("--seed", ho.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*sample) return cmd_sample(so, out);
    if (*density) return cmd_density(dop, at, out);
    if (*verify) return cmd_verify(vo, test, files, level, tol, out);
    if (*hciz_cmd) return cmd_hciz(hx, hy, mc, ho, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_numerical() ? kExitNumeric : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace rank1horn
