#ifndef PIVOTAL_CONFIG_IO_HPP
#define PIVOTAL_CONFIG_IO_HPP

// Configuration parsing and artifact writers.
//
// Model configuration (JSON, schema_version 1):
//
//   {
//     "schema_version": 1,                               // optional; must be 1 if present
//     "noise1": { "family": "normal", "mean": 0, "sd": 1 },
//     "noise2": { "family": "laplace", "loc": 0, "scale": 1 },
//     "grid":   { "lo": -10, "hi": 10, "n_points": 4097 },  // optional
//     "prior":  { "family": "uniform", "a": -50, "b": 50 }  // optional
//   }
//
// Families and keys: normal {mean, sd}, laplace {loc, scale}, uniform {a, b},
// normal-mixture {components: [{weight, mean, sd}, ...]}, tabulated {x: [...], pdf: [...]}.
// mean and loc default to 0; everything else is required. Unknown keys are errors.
//
// Writers render every real in its shortest round-trip form and use "\n" line endings, so
// identical inputs give byte-identical files and re-reading loses nothing.

#include <charconv>
#include <cerrno>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>  // nlohmann/json, vendored

#include "pivotal/bayes.hpp"
#include "pivotal/coverage.hpp"
#include "pivotal/density.hpp"
#include "pivotal/errors.hpp"
#include "pivotal/grid.hpp"
#include "pivotal/inference.hpp"
#include "pivotal/noise.hpp"

namespace pivotal {

inline constexpr int kSchemaVersion = 1;

/// Malformed document; the message carries the parser's line and column.
class ConfigSyntaxError : public ValidationError {
 public:
  explicit ConfigSyntaxError(const std::string& message) : ValidationError("config", message) {}
};

struct ModelConfig {
  NoiseSpec noise1;
  NoiseSpec noise2;
  std::optional<GridSpec> grid;
  std::optional<PriorSpec> prior;

  MeasurementModel model() const { return {noise1, noise2, grid}; }
};

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) throw ValidationError(path.empty() ? key : path + "." + key, "unknown key");
  }
}

inline const json& require_object(const json& parent, const std::string& key, const std::string& path) {
  if (!parent.contains(key)) throw ValidationError(path, "missing required key");
  const json& v = parent.at(key);
  if (!v.is_object()) throw ValidationError(path, "must be an object");
  return v;
}

inline double read_real(const json& obj, const std::string& key, const std::string& path, std::optional<double> fallback = {}) {
  const std::string field = path + "." + key;
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError(field, "missing required key");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(field, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(field, "must be finite");
  return d;
}

inline std::vector<double> read_real_array(const json& obj, const std::string& key, const std::string& path) {
  const std::string field = path + "." + key;
  if (!obj.contains(key)) throw ValidationError(field, "missing required key");
  const json& v = obj.at(key);
  if (!v.is_array()) throw ValidationError(field, "must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) throw ValidationError(field, "must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline NoiseSpec parse_noise(const json& obj, const std::string& path) {
  if (!obj.contains("family")) throw ValidationError(path + ".family", "missing required key");
  if (!obj.at("family").is_string()) throw ValidationError(path + ".family", "must be a string");
  const std::string family = obj.at("family").get<std::string>();
  NoiseSpec spec;
  if (family == "normal") {
    reject_unknown_keys(obj, path, {"family", "mean", "sd"});
    spec = NormalNoise{read_real(obj, "mean", path, 0.0), read_real(obj, "sd", path)};
  } else if (family == "laplace") {
    reject_unknown_keys(obj, path, {"family", "loc", "scale"});
    spec = LaplaceNoise{read_real(obj, "loc", path, 0.0), read_real(obj, "scale", path)};
  } else if (family == "uniform") {
    reject_unknown_keys(obj, path, {"family", "a", "b"});
    spec = UniformNoise{read_real(obj, "a", path), read_real(obj, "b", path)};
  } else if (family == "normal-mixture") {
    reject_unknown_keys(obj, path, {"family", "components"});
    if (!obj.contains("components")) throw ValidationError(path + ".components", "missing required key");
    const json& comps = obj.at("components");
    if (!comps.is_array()) throw ValidationError(path + ".components", "must be an array");
    NormalMixtureNoise m;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string cpath = path + ".components[" + std::to_string(i) + "]";
      if (!comps[i].is_object()) throw ValidationError(cpath, "must be an object");
      reject_unknown_keys(comps[i], cpath, {"weight", "mean", "sd"});
      m.components.push_back({read_real(comps[i], "weight", cpath), read_real(comps[i], "mean", cpath),
                              read_real(comps[i], "sd", cpath)});
    }
    spec = std::move(m);
  } else if (family == "tabulated") {
    reject_unknown_keys(obj, path, {"family", "x", "pdf"});
    spec = TabulatedNoise{read_real_array(obj, "x", path), read_real_array(obj, "pdf", path)};
  } else {
    throw ValidationError(path + ".family", "unknown family '" + family + "'");
  }
  try {
    validate(spec);
  } catch (const ValidationError& e) {
    throw ValidationError(path + "." + e.field(), e.message());
  }
  return spec;
}

inline GridSpec parse_grid(const json& obj) {
  reject_unknown_keys(obj, "grid", {"lo", "hi", "n_points"});
  GridSpec g;
  g.lo = read_real(obj, "lo", "grid");
  g.hi = read_real(obj, "hi", "grid");
  if (!obj.contains("n_points")) throw ValidationError("grid.n_points", "missing required key");
  const json& n = obj.at("n_points");
  if (!n.is_number_integer() || n.get<std::int64_t>() <= 0) throw ValidationError("grid.n_points", "must be a positive integer");
  g.n_points = n.get<std::size_t>();
  try {
    g.validate();
  } catch (const ValidationError& e) {
    throw ValidationError("grid." + e.field(), e.message());
  }
  return g;
}

}  // namespace detail

/// Parse and validate a model configuration document.
/// Throws ConfigSyntaxError for malformed JSON and ValidationError naming the key otherwise.
inline ModelConfig parse_model_config(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigSyntaxError(e.what());
  }
  if (!doc.is_object()) throw ValidationError("config", "top level must be an object");
  detail::reject_unknown_keys(doc, "", {"schema_version", "noise1", "noise2", "grid", "prior"});
  if (doc.contains("schema_version")) {
    const json& v = doc.at("schema_version");
    if (!v.is_number_integer() || v.get<std::int64_t>() != kSchemaVersion) {
      throw ValidationError("schema_version", "unsupported (expected 1)");
    }
  }
  ModelConfig cfg;
  cfg.noise1 = detail::parse_noise(detail::require_object(doc, "noise1", "noise1"), "noise1");
  cfg.noise2 = detail::parse_noise(detail::require_object(doc, "noise2", "noise2"), "noise2");
  if (doc.contains("grid")) cfg.grid = detail::parse_grid(detail::require_object(doc, "grid", "grid"));
  if (doc.contains("prior")) cfg.prior = detail::parse_noise(detail::require_object(doc, "prior", "prior"), "prior");
  return cfg;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading: " + std::strerror(errno));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading '" + path + "': " + std::strerror(errno));
  return text;
}

inline ModelConfig load_model_config(const std::string& path) { return parse_model_config(read_text_file(path)); }

/// Shortest decimal that parses back to the same double (std::to_chars without a precision).
inline std::string format_real(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  out << content;
  out.flush();
  if (!out) throw IoError("error writing '" + path + "': " + std::strerror(errno));
}

/// "x,pdf" or "x,pdf,cdf" header, then one row per node.
inline std::string render_density_csv(const GridDensity& d, bool cdf_included) {
  std::string out = cdf_included ? "x,pdf,cdf\n" : "x,pdf\n";
  const std::vector<double> c = cdf_included ? cdf(d) : std::vector<double>{};
  for (std::size_t i = 0; i < d.size(); ++i) {
    out += format_real(d.grid().x(i));
    out += ',';
    out += format_real(d[i]);
    if (cdf_included) {
      out += ',';
      out += format_real(c[i]);
    }
    out += '\n';
  }
  return out;
}

inline void write_density_csv(const GridDensity& d, bool cdf_included, const std::string& path) {
  write_text_file(path, render_density_csv(d, cdf_included));
}

/// Parse a density CSV written by write_density_csv into a tabulated spec.
inline NoiseSpec parse_density_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || (line != "x,pdf" && line != "x,pdf,cdf")) {
    throw ValidationError("csv", "expected header 'x,pdf' or 'x,pdf,cdf'");
  }
  TabulatedNoise t;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    double x = 0.0, pdf = 0.0;
    auto r1 = std::from_chars(p, end, x);
    if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ',') throw ValidationError("csv", "bad row " + std::to_string(row));
    auto r2 = std::from_chars(r1.ptr + 1, end, pdf);
    if (r2.ec != std::errc{} || (r2.ptr != end && *r2.ptr != ',')) throw ValidationError("csv", "bad row " + std::to_string(row));
    t.x.push_back(x);
    t.pdf.push_back(pdf);
  }
  NoiseSpec spec = std::move(t);
  validate(spec);
  return spec;
}

inline NoiseSpec read_density_csv(const std::string& path) { return parse_density_csv(read_text_file(path)); }

/// One-column CSV with header "x".
inline std::string render_samples_csv(std::span<const double> draws) {
  std::string out = "x\n";
  for (double v : draws) {
    out += format_real(v);
    out += '\n';
  }
  return out;
}

namespace detail {

/// Minimal ordered JSON object writer: keys appear in insertion order.
class ReportWriter {
 public:
  explicit ReportWriter(std::string_view kind) {
    add("schema_version", static_cast<std::int64_t>(kSchemaVersion));
    add_string("report", kind);
  }

  void add(std::string_view key, double v) { field(key, format_real(v)); }
  void add(std::string_view key, std::int64_t v) { field(key, std::to_string(v)); }
  void add(std::string_view key, std::uint64_t v) { field(key, std::to_string(v)); }
  void add(std::string_view key, bool v) { field(key, v ? "true" : "false"); }
  void add_string(std::string_view key, std::string_view v) { field(key, "\"" + std::string(v) + "\""); }
  void add_raw(std::string_view key, const std::string& v) { field(key, v); }

  std::string str() const { return body_ + "\n}\n"; }

 private:
  void field(std::string_view key, const std::string& rendered) {
    body_ += body_.empty() ? "{\n" : ",\n";
    body_ += "  \"";
    body_ += key;
    body_ += "\": ";
    body_ += rendered;
  }
  std::string body_;
};

}  // namespace detail

/// Key order: schema_version, report, gamma, n_replicates, theta_used, seed, hits,
/// empirical_coverage, binomial_sd, pass.
inline std::string render_report(const CoverageReport& r) {
  detail::ReportWriter w("coverage");
  w.add("gamma", r.gamma);
  w.add("n_replicates", static_cast<std::uint64_t>(r.n_replicates));
  w.add("theta_used", r.theta_used);
  w.add("seed", r.seed);
  w.add("hits", static_cast<std::uint64_t>(r.hits));
  w.add("empirical_coverage", r.empirical_coverage);
  w.add("binomial_sd", r.binomial_sd);
  w.add("pass", r.pass);
  return w.str();
}

/// Key order: schema_version, report, sup_norm_gap, l1_gap, grid_points, tolerance, no_overlap, pass.
inline std::string render_report(const ConsistencyReport& r) {
  detail::ReportWriter w("consistency");
  w.add("sup_norm_gap", r.sup_norm_gap);
  w.add("l1_gap", r.l1_gap);
  w.add("grid_points", static_cast<std::uint64_t>(r.grid_points));
  w.add("tolerance", r.tolerance);
  w.add("no_overlap", r.no_overlap);
  w.add("pass", r.pass);
  return w.str();
}

/// Key order: schema_version, report, observed_x1, grid_points, intervals[{gamma, lo, hi}].
inline std::string render_report(const PredictiveResult& r) {
  detail::ReportWriter w("predictive");
  w.add("observed_x1", r.observed_x1);
  w.add("grid_points", static_cast<std::uint64_t>(r.predictive.size()));
  std::string list = "[";
  for (std::size_t i = 0; i < r.intervals.size(); ++i) {
    const auto& iv = r.intervals[i];
    list += i == 0 ? "\n" : ",\n";
    list += "    {\"gamma\": " + format_real(iv.gamma) + ", \"lo\": " + format_real(iv.lo) + ", \"hi\": " + format_real(iv.hi) + "}";
  }
  list += r.intervals.empty() ? "]" : "\n  ]";
  w.add_raw("intervals", list);
  return w.str();
}

template <typename Report>
void write_report(const Report& r, const std::string& path) {
  write_text_file(path, render_report(r));
}

namespace detail {

inline json parse_report_json(std::string_view text, std::string_view kind) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigSyntaxError(e.what());
  }
  if (!doc.is_object() || !doc.contains("report") || doc.at("report") != kind) {
    throw ValidationError("report", "expected a " + std::string(kind) + " report");
  }
  return doc;
}

}  // namespace detail

inline CoverageReport parse_coverage_report(std::string_view text) {
  const auto doc = detail::parse_report_json(text, "coverage");
  detail::reject_unknown_keys(doc, "", {"schema_version", "report", "gamma", "n_replicates", "theta_used", "seed", "hits",
                                        "empirical_coverage", "binomial_sd", "pass"});
  CoverageReport r;
  r.gamma = doc.at("gamma").get<double>();
  r.n_replicates = doc.at("n_replicates").get<std::size_t>();
  r.theta_used = doc.at("theta_used").get<double>();
  r.seed = doc.at("seed").get<std::uint64_t>();
  r.hits = doc.at("hits").get<std::size_t>();
  r.empirical_coverage = doc.at("empirical_coverage").get<double>();
  r.binomial_sd = doc.at("binomial_sd").get<double>();
  r.pass = doc.at("pass").get<bool>();
  return r;
}

inline ConsistencyReport parse_consistency_report(std::string_view text) {
  const auto doc = detail::parse_report_json(text, "consistency");
  detail::reject_unknown_keys(doc, "", {"schema_version", "report", "sup_norm_gap", "l1_gap", "grid_points", "tolerance",
                                        "no_overlap", "pass"});
  ConsistencyReport r;
  r.sup_norm_gap = doc.at("sup_norm_gap").get<double>();
  r.l1_gap = doc.at("l1_gap").get<double>();
  r.grid_points = doc.at("grid_points").get<std::size_t>();
  r.tolerance = doc.at("tolerance").get<double>();
  r.no_overlap = doc.at("no_overlap").get<bool>();
  r.pass = doc.at("pass").get<bool>();
  return r;
}

}  // namespace pivotal

#endif  // PIVOTAL_CONFIG_IO_HPP
