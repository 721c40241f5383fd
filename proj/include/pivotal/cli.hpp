#ifndef PIVOTAL_CLI_HPP
#define PIVOTAL_CLI_HPP

// Command-line front end. Exit codes: 0 success or passed check, 1 validation error or failed
// check, 2 filesystem error. Standard output gets a one-line summary; files get the data.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pivotal/bayes.hpp"
#include "pivotal/config_io.hpp"
#include "pivotal/coverage.hpp"
#include "pivotal/errors.hpp"
#include "pivotal/inference.hpp"
#include "pivotal/sampling.hpp"

namespace pivotal::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kIoFailure = 2 };

inline const char* schema_footer() {
  return "Config: JSON, schema_version 1. Top-level keys: schema_version, noise1, noise2, grid{lo,hi,n_points}, prior.\n"
         "Families: normal{mean,sd} laplace{loc,scale} uniform{a,b} normal-mixture{components:[{weight,mean,sd}]}\n"
         "tabulated{x,pdf}. Unknown keys are rejected.";
}

/// Parse "0.5,0.9,0.95" into gammas, each strictly inside (0,1).
inline std::vector<double> parse_gamma_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double g = 0.0;
    try {
      g = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ValidationError("gamma", "cannot parse '" + item + "' as a number");
    }
    if (used != item.size()) throw ValidationError("gamma", "cannot parse '" + item + "' as a number");
    check_gamma(g);
    out.push_back(g);
  }
  if (out.empty()) throw ValidationError("gamma", "needs at least one value");
  return out;
}

struct PivotArgs {
  std::string config, out;
  bool cdf = false;
};

struct PredictArgs {
  std::string config, out, report, gamma;
  double x1 = 0.0;
};

struct BayesArgs {
  std::string config, out;
  double x1 = 0.0;
  double tol = 1e-8;
};

struct CoverageArgs {
  std::string config, out;
  double theta = 0.0;
  double gamma = 0.95;
  std::int64_t n = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct SampleArgs {
  std::string config, out, which = "noise1";
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

inline int run_pivot(const PivotArgs& a, std::ostream& out) {
  const ModelConfig cfg = load_model_config(a.config);
  const GridDensity pivot = pivot_density(cfg.model());
  write_density_csv(pivot, a.cdf, a.out);
  const SummaryStats st = summarize(pivot);
  out << "pivot: " << pivot.size() << " nodes on [" << format_real(pivot.grid().lo) << ", "
      << format_real(pivot.grid().hi) << "], mean " << format_real(st.mean) << ", variance "
      << format_real(st.variance) << " -> " << a.out << "\n";
  return kOk;
}

inline int run_predict(const PredictArgs& a, std::ostream& out) {
  const std::vector<double> gammas = parse_gamma_list(a.gamma);
  if (!std::isfinite(a.x1)) throw ValidationError("x1", "must be finite");
  const ModelConfig cfg = load_model_config(a.config);
  const PredictiveResult r = predictive_density(cfg.model(), a.x1, gammas);
  const std::string report = a.report.empty() ? a.out + ".report.json" : a.report;
  write_density_csv(r.predictive, true, a.out);
  write_report(r, report);
  out << "predict: x1 " << format_real(a.x1);
  for (const auto& iv : r.intervals) {
    out << ", gamma " << format_real(iv.gamma) << " [" << format_real(iv.lo) << ", " << format_real(iv.hi) << "]";
  }
  out << " -> " << a.out << ", " << report << "\n";
  return kOk;
}

inline int run_bayes_check(const BayesArgs& a, std::ostream& out, std::ostream& err) {
  if (!std::isfinite(a.x1)) throw ValidationError("x1", "must be finite");
  if (!(a.tol >= 0.0) || !std::isfinite(a.tol)) throw ValidationError("tol", "must be a finite nonnegative number");
  const ModelConfig cfg = load_model_config(a.config);
  if (!cfg.prior) throw ValidationError("prior", "config has no prior; bayes-check needs one");
  const MeasurementModel model = cfg.model();
  model.validate();
  const ConsistencyReport r = check_consistency(model.realize_noise1(), *cfg.prior, a.x1, a.tol);
  if (!a.out.empty()) write_report(r, a.out);
  if (r.no_overlap) {
    out << "bayes-check: no overlap between likelihood and prior supports\n";
    err << "error: prior: support does not overlap the likelihood at x1 " << format_real(a.x1) << "\n";
  } else {
    out << "bayes-check: " << (r.pass ? "pass" : "FAIL") << ", sup-norm gap " << format_real(r.sup_norm_gap)
        << ", L1 gap " << format_real(r.l1_gap) << " over " << r.grid_points << " nodes (tol "
        << format_real(r.tolerance) << ")\n";
  }
  return r.pass ? kOk : kFailure;
}

inline int run_coverage(const CoverageArgs& a, std::ostream& out) {
  if (a.n < static_cast<std::int64_t>(kMinReplicates)) throw ValidationError("n", "must be at least 100");
  check_gamma(a.gamma);
  if (!std::isfinite(a.theta)) throw ValidationError("theta", "must be finite");
  const ModelConfig cfg = load_model_config(a.config);
  const CoverageRun run = coverage_experiment(cfg.model(), a.theta, a.gamma, static_cast<std::size_t>(a.n), a.seed,
                                              CoverageOptions{a.threads});
  write_report(run.report, a.out);
  const CoverageReport& r = run.report;
  out << "coverage: " << (r.pass ? "pass" : "FAIL") << ", " << r.hits << "/" << r.n_replicates << " = "
      << format_real(r.empirical_coverage) << " vs gamma " << format_real(r.gamma) << " (3 sd band "
      << format_real(3.0 * r.binomial_sd) << ") -> " << a.out << "\n";
  return r.pass ? kOk : kFailure;
}

inline int run_sample(const SampleArgs& a, std::ostream& out) {
  if (a.n < 0) throw ValidationError("n", "must be nonnegative");
  const ModelConfig cfg = load_model_config(a.config);
  const MeasurementModel model = cfg.model();
  model.validate();
  GridDensity d;
  if (a.which == "noise1") d = model.realize_noise1();
  else if (a.which == "noise2") d = model.realize_noise2();
  else if (a.which == "pivot") d = pivot_density(model);
  else throw ValidationError("which", "must be noise1, noise2 or pivot");
  SplitMix64 rng(a.seed);
  const auto draws = sample(d, rng, static_cast<std::size_t>(a.n));
  write_text_file(a.out, render_samples_csv(draws));
  out << "sample: " << draws.size() << " draws from " << a.which << " (seed " << a.seed << ") -> " << a.out << "\n";
  return kOk;
}

/// Entry point shared by the executable and the in-process tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Direct pivotal predictive inference for location measurements"};
  app.require_subcommand(1, 1);
  app.footer(schema_footer());

  PivotArgs pivot;
  auto* pivot_cmd = app.add_subcommand("pivot", "Write the density of d = x2 - x1 as CSV");
  pivot_cmd->add_option("--config", pivot.config, "Model config (JSON)")->required();
  pivot_cmd->add_option("--out", pivot.out, "Output CSV path (x,pdf)")->required();
  pivot_cmd->add_flag("--cdf", pivot.cdf, "Add a cdf column");
  pivot_cmd->footer(schema_footer());

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Predictive density for x2 given x1, with central intervals");
  predict_cmd->add_option("--config", predict.config, "Model config (JSON)")->required();
  predict_cmd->add_option("--x1", predict.x1, "Observed first outcome")->required();
  predict_cmd->add_option("--gamma", predict.gamma, "Comma-separated interval probabilities in (0,1)")->required();
  predict_cmd->add_option("--out", predict.out, "Output CSV path (x,pdf,cdf)")->required();
  predict_cmd->add_option("--report", predict.report, "Interval report path (default: <out>.report.json)");
  predict_cmd->footer(schema_footer());

  BayesArgs bayes;
  auto* bayes_cmd = app.add_subcommand("bayes-check", "Compare the two Bayesian routes to the posterior error density");
  bayes_cmd->add_option("--config", bayes.config, "Model config with a prior (JSON)")->required();
  bayes_cmd->add_option("--x1", bayes.x1, "Observed outcome")->required();
  bayes_cmd->add_option("--tol", bayes.tol, "Sup-norm tolerance")->capture_default_str();
  bayes_cmd->add_option("--out", bayes.out, "Consistency report path (JSON)");
  bayes_cmd->footer(schema_footer());

  CoverageArgs cov;
  auto* cov_cmd = app.add_subcommand("coverage", "Monte Carlo coverage of the predictive interval");
  cov_cmd->add_option("--config", cov.config, "Model config (JSON)")->required();
  cov_cmd->add_option("--theta", cov.theta, "True parameter used for simulation")->required();
  cov_cmd->add_option("--gamma", cov.gamma, "Interval probability in (0,1)")->required();
  cov_cmd->add_option("--n", cov.n, "Number of replicates (>= 100)")->required();
  cov_cmd->add_option("--seed", cov.seed, "Experiment seed")->required();
  cov_cmd->add_option("--out", cov.out, "Coverage report path (JSON)")->required();
  cov_cmd->add_option("--threads", cov.threads, "Worker threads; results do not depend on it")->capture_default_str();
  cov_cmd->footer(schema_footer());

  SampleArgs smp;
  auto* smp_cmd = app.add_subcommand("sample", "Draw from noise1, noise2 or the pivot density");
  smp_cmd->add_option("--config", smp.config, "Model config (JSON)")->required();
  smp_cmd->add_option("--which", smp.which, "noise1, noise2 or pivot")->required()->check(CLI::IsMember({"noise1", "noise2", "pivot"}));
  smp_cmd->add_option("--n", smp.n, "Number of draws")->required();
  smp_cmd->add_option("--seed", smp.seed, "Generator seed")->required();
  smp_cmd->add_option("--out", smp.out, "Output CSV path (x)")->required();
  smp_cmd->footer(schema_footer());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFailure;
  }

  try {
    if (*pivot_cmd) return run_pivot(pivot, out);
    if (*predict_cmd) return run_predict(predict, out);
    if (*bayes_cmd) return run_bayes_check(bayes, out, err);
    if (*cov_cmd) return run_coverage(cov, out);
    if (*smp_cmd) return run_sample(smp, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace pivotal::cli

#endif  // PIVOTAL_CLI_HPP
