// maxinfer: command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data or validation error,
// 3 solver failure. Every subcommand that takes --out writes its files
// atomically and records the resolved configuration in config.json. Wall
// time goes to stderr only, so reruns produce byte-identical files.

#include "maxinfer/dantzig.hpp"
#include "maxinfer/experiments.hpp"
#include "maxinfer/io.hpp"
#include "maxinfer/max_stats.hpp"
#include "maxinfer/spectest.hpp"
#include "maxinfer/stepdown.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace maxinfer;

namespace {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  unsigned threads = 0;
  std::uint64_t seed = 0;
  std::string out;
};

unsigned resolve_thread_flag(unsigned flag) {
  if (flag != 0) return flag;
  if (const char* env = std::getenv("MAXINFER_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("MAXINFER_THREADS must be a positive integer, got '") + env + "'");
  }
  return resolve_threads(0);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_or_null(x));
  return a;
}

template <typename T>
json index_json(const std::vector<T>& v) {
  json a = json::array();
  for (auto x : v) a.push_back(static_cast<std::int64_t>(x));
  return a;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_outputs(const std::string& out, const json& config,
                   const std::vector<std::pair<std::string, std::string>>& files) {
  if (out.empty()) return;
  const fs::path dir(out);
  for (const auto& [name, content] : files) io::write_file_atomic(dir / name, content);
  io::write_file_atomic(dir / "config.json", dump(config));
}

BootstrapConfig bootstrap(std::size_t reps, std::uint64_t seed, unsigned threads) {
  BootstrapConfig c;
  c.replications = reps;
  c.seed = seed;
  c.threads = threads;
  return c;
}

// ---------------------------------------------------------------------------

struct QuantileOpts {
  std::string input;
  bool header = false;
  double level = 0.95;
  std::size_t reps = 1000;
  std::string variant = "signed";
  std::string method = "multiplier";
};

int run_quantile(const QuantileOpts& o, const Common& c, unsigned threads) {
  const auto csv = io::read_numeric_csv(o.input, o.header);
  const DataMatrix x(csv.values);
  BootstrapConfig cfg = bootstrap(o.reps, c.seed, threads);
  cfg.variant = o.variant == "absolute" ? MaxStatVariant::absolute_max() : MaxStatVariant::signed_max();
  const QuantileEstimate q = o.method == "empirical" ? empirical_bootstrap_quantile(x, o.level, cfg)
                                                     : multiplier_bootstrap_quantile(x, o.level, cfg);
  json result{{"level", q.level},
              {"value", q.value},
              {"replications", q.replications},
              {"standard_error", number_or_null(q.standard_error())},
              {"statistic", compute_max_stat(x, cfg.variant)},
              {"variant", o.variant},
              {"method", o.method}};
  std::cout << dump(result);
  json config{{"subcommand", "quantile"}, {"input", o.input},   {"header", o.header},
              {"alpha", o.level},         {"reps", o.reps},     {"seed", c.seed},
              {"variant", o.variant},     {"method", o.method}};
  write_outputs(c.out, config, {{"quantile.json", dump(result)}});
  return 0;
}

// ---------------------------------------------------------------------------

struct PpOpts {
  Eigen::Index n = 400;
  Eigen::Index p = 200;
  std::size_t reps = 5000;
  std::string noise = "t4";
};

int run_pp(const PpOpts& o, const Common& c, unsigned threads) {
  if (c.out.empty()) throw UsageError("ppplot requires --out");
  experiments::PpPlotConfig cfg;
  cfg.n = o.n;
  cfg.p = o.p;
  cfg.reps = o.reps;
  cfg.seed = c.seed;
  cfg.noise = experiments::noise_from_string(o.noise);
  cfg.threads = threads;
  const auto pp = experiments::run_ppplot(cfg);
  json summary{{"n", o.n},
               {"p", o.p},
               {"reps", o.reps},
               {"noise", o.noise},
               {"ks", pp.ks},
               {"ks_critical_95", experiments::ks_critical_95(o.reps, o.reps)}};
  json config{{"subcommand", "ppplot"}, {"n", o.n}, {"p", o.p}, {"reps", o.reps}, {"seed", c.seed}, {"noise", o.noise}};
  write_outputs(c.out, config, {{"pp.csv", io::to_csv(experiments::to_table(pp))}, {"summary.json", dump(summary)}});
  std::cout << dump(summary);
  return 0;
}

// ---------------------------------------------------------------------------

struct DantzigOpts {
  std::string input;
  bool header = false;
  bool normalize = false;
  std::string penalty = "gar";
  double alpha = 0.05;
  std::optional<double> sigma;
  std::optional<double> lambda;
  std::optional<double> prelim_alpha;
  std::string residuals = "prelim";
  std::size_t reps = 1000;
  std::size_t kappa_samples = 0;
  std::size_t max_iterations = lp::Options{}.iteration_limit;
};

dantzig::PenaltyKind penalty_from_string(const std::string& s) {
  using dantzig::PenaltyKind;
  if (s == "canonical") return PenaltyKind::Canonical;
  if (s == "gar") return PenaltyKind::Gar;
  if (s == "mb") return PenaltyKind::MultiplierBootstrap;
  if (s == "fixed") return PenaltyKind::Fixed;
  throw UsageError("unknown penalty '" + s + "'");
}

int run_dantzig(const DantzigOpts& o, const Common& c, unsigned threads) {
  const auto csv = io::read_numeric_csv(o.input, o.header);
  if (csv.values.cols() < 2) throw io::DataError("dantzig input needs a response column and at least one regressor");
  const Eigen::VectorXd y = csv.values.col(0);
  const Eigen::MatrixXd z = csv.values.rightCols(csv.values.cols() - 1);
  const auto data = o.normalize ? dantzig::RegressionData::normalized(z, y) : dantzig::RegressionData(z, y);

  dantzig::PenaltySpec spec;
  spec.kind = penalty_from_string(o.penalty);
  spec.alpha = o.alpha;
  spec.sigma = o.sigma;
  spec.lambda = o.lambda;
  spec.prelim_alpha = o.prelim_alpha;
  spec.residual_mode =
      o.residuals == "ols" ? dantzig::ResidualMode::PostSelectionOls : dantzig::ResidualMode::PrelimDantzig;
  spec.bootstrap = bootstrap(o.reps, c.seed, threads);
  spec.validate();

  const auto choice = dantzig::choose_penalty(data, spec);
  lp::Options lp_options;
  lp_options.iteration_limit = o.max_iterations;
  const auto fit = dantzig::fit_dantzig(data, choice.lambda, spec.kind, lp_options);
  if (fit.status != lp::Status::Optimal) {
    throw SolverError(std::string("LP solver did not reach optimality: ") + lp::to_string(fit.status));
  }

  io::Table coef{{"index", "beta_hat"}, {}};
  std::optional<std::vector<dantzig::Interval>> rect;
  if (o.kappa_samples > 0) {
    coef.columns = {"index", "beta_hat", "kappa", "lower", "upper"};
    Eigen::VectorXd kappa(data.p());
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      SeededRng krng(derive_seed(c.seed, 0x6b617070ULL), static_cast<std::uint64_t>(j));
      kappa(j) = dantzig::estimate_kappa(data, fit.beta_hat, dantzig::NormKind::Component, j, o.kappa_samples, krng).value;
    }
    rect = dantzig::confidence_rectangle(fit, kappa, data.n());
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      const auto& iv = (*rect)[static_cast<std::size_t>(j)];
      coef.add_row({static_cast<std::int64_t>(j), io::format_exact(fit.beta_hat(j)), kappa(j), iv.lower, iv.upper});
    }
  } else {
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      coef.add_row({static_cast<std::int64_t>(j), io::format_exact(fit.beta_hat(j))});
    }
  }

  std::int64_t nonzero = 0;
  for (double b : fit.beta_hat) nonzero += std::fabs(b) > 1e-8 ? 1 : 0;
  json result{{"penalty", dantzig::to_string(spec.kind)},
              {"lambda", fit.lambda},
              {"status", lp::to_string(fit.status)},
              {"lp_iterations", fit.lp_iterations},
              {"constraint_residual", fit.constraint_residual},
              {"nonzero", nonzero},
              {"rejects_zero", nonzero > 0},
              {"ols_fallback", choice.ols_fallback},
              {"beta_hat", vector_json(fit.beta_hat)}};
  if (choice.quantile) result["quantile_standard_error"] = number_or_null(choice.quantile->standard_error());
  std::cout << dump(result);

  json config{{"subcommand", "dantzig"},
              {"input", o.input},
              {"header", o.header},
              {"normalize", o.normalize},
              {"penalty", o.penalty},
              {"alpha", o.alpha},
              {"sigma", o.sigma ? json(*o.sigma) : json(nullptr)},
              {"lambda", o.lambda ? json(*o.lambda) : json(nullptr)},
              {"prelim_alpha", o.prelim_alpha ? json(*o.prelim_alpha) : json(nullptr)},
              {"residuals", o.residuals},
              {"reps", o.reps},
              {"seed", c.seed},
              {"kappa_samples", o.kappa_samples},
              {"max_iterations", o.max_iterations}};
  write_outputs(c.out, config, {{"dantzig.json", dump(result)}, {"coefficients.csv", io::to_csv(coef)}});
  return 0;
}

// ---------------------------------------------------------------------------

struct StepdownOpts {
  std::string influence;
  std::string beta;
  bool header = false;
  bool two_sided = false;
  double alpha = 0.05;
  std::size_t reps = 1000;
};

int run_step(const StepdownOpts& o, const Common& c, unsigned threads) {
  const auto x = io::read_numeric_csv(o.influence, o.header);
  const auto b = io::read_numeric_csv(o.beta, o.header);
  if (b.values.cols() != 2) throw io::DataError(o.beta + ": expected two columns (beta_hat, beta_null)");
  if (b.values.rows() != x.values.cols()) {
    throw io::DataError("beta file has " + std::to_string(b.values.rows()) + " rows but influence has " +
                        std::to_string(x.values.cols()) + " columns");
  }
  const stepdown::MhtProblem prob{b.values.col(0), b.values.col(1), DataMatrix(x.values), o.two_sided};
  const auto res = stepdown::run_stepdown(prob, o.alpha, bootstrap(o.reps, c.seed, threads));
  const Eigen::VectorXd t = prob.statistics();

  io::Table hyp{{"index", "t", "rejected", "step"}, {}};
  json steps = json::array();
  for (std::size_t j = 0; j < res.rejected.size(); ++j) {
    hyp.add_row({static_cast<std::int64_t>(j), t(static_cast<Eigen::Index>(j)),
                 static_cast<std::int64_t>(res.rejected[j] ? 1 : 0),
                 static_cast<std::int64_t>(res.rejection_step[j].value_or(0))});
    steps.push_back(res.rejection_step[j] ? json(*res.rejection_step[j]) : json(nullptr));
  }
  json rejected = json::array();
  for (bool r : res.rejected) rejected.push_back(r);
  json result{{"steps", res.steps},
              {"rejections", res.rejection_count()},
              {"critical_values", res.critical_values},
              {"rejected", rejected},
              {"rejection_step", steps}};
  std::cout << dump(result);
  json config{{"subcommand", "stepdown"}, {"influence", o.influence}, {"beta", o.beta},
              {"header", o.header},       {"two_sided", o.two_sided}, {"alpha", o.alpha},
              {"reps", o.reps},           {"seed", c.seed}};
  write_outputs(c.out, config, {{"stepdown.json", dump(result)}, {"hypotheses.csv", io::to_csv(hyp)}});
  return 0;
}

// ---------------------------------------------------------------------------

struct SpecOpts {
  std::string input;
  std::string functions;
  std::string family = "chebyshev";
  Eigen::Index size = 20;
  bool header = false;
  double alpha = 0.05;
  std::size_t reps = 1000;
};

spectest::Family family_from_string(const std::string& s) {
  if (s == "chebyshev") return spectest::Family::Chebyshev;
  if (s == "legendre") return spectest::Family::Legendre;
  if (s == "bspline") return spectest::Family::BSpline;
  throw UsageError("unknown family '" + s + "'");
}

int run_spec(const SpecOpts& o, const Common& c, unsigned threads) {
  const auto csv = io::read_numeric_csv(o.input, o.header);
  if (csv.values.cols() < 2) throw io::DataError("spectest input needs a response column and at least one regressor");
  const Eigen::VectorXd y = csv.values.col(0);
  const Eigen::MatrixXd v = csv.values.rightCols(csv.values.cols() - 1);
  Eigen::MatrixXd p_raw;
  if (!o.functions.empty()) {
    p_raw = io::read_numeric_csv(o.functions, o.header).values;
  } else {
    p_raw = spectest::make_family(family_from_string(o.family), v, o.size);
  }
  const spectest::SpecTestInput input{DataMatrix(v), y, DataMatrix(p_raw)};
  const auto res = spectest::run_spec_test(input, o.alpha, bootstrap(o.reps, c.seed, threads));
  json scores = json::array();
  for (double s : res.per_function_scores) scores.push_back(number_or_null(s));
  json result{{"statistic", res.statistic},
              {"critical_value", res.critical_value},
              {"reject", res.reject},
              {"functions_used", static_cast<std::int64_t>(res.kept.size() - res.degenerate.size())},
              {"dropped", index_json(res.dropped)},
              {"degenerate", index_json(res.degenerate)},
              {"kept", index_json(res.kept)},
              {"per_function_scores", scores}};
  std::cout << dump(result);
  json config{{"subcommand", "spectest"},
              {"input", o.input},
              {"functions", o.functions.empty() ? json(nullptr) : json(o.functions)},
              {"family", o.functions.empty() ? json(o.family) : json(nullptr)},
              {"size", o.functions.empty() ? json(o.size) : json(nullptr)},
              {"header", o.header},
              {"alpha", o.alpha},
              {"reps", o.reps},
              {"seed", c.seed}};
  write_outputs(c.out, config, {{"spectest.json", dump(result)}});
  return 0;
}

// ---------------------------------------------------------------------------

struct MonteCarloOpts {
  std::string config;
  std::optional<std::size_t> reps;
  bool seed_given = false;
};

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

void check_keys(const json& j, const std::vector<std::string>& allowed) {
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw io::DataError("config: unknown key '" + key + "'");
    }
  }
}

int run_montecarlo(const MonteCarloOpts& o, const Common& c, unsigned threads) {
  if (c.out.empty()) throw UsageError("montecarlo requires --out");
  json cfg;
  try {
    cfg = json::parse(io::read_file(o.config));
  } catch (const json::exception& e) {
    throw io::DataError(o.config + ": " + e.what());
  }
  if (!cfg.is_object() || !cfg.contains("kind")) throw io::DataError(o.config + ": expected an object with a 'kind' field");
  if (o.seed_given) cfg["seed"] = c.seed;
  if (o.reps) cfg["reps"] = *o.reps;
  const std::string kind = cfg.at("kind").get<std::string>();
  const auto seed = get_or<std::uint64_t>(cfg, "seed", 0);
  std::vector<std::pair<std::string, std::string>> files;
  json summary;

  try {
    if (kind == "dantzig_table") {
      check_keys(cfg, {"kind", "seed", "reps", "n", "p", "noise", "sparsity", "coefficient", "alpha", "bootstrap_reps",
                       "cells", "penalties"});
      experiments::McDesign base;
      base.n = get_or<Eigen::Index>(cfg, "n", 100);
      base.p = get_or<Eigen::Index>(cfg, "p", 250);
      base.noise = experiments::noise_from_string(get_or<std::string>(cfg, "noise", "t5_normalized"));
      base.reps = get_or<std::size_t>(cfg, "reps", 500);
      std::vector<experiments::McDesign> cells;
      if (cfg.contains("cells")) {
        for (const auto& cell : cfg.at("cells")) {
          check_keys(cell, {"gamma", "sigma0", "rho"});
          experiments::McDesign d = base;
          d.gamma = get_or<double>(cell, "gamma", 0.0);
          d.sigma0 = get_or<double>(cell, "sigma0", 0.5);
          d.rho = get_or<double>(cell, "rho", 0.0);
          cells.push_back(d);
        }
      } else {
        cells = experiments::table_cells(base);
      }
      std::vector<experiments::DantzigTableResult> results;
      json cell_summaries = json::array();
      for (std::size_t k = 0; k < cells.size(); ++k) {
        experiments::DantzigTableConfig t;
        t.design = cells[k];
        t.design.seed = derive_seed(seed, k);
        t.sparsity = get_or<std::size_t>(cfg, "sparsity", 5);
        t.coefficient = get_or<double>(cfg, "coefficient", 1.0);
        t.alpha = get_or<double>(cfg, "alpha", 0.05);
        t.bootstrap_reps = get_or<std::size_t>(cfg, "bootstrap_reps", 1000);
        if (cfg.contains("penalties")) {
          t.penalties.clear();
          for (const auto& name : cfg.at("penalties")) t.penalties.push_back(penalty_from_string(name.get<std::string>()));
        }
        t.threads = threads;
        results.push_back(experiments::run_dantzig_table(t));
        json pen = json::object();
        for (const auto& s : results.back().penalties) pen[dantzig::to_string(s.kind)] = s.mean_error;
        cell_summaries.push_back({{"gamma", t.design.gamma}, {"sigma0", t.design.sigma0}, {"rho", t.design.rho},
                                  {"mean_error", pen}});
      }
      files.emplace_back("dantzig_table.csv", io::to_csv(experiments::to_table(results)));
      summary = {{"kind", kind}, {"cells", cell_summaries}};
    } else if (kind == "ppplot") {
      check_keys(cfg, {"kind", "seed", "reps", "n", "p", "noise"});
      experiments::PpPlotConfig p;
      p.n = get_or<Eigen::Index>(cfg, "n", 400);
      p.p = get_or<Eigen::Index>(cfg, "p", 200);
      p.reps = get_or<std::size_t>(cfg, "reps", 5000);
      p.noise = experiments::noise_from_string(get_or<std::string>(cfg, "noise", "t4"));
      p.seed = seed;
      p.threads = threads;
      const auto pp = experiments::run_ppplot(p);
      files.emplace_back("pp.csv", io::to_csv(experiments::to_table(pp)));
      summary = {{"kind", kind}, {"ks", pp.ks}, {"ks_critical_95", experiments::ks_critical_95(p.reps, p.reps)}};
    } else if (kind == "coverage") {
      check_keys(cfg, {"kind", "seed", "reps", "n", "p", "alpha", "inner_reps", "data"});
      experiments::CoverageConfig cc;
      cc.n = get_or<Eigen::Index>(cfg, "n", 400);
      cc.p = get_or<Eigen::Index>(cfg, "p", 200);
      cc.alpha = get_or<double>(cfg, "alpha", 0.05);
      cc.outer_reps = get_or<std::size_t>(cfg, "reps", 2000);
      cc.inner_reps = get_or<std::size_t>(cfg, "inner_reps", 1000);
      cc.data = experiments::data_kind_from_string(get_or<std::string>(cfg, "data", "bounded_mixture"));
      cc.seed = seed;
      cc.threads = threads;
      const auto r = experiments::run_coverage(cc);
      files.emplace_back("coverage.csv", io::to_csv(experiments::to_table(cc, r)));
      summary = {{"kind", kind}, {"coverage", r.coverage}, {"standard_error", r.standard_error}};
    } else if (kind == "agreement") {
      check_keys(cfg, {"kind", "seed", "reps", "n", "p", "level", "bootstrap_reps", "data"});
      experiments::AgreementConfig a;
      a.n = get_or<Eigen::Index>(cfg, "n", 400);
      a.p = get_or<Eigen::Index>(cfg, "p", 100);
      a.level = get_or<double>(cfg, "level", 0.95);
      a.datasets = get_or<std::size_t>(cfg, "reps", 200);
      a.bootstrap_reps = get_or<std::size_t>(cfg, "bootstrap_reps", 2000);
      a.data = experiments::data_kind_from_string(get_or<std::string>(cfg, "data", "bounded_mixture"));
      a.seed = seed;
      a.threads = threads;
      const auto r = experiments::run_bootstrap_agreement(a);
      files.emplace_back("agreement.csv", io::to_csv(experiments::to_table(r)));
      summary = {{"kind", kind}, {"fraction_within", r.fraction_within}};
    } else if (kind == "fwer") {
      check_keys(cfg, {"kind", "seed", "reps", "n", "true_nulls", "false_nulls", "effect", "rho", "alpha",
                       "bootstrap_reps"});
      experiments::FwerConfig f;
      f.n = get_or<Eigen::Index>(cfg, "n", 400);
      f.true_nulls = get_or<Eigen::Index>(cfg, "true_nulls", 100);
      f.false_nulls = get_or<Eigen::Index>(cfg, "false_nulls", 0);
      f.effect = get_or<double>(cfg, "effect", 0.0);
      f.rho = get_or<double>(cfg, "rho", 0.5);
      f.alpha = get_or<double>(cfg, "alpha", 0.05);
      f.runs = get_or<std::size_t>(cfg, "reps", 2000);
      f.bootstrap_reps = get_or<std::size_t>(cfg, "bootstrap_reps", 1000);
      f.seed = seed;
      f.threads = threads;
      const auto r = experiments::run_fwer(f);
      files.emplace_back("fwer.csv", io::to_csv(experiments::to_table(f, r)));
      summary = {{"kind", kind}, {"fwer", r.fwer}, {"power", r.power}};
    } else {
      throw io::DataError("config: unknown kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw io::DataError(o.config + ": " + e.what());
  }
  files.emplace_back("summary.json", dump(summary));
  cfg["subcommand"] = "montecarlo";
  write_outputs(c.out, cfg, files);
  std::cout << dump(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maxinfer: Gaussian approximation and multiplier bootstrap inference for maxima of sums"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "maxinfer 1.0.0");

  Common common;
  auto add_common = [&](CLI::App* sub, bool needs_out) {
    sub->add_option("--threads", common.threads, "worker threads (default: MAXINFER_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", common.seed, "random seed");
    auto* out = sub->add_option("--out", common.out, "output directory");
    if (needs_out) out->required();
  };

  QuantileOpts q;
  auto* quantile = app.add_subcommand("quantile", "multiplier or empirical bootstrap quantile of the max statistic");
  quantile->add_option("--input", q.input, "n x p data CSV")->required()->check(CLI::ExistingFile);
  quantile->add_flag("--header", q.header, "first CSV row is a header");
  quantile->add_option("--alpha", q.level, "quantile level in (0, 1)")->check(CLI::Range(0.0, 1.0));
  quantile->add_option("--reps", q.reps, "bootstrap replications")->check(CLI::PositiveNumber);
  quantile->add_option("--variant", q.variant, "signed or absolute max")->check(CLI::IsMember({"signed", "absolute"}));
  quantile->add_option("--method", q.method, "multiplier or empirical")->check(CLI::IsMember({"multiplier", "empirical"}));
  add_common(quantile, false);

  PpOpts pp;
  auto* ppplot = app.add_subcommand("ppplot", "P-P data comparing T0 with its Gaussian analog");
  ppplot->add_option("--n", pp.n, "sample size")->check(CLI::PositiveNumber);
  ppplot->add_option("--p", pp.p, "dimension")->check(CLI::PositiveNumber);
  ppplot->add_option("--reps", pp.reps, "draws of each statistic")->check(CLI::Range(100, 100000000));
  ppplot->add_option("--noise", pp.noise, "noise law")
      ->check(CLI::IsMember({"gaussian", "t4", "t4_normalized", "t5_normalized"}));
  add_common(ppplot, true);

  DantzigOpts dz;
  auto* dantzig_cmd = app.add_subcommand("dantzig", "Dantzig selector with canonical, GAR, MB or fixed penalty");
  dantzig_cmd->add_option("--input", dz.input, "CSV with y in the first column and regressors after")
      ->required()
      ->check(CLI::ExistingFile);
  dantzig_cmd->add_flag("--header", dz.header, "first CSV row is a header");
  dantzig_cmd->add_flag("--normalize", dz.normalize, "rescale regressors to E_n[z^2] = 1");
  dantzig_cmd->add_option("--penalty", dz.penalty, "canonical, gar, mb or fixed")
      ->check(CLI::IsMember({"canonical", "gar", "mb", "fixed"}));
  dantzig_cmd->add_option("--alpha", dz.alpha, "penalty level alpha")->check(CLI::Range(0.0, 1.0));
  dantzig_cmd->add_option("--sigma", dz.sigma, "noise scale (or its upper bound for mb)");
  dantzig_cmd->add_option("--lambda", dz.lambda, "penalty for --penalty fixed");
  dantzig_cmd->add_option("--prelim-alpha", dz.prelim_alpha, "level of the preliminary mb fit (default 1/n)");
  dantzig_cmd->add_option("--residuals", dz.residuals, "mb residuals: prelim or ols")
      ->check(CLI::IsMember({"prelim", "ols"}));
  dantzig_cmd->add_option("--reps", dz.reps, "bootstrap replications")->check(CLI::PositiveNumber);
  dantzig_cmd->add_option("--kappa-samples", dz.kappa_samples, "random directions per kappa estimate (0: no intervals)");
  dantzig_cmd->add_option("--max-iterations", dz.max_iterations, "simplex pivot limit");
  add_common(dantzig_cmd, false);

  StepdownOpts sd;
  auto* step_cmd = app.add_subcommand("stepdown", "stepdown multiple testing with bootstrap critical values");
  step_cmd->add_option("--influence", sd.influence, "n x p influence estimates CSV")->required()->check(CLI::ExistingFile);
  step_cmd->add_option("--beta", sd.beta, "p x 2 CSV of (beta_hat, beta_null)")->required()->check(CLI::ExistingFile);
  step_cmd->add_flag("--header", sd.header, "first CSV row is a header");
  step_cmd->add_flag("--two-sided", sd.two_sided, "test equalities instead of one-sided inequalities");
  step_cmd->add_option("--alpha", sd.alpha, "family-wise level")->check(CLI::Range(0.0, 1.0));
  step_cmd->add_option("--reps", sd.reps, "bootstrap replications")->check(CLI::PositiveNumber);
  add_common(step_cmd, false);

  SpecOpts sp;
  auto* spec_cmd = app.add_subcommand("spectest", "adaptive specification test of a linear mean model");
  spec_cmd->add_option("--input", sp.input, "CSV with y in the first column and regressors V after")
      ->required()
      ->check(CLI::ExistingFile);
  auto* fn = spec_cmd->add_option("--functions", sp.functions, "CSV of raw test-function values")->check(CLI::ExistingFile);
  spec_cmd->add_option("--family", sp.family, "built-in family: chebyshev, legendre or bspline")
      ->check(CLI::IsMember({"chebyshev", "legendre", "bspline"}))
      ->excludes(fn);
  spec_cmd->add_option("--size", sp.size, "number of built-in test functions")->check(CLI::PositiveNumber)->excludes(fn);
  spec_cmd->add_flag("--header", sp.header, "first CSV row is a header");
  spec_cmd->add_option("--alpha", sp.alpha, "test level")->check(CLI::Range(0.0, 1.0));
  spec_cmd->add_option("--reps", sp.reps, "bootstrap replications")->check(CLI::PositiveNumber);
  add_common(spec_cmd, false);

  MonteCarloOpts mc;
  auto* mc_cmd = app.add_subcommand("montecarlo", "run a Monte Carlo experiment described by a JSON config");
  mc_cmd->add_option("--config", mc.config, "experiment config JSON")->required()->check(CLI::ExistingFile);
  mc_cmd->add_option("--reps", mc.reps, "override the config's replication count")->check(CLI::PositiveNumber);
  add_common(mc_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    const CLI::App* failed = &app;
    for (const auto* sub : app.get_subcommands()) failed = sub;
    std::cerr << failed->help();
    return 1;
  }
  mc.seed_given = mc_cmd->count("--seed") > 0;

  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    const unsigned threads = resolve_thread_flag(common.threads);
    if (*quantile) code = run_quantile(q, common, threads);
    else if (*ppplot) code = run_pp(pp, common, threads);
    else if (*dantzig_cmd) code = run_dantzig(dz, common, threads);
    else if (*step_cmd) code = run_step(sd, common, threads);
    else if (*spec_cmd) code = run_spec(sp, common, threads);
    else if (*mc_cmd) code = run_montecarlo(mc, common, threads);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "elapsed " << secs << " s\n";
  return code;
}
