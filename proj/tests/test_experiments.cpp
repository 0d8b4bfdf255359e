#include "maxinfer/experiments.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

using namespace maxinfer;
using namespace maxinfer::experiments;

TEST_CASE("design and noise scale", "[experiments]") {
  SeededRng rng(1);
  const Eigen::MatrixXd z = equicorrelated_design(4000, 6, 0.5, rng);
  CHECK(z.col(0).cwiseAbs().minCoeff() == 1.0);
  CHECK(z.col(0).cwiseAbs().maxCoeff() == 1.0);
  for (Eigen::Index j = 0; j < 6; ++j) CHECK(z.col(j).squaredNorm() / 4000.0 == Catch::Approx(1.0).epsilon(1e-12));
  const double corr = z.col(2).dot(z.col(4)) / 4000.0;
  CHECK(std::fabs(corr - 0.5) <= 0.05);

  Eigen::MatrixXd small(3, 2);
  small << 1, 0, 1, 1, 1, -40;
  const Eigen::VectorXd homo = noise_scale(small, 0.5, 0.0);
  CHECK(homo.isApproxToConstant(0.5));
  const Eigen::VectorXd het = noise_scale(small, 1.0, 1.0);
  CHECK(het(0) == Catch::Approx(1.0));
  CHECK(het(1) == Catch::Approx(2.0 * std::exp(1.0) / (1.0 + std::exp(1.0))));
  CHECK(het(2) == Catch::Approx(2.0 * std::exp(-40.0) / (1.0 + std::exp(-40.0))));
  CHECK(noise_scale(Eigen::MatrixXd::Constant(1, 2, 1000.0), 1.0, 1.0)(0) == 2.0);

  SeededRng srng(2);
  const Eigen::VectorXd beta = sparse_coefficients(50, 5, 1.0, srng);
  CHECK((beta.array() != 0.0).count() == 5);
  CHECK(beta.cwiseAbs().maxCoeff() == 1.0);
  CHECK_THROWS(sparse_coefficients(3, 4, 1.0, srng));
}

TEST_CASE("noise draws have the advertised scale", "[experiments]") {
  for (Noise noise : {Noise::Gaussian, Noise::StudentT5Normalized, Noise::StudentT4Normalized, Noise::StudentT4}) {
    SeededRng rng(3);
    double ss = 0.0;
    const int count = 400000;
    for (int k = 0; k < count; ++k) {
      const double v = draw_noise(rng, noise);
      ss += v * v;
    }
    const double sd = std::sqrt(ss / count);
    // t(4) has an infinite fourth moment, so its sample variance converges slowly.
    CHECK(std::fabs(sd / noise_sd(noise) - 1.0) <= (noise == Noise::Gaussian ? 0.01 : 0.05));
    CHECK(noise_from_string(to_string(noise)) == noise);
  }
  CHECK_THROWS(noise_from_string("cauchy"));
}

TEST_CASE("P-P data", "[experiments]") {
  const auto pp = pp_from_samples({3.0, 1.0, 2.0}, {2.5, 0.5});
  REQUIRE(pp.cdf_t0.size() == 5);
  CHECK(pp.cdf_t0 == std::vector<double>{0.0, 1.0 / 3, 2.0 / 3, 2.0 / 3, 1.0});
  CHECK(pp.cdf_z0 == std::vector<double>{0.5, 0.5, 0.5, 1.0, 1.0});
  CHECK(pp.ks == Catch::Approx(0.5));

  PpPlotConfig cfg;
  cfg.n = 60;
  cfg.p = 30;
  cfg.reps = 2000;
  cfg.seed = 4;
  cfg.noise = Noise::Gaussian;
  const auto a = run_ppplot(cfg);
  cfg.threads = 3;
  const auto b = run_ppplot(cfg);
  CHECK(a.t0 == b.t0);
  CHECK(a.z0 == b.z0);
  CHECK(a.ks == ks_distance(a.t0, a.z0));
  CHECK(a.ks <= 2.0 * ks_critical_95(cfg.reps, cfg.reps));
  for (std::size_t k = 1; k < a.cdf_t0.size(); ++k) {
    CHECK(a.cdf_t0[k] >= a.cdf_t0[k - 1]);
    CHECK(a.cdf_z0[k] >= a.cdf_z0[k - 1]);
  }
  CHECK(a.cdf_t0.back() == 1.0);
  CHECK(a.cdf_z0.back() == 1.0);
  cfg.reps = 50;
  CHECK_THROWS(run_ppplot(cfg));
}

TEST_CASE("Dantzig table at small scale", "[experiments]") {
  DantzigTableConfig cfg;
  cfg.design.n = 30;
  cfg.design.p = 40;
  cfg.design.reps = 12;
  cfg.design.gamma = 1.0;
  cfg.design.sigma0 = 1.0;
  cfg.design.seed = 5;
  cfg.bootstrap_reps = 300;
  const auto a = run_dantzig_table(cfg);
  cfg.threads = 4;
  const auto b = run_dantzig_table(cfg);
  REQUIRE(a.penalties.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(a.penalties[k].mean_error == b.penalties[k].mean_error);
    CHECK(a.penalties[k].failures == 0);
    CHECK(a.penalties[k].completed == 12);
    CHECK(a.penalties[k].mean_error > 0.0);
  }
  CHECK(a.get(dantzig::PenaltyKind::Canonical).mean_lambda ==
        Catch::Approx(2.0 * normal_quantile(1.0 - 0.05 / 80.0)));
  CHECK(table_cells(cfg.design).size() == 16);

  cfg.penalties = {dantzig::PenaltyKind::Fixed};
  CHECK_THROWS(run_dantzig_table(cfg));
}

TEST_CASE("coverage harness", "[experiments]") {
  CoverageConfig cfg;
  cfg.n = 50;
  cfg.p = 10;
  cfg.outer_reps = 200;
  cfg.inner_reps = 200;
  cfg.seed = 6;
  const auto a = run_coverage(cfg);
  cfg.threads = 3;
  const auto b = run_coverage(cfg);
  CHECK(a.coverage == b.coverage);
  CHECK(a.coverage >= 0.85);
  CHECK(a.coverage <= 1.0);

  SeededRng rng(7);
  const Eigen::MatrixXd x = simulate_means_data(20000, 3, DataKind::BoundedMixture, rng);
  CHECK(x.cwiseAbs().maxCoeff() <= (1.0 + std::sqrt(3.0)) / std::sqrt(2.0));
  CHECK(std::fabs(x.col(1).mean()) <= 0.03);
  CHECK(std::fabs(x.col(1).squaredNorm() / 20000.0 - 1.0) <= 0.03);
  CHECK(std::fabs(x.col(0).dot(x.col(2)) / 20000.0 - 0.5) <= 0.03);
}

TEST_CASE("bootstrap agreement harness", "[experiments]") {
  AgreementConfig cfg;
  cfg.n = 100;
  cfg.p = 20;
  cfg.datasets = 10;
  cfg.bootstrap_reps = 500;
  cfg.seed = 8;
  const auto a = run_bootstrap_agreement(cfg);
  cfg.threads = 2;
  const auto b = run_bootstrap_agreement(cfg);
  CHECK(a.empirical_quantiles == b.empirical_quantiles);
  CHECK(a.multiplier_quantiles == b.multiplier_quantiles);
  CHECK(a.fraction_within >= 0.7);
}

TEST_CASE("FWER harness", "[experiments]") {
  FwerConfig cfg;
  cfg.n = 100;
  cfg.true_nulls = 20;
  cfg.runs = 200;
  cfg.bootstrap_reps = 300;
  cfg.seed = 9;
  // With B replicates the alpha -> 0 critical value is the largest replicate,
  // so the FWER tends to about 1 / (B + 1) rather than exactly zero.
  cfg.alpha = 1e-6;
  const double tiny = run_fwer(cfg).fwer;
  cfg.alpha = 0.05;
  CHECK(tiny <= 0.02);
  CHECK(tiny <= run_fwer(cfg).fwer);

  cfg.alpha = 0.05;
  cfg.false_nulls = 5;
  cfg.effect = 6.0 / std::sqrt(100.0);
  const auto a = run_fwer(cfg);
  cfg.threads = 4;
  const auto b = run_fwer(cfg);
  CHECK(a.fwer == b.fwer);
  CHECK(a.power == b.power);
  CHECK(a.fwer <= 0.05 + 0.05);
  CHECK(a.power >= 0.9);
}

TEST_CASE("CSV emission", "[experiments]") {
  const auto dir = std::filesystem::temp_directory_path() / "maxinfer_test_experiments";
  CoverageConfig cfg;
  CoverageResult res{0.95, 0.004873397, 2000};
  emit_csv(dir / "coverage.csv", cfg, res);
  CHECK(io::read_file(dir / "coverage.csv") ==
        "n,p,alpha,data,outer_reps,inner_reps,coverage,standard_error\n"
        "400,200,0.05,bounded_mixture,2000,1000,0.95,0.0048734\n");
  emit_csv(dir / "empty.csv", std::vector<DantzigTableResult>{});
  CHECK(io::read_file(dir / "empty.csv") ==
        "noise,gamma,sigma0,rho,n,p,reps,penalty,mean_error,standard_error,mean_lambda,failures\n");
  const auto pp = pp_from_samples({1.0, 2.0}, {1.5, 2.5});
  emit_csv(dir / "pp.csv", pp);
  const auto back = io::table_from_csv(io::read_file(dir / "pp.csv"));
  CHECK(io::to_csv(back) == io::to_csv(to_table(pp)));
  REQUIRE(back.rows.size() == pp.cdf_t0.size());
  for (std::size_t k = 0; k < back.rows.size(); ++k) {
    const auto num = [](const io::Cell& c) {
      return std::holds_alternative<double>(c) ? std::get<double>(c) : static_cast<double>(std::get<std::int64_t>(c));
    };
    CHECK(num(back.rows[k][0]) == pp.cdf_t0[k]);
    CHECK(num(back.rows[k][1]) == pp.cdf_z0[k]);
  }
}
