#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sklab/experiments.hpp"
#include "sklab/models.hpp"
#include "sklab/rng.hpp"
#include "sklab/skorokhod.hpp"

using namespace sklab;

namespace {

// small but statistically meaningful sizes; thresholds inside the experiments
// scale with 1/sqrt(reps), so shrinking reps keeps the criteria honest
ExperimentConfig small_config() {
  ExperimentConfig config;
  config.n = 2000;
  config.reps = 400;
  config.seed = 7;
  config.truncation = 2000;
  config.block_length = 40;  // keep block^2 <= n at this scale
  return config;
}

std::string canonical_json(ExperimentReport report) {
  report.wall_seconds = 0.0;  // the only field that may differ between runs
  return report.to_json();
}

}  // namespace

TEST_CASE("experiment config validation") {
  ExperimentConfig config;
  CHECK_NOTHROW(config.validate());

  auto bad = config;
  bad.n = 999;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);

  bad = config;
  bad.reps = 0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);

  bad = config;
  bad.block_length = 0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);

  bad = config;
  bad.n = 1000;
  bad.block_length = 32;  // 32^2 > 1000
  CHECK_THROWS_AS(bad.validate(), std::domain_error);

  bad = config;
  bad.truncation = 0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);

  bad = config;
  bad.u = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);

  bad = config;
  bad.epsilon = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);

  bad = config;
  bad.t_grid = {};
  CHECK_THROWS_AS(bad.validate(), std::domain_error);

  bad = config;
  bad.t_grid = {0.5, 0.5};
  CHECK_THROWS_AS(bad.validate(), std::domain_error);

  bad = config;
  bad.t_grid = {0.5, 1.5};
  CHECK_THROWS_AS(bad.validate(), std::domain_error);

  bad = config;
  bad.t_grid = {0.0, 0.5};
  CHECK_THROWS_AS(bad.validate(), std::domain_error);

  CHECK(config.effective_limit_reps() == 10 * config.reps);
  config.limit_reps = 123;
  CHECK(config.effective_limit_reps() == 123);
}

TEST_CASE("report pass is the conjunction of its criteria") {
  ExperimentReport report;
  report.finalize();
  CHECK(!report.pass);  // no criteria means nothing was demonstrated

  report.criteria["a"] = true;
  report.criteria["b"] = true;
  report.finalize();
  CHECK(report.pass);

  report.criteria["c"] = false;
  report.finalize();
  CHECK(!report.pass);
}

TEST_CASE("report json carries every field and parses back") {
  ExperimentReport report;
  report.name = "demo";
  report.seed = 42;
  report.wall_seconds = 1.5;
  report.scalars["ks"] = 0.01;
  report.series["p"] = {0.1, 0.2};
  report.criteria["ok"] = true;
  report.curve.emplace_back("x", std::vector<double>{1.0, 2.0});
  report.curve.emplace_back("y", std::vector<double>{3.0, 4.0});
  report.notes.push_back("a note");
  report.finalize();

  const auto parsed = nlohmann::json::parse(report.to_json());
  CHECK(parsed.at("name") == "demo");
  CHECK(parsed.at("seed") == 42);
  CHECK(parsed.at("wall_seconds") == 1.5);
  CHECK(parsed.at("pass") == true);
  CHECK(parsed.at("scalars").at("ks") == 0.01);
  CHECK(parsed.at("series").at("p").size() == 2);
  CHECK(parsed.at("criteria").at("ok") == true);
  CHECK(parsed.at("curve").at("columns") == nlohmann::json::array({"x", "y"}));
  CHECK(parsed.at("curve").at("data").at(1).at(0) == 3.0);
  CHECK(parsed.at("notes").at(0) == "a note");

  // canonical form: serialisation is a pure function of the contents
  CHECK(report.to_json() == report.to_json());
}

TEST_CASE("curve csv layout") {
  ExperimentReport report;
  CHECK(report.curve_csv().empty());

  report.curve.emplace_back("x", std::vector<double>{0.5, 1.0});
  report.curve.emplace_back("p_hat", std::vector<double>{0.25, 0.125});
  CHECK(report.curve_csv() == "x,p_hat\n0.5,0.25\n1,0.125\n");
}

TEST_CASE("maxima against the closed-form marginal") {
  auto config = small_config();
  const auto report = exp_marginal_max(config);

  CHECK(report.name == "marginal_max");
  CHECK(report.pass);
  CHECK(report.criteria.at("ks_within_threshold"));
  CHECK(report.scalars.at("ks_threshold") == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(report.scalars.at("ks") > 0.0);
  CHECK(report.scalars.at("theta") == doctest::Approx(0.5).epsilon(1e-12));

  // plot-ready columns of equal length
  REQUIRE(report.curve.size() == 3);
  CHECK(report.curve[0].first == "x");
  CHECK(report.curve[1].first == "ecdf_empirical");
  CHECK(report.curve[2].first == "cdf_limit");
  const auto rows = report.curve[0].second.size();
  CHECK(rows == 256);
  CHECK(report.curve[1].second.size() == rows);
  CHECK(report.curve[2].second.size() == rows);
  CHECK(report.curve[1].second.back() == doctest::Approx(1.0).epsilon(1e-12));

  // same seed, same report; different seed, different statistic
  CHECK(canonical_json(report) == canonical_json(exp_marginal_max(config)));
  auto other = config;
  other.seed = 8;
  CHECK(exp_marginal_max(other).scalars.at("ks") != report.scalars.at("ks"));
}

TEST_CASE("maxima experiment flags an unusable replicate count") {
  auto config = small_config();
  config.reps = 3;
  const auto report = exp_marginal_max(config);
  CHECK(!report.pass);
  CHECK(!report.criteria.at("sufficient_reps"));
}

TEST_CASE("sums against truncated series draws") {
  auto config = small_config();
  const auto report = exp_sum(config);

  CHECK(report.name == "sum");
  CHECK(report.criteria.at("ks_within_threshold"));
  CHECK(report.criteria.at("series_tail_negligible"));
  CHECK(report.scalars.at("ks_threshold") == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(report.scalars.at("tail_bound") < 1e-3);
  CHECK(std::isfinite(report.scalars.at("hill_alpha")));
  CHECK(report.scalars.at("hill_k") == 20.0);

  // pass stays consistent with the recorded criteria
  bool conj = true;
  for (const auto& [key, ok] : report.criteria) {
    (void)key;
    conj = conj && ok;
  }
  CHECK(report.pass == conj);
}

TEST_CASE("joint pairs against simulated limit pairs") {
  auto config = small_config();
  const auto report = exp_joint(config);

  CHECK(report.name == "joint");
  CHECK(report.criteria.at("grid_sup_within_threshold"));
  CHECK(report.criteria.at("rank_correlation_positive"));
  CHECK(report.scalars.at("grid_sup") <= 0.15);
  CHECK(report.scalars.at("rank_corr") > 0.5);
  CHECK(report.scalars.at("energy_distance") >= 0.0);
  CHECK(report.series.at("t_grid") == std::vector<double>{0.5, 1.0});
  CHECK(report.pass);
}

TEST_CASE("truncated moments meet the regular-variation limit") {
  auto config = small_config();
  const auto report = exp_karamata(config);

  CHECK(report.name == "karamata");
  CHECK(report.criteria.at("within_3pct_at_large_n"));
  CHECK(report.criteria.at("remainder_monotone_in_u"));
  CHECK(report.criteria.at("remainder_vanishes_for_large_epsilon"));
  CHECK(report.pass);

  const auto& rel = report.series.at("rel_error");
  REQUIRE(rel.size() == 8);  // four levels, two sample sizes each
  for (double r : rel) {
    CHECK(std::isfinite(r));
  }
  // convergence in n at each level: the n = 10^6 entry beats 3 percent
  const auto& ns = report.series.at("n");
  for (std::size_t i = 0; i < rel.size(); ++i) {
    if (ns[i] == 1000000.0) {
      CHECK(rel[i] <= 0.03);
    }
  }
}

TEST_CASE("single-pass oscillation scan agrees with the path modulus") {
  // power-of-two sizes keep the jump-time arithmetic exact, so the strict
  // 2/n window admits exactly the consecutive piece triples in both codes
  std::size_t cases = 0;
  for (std::size_t n : {4u, 8u, 16u, 32u, 64u, 128u}) {
    for (double alpha : {0.3, 0.5, 0.8}) {
      for (std::uint64_t seed = 1; seed <= 7; ++seed) {
        for (int which = 0; which < 3; ++which) {
          const MovingMaximaModel model =
              which == 0   ? MovingMaximaModel::iid(alpha)
              : which == 1 ? MovingMaximaModel::mm11(alpha)
                           : MovingMaximaModel(alpha, {1.0, 2.0, 1.0});
          const auto x = moving_maxima_sample(model, n, seed);
          const double a_n = model.norming(n, NormingMode::ByInnovation);
          const double fused = gn_oscillation(x, a_n);
          const double modulus =
              omega_delta(gn_path(x, a_n), 2.0 / static_cast<double>(n));
          CHECK(fused == doctest::Approx(modulus).epsilon(1e-9));
          ++cases;
        }
      }
    }
  }
  CHECK(cases == 6 * 3 * 7 * 3);

  // hand-checked values
  const std::vector<double> spike{1.0, 1.0};  // g-values 0, -1, 0
  CHECK(gn_oscillation(spike, 1.0) == 1.0);
  const std::vector<double> flat_dip{1.0, 0.0, 1.0};  // g-values 0, -1, -1, 0
  CHECK(gn_oscillation(flat_dip, 1.0) == 0.0);
  CHECK(gn_oscillation(std::vector<double>{5.0}, 1.0) == 0.0);
  CHECK_THROWS_AS(gn_oscillation(spike, 0.0), std::domain_error);
}

TEST_CASE("oscillation probabilities stay above the spike bound") {
  auto config = small_config();
  config.norming = NormingMode::ByInnovation;
  config.reps = 300;
  const auto report = exp_m1_failure(config);

  CHECK(report.name == "m1_failure");
  // frozen constant: (1 - e^-0.1) - 0.02 at alpha = 1/2, epsilon = 100
  CHECK(report.scalars.at("lower_bound") ==
        doctest::Approx(0.07516258196404048).epsilon(1e-12));
  CHECK(report.scalars.at("oscillation_level") == 50.0);
  CHECK(report.criteria.at("final_p_above_bound"));
  CHECK(report.criteria.at("no_ladder_decay"));
  CHECK(report.criteria.at("monotone_control_zero"));
  CHECK(report.pass);

  const auto& p = report.series.at("p_hat");
  REQUIRE(p.size() == 2);  // ladder collapses to {1000, 2000} here
  CHECK(report.series.at("n_ladder") == std::vector<double>{1000.0, 2000.0});
  for (double v : p) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  REQUIRE(report.curve.size() == 4);
  CHECK(report.curve[3].first == "lower_bound");
}

TEST_CASE("two-atom geometry separates the metrics") {
  for (double u : {1.0, 2.0}) {
    ExperimentConfig config;
    config.u = u;
    const auto report = exp_two_atom(config);

    CHECK(report.name == "two_atom");
    CHECK(report.criteria.at("scalar_distance_equals_half_u"));
    CHECK(report.criteria.at("wm1_vanishes"));
    CHECK(report.criteria.at("wm1_monotone"));
    CHECK(report.criteria.at("joint_distance_stays_above_quarter_u"));
    CHECK(report.criteria.at("two_lipschitz_domination"));
    CHECK(report.criteria.at("brackets_closed"));
    CHECK(report.pass);

    // the weak product distance is the pure time mismatch 1/n
    CHECK(report.scalars.at("wm1_final") == doctest::Approx(1.0 / 50.0).epsilon(1e-9));
    const auto& joint = report.series.at("joint_distance");
    CHECK(joint.back() >= u / 4.0 - 1e-8);
    CHECK(joint.back() <= u / 2.0);
  }
}

TEST_CASE("blocks calibration recovers the reference indices") {
  auto config = small_config();
  config.n = 200000;
  config.reps = 20;
  config.block_length = 100;
  const auto report = exp_extremal_index(config);

  CHECK(report.name == "extremal_index");
  CHECK(report.criteria.at("within_band_iid"));
  CHECK(report.criteria.at("within_band_pair"));
  CHECK(report.criteria.at("within_band_triple"));
  CHECK(report.criteria.at("all_within_band"));
  CHECK(report.pass);
  CHECK(std::abs(report.scalars.at("theta_hat_iid") - 1.0) <= 0.05);
  CHECK(std::abs(report.scalars.at("theta_hat_pair") - 0.5) <= 0.05);
  CHECK(std::abs(report.scalars.at("theta_hat_triple") - 1.0 / 3.0) <= 0.05);
}
