#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sklab/rng.hpp"
#include "sklab/stats.hpp"

TEST_CASE("compensated sums survive cancellation") {
  std::vector<double> xs = {1e16, 1.0, -1e16, 1.0};
  CHECK(sklab::kahan_sum(xs) == 2.0);
  CHECK(sklab::mean(std::vector<double>{1.0, 2.0, 3.0}) == 2.0);
  CHECK(sklab::sample_variance(std::vector<double>{1.0, 2.0, 3.0}) == 1.0);
}

TEST_CASE("empirical quantiles are order statistics") {
  std::vector<double> s = {1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(sklab::empirical_quantile(s, 0.0) == 1.0);
  CHECK(sklab::empirical_quantile(s, 0.2) == 1.0);
  CHECK(sklab::empirical_quantile(s, 0.21) == 2.0);
  CHECK(sklab::empirical_quantile(s, 0.5) == 3.0);
  CHECK(sklab::empirical_quantile(s, 1.0) == 5.0);
  CHECK_THROWS_AS((void)sklab::empirical_quantile({}, 0.5), std::domain_error);
}

TEST_CASE("one-sample KS statistic against the true cdf of a tiny sample") {
  // sample {0.5} vs F(x) = x on [0,1]: sup is at the jump, D = 1/2
  std::vector<double> s = {0.5};
  auto unif = [](double x) { return std::min(1.0, std::max(0.0, x)); };
  CHECK(sklab::ks_statistic_one_sample(s, unif) == doctest::Approx(0.5));

  // {0.25, 0.75}: ecdf steps to 1/2 at .25 and 1 at .75 -> D = 1/4
  std::vector<double> s2 = {0.25, 0.75};
  CHECK(sklab::ks_statistic_one_sample(s2, unif) == doctest::Approx(0.25));
}

TEST_CASE("KS statistic of a large uniform sample is small") {
  sklab::Philox rng(11, 0);
  std::vector<double> s(20000);
  for (auto& x : s) x = rng.uniform();
  auto unif = [](double x) { return std::min(1.0, std::max(0.0, x)); };
  CHECK(sklab::ks_statistic_one_sample(s, unif) < 2.0 / std::sqrt(20000.0));
}

TEST_CASE("two-sample KS statistic on disjoint and identical samples") {
  std::vector<double> a = {1.0, 2.0, 3.0};
  std::vector<double> b = {4.0, 5.0, 6.0};
  CHECK(sklab::ks_statistic_two_sample(a, b) == doctest::Approx(1.0));
  CHECK(sklab::ks_statistic_two_sample(a, a) == doctest::Approx(0.0));
  std::vector<double> c = {1.0, 4.0};
  // ecdfs cross: after 1.0, F_a = 1/3 vs F_c = 1/2; after 3.0, 1 vs 1/2
  CHECK(sklab::ks_statistic_two_sample(a, c) == doctest::Approx(0.5));
}

TEST_CASE("rank correlation detects monotone association and its absence") {
  std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
  std::vector<double> inc = {10.0, 20.0, 30.0, 40.0};
  std::vector<double> dec = {4.0, 3.0, 2.0, 1.0};
  CHECK(sklab::spearman_rho(a, inc) == doctest::Approx(1.0));
  CHECK(sklab::spearman_rho(a, dec) == doctest::Approx(-1.0));

  sklab::Philox rng(5, 0);
  std::vector<double> x(5000), y(5000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.uniform();
    y[i] = rng.uniform();
  }
  CHECK(std::fabs(sklab::spearman_rho(x, y)) < 0.05);
}

TEST_CASE("Hill estimator recovers the tail index of exact Pareto data") {
  // X = U^{-1/alpha} is Pareto with index alpha; the Hill estimator on all
  // but one order statistic is exactly distributed around alpha
  sklab::Philox rng(17, 0);
  const double alpha = 0.5;
  std::vector<double> s(50000);
  for (auto& x : s) x = std::pow(rng.uniform(), -1.0 / alpha);
  const double est = sklab::hill_tail_index(s, 5000);
  CHECK(est == doctest::Approx(alpha).epsilon(0.05));
  CHECK_THROWS_AS((void)sklab::hill_tail_index(s, 0), std::domain_error);
  CHECK_THROWS_AS((void)sklab::hill_tail_index(s, s.size()), std::domain_error);
}

TEST_CASE("chi-square p-value is uniform-ish under the null and tiny under gross misfit") {
  std::vector<double> obs = {100.0, 100.0, 100.0, 100.0};
  std::vector<double> exp_counts = {100.0, 100.0, 100.0, 100.0};
  CHECK(sklab::chi_square_pvalue(obs, exp_counts) == doctest::Approx(1.0));
  std::vector<double> bad = {400.0, 0.0, 0.0, 0.0};
  CHECK(sklab::chi_square_pvalue(bad, exp_counts) < 1e-10);
}

TEST_CASE("energy distance separates shifted clouds and vanishes on identical ones") {
  sklab::Philox rng(23, 0);
  std::vector<double> a(2000), b(2000), c(2000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.uniform();
    b[i] = rng.uniform();
    c[i] = rng.uniform() + 5.0;
  }
  const double same = sklab::energy_distance(a, b, 1, 1000);
  const double far = sklab::energy_distance(a, c, 1, 1000);
  CHECK(std::fabs(same) < 0.05);
  CHECK(far > 5.0);
  CHECK(sklab::energy_distance(a, a, 1, 1000) == doctest::Approx(0.0));
}
