#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sklab/cadlag.hpp"
#include "sklab/pointproc.hpp"
#include "sklab/rng.hpp"
#include "sklab/skorokhod.hpp"

using sklab::CadlagPath;
using sklab::m1_distance;
using sklab::m1_distance_monotone;
using sklab::m1_point_oscillation;
using sklab::omega_delta;
using sklab::wm1_distance;

namespace {

CadlagPath step(std::vector<double> times, std::vector<double> values) {
  return CadlagPath(1, {0.0}, std::move(times), std::move(values));
}

CadlagPath random_monotone(sklab::Philox& rng, std::size_t max_jumps) {
  std::size_t k = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_jumps));
  std::vector<double> t;
  for (std::size_t i = 0; i < k; ++i) t.push_back(0.05 + 0.9 * rng.uniform());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  std::vector<double> v;
  double cur = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    cur += 2.0 * rng.uniform();
    v.push_back(cur);
  }
  return CadlagPath(1, {0.0}, std::move(t), std::move(v));
}

CadlagPath random_step(sklab::Philox& rng, std::size_t max_jumps) {
  std::size_t k = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_jumps));
  std::vector<double> t;
  for (std::size_t i = 0; i < k; ++i) t.push_back(0.05 + 0.9 * rng.uniform());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  std::vector<double> v;
  for (std::size_t i = 0; i < t.size(); ++i) v.push_back(4.0 * (rng.uniform() - 0.5));
  return CadlagPath(1, {0.0}, std::move(t), std::move(v));
}

}  // namespace

TEST_CASE("point oscillation measures the gap to the endpoint segment") {
  CHECK(m1_point_oscillation(0.0, 1.0, 2.0) == 0.0);
  CHECK(m1_point_oscillation(0.0, 0.5, 0.0) == 0.5);
  CHECK(m1_point_oscillation(5.0, 1.0, 4.0) == 3.0);
  // the segment is taken between min and max of the outer values
  CHECK(m1_point_oscillation(2.0, 1.0, 0.0) == 0.0);
  CHECK(m1_point_oscillation(1.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("oscillation of monotone paths vanishes for every window") {
  sklab::Philox rng(31, 0);
  for (int rep = 0; rep < 200; ++rep) {
    auto x = random_monotone(rng, 8);
    for (double d : {0.01, 0.1, 0.5, 1.0}) CHECK(omega_delta(x, d) == 0.0);
  }
}

TEST_CASE("a bump inside the window is seen at full height") {
  // up to 1 at 0.5 - 1/n, back to 0 at 0.5, window 2/n
  const int n = 10;
  auto x = step({0.5 - 1.0 / n, 0.5}, {1.0, 0.0});
  CHECK(omega_delta(x, 2.0 / n) == 1.0);
  // window too small to straddle the bump: the piece gap is 1/n
  CHECK(omega_delta(x, 0.5 / n) == 0.0);
  // just above the gap is enough (the end of the previous piece is open)
  CHECK(omega_delta(x, 1.05 / n) == 1.0);
  CHECK_THROWS_AS((void)omega_delta(x, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)omega_delta(x, 1.5), std::domain_error);
}

TEST_CASE("oscillation is nondecreasing in the window width") {
  sklab::Philox rng(32, 0);
  for (int rep = 0; rep < 300; ++rep) {
    auto x = random_step(rng, 10);
    double d1 = 0.05 + 0.9 * rng.uniform();
    double d2 = 0.05 + 0.9 * rng.uniform();
    if (d1 > d2) std::swap(d1, d2);
    CHECK(omega_delta(x, d1) <= omega_delta(x, d2) + 1e-15);
  }
}

TEST_CASE("monotone distance of identical staircases is zero") {
  sklab::Philox rng(33, 0);
  for (int rep = 0; rep < 100; ++rep) {
    auto x = random_monotone(rng, 8);
    CHECK(m1_distance_monotone(x, x) == 0.0);
  }
}

TEST_CASE("a horizontal shift below the step height costs exactly the shift") {
  auto x = step({0.4}, {0.5});
  auto y = step({0.5}, {0.5});
  CHECK(m1_distance_monotone(x, y) == doctest::Approx(0.1).epsilon(1e-9));
  CHECK_THROWS_AS((void)m1_distance_monotone(step({0.5}, {-1.0}), y), std::domain_error);
}

TEST_CASE("staircases that differ by an intermediate landing converge at rate 1/n") {
  for (int n : {3, 10, 25, 50}) {
    auto x = step({0.5}, {2.0});
    auto y = step({0.5 - 1.0 / n, 0.5}, {0.5, 2.0});
    CHECK(m1_distance_monotone(x, y) == doctest::Approx(1.0 / n).epsilon(1e-9));
  }
}

TEST_CASE("general distance recovers the bump-versus-zero separation exactly") {
  for (int n : {3, 10, 50}) {
    auto y_n = step({0.5 - 1.0 / n, 0.5}, {0.5, 0.0});
    auto zero = CadlagPath(1, {0.0}, {}, {});
    auto r = m1_distance(y_n, zero);
    CHECK(r.bracket.closed);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-8));
  }
}

TEST_CASE("general distance of a path to itself is zero with a closed bracket") {
  sklab::Philox rng(34, 0);
  for (int rep = 0; rep < 50; ++rep) {
    auto x = random_step(rng, 8);
    auto r = m1_distance(x, x);
    CHECK(r.value == 0.0);
    CHECK(r.bracket.closed);
  }
}

TEST_CASE("general distance agrees with the monotone closed form") {
  sklab::Philox rng(35, 0);
  for (int rep = 0; rep < 300; ++rep) {
    auto x = random_monotone(rng, 6);
    auto y = random_monotone(rng, 6);
    const double exact = m1_distance_monotone(x, y);
    auto r = m1_distance(x, y, 256, 1e-9);
    CHECK(r.bracket.closed);
    CHECK(r.value == doctest::Approx(exact).epsilon(5e-7));
  }
}

TEST_CASE("reported distances are exactly symmetric") {
  sklab::Philox rng(36, 0);
  for (int rep = 0; rep < 100; ++rep) {
    auto x = random_step(rng, 6);
    auto y = random_step(rng, 6);
    auto a = m1_distance(x, y);
    auto b = m1_distance(y, x);
    CHECK(a.value == b.value);
    CHECK(a.bracket.lower == b.bracket.lower);
    CHECK(a.bracket.upper == b.bracket.upper);
  }
}

TEST_CASE("endpoint gaps bound the distance from below") {
  sklab::Philox rng(37, 0);
  for (int rep = 0; rep < 200; ++rep) {
    auto x = random_step(rng, 6);
    auto y = random_step(rng, 6);
    auto r = m1_distance(x, y);
    const double e0 = std::fabs(x.eval_scalar(0.0) - y.eval_scalar(0.0));
    const double e1 = std::fabs(x.eval_scalar(1.0) - y.eval_scalar(1.0));
    CHECK(r.bracket.upper + 1e-12 >= e0);
    CHECK(r.bracket.upper + 1e-12 >= e1);
  }
}

TEST_CASE("distance never exceeds the uniform metric") {
  sklab::Philox rng(38, 0);
  for (int rep = 0; rep < 200; ++rep) {
    auto x = random_step(rng, 6);
    auto y = random_step(rng, 6);
    auto r = m1_distance(x, y);
    CHECK(r.bracket.lower <= sklab::uniform_distance(x, y) + 1e-12);
  }
}

TEST_CASE("resolution and dimension preconditions are enforced") {
  auto x = step({0.2, 0.4, 0.6}, {1.0, 2.0, 3.0});
  auto zero = CadlagPath(1, {0.0}, {}, {});
  CHECK_THROWS_AS((void)m1_distance(x, zero, 2, 1e-9), std::domain_error);
  CadlagPath two(2, {0.0, 0.0}, {}, {});
  CHECK_THROWS_AS((void)m1_distance(x, two), std::domain_error);
  CHECK_THROWS_AS((void)wm1_distance(x, x), std::domain_error);
}

namespace {

CadlagPath phi_eta_n(int n, double u) {
  auto m = sklab::TimeSpacePointMeasure::from_atoms({{0.5 - 1.0 / n, u / 2.0}, {0.5, 2.0 * u}});
  return sklab::sum_max_functional(m, u);
}

CadlagPath phi_eta(double u) {
  auto m = sklab::TimeSpacePointMeasure::from_atoms({{0.5, u / 2.0}, {0.5, 2.0 * u}});
  return sklab::sum_max_functional(m, u);
}

}  // namespace

TEST_CASE("product distance is the worst coordinate") {
  // first coordinate steps at 0.4 vs 0.5, second coordinate flat in both
  auto x = CadlagPath(2, {0.0, 0.0}, {0.4}, {1.0, 0.0});
  auto y = CadlagPath(2, {0.0, 0.0}, {0.5}, {1.0, 0.0});
  auto r = wm1_distance(x, y);
  CHECK(r.value == doctest::Approx(0.1).epsilon(1e-8));

  auto same = wm1_distance(x, x);
  CHECK(same.value == 0.0);
}

TEST_CASE("the image pair converges in the product metric while the scalar gap persists") {
  const double u = 1.0;
  auto limit = phi_eta(u);
  for (int n : {3, 10, 25, 50}) {
    auto image = phi_eta_n(n, u);
    auto w = wm1_distance(image, limit);
    CHECK(w.bracket.closed);
    // coordinate 1 agrees exactly; coordinate 2 differs by the landing at
    // height u/2, a time mismatch of 1/n
    CHECK(w.value == doctest::Approx(1.0 / n).epsilon(1e-7));

    auto y_n = step({0.5 - 1.0 / n, 0.5}, {u / 2.0, 0.0});
    auto zero = CadlagPath(1, {0.0}, {}, {});
    auto s = m1_distance(y_n, zero);
    CHECK(s.value == doctest::Approx(u / 2.0).epsilon(1e-8));
  }
}

TEST_CASE("the joint strong distance stays bounded away from zero") {
  // the scalar bump y_n equals the difference of the two coordinates of the
  // image pair; (a, b) -> b - a is 2-Lipschitz for the max norm, so the
  // scalar separation u/2 forces the joint strong distance to stay >= u/4
  for (double u : {1.0, 2.0}) {
    for (int n : {8, 20, 50}) {
      auto joint = m1_distance(phi_eta_n(n, u), phi_eta(u), 256, 1e-10);
      CHECK(joint.bracket.closed);
      CHECK(u / 2.0 <= 2.0 * joint.bracket.upper + 1e-8);
      CHECK(joint.value >= u / 4.0 - 1e-8);
      CHECK(joint.value <= std::max(u / 4.0, 1.0 / n) + 1e-8);
    }
  }
}
