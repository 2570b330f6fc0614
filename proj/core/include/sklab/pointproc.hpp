#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sklab/cadlag.hpp"

namespace sklab {

// Finite point measure on [0,1] x (R \ {0}): a multiset of (time, mark)
// atoms kept sorted by time, ties in insertion order.  Marks are nonzero
// and finite by construction.
class TimeSpacePointMeasure {
 public:
  TimeSpacePointMeasure() = default;
  static TimeSpacePointMeasure from_atoms(std::vector<std::pair<double, double>> atoms);

  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& marks() const noexcept { return marks_; }

 private:
  std::vector<double> times_;
  std::vector<double> marks_;
};

// Normalized-sample measure with atoms (i/n, X_i/a_n), i = 1..n; exact
// zeros are dropped (they are not in the mark space).
TimeSpacePointMeasure build_nn(std::span<const double> sample, double a_n);

// Sum-maximum functional: t -> (sum of marks with |x| > u up to t,
//                               max of all marks up to t floored at 0).
// The truncation is strict (|x| > u); the second coordinate ignores u and
// uses the empty-sup convention sup {} = 0.  Atoms sharing a time produce a
// single jump.
CadlagPath sum_max_functional(const TimeSpacePointMeasure& measure, double u);

struct LambdaMembership {
  bool in_lambda = false;
  bool violates_l1 = false;  // atom at time 0 or 1, or |mark| exactly u
  bool violates_l2 = false;  // one time with marks both > u and < -u
};

LambdaMembership lambda_membership(const TimeSpacePointMeasure& measure, double u);

// Number of atoms in [t_lo, t_hi] x [x_lo, x_hi] (closed ends; infinities
// allowed in the mark interval).
std::size_t restrict_count(const TimeSpacePointMeasure& measure, double t_lo, double t_hi,
                           double x_lo, double x_hi);

}  // namespace sklab
