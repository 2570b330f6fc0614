#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sklab {

enum class SampleRule { CumulativeSum, RunningMax, Raw };

// Right-continuous step function x: [0,1] -> R^d (d = 1 or 2) with finitely
// many jumps, stored as an initial value plus ordered (time, value) pairs.
// Jump times are strictly increasing and lie in (0,1]; a jump "at 0" is
// expressed through the initial value instead.  A recorded jump may be
// trivial (value equal to its predecessor); such entries are kept, not
// compressed, so time grids survive arithmetic on paths.
class CadlagPath {
 public:
  CadlagPath(std::size_t dim, std::vector<double> initial_value,
             std::vector<double> jump_times, std::vector<double> post_jump_values);

  static CadlagPath constant(std::size_t dim, std::vector<double> value);

  // Step path on the grid k/n, k = 0..n, from n samples in R^dim (row
  // major).  The value on [k/n, (k+1)/n) is derived from entries 1..k with
  // the index-0 value fixed at zero: partial sums for CumulativeSum
  // (compensated summation), running maxima floored at zero for RunningMax,
  // and the sample itself for Raw (zero before the first sample).
  static CadlagPath from_samples(std::span<const double> samples, std::size_t dim,
                                 SampleRule rule);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t jump_count() const noexcept { return times_.size(); }
  const std::vector<double>& jump_times() const noexcept { return times_; }
  const std::vector<double>& post_jump_values() const noexcept { return values_; }

  std::span<const double> initial_value() const noexcept { return {v0_.data(), dim_}; }
  std::span<const double> post_jump_value(std::size_t k) const;
  std::span<const double> final_value() const noexcept;

  void eval(double t, std::span<double> out) const;
  void left_limit(double t, std::span<double> out) const;

  // Scalar conveniences, valid only when dim() == 1.
  double eval_scalar(double t) const;
  double left_limit_scalar(double t) const;

  // Component j as a scalar path on the same time grid.
  CadlagPath coordinate(std::size_t j) const;

  bool operator==(const CadlagPath&) const = default;

 private:
  std::size_t dim_;
  std::vector<double> v0_;
  std::vector<double> times_;
  std::vector<double> values_;  // jump_count * dim, row major

  // index of the active piece at time t: number of jump times <= t
  std::size_t piece_index(double t) const;
};

// Pointwise linear combination sum_k coeffs[k] * paths[k].  All paths must
// share the dimension; the jump-time grid of the result is the union of the
// inputs' grids, merged by exact floating-point equality (callers align
// grids by constructing times identically, e.g. k/n).
CadlagPath linear_combination(const std::vector<const CadlagPath*>& paths,
                              const std::vector<double>& coeffs);

// Two scalar paths on the identical time grid, zipped into one R^2 path.
CadlagPath zip_pair(const CadlagPath& first, const CadlagPath& second);

}  // namespace sklab
