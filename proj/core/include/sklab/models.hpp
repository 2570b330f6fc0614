#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sklab/cadlag.hpp"
#include "sklab/rng.hpp"

namespace sklab {

enum class NormingMode { ByMarginal, ByInnovation };

// Finite-order moving maxima X_k = max_i c_i Z_{k-i} driven by unit Frechet
// innovations with tail index alpha in (0,1).
struct MovingMaximaModel {
  double alpha;
  std::vector<double> coeffs;  // c_0..c_m, c_0 > 0 and c_m > 0

  MovingMaximaModel(double alpha_, std::vector<double> coeffs_);

  std::size_t order() const { return coeffs.size() - 1; }
  // sum of c_i^alpha; the marginal scale constant
  double coeff_alpha_sum() const;
  double marginal_cdf(double x) const;   // exp(-C x^-alpha) for x > 0
  double marginal_tail(double x) const;  // 1 - marginal_cdf
  // a_n with n * P(X > a_n) = 1 (ByMarginal, exact) or n * P(Z > a_n) = 1
  // (ByInnovation)
  double norming(std::size_t n, NormingMode mode) const;

  static MovingMaximaModel iid(double alpha) { return {alpha, {1.0}}; }
  static MovingMaximaModel mm11(double alpha) { return {alpha, {1.0, 1.0}}; }
};

// Z = (-ln U)^(-1/alpha); P(Z <= x) = exp(-x^-alpha)
double frechet_inv_cdf(double alpha, double u);
std::vector<double> frechet_sample(double alpha, std::size_t count, std::uint64_t seed);

// Draws Z_{1-m}..Z_n in increasing index order from the given engine and
// fills out with X_1..X_n; exactly stationary because the warm-up values are
// generated, not zero-padded.
void moving_maxima_sequence(Philox& rng, const MovingMaximaModel& model, std::span<double> out);
std::vector<double> moving_maxima_sample(const MovingMaximaModel& model, std::size_t n,
                                         std::uint64_t seed);

// L_n: coordinate 1 the partial sums / a_n, coordinate 2 the running maxima
// / a_n floored at zero, both jumping at k/n.
CadlagPath partial_processes(std::span<const double> sample, double a_n);

// L_n^(u): the same pair with the sum restricted to |X_k|/a_n > u; equals
// the sum-maximum functional applied to the normalized sample measure.
CadlagPath truncated_process(std::span<const double> sample, double a_n, double u);

// G_n = V_n - 2 W_n
CadlagPath gn_path(std::span<const double> sample, double a_n);

}  // namespace sklab
