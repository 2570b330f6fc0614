#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sklab/models.hpp"
#include "sklab/rng.hpp"

namespace sklab {

// Parameters of the coupled limit pair (V, W): V an alpha-stable Levy
// process with jump measure theta*(c_plus + c_minus)-scaled power tails and
// drift derived below, W an extremal process with exponent measure
// r*theta*alpha*x^(-alpha-1)dx.
struct LimitSpec {
  double alpha;
  double theta;
  double c_plus;
  double c_minus;
  double r;

  double drift() const { return (c_plus - c_minus) * theta * alpha / (1.0 - alpha); }
};

// X_n = Z_n v Z_{n-1}: the conditioned exceedance cluster carries exactly
// two unit marks, so U = 2, R = 1, theta = 1/2, and the sum-tail constant is
// E[U^alpha] * theta = 2^alpha * 1/2 ... parametrized as c_plus = 2^alpha,
// c_minus = 0, r = 1.
LimitSpec limit_spec_mm11(double alpha);
// independent case: singleton clusters, theta = 1, c_plus = 1, r = 1
LimitSpec limit_spec_iid(double alpha);
// general finite-order model under ByMarginal norming:
// theta = max c_i^a / sum c_i^a, cluster sum/max = sum c_i / max c_i, so
// c_plus = (sum c_i)^a / max c_i^a and r = 1
LimitSpec limit_spec_for(const MovingMaximaModel& model);

struct ClusterMarkSample {
  double u;  // normalized cluster sum
  double r;  // normalized cluster max, floored at zero
};

// Law of the per-point cluster marks (U_i, R_i) of the limit series: either
// degenerate (closed-form models) or resampling of empirically extracted
// clusters.
class ClusterMarkLaw {
 public:
  static ClusterMarkLaw degenerate(double u, double r);
  // degenerate law matching the spec's tail constants:
  // U = c_plus^(1/alpha), R = r^(1/alpha)
  static ClusterMarkLaw from_spec(const LimitSpec& spec);
  static ClusterMarkLaw resample(std::vector<ClusterMarkSample> samples);

  const ClusterMarkSample& draw(Philox& rng) const;
  bool is_degenerate() const { return samples_.size() == 1; }
  double mean_abs_u() const;

 private:
  std::vector<ClusterMarkSample> samples_;
};

struct LimitDraws {
  std::vector<double> t_grid;
  std::vector<double> v;  // row-major, v[rep * t_grid.size() + g]
  std::vector<double> w;
  double tail_bound = 0.0;  // E sum_{i > K} P_i |U_i| of the dropped terms
};

// Truncated series simulation of the joint limit on a time grid:
// V(t) = sum_{i<=K, T_i<=t} P_i U_i (no centering: for alpha < 1 the raw
// series carries exactly the drift of the characteristic triple),
// W(t) = max_{i<=K, T_i<=t} P_i R_i v 0, with P_i = (Gamma_i/theta)^(-1/alpha)
// over standard Poisson arrivals Gamma_i and T_i iid uniform on [0,1].
// Replicates run on `threads` workers (0: all available) with one stream per
// replicate, so draws are identical for every thread count.
LimitDraws simulate_limit_joint(const LimitSpec& spec, std::vector<double> t_grid,
                                std::size_t truncation, std::size_t reps, std::uint64_t seed,
                                const ClusterMarkLaw* marks = nullptr, unsigned threads = 0);

// P(W(t) <= x) = exp(-t * r * theta * x^-alpha)
double extremal_cdf(const LimitSpec& spec, double t, double x);

// E sum_{i>K} P_i |U_i|, evaluated in closed form: E[Gamma_i^-s] =
// Gamma(i-s)/Gamma(i) telescopes to Gamma(K+1-s)/((s-1)Gamma(K)), s = 1/alpha.
double series_tail_bound(const LimitSpec& spec, std::size_t truncation, double mean_abs_u);

// Blocks estimator of the extremal index: the ratio of threshold-exceeding
// blocks to threshold exceedances.  Empty when nothing exceeds.
std::optional<double> blocks_extremal_index_estimator(std::span<const double> sample,
                                                      double threshold,
                                                      std::size_t block_length);

// Extracts normalized exceedance clusters: for every length-r block of a
// fresh model run whose maximum exceeds u * a_n (ByMarginal a_n), records
// (block sum / block max, 1).
std::vector<ClusterMarkSample> empirical_cluster_marks(const MovingMaximaModel& model,
                                                       std::size_t n, std::size_t block_length,
                                                       double u, std::size_t reps,
                                                       std::uint64_t seed);

struct TailProcessSample {
  double y0;                 // X_0 / x given X_0 > x
  std::vector<double> lags;  // X_l / x for l = 1..L
};

// Conditional draws of the rescaled window given an exceedance of x.
std::vector<TailProcessSample> empirical_tail_process(const MovingMaximaModel& model, double x,
                                                      std::size_t lags, std::size_t runs,
                                                      std::size_t run_length, std::uint64_t seed);

// n * E[(X_1/a_n) 1{X_1 <= u a_n}] by quadrature against the exact marginal
// law (ByMarginal a_n); converges to karamata_limit(alpha, u) as n grows.
double karamata_truncated_moment(const MovingMaximaModel& model, double u, std::size_t n);
double karamata_limit(double alpha, double u);  // u^(1-alpha) * alpha/(1-alpha)

// Mean number of exceedances of u * a_n in a +-window around a conditioning
// exceedance (cluster-size proxy; ~1/theta for small windows).
double anticlustering_diagnostic(const MovingMaximaModel& model, double u, std::size_t window,
                                 std::size_t n, std::uint64_t seed);

}  // namespace sklab
