#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sklab/limits.hpp"
#include "sklab/models.hpp"

namespace sklab {

// Shared knobs for the Monte Carlo experiments.  Fields not used by a given
// experiment are ignored by it; validate() enforces only the cross-cutting
// invariants, per-experiment preconditions are checked by the experiment.
struct ExperimentConfig {
  MovingMaximaModel model = MovingMaximaModel::mm11(0.5);
  std::size_t n = 10000;
  std::size_t reps = 10000;
  std::uint64_t seed = 1;
  NormingMode norming = NormingMode::ByMarginal;

  double u = 1.0;            // truncation level / geometry scale
  double epsilon = 100.0;    // oscillation / remainder level
  std::vector<double> t_grid{0.5, 1.0};
  std::size_t block_length = 100;    // estimator blocks, must stay <= sqrt(n)
  std::size_t truncation = 10000;    // series truncation K for limit draws
  std::size_t limit_reps = 0;        // 0: defaults to 10 * reps
  unsigned threads = 0;              // replicate workers; 0: all available.
                                     // Never affects results, only wall time.

  void validate() const;  // throws std::domain_error
  std::size_t effective_limit_reps() const { return limit_reps ? limit_reps : 10 * reps; }
};

// Self-contained result: every pass/fail in `criteria` is recomputable from
// `scalars`/`series` alone, and `curve` holds plot-ready columns.
struct ExperimentReport {
  std::string name;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  bool pass = false;
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<double>> series;
  std::map<std::string, bool> criteria;
  std::vector<std::pair<std::string, std::vector<double>>> curve;  // CSV columns
  std::vector<std::string> notes;

  void finalize();                // pass = conjunction of criteria
  std::string to_json() const;    // canonical (sorted keys)
  std::string curve_csv() const;  // header + rows; empty when no curve
};

// E1: empirical maxima W_n(1) against the closed-form extremal marginal.
ExperimentReport exp_marginal_max(const ExperimentConfig& config);

// E2: empirical sums V_n(1) against truncated-series draws of V(1).
ExperimentReport exp_sum(const ExperimentConfig& config);

// E3: joint (V_n, W_n) at fixed times against simulated limit pairs
// (finite-dimensional check; path-level weak-M1 is not directly testable).
ExperimentReport exp_joint(const ExperimentConfig& config);

// E4: truncated-moment quadrature against the regular-variation limit plus
// the small-jump remainder ordering in u.
ExperimentReport exp_karamata(const ExperimentConfig& config);

// Single-pass 2/n-window oscillation of the combined path built from a raw
// sample: max over consecutive value triples of (sums - 2 maxima) / a_n.
// Agrees with omega_delta(gn_path(sample, a_n), 2.0/n) up to summation
// rounding, without materialising the path.
double gn_oscillation(std::span<const double> sample, double a_n);

// E5: empirical probability that the 2/n-oscillation of G_n = V_n - 2 W_n
// exceeds epsilon/2 stays bounded away from zero along an n-ladder.
ExperimentReport exp_m1_failure(const ExperimentConfig& config);

// E6: deterministic two-atom geometry: the scalar witness keeps strong-M1
// distance u/2 while the image pair converges in the product metric.
ExperimentReport exp_two_atom(const ExperimentConfig& config);

// The extremal-index calibration used by the acceptance gate: averaged
// blocks estimates for iid / pairwise / triple clustering.
ExperimentReport exp_extremal_index(const ExperimentConfig& config);

}  // namespace sklab
