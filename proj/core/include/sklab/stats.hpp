#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sklab {

// Kahan-Babuska compensated accumulator; unlike the classic Kahan loop it
// keeps the correction when the running sum cancels through zero.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) noexcept {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const noexcept { return sum + comp; }
};

double kahan_sum(std::span<const double> xs);
double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);

std::vector<double> sorted_copy(std::span<const double> xs);

// p-th empirical quantile of an ascending sample: the ceil(p*n)-th order
// statistic, clamped to the extremes.
double empirical_quantile(const std::vector<double>& sorted, double p);

// sup_x |F_n(x) - F(x)| for a continuous model cdf.
double ks_statistic_one_sample(std::span<const double> sample,
                               const std::function<double(double)>& cdf);

// sup_x |F_a(x) - F_b(x)| between two empirical cdfs.
double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b);

// Rank correlation with average ranks on ties.
double spearman_rho(std::span<const double> a, std::span<const double> b);

// Hill estimator of the tail index alpha from the top k order statistics.
double hill_tail_index(std::span<const double> sample, std::size_t k);

// Chi-square goodness-of-fit p-value for observed counts per cell against
// expected counts (cells with small expectation should be merged upstream).
double chi_square_pvalue(std::span<const double> observed, std::span<const double> expected);

// Energy distance between two d-dimensional samples stored row-major.  The
// O(n^2) double sum is evaluated on at most max_points leading rows of each.
double energy_distance(std::span<const double> a, std::span<const double> b, std::size_t dim,
                       std::size_t max_points);

}  // namespace sklab
