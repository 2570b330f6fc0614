#include "sklab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace sklab {

double kahan_sum(std::span<const double> xs) {
  // Kahan-Babuska (Neumaier) variant: keeps the correction when the running
  // sum cancels through zero
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    double t = s + x;
    c += (std::fabs(s) >= std::fabs(x)) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + c;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::domain_error("mean of empty sample");
  return kahan_sum(xs) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw std::domain_error("variance needs at least two points");
  const double m = mean(xs);
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    double y = (x - m) * (x - m) - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s / static_cast<double>(xs.size() - 1);
}

std::vector<double> sorted_copy(std::span<const double> xs) {
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  return v;
}

double empirical_quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::domain_error("quantile of empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile level outside [0, 1]");
  const double n = static_cast<double>(sorted.size());
  std::size_t k = static_cast<std::size_t>(std::ceil(p * n));
  if (k == 0) k = 1;
  if (k > sorted.size()) k = sorted.size();
  return sorted[k - 1];
}

double ks_statistic_one_sample(std::span<const double> sample,
                               const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::domain_error("KS statistic of empty sample");
  auto s = sorted_copy(sample);
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
  }
  return d;
}

double ks_statistic_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::domain_error("KS statistic of empty sample");
  auto sa = sorted_copy(a);
  auto sb = sorted_copy(b);
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

namespace {

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> idx(xs.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> rank(xs.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && xs[idx[j]] == xs[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j - 1) + 1.0;
    for (std::size_t k = i; k < j; ++k) rank[idx[k]] = r;
    i = j;
  }
  return rank;
}

}  // namespace

double spearman_rho(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::domain_error("rank correlation needs two equal-length samples");
  auto ra = average_ranks(a);
  auto rb = average_ranks(b);
  const double ma = mean(ra), mb = mean(rb);
  double num = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) throw std::domain_error("rank correlation of a constant sample");
  return num / std::sqrt(va * vb);
}

double hill_tail_index(std::span<const double> sample, std::size_t k) {
  if (k == 0 || k >= sample.size())
    throw std::domain_error("Hill estimator needs 0 < k < sample size");
  auto s = sorted_copy(sample);
  if (s[s.size() - 1 - k] <= 0.0)
    throw std::domain_error("Hill estimator needs positive order statistics");
  double acc = 0.0;
  const double lx = std::log(s[s.size() - 1 - k]);
  for (std::size_t i = 0; i < k; ++i) acc += std::log(s[s.size() - 1 - i]) - lx;
  return static_cast<double>(k) / acc;
}

double chi_square_pvalue(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw std::domain_error("chi-square needs matching cell counts, at least two cells");
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw std::domain_error("chi-square expected counts must be positive");
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

namespace {

double row_distance(const double* x, const double* y, std::size_t dim) {
  double s = 0.0;
  for (std::size_t j = 0; j < dim; ++j) s += (x[j] - y[j]) * (x[j] - y[j]);
  return std::sqrt(s);
}

}  // namespace

double energy_distance(std::span<const double> a, std::span<const double> b, std::size_t dim,
                       std::size_t max_points) {
  if (dim == 0 || a.size() % dim != 0 || b.size() % dim != 0)
    throw std::domain_error("energy distance: row-major samples with matching dimension");
  std::size_t n = std::min(a.size() / dim, max_points);
  std::size_t m = std::min(b.size() / dim, max_points);
  if (n == 0 || m == 0) throw std::domain_error("energy distance of empty sample");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) ab += row_distance(&a[i * dim], &b[j * dim], dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) aa += row_distance(&a[i * dim], &a[j * dim], dim);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) bb += row_distance(&b[i * dim], &b[j * dim], dim);
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  return 2.0 * ab / (dn * dm) - aa / (dn * dn) - bb / (dm * dm);
}

}  // namespace sklab
