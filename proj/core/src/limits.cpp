#include "sklab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "sklab/parallel.hpp"
#include "sklab/stats.hpp"

namespace sklab {

namespace {

using NeumaierAcc = CompensatedSum;

void validate_spec(const LimitSpec& spec) {
  if (!(spec.alpha > 0.0) || !(spec.alpha < 1.0)) {
    throw std::domain_error("limit spec requires alpha in (0, 1)");
  }
  if (!(spec.theta > 0.0) || !(spec.theta <= 1.0)) {
    throw std::domain_error("limit spec requires theta in (0, 1]");
  }
  if (!(spec.c_plus >= 0.0) || !(spec.c_minus >= 0.0) || !(spec.c_plus + spec.c_minus > 0.0)) {
    throw std::domain_error("limit spec requires nonnegative tail constants, not both zero");
  }
  if (!(spec.r > 0.0)) {
    throw std::domain_error("limit spec requires r > 0");
  }
}

// P = (g/theta)^(-1/alpha) with the quadratic fast path shared by the model
// sampler.
double series_weight(double gamma_sum, double theta, double alpha) {
  const double g = gamma_sum / theta;
  if (alpha == 0.5) {
    return 1.0 / (g * g);
  }
  return std::pow(g, -1.0 / alpha);
}

}  // namespace

LimitSpec limit_spec_mm11(double alpha) {
  return LimitSpec{alpha, 0.5, std::pow(2.0, alpha), 0.0, 1.0};
}

LimitSpec limit_spec_iid(double alpha) { return LimitSpec{alpha, 1.0, 1.0, 0.0, 1.0}; }

LimitSpec limit_spec_for(const MovingMaximaModel& model) {
  const double alpha = model.alpha;
  double coeff_sum = 0.0;
  double coeff_max = 0.0;
  for (double c : model.coeffs) {
    coeff_sum += c;
    coeff_max = std::max(coeff_max, c);
  }
  const double top = std::pow(coeff_max, alpha);
  const double theta = top / model.coeff_alpha_sum();
  const double c_plus = std::pow(coeff_sum, alpha) / top;
  return LimitSpec{alpha, theta, c_plus, 0.0, 1.0};
}

ClusterMarkLaw ClusterMarkLaw::degenerate(double u, double r) {
  if (!std::isfinite(u) || !std::isfinite(r) || r < 0.0) {
    throw std::domain_error("degenerate mark law requires finite u and r >= 0");
  }
  ClusterMarkLaw law;
  law.samples_.push_back({u, r});
  return law;
}

ClusterMarkLaw ClusterMarkLaw::from_spec(const LimitSpec& spec) {
  validate_spec(spec);
  if (spec.c_minus != 0.0) {
    throw std::domain_error("degenerate mark law requires one-sided jumps (c_minus == 0)");
  }
  const double inv_alpha = 1.0 / spec.alpha;
  return degenerate(std::pow(spec.c_plus, inv_alpha), std::pow(spec.r, inv_alpha));
}

ClusterMarkLaw ClusterMarkLaw::resample(std::vector<ClusterMarkSample> samples) {
  if (samples.empty()) {
    throw std::domain_error("mark law resampling requires at least one sample");
  }
  for (const auto& s : samples) {
    if (!std::isfinite(s.u) || !std::isfinite(s.r) || s.r < 0.0) {
      throw std::domain_error("mark samples must be finite with r >= 0");
    }
  }
  ClusterMarkLaw law;
  law.samples_ = std::move(samples);
  return law;
}

const ClusterMarkSample& ClusterMarkLaw::draw(Philox& rng) const {
  if (samples_.size() == 1) {
    return samples_.front();
  }
  const double u = rng.uniform();
  auto idx = static_cast<std::size_t>(u * static_cast<double>(samples_.size()));
  if (idx >= samples_.size()) {
    idx = samples_.size() - 1;
  }
  return samples_[idx];
}

double ClusterMarkLaw::mean_abs_u() const {
  NeumaierAcc acc;
  for (const auto& s : samples_) {
    acc.add(std::abs(s.u));
  }
  return acc.value() / static_cast<double>(samples_.size());
}

LimitDraws simulate_limit_joint(const LimitSpec& spec, std::vector<double> t_grid,
                                std::size_t truncation, std::size_t reps, std::uint64_t seed,
                                const ClusterMarkLaw* marks, unsigned threads) {
  validate_spec(spec);
  if (t_grid.empty()) {
    throw std::domain_error("simulation requires a nonempty time grid");
  }
  for (std::size_t g = 0; g < t_grid.size(); ++g) {
    if (!std::isfinite(t_grid[g]) || !(t_grid[g] > 0.0) || !(t_grid[g] <= 1.0)) {
      throw std::domain_error("time grid values must lie in (0, 1]");
    }
    if (g > 0 && !(t_grid[g] > t_grid[g - 1])) {
      throw std::domain_error("time grid must be strictly increasing");
    }
  }
  if (truncation == 0 || reps == 0) {
    throw std::domain_error("simulation requires truncation >= 1 and reps >= 1");
  }

  ClusterMarkLaw fallback = ClusterMarkLaw::degenerate(1.0, 1.0);
  if (marks == nullptr) {
    fallback = ClusterMarkLaw::from_spec(spec);
    marks = &fallback;
  }

  const std::size_t grid_size = t_grid.size();
  LimitDraws out;
  out.t_grid = std::move(t_grid);
  out.v.assign(reps * grid_size, 0.0);
  out.w.assign(reps * grid_size, 0.0);
  out.tail_bound = series_tail_bound(spec, truncation, marks->mean_abs_u());

  parallel_chunks(reps, [&](std::size_t lo, std::size_t hi) {
    std::vector<NeumaierAcc> bucket_v(grid_size);
    std::vector<double> bucket_w(grid_size);
    for (std::size_t rep = lo; rep < hi; ++rep) {
      Philox rng(seed, stream_id(kStreamLimit, rep));
      std::fill(bucket_v.begin(), bucket_v.end(), NeumaierAcc{});
      std::fill(bucket_w.begin(), bucket_w.end(), 0.0);

      // Pinned draw order per point: arrival gap, location, then (for
      // resampled mark laws only) the mark index.
      double gamma_sum = 0.0;
      for (std::size_t i = 0; i < truncation; ++i) {
        gamma_sum += rng.exponential();
        const double t = rng.uniform();
        const ClusterMarkSample& mark = marks->draw(rng);
        const auto g = static_cast<std::size_t>(
            std::lower_bound(out.t_grid.begin(), out.t_grid.end(), t) - out.t_grid.begin());
        if (g >= grid_size) {
          continue;  // lands beyond the last grid point
        }
        const double p = series_weight(gamma_sum, spec.theta, spec.alpha);
        bucket_v[g].add(p * mark.u);
        bucket_w[g] = std::max(bucket_w[g], p * mark.r);
      }

      NeumaierAcc v_acc;
      double w_run = 0.0;
      for (std::size_t g = 0; g < grid_size; ++g) {
        v_acc.add(bucket_v[g].value());
        w_run = std::max(w_run, bucket_w[g]);
        out.v[rep * grid_size + g] = v_acc.value();
        out.w[rep * grid_size + g] = w_run;
      }
    }
  }, threads);
  return out;
}

double extremal_cdf(const LimitSpec& spec, double t, double x) {
  validate_spec(spec);
  if (!(t > 0.0) || !(t <= 1.0)) {
    throw std::domain_error("extremal cdf requires t in (0, 1]");
  }
  if (!(x > 0.0)) {
    return 0.0;
  }
  return std::exp(-t * spec.r * spec.theta * std::pow(x, -spec.alpha));
}

double series_tail_bound(const LimitSpec& spec, std::size_t truncation, double mean_abs_u) {
  validate_spec(spec);
  if (!(mean_abs_u >= 0.0) || !std::isfinite(mean_abs_u)) {
    throw std::domain_error("tail bound requires finite mean |U| >= 0");
  }
  const double s = 1.0 / spec.alpha;
  const double k = static_cast<double>(truncation);
  if (!(k + 1.0 > s)) {
    throw std::domain_error("truncation too small for the tail moment to exist");
  }
  const double log_ratio = std::lgamma(k + 1.0 - s) - std::lgamma(k);
  return std::pow(spec.theta, s) * mean_abs_u * std::exp(log_ratio) / (s - 1.0);
}

std::optional<double> blocks_extremal_index_estimator(std::span<const double> sample,
                                                      double threshold,
                                                      std::size_t block_length) {
  if (!std::isfinite(threshold)) {
    throw std::domain_error("blocks estimator requires a finite threshold");
  }
  if (block_length == 0 || sample.size() < block_length) {
    throw std::domain_error("blocks estimator requires 1 <= block_length <= sample size");
  }
  // Trailing partial block dropped: both counts run over whole blocks only,
  // keeping the ratio unbiased.
  const std::size_t nblocks = sample.size() / block_length;
  std::size_t exceedances = 0;
  std::size_t exceeding_blocks = 0;
  for (std::size_t b = 0; b < nblocks; ++b) {
    bool block_hit = false;
    for (std::size_t j = b * block_length; j < (b + 1) * block_length; ++j) {
      if (sample[j] > threshold) {
        ++exceedances;
        block_hit = true;
      }
    }
    if (block_hit) {
      ++exceeding_blocks;
    }
  }
  if (exceedances == 0) {
    return std::nullopt;
  }
  return static_cast<double>(exceeding_blocks) / static_cast<double>(exceedances);
}

std::vector<ClusterMarkSample> empirical_cluster_marks(const MovingMaximaModel& model,
                                                       std::size_t n, std::size_t block_length,
                                                       double u, std::size_t reps,
                                                       std::uint64_t seed) {
  if (block_length == 0 || n < block_length) {
    throw std::domain_error("cluster extraction requires 1 <= block_length <= n");
  }
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw std::domain_error("cluster extraction requires u > 0");
  }
  const double threshold = u * model.norming(n, NormingMode::ByMarginal);
  std::vector<ClusterMarkSample> out;
  std::vector<double> x(n);
  for (std::size_t rep = 0; rep < reps; ++rep) {
    Philox rng(seed, stream_id(kStreamAux, rep));
    moving_maxima_sequence(rng, model, x);
    const std::size_t nblocks = n / block_length;
    for (std::size_t b = 0; b < nblocks; ++b) {
      NeumaierAcc sum;
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t j = b * block_length; j < (b + 1) * block_length; ++j) {
        sum.add(x[j]);
        mx = std::max(mx, x[j]);
      }
      if (mx > threshold) {
        out.push_back({sum.value() / mx, 1.0});
      }
    }
  }
  return out;
}

std::vector<TailProcessSample> empirical_tail_process(const MovingMaximaModel& model, double x,
                                                      std::size_t lags, std::size_t runs,
                                                      std::size_t run_length,
                                                      std::uint64_t seed) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("tail process requires a positive finite level");
  }
  if (run_length <= lags) {
    throw std::domain_error("tail process requires run_length > lags");
  }
  std::vector<TailProcessSample> out;
  std::vector<double> run(run_length);
  for (std::size_t r = 0; r < runs; ++r) {
    Philox rng(seed, stream_id(kStreamAux, r));
    moving_maxima_sequence(rng, model, run);
    for (std::size_t k = 0; k + lags < run_length; ++k) {
      if (run[k] > x) {
        TailProcessSample s;
        s.y0 = run[k] / x;
        s.lags.reserve(lags);
        for (std::size_t l = 1; l <= lags; ++l) {
          s.lags.push_back(run[k + l] / x);
        }
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

double karamata_truncated_moment(const MovingMaximaModel& model, double u, std::size_t n) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw std::domain_error("truncated moment requires u > 0");
  }
  if (n < 2) {
    throw std::domain_error("truncated moment requires n >= 2");
  }
  const double alpha = model.alpha;
  const double s = 1.0 / alpha;
  const double nd = static_cast<double>(n);
  const double q = -std::log1p(-1.0 / nd);
  const double a_n = model.norming(n, NormingMode::ByMarginal);
  // After z = C x^-alpha the integral E[X 1{X <= u a_n}] becomes
  // C^(1/alpha) * int_{z_b}^inf z^(-1/alpha) e^-z dz with z_b = u^-alpha q:
  // smooth, steep only near z_b, double-exponential rules converge fast.
  const double z_b = std::pow(u, -alpha) * q;
  const auto integrand = [s](double z) { return std::pow(z, -s) * std::exp(-z); };
  double integral = 0.0;
  if (z_b < 1.0) {
    boost::math::quadrature::tanh_sinh<double> low;
    boost::math::quadrature::exp_sinh<double> high;
    integral = low.integrate(integrand, z_b, 1.0, 1e-12) +
               high.integrate(integrand, 1.0, std::numeric_limits<double>::infinity(), 1e-12);
  } else {
    boost::math::quadrature::exp_sinh<double> high;
    integral =
        high.integrate(integrand, z_b, std::numeric_limits<double>::infinity(), 1e-12);
  }
  return (nd / a_n) * std::pow(model.coeff_alpha_sum(), s) * integral;
}

double karamata_limit(double alpha, double u) {
  if (!(alpha > 0.0) || !(alpha < 1.0) || !(u > 0.0)) {
    throw std::domain_error("karamata limit requires alpha in (0, 1) and u > 0");
  }
  return std::pow(u, 1.0 - alpha) * alpha / (1.0 - alpha);
}

double anticlustering_diagnostic(const MovingMaximaModel& model, double u, std::size_t window,
                                 std::size_t n, std::uint64_t seed) {
  if (!(u > 0.0) || window == 0 || n < 2 * window + 1) {
    throw std::domain_error("diagnostic requires u > 0 and n >= 2*window + 1");
  }
  std::vector<double> x(n);
  Philox rng(seed, stream_id(kStreamAux, 0));
  moving_maxima_sequence(rng, model, x);
  const double threshold = u * model.norming(n, NormingMode::ByMarginal);
  NeumaierAcc counts;
  std::size_t centers = 0;
  for (std::size_t k = window; k + window < n; ++k) {
    if (!(x[k] > threshold)) {
      continue;
    }
    std::size_t c = 0;
    for (std::size_t j = k - window; j <= k + window; ++j) {
      if (x[j] > threshold) {
        ++c;
      }
    }
    ++centers;
    counts.add(static_cast<double>(c));
  }
  if (centers == 0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return counts.value() / static_cast<double>(centers);
}

}  // namespace sklab
