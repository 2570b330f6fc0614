#include "sklab/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sklab/pointproc.hpp"

namespace sklab {

MovingMaximaModel::MovingMaximaModel(double alpha_, std::vector<double> coeffs_)
    : alpha(alpha_), coeffs(std::move(coeffs_)) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("moving maxima model needs alpha strictly inside (0, 1)");
  if (coeffs.empty()) throw std::domain_error("moving maxima model needs coefficients");
  for (double c : coeffs)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw std::domain_error("moving maxima coefficients must be finite and nonnegative");
  if (!(coeffs.front() > 0.0) || !(coeffs.back() > 0.0))
    throw std::domain_error("moving maxima model needs c_0 > 0 and c_m > 0");
}

double MovingMaximaModel::coeff_alpha_sum() const {
  double s = 0.0;
  for (double c : coeffs)
    if (c > 0.0) s += std::pow(c, alpha);
  return s;
}

double MovingMaximaModel::marginal_cdf(double x) const {
  if (!(x > 0.0)) throw std::domain_error("marginal cdf defined for x > 0");
  return std::exp(-coeff_alpha_sum() * std::pow(x, -alpha));
}

double MovingMaximaModel::marginal_tail(double x) const { return 1.0 - marginal_cdf(x); }

double MovingMaximaModel::norming(std::size_t n, NormingMode mode) const {
  if (n < 2) throw std::domain_error("norming needs n >= 2");
  const double q = -std::log1p(-1.0 / static_cast<double>(n));  // -ln(1 - 1/n) > 0
  const double scale = (mode == NormingMode::ByMarginal) ? coeff_alpha_sum() : 1.0;
  return std::pow(scale / q, 1.0 / alpha);
}

double frechet_inv_cdf(double alpha, double u) {
  if (!(alpha > 0.0)) throw std::domain_error("frechet shape must be positive");
  if (!(u > 0.0) || !(u < 1.0)) throw std::domain_error("inverse cdf needs u in (0, 1)");
  const double l = -std::log(u);
  if (alpha == 0.5) return 1.0 / (l * l);
  return std::pow(l, -1.0 / alpha);
}

std::vector<double> frechet_sample(double alpha, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::domain_error("frechet_sample needs count >= 1");
  Philox rng(seed, stream_id(kStreamModel, 0));
  std::vector<double> out(count);
  for (auto& z : out) z = frechet_inv_cdf(alpha, rng.uniform());
  return out;
}

void moving_maxima_sequence(Philox& rng, const MovingMaximaModel& model, std::span<double> out) {
  if (out.empty()) throw std::domain_error("moving_maxima_sequence needs n >= 1");
  const std::size_t m = model.order();
  const double alpha = model.alpha;
  // ring of the m+1 most recent innovations, z[(k) % (m+1)] = Z_k
  std::vector<double> ring(m + 1);
  for (std::size_t i = 0; i < m; ++i)  // warm-up Z_{1-m}..Z_0 in index order
    ring[i] = frechet_inv_cdf(alpha, rng.uniform());
  for (std::size_t k = 0; k < out.size(); ++k) {
    ring[(m + k) % (m + 1)] = frechet_inv_cdf(alpha, rng.uniform());  // Z_{k+1}
    double x = 0.0;
    for (std::size_t i = 0; i <= m; ++i) {
      const double z = ring[(m + k - i) % (m + 1)];  // Z_{k+1-i}
      x = std::max(x, model.coeffs[i] * z);
    }
    out[k] = x;
  }
}

std::vector<double> moving_maxima_sample(const MovingMaximaModel& model, std::size_t n,
                                         std::uint64_t seed) {
  Philox rng(seed, stream_id(kStreamModel, 0));
  std::vector<double> out(n);
  moving_maxima_sequence(rng, model, out);
  return out;
}

CadlagPath partial_processes(std::span<const double> sample, double a_n) {
  if (sample.empty()) throw std::domain_error("partial_processes needs a nonempty sample");
  if (!(a_n > 0.0)) throw std::domain_error("partial_processes needs a_n > 0");
  std::vector<double> scaled(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) scaled[i] = sample[i] / a_n;
  auto v = CadlagPath::from_samples(scaled, 1, SampleRule::CumulativeSum);
  auto w = CadlagPath::from_samples(scaled, 1, SampleRule::RunningMax);
  return zip_pair(v, w);
}

CadlagPath truncated_process(std::span<const double> sample, double a_n, double u) {
  return sum_max_functional(build_nn(sample, a_n), u);
}

CadlagPath gn_path(std::span<const double> sample, double a_n) {
  auto l = partial_processes(sample, a_n);
  auto v = l.coordinate(0);
  auto w = l.coordinate(1);
  return linear_combination({&v, &w}, {1.0, -2.0});
}

}  // namespace sklab
