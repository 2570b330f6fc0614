#include "sklab/cadlag.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sklab {

namespace {

void check_finite(const std::vector<double>& xs, const char* what) {
  for (double v : xs)
    if (!std::isfinite(v)) throw std::domain_error(std::string(what) + " must be finite");
}

}  // namespace

CadlagPath::CadlagPath(std::size_t dim, std::vector<double> initial_value,
                       std::vector<double> jump_times, std::vector<double> post_jump_values)
    : dim_(dim),
      v0_(std::move(initial_value)),
      times_(std::move(jump_times)),
      values_(std::move(post_jump_values)) {
  if (dim_ != 1 && dim_ != 2) throw std::domain_error("path dimension must be 1 or 2");
  if (v0_.size() != dim_) throw std::domain_error("initial value has wrong dimension");
  if (values_.size() != times_.size() * dim_)
    throw std::domain_error("jump values do not match jump times");
  check_finite(v0_, "path values");
  check_finite(values_, "path values");
  double prev = 0.0;
  for (double t : times_) {
    if (!(t > prev) || !(t <= 1.0))
      throw std::domain_error("jump times must be strictly increasing within (0,1]");
    prev = t;
  }
}

CadlagPath CadlagPath::constant(std::size_t dim, std::vector<double> value) {
  return CadlagPath(dim, std::move(value), {}, {});
}

CadlagPath CadlagPath::from_samples(std::span<const double> samples, std::size_t dim,
                                    SampleRule rule) {
  if (dim == 0 || samples.size() % dim != 0)
    throw std::domain_error("sample buffer does not match dimension");
  const std::size_t n = samples.size() / dim;
  if (n == 0) throw std::domain_error("from_samples needs at least one sample");

  std::vector<double> times(n);
  const double dn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) times[k] = static_cast<double>(k + 1) / dn;

  std::vector<double> values(n * dim);
  switch (rule) {
    case SampleRule::CumulativeSum: {
      // compensated (Kahan-Babuska) sums, one accumulator per coordinate;
      // the plain Kahan loop drops its correction when the running sum
      // cancels through zero
      std::vector<double> acc(dim, 0.0), comp(dim, 0.0);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < dim; ++j) {
          const double x = samples[k * dim + j];
          const double t = acc[j] + x;
          comp[j] += (std::fabs(acc[j]) >= std::fabs(x)) ? (acc[j] - t) + x : (x - t) + acc[j];
          acc[j] = t;
          values[k * dim + j] = acc[j] + comp[j];
        }
      break;
    }
    case SampleRule::RunningMax: {
      std::vector<double> acc(dim, 0.0);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < dim; ++j) {
          acc[j] = std::max(acc[j], samples[k * dim + j]);
          values[k * dim + j] = acc[j];
        }
      break;
    }
    case SampleRule::Raw:
      values.assign(samples.begin(), samples.end());
      break;
  }
  return CadlagPath(dim, std::vector<double>(dim, 0.0), std::move(times), std::move(values));
}

std::span<const double> CadlagPath::post_jump_value(std::size_t k) const {
  if (k >= times_.size()) throw std::out_of_range("jump index out of range");
  return {values_.data() + k * dim_, dim_};
}

std::span<const double> CadlagPath::final_value() const noexcept {
  if (times_.empty()) return {v0_.data(), dim_};
  return {values_.data() + (times_.size() - 1) * dim_, dim_};
}

std::size_t CadlagPath::piece_index(double t) const {
  return static_cast<std::size_t>(
      std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
}

void CadlagPath::eval(double t, std::span<double> out) const {
  if (!(t >= 0.0) || !(t <= 1.0)) throw std::domain_error("eval time outside [0,1]");
  if (out.size() != dim_) throw std::domain_error("output span has wrong dimension");
  const std::size_t k = piece_index(t);
  const double* src = (k == 0) ? v0_.data() : values_.data() + (k - 1) * dim_;
  std::copy(src, src + dim_, out.begin());
}

void CadlagPath::left_limit(double t, std::span<double> out) const {
  if (!(t > 0.0) || !(t <= 1.0)) throw std::domain_error("left_limit time outside (0,1]");
  if (out.size() != dim_) throw std::domain_error("output span has wrong dimension");
  const std::size_t k = static_cast<std::size_t>(
      std::lower_bound(times_.begin(), times_.end(), t) - times_.begin());
  const double* src = (k == 0) ? v0_.data() : values_.data() + (k - 1) * dim_;
  std::copy(src, src + dim_, out.begin());
}

double CadlagPath::eval_scalar(double t) const {
  if (dim_ != 1) throw std::domain_error("eval_scalar requires a scalar path");
  double v;
  eval(t, {&v, 1});
  return v;
}

double CadlagPath::left_limit_scalar(double t) const {
  if (dim_ != 1) throw std::domain_error("left_limit_scalar requires a scalar path");
  double v;
  left_limit(t, {&v, 1});
  return v;
}

CadlagPath CadlagPath::coordinate(std::size_t j) const {
  if (j >= dim_) throw std::out_of_range("coordinate index out of range");
  std::vector<double> vals(times_.size());
  for (std::size_t k = 0; k < times_.size(); ++k) vals[k] = values_[k * dim_ + j];
  return CadlagPath(1, {v0_[j]}, times_, std::move(vals));
}

CadlagPath linear_combination(const std::vector<const CadlagPath*>& paths,
                              const std::vector<double>& coeffs) {
  if (paths.empty() || paths.size() != coeffs.size())
    throw std::domain_error("linear_combination needs matching paths and coefficients");
  const std::size_t dim = paths[0]->dim();
  for (const CadlagPath* p : paths)
    if (p->dim() != dim) throw std::domain_error("linear_combination dimension mismatch");

  std::vector<double> v0(dim, 0.0);
  for (std::size_t p = 0; p < paths.size(); ++p)
    for (std::size_t j = 0; j < dim; ++j) v0[j] += coeffs[p] * paths[p]->initial_value()[j];

  // k-way merge over the sorted jump-time lists (exact equality)
  std::vector<std::size_t> at(paths.size(), 0);
  std::vector<const double*> cur(paths.size());
  for (std::size_t p = 0; p < paths.size(); ++p) cur[p] = paths[p]->initial_value().data();

  std::vector<double> times, values;
  for (;;) {
    double next = 2.0;
    for (std::size_t p = 0; p < paths.size(); ++p)
      if (at[p] < paths[p]->jump_count()) next = std::min(next, paths[p]->jump_times()[at[p]]);
    if (next > 1.0) break;
    for (std::size_t p = 0; p < paths.size(); ++p)
      if (at[p] < paths[p]->jump_count() && paths[p]->jump_times()[at[p]] == next)
        cur[p] = paths[p]->post_jump_value(at[p]++).data();
    times.push_back(next);
    for (std::size_t j = 0; j < dim; ++j) {
      double v = 0.0;
      for (std::size_t p = 0; p < paths.size(); ++p) v += coeffs[p] * cur[p][j];
      values.push_back(v);
    }
  }
  return CadlagPath(dim, std::move(v0), std::move(times), std::move(values));
}

CadlagPath zip_pair(const CadlagPath& first, const CadlagPath& second) {
  if (first.dim() != 1 || second.dim() != 1)
    throw std::domain_error("zip_pair takes two scalar paths");
  if (first.jump_times() != second.jump_times())
    throw std::domain_error("zip_pair requires identical time grids");
  std::vector<double> v0 = {first.initial_value()[0], second.initial_value()[0]};
  std::vector<double> values(2 * first.jump_count());
  for (std::size_t k = 0; k < first.jump_count(); ++k) {
    values[2 * k] = first.post_jump_value(k)[0];
    values[2 * k + 1] = second.post_jump_value(k)[0];
  }
  return CadlagPath(2, std::move(v0), first.jump_times(), std::move(values));
}

}  // namespace sklab
