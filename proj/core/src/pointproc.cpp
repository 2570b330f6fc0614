#include "sklab/pointproc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sklab {

TimeSpacePointMeasure TimeSpacePointMeasure::from_atoms(
    std::vector<std::pair<double, double>> atoms) {
  for (const auto& [t, x] : atoms) {
    if (!std::isfinite(t) || t < 0.0 || t > 1.0)
      throw std::domain_error("atom time outside [0, 1]");
    if (!std::isfinite(x) || x == 0.0)
      throw std::domain_error("atom mark must be finite and nonzero");
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  TimeSpacePointMeasure m;
  m.times_.reserve(atoms.size());
  m.marks_.reserve(atoms.size());
  for (const auto& [t, x] : atoms) {
    m.times_.push_back(t);
    m.marks_.push_back(x);
  }
  return m;
}

TimeSpacePointMeasure build_nn(std::span<const double> sample, double a_n) {
  if (!(a_n > 0.0) || !std::isfinite(a_n))
    throw std::domain_error("build_nn: norming constant must be positive");
  const double n = static_cast<double>(sample.size());
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (!std::isfinite(sample[i]))
      throw std::domain_error("build_nn: sample values must be finite");
    if (sample[i] == 0.0) continue;  // zero marks carry no atom
    atoms.emplace_back(static_cast<double>(i + 1) / n, sample[i] / a_n);
  }
  return TimeSpacePointMeasure::from_atoms(std::move(atoms));
}

CadlagPath sum_max_functional(const TimeSpacePointMeasure& measure, double u) {
  if (!(u > 0.0)) throw std::domain_error("sum_max_functional: u must be positive");
  const auto& ts = measure.times();
  const auto& xs = measure.marks();

  double sum = 0.0, comp = 0.0;  // compensated truncated sum (Neumaier)
  double mx = 0.0;               // running max, floored at zero
  auto absorb = [&](double x) {
    if (std::fabs(x) > u) {
      double t = sum + x;
      comp += (std::fabs(sum) >= std::fabs(x)) ? (sum - t) + x : (x - t) + sum;
      sum = t;
    }
    if (x > mx) mx = x;
  };

  std::size_t i = 0;
  while (i < ts.size() && ts[i] == 0.0) absorb(xs[i++]);
  std::vector<double> v0 = {sum + comp, mx};

  std::vector<double> jump_times;
  std::vector<double> values;
  while (i < ts.size()) {
    const double t = ts[i];
    while (i < ts.size() && ts[i] == t) absorb(xs[i++]);
    jump_times.push_back(t);
    values.push_back(sum + comp);
    values.push_back(mx);
  }
  return CadlagPath(2, std::move(v0), std::move(jump_times), std::move(values));
}

LambdaMembership lambda_membership(const TimeSpacePointMeasure& measure, double u) {
  if (!(u > 0.0)) throw std::domain_error("lambda_membership: u must be positive");
  LambdaMembership r;
  const auto& ts = measure.times();
  const auto& xs = measure.marks();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] == 0.0 || ts[i] == 1.0 || std::fabs(xs[i]) == u) r.violates_l1 = true;
  }
  for (std::size_t i = 0; i < ts.size();) {
    std::size_t j = i;
    bool above = false, below = false;
    while (j < ts.size() && ts[j] == ts[i]) {
      if (xs[j] > u) above = true;
      if (xs[j] < -u) below = true;
      ++j;
    }
    if (above && below) r.violates_l2 = true;
    i = j;
  }
  r.in_lambda = !r.violates_l1 && !r.violates_l2;
  return r;
}

std::size_t restrict_count(const TimeSpacePointMeasure& measure, double t_lo, double t_hi,
                           double x_lo, double x_hi) {
  std::size_t count = 0;
  const auto& ts = measure.times();
  const auto& xs = measure.marks();
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i] >= t_lo && ts[i] <= t_hi && xs[i] >= x_lo && xs[i] <= x_hi) ++count;
  return count;
}

}  // namespace sklab
