#include "sklab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sklab/parallel.hpp"
#include "sklab/pointproc.hpp"
#include "sklab/skorokhod.hpp"
#include "sklab/stats.hpp"

namespace sklab {

namespace {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void require(bool ok, const char* what) {
  if (!ok) {
    throw std::domain_error(what);
  }
}

// 256-point quantile curve (x, ecdf_empirical, cdf_limit) ready for CSV.
void attach_cdf_curve(ExperimentReport& report, const std::vector<double>& sorted_sample,
                      const std::function<double(double)>& limit_cdf) {
  const std::size_t n = sorted_sample.size();
  const std::size_t points = std::min<std::size_t>(n, 256);
  std::vector<double> xs, ecdf, limit;
  xs.reserve(points);
  ecdf.reserve(points);
  limit.reserve(points);
  for (std::size_t j = 1; j <= points; ++j) {
    const std::size_t idx = j * n / points - 1;
    xs.push_back(sorted_sample[idx]);
    ecdf.push_back(static_cast<double>(idx + 1) / static_cast<double>(n));
    limit.push_back(limit_cdf(sorted_sample[idx]));
  }
  report.curve.emplace_back("x", std::move(xs));
  report.curve.emplace_back("ecdf_empirical", std::move(ecdf));
  report.curve.emplace_back("cdf_limit", std::move(limit));
}

// empirical cdf of a sorted sample at x
double ecdf_at(const std::vector<double>& sorted, double x) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// config echo so a report is interpretable on its own
std::string model_note(const MovingMaximaModel& model, NormingMode mode) {
  std::string out = "model: moving maxima, alpha = " + format_double(model.alpha) + ", coeffs = (";
  for (std::size_t i = 0; i < model.coeffs.size(); ++i) {
    out += (i ? ", " : "") + format_double(model.coeffs[i]);
  }
  out += mode == NormingMode::ByMarginal ? "), marginal norming" : "), innovation norming";
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(n >= 1000, "experiment config requires n >= 1000");
  require(reps >= 1, "experiment config requires reps >= 1");
  require(block_length >= 1, "experiment config requires block_length >= 1");
  require(block_length * block_length <= n,
          "experiment config requires block_length <= sqrt(n)");
  require(truncation >= 1, "experiment config requires truncation >= 1");
  require(u > 0.0 && std::isfinite(u), "experiment config requires u > 0");
  require(epsilon > 0.0 && std::isfinite(epsilon), "experiment config requires epsilon > 0");
  require(!t_grid.empty(), "experiment config requires a nonempty t_grid");
  for (std::size_t g = 0; g < t_grid.size(); ++g) {
    require(std::isfinite(t_grid[g]) && t_grid[g] > 0.0 && t_grid[g] <= 1.0,
            "experiment config t_grid values must lie in (0, 1]");
    require(g == 0 || t_grid[g] > t_grid[g - 1],
            "experiment config t_grid must be strictly increasing");
  }
}

void ExperimentReport::finalize() {
  pass = !criteria.empty();
  for (const auto& [key, ok] : criteria) {
    (void)key;
    pass = pass && ok;
  }
}

std::string ExperimentReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["seed"] = seed;
  j["wall_seconds"] = wall_seconds;
  j["pass"] = pass;
  j["scalars"] = scalars;
  j["series"] = series;
  j["criteria"] = criteria;
  j["notes"] = notes;
  nlohmann::json columns = nlohmann::json::array();
  nlohmann::json data = nlohmann::json::array();
  for (const auto& [col_name, col] : curve) {
    columns.push_back(col_name);
    data.push_back(col);
  }
  j["curve"] = nlohmann::json{{"columns", columns}, {"data", data}};
  return j.dump(2);
}

std::string ExperimentReport::curve_csv() const {
  if (curve.empty()) {
    return {};
  }
  std::string out;
  for (std::size_t c = 0; c < curve.size(); ++c) {
    out += (c ? "," : "") + curve[c].first;
  }
  out += '\n';
  const std::size_t rows = curve.front().second.size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < curve.size(); ++c) {
      if (c) {
        out += ',';
      }
      out += r < curve[c].second.size() ? format_double(curve[c].second[r]) : "";
    }
    out += '\n';
  }
  return out;
}

ExperimentReport exp_marginal_max(const ExperimentConfig& config) {
  config.validate();
  require(config.norming == NormingMode::ByMarginal,
          "marginal-max experiment requires ByMarginal norming");
  Timer timer;
  ExperimentReport report;
  report.name = "marginal_max";
  report.seed = config.seed;

  const auto spec = limit_spec_for(config.model);
  const double a_n = config.model.norming(config.n, NormingMode::ByMarginal);
  std::vector<double> w1(config.reps);
  parallel_chunks(config.reps, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> x(config.n);
    for (std::size_t rep = lo; rep < hi; ++rep) {
      Philox rng(config.seed, stream_id(kStreamModel, rep));
      moving_maxima_sequence(rng, config.model, x);
      w1[rep] = *std::max_element(x.begin(), x.end()) / a_n;
    }
  }, config.threads);
  const auto cdf = [&spec](double v) { return extremal_cdf(spec, 1.0, v); };
  const double ks = ks_statistic_one_sample(w1, cdf);
  const double threshold = 2.0 / std::sqrt(static_cast<double>(config.reps));

  report.scalars["ks"] = ks;
  report.scalars["ks_threshold"] = threshold;
  report.scalars["reps"] = static_cast<double>(config.reps);
  report.scalars["n"] = static_cast<double>(config.n);
  report.scalars["alpha"] = config.model.alpha;
  report.scalars["theta"] = spec.theta;
  report.scalars["a_n"] = a_n;
  report.criteria["ks_within_threshold"] = ks <= threshold;
  report.criteria["sufficient_reps"] = config.reps >= 100;
  report.notes.push_back("threshold formula: 2 / sqrt(reps)");
  report.notes.push_back("limit marginal: P(W(1) <= x) = exp(-theta * r * x^-alpha)");
  report.notes.push_back(model_note(config.model, config.norming));
  if (config.reps < 100) {
    report.notes.push_back("insufficient sample: reps < 100, distributional check unreliable");
  }
  std::sort(w1.begin(), w1.end());
  attach_cdf_curve(report, w1, cdf);
  report.finalize();
  report.wall_seconds = timer.seconds();
  return report;
}

ExperimentReport exp_sum(const ExperimentConfig& config) {
  config.validate();
  require(config.norming == NormingMode::ByMarginal,
          "sum experiment requires ByMarginal norming");
  Timer timer;
  ExperimentReport report;
  report.name = "sum";
  report.seed = config.seed;

  const auto spec = limit_spec_for(config.model);
  const double a_n = config.model.norming(config.n, NormingMode::ByMarginal);
  std::vector<double> v1(config.reps);
  parallel_chunks(config.reps, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> x(config.n);
    for (std::size_t rep = lo; rep < hi; ++rep) {
      Philox rng(config.seed, stream_id(kStreamModel, rep));
      moving_maxima_sequence(rng, config.model, x);
      CompensatedSum sum;
      for (double v : x) {
        sum.add(v);
      }
      v1[rep] = sum.value() / a_n;
    }
  }, config.threads);

  const auto limit =
      simulate_limit_joint(spec, {1.0}, config.truncation, config.effective_limit_reps(),
                           config.seed, nullptr, config.threads);
  const double ks = ks_statistic_two_sample(v1, limit.v);
  const double threshold = 3.0 / std::sqrt(static_cast<double>(config.reps));
  const std::size_t hill_k = std::max<std::size_t>(10, config.reps / 20);
  const double hill = hill_tail_index(v1, hill_k);

  report.scalars["ks"] = ks;
  report.scalars["ks_threshold"] = threshold;
  report.scalars["hill_alpha"] = hill;
  report.scalars["hill_k"] = static_cast<double>(hill_k);
  report.scalars["alpha"] = config.model.alpha;
  report.scalars["tail_bound"] = limit.tail_bound;
  report.scalars["reps"] = static_cast<double>(config.reps);
  report.scalars["limit_reps"] = static_cast<double>(config.effective_limit_reps());
  report.scalars["truncation"] = static_cast<double>(config.truncation);
  report.scalars["n"] = static_cast<double>(config.n);
  report.criteria["ks_within_threshold"] = ks <= threshold;
  report.criteria["hill_within_band"] = std::abs(hill - config.model.alpha) <= 0.07;
  report.criteria["series_tail_negligible"] = limit.tail_bound < 1e-3;
  report.criteria["sufficient_reps"] = config.reps >= 100;
  report.notes.push_back("threshold formula: 3 / sqrt(reps)");
  report.notes.push_back("limit sample: truncated series draws of V(1)");
  report.notes.push_back(model_note(config.model, config.norming));

  std::sort(v1.begin(), v1.end());
  auto limit_sorted = sorted_copy(limit.v);
  attach_cdf_curve(report, v1,
                   [&limit_sorted](double v) { return ecdf_at(limit_sorted, v); });
  report.finalize();
  report.wall_seconds = timer.seconds();
  return report;
}

ExperimentReport exp_joint(const ExperimentConfig& config) {
  config.validate();
  require(config.norming == NormingMode::ByMarginal,
          "joint experiment requires ByMarginal norming");
  Timer timer;
  ExperimentReport report;
  report.name = "joint";
  report.seed = config.seed;

  const auto spec = limit_spec_for(config.model);
  const double a_n = config.model.norming(config.n, NormingMode::ByMarginal);
  const std::size_t tcount = config.t_grid.size();
  std::vector<std::size_t> cut(tcount);
  for (std::size_t g = 0; g < tcount; ++g) {
    cut[g] = static_cast<std::size_t>(config.t_grid[g] * static_cast<double>(config.n) + 1e-9);
  }

  // empirical pairs, column-major per grid time
  std::vector<std::vector<double>> ev(tcount, std::vector<double>(config.reps));
  std::vector<std::vector<double>> ew(tcount, std::vector<double>(config.reps));
  parallel_chunks(config.reps, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> x(config.n);
    for (std::size_t rep = lo; rep < hi; ++rep) {
      Philox rng(config.seed, stream_id(kStreamModel, rep));
      moving_maxima_sequence(rng, config.model, x);
      CompensatedSum sum;
      double running_max = 0.0;
      std::size_t g = 0;
      for (std::size_t k = 0; k < config.n && g < tcount; ++k) {
        sum.add(x[k]);
        running_max = std::max(running_max, x[k]);
        while (g < tcount && k + 1 == cut[g]) {
          ev[g][rep] = sum.value() / a_n;
          ew[g][rep] = running_max / a_n;
          ++g;
        }
      }
    }
  }, config.threads);

  const auto limit = simulate_limit_joint(spec, config.t_grid, config.truncation,
                                          config.effective_limit_reps(), config.seed,
                                          nullptr, config.threads);
  const std::size_t lreps = config.effective_limit_reps();

  double grid_sup = 0.0;
  for (std::size_t g = 0; g < tcount; ++g) {
    std::vector<double> lv(lreps), lw(lreps);
    for (std::size_t rep = 0; rep < lreps; ++rep) {
      lv[rep] = limit.v[rep * tcount + g];
      lw[rep] = limit.w[rep * tcount + g];
    }
    const auto lv_sorted = sorted_copy(lv);
    const auto lw_sorted = sorted_copy(lw);
    for (int i = 0; i < 10; ++i) {
      const double qa = empirical_quantile(lv_sorted, (i + 0.5) / 10.0);
      for (int j = 0; j < 10; ++j) {
        const double qb = empirical_quantile(lw_sorted, (j + 0.5) / 10.0);
        std::size_t emp = 0, lim = 0;
        for (std::size_t rep = 0; rep < config.reps; ++rep) {
          if (ev[g][rep] <= qa && ew[g][rep] <= qb) {
            ++emp;
          }
        }
        for (std::size_t rep = 0; rep < lreps; ++rep) {
          if (lv[rep] <= qa && lw[rep] <= qb) {
            ++lim;
          }
        }
        const double diff = std::abs(static_cast<double>(emp) / static_cast<double>(config.reps) -
                                     static_cast<double>(lim) / static_cast<double>(lreps));
        grid_sup = std::max(grid_sup, diff);
      }
    }
  }

  // dependence and distance summaries at the last grid time
  const std::size_t last = tcount - 1;
  const double rank_corr = spearman_rho(ev[last], ew[last]);
  std::vector<double> emp_rows(2 * config.reps), lim_rows(2 * lreps);
  for (std::size_t rep = 0; rep < config.reps; ++rep) {
    emp_rows[2 * rep] = ev[last][rep];
    emp_rows[2 * rep + 1] = ew[last][rep];
  }
  for (std::size_t rep = 0; rep < lreps; ++rep) {
    lim_rows[2 * rep] = limit.v[rep * tcount + last];
    lim_rows[2 * rep + 1] = limit.w[rep * tcount + last];
  }
  const double energy = energy_distance(emp_rows, lim_rows, 2, 2000);

  const double threshold = 3.0 / std::sqrt(static_cast<double>(config.reps));
  report.scalars["grid_sup"] = grid_sup;
  report.scalars["grid_sup_threshold"] = threshold;
  report.scalars["rank_corr"] = rank_corr;
  report.scalars["energy_distance"] = energy;
  report.scalars["tail_bound"] = limit.tail_bound;
  report.scalars["reps"] = static_cast<double>(config.reps);
  report.scalars["limit_reps"] = static_cast<double>(lreps);
  report.scalars["n"] = static_cast<double>(config.n);
  report.criteria["grid_sup_within_threshold"] = grid_sup <= threshold;
  report.criteria["rank_correlation_positive"] = rank_corr > 0.5;
  report.criteria["sufficient_reps"] = config.reps >= 100;
  report.notes.push_back("threshold formula: 3 / sqrt(reps)");
  report.notes.push_back(
      "finite-dimensional comparison at fixed grid times; path-level product-topology "
      "convergence is not directly testable and is covered by the oscillation experiment");
  report.notes.push_back(
      "energy distance is a raw diagnostic only: for alpha < 1 its population value is "
      "infinite, so no pass criterion attaches to it");
  report.notes.push_back(model_note(config.model, config.norming));
  for (std::size_t g = 0; g < tcount; ++g) {
    report.series["t_grid"].push_back(config.t_grid[g]);
  }
  report.finalize();
  report.wall_seconds = timer.seconds();
  return report;
}

ExperimentReport exp_karamata(const ExperimentConfig& config) {
  config.validate();
  Timer timer;
  ExperimentReport report;
  report.name = "karamata";
  report.seed = config.seed;

  const double alpha = config.model.alpha;
  const std::vector<double> u_grid{0.1, 0.25, 0.5, 1.0};
  const std::vector<std::size_t> n_grid{10000, 1000000};
  bool all_within = true;
  for (double u : u_grid) {
    const double lim = karamata_limit(alpha, u);
    for (std::size_t n : n_grid) {
      const double value = karamata_truncated_moment(config.model, u, n);
      const double rel = std::abs(value - lim) / lim;
      report.series["u"].push_back(u);
      report.series["n"].push_back(static_cast<double>(n));
      report.series["value"].push_back(value);
      report.series["limit"].push_back(lim);
      report.series["rel_error"].push_back(rel);
      if (n == n_grid.back()) {
        all_within = all_within && rel <= 0.03;
      }
    }
  }
  report.criteria["within_3pct_at_large_n"] = all_within;

  // For tail index above 1/2 the truncated moment approaches its limit only at
  // rate n^(1 - 1/alpha): expanding the exact integral in the upper incomplete
  // gamma function leaves the u-independent deficit
  // |Gamma(1 - 1/alpha)| n^(1-1/alpha) tau^(1/alpha), tau = -n log(1 - 1/n).
  // Recording it makes a tolerance miss at large alpha auditable: if the
  // measured gap equals the prediction, the quadrature is exact and the
  // tolerance is simply tighter than the convergence rate allows at this n.
  if (alpha > 0.5 && alpha < 1.0) {
    const double n_big = static_cast<double>(n_grid.back());
    const double tau = -n_big * std::log1p(-1.0 / n_big);
    const double gap = std::abs(std::tgamma(1.0 - 1.0 / alpha)) *
                       std::pow(n_big, 1.0 - 1.0 / alpha) * std::pow(tau, 1.0 / alpha);
    report.scalars["predicted_gap_abs"] = gap;
    report.scalars["predicted_gap_rel_at_u_min"] = gap / karamata_limit(alpha, u_grid.front());
    report.notes.push_back(
        "above tail index 1/2 the exact truncated moment sits below its limit by the "
        "deterministic finite-size term |Gamma(1-1/alpha)| n^(1-1/alpha) tau^(1/alpha); "
        "compare rel_error against predicted_gap_rel_at_u_min before blaming the quadrature");
  }

  // small-jump remainder sup_t |V_n - V_n^(u)|: kept terms are positive, so
  // the sup sits at t = 1
  const std::size_t n_mc = std::min<std::size_t>(config.n, 10000);
  const std::size_t reps_mc = std::min<std::size_t>(config.reps, 2000);
  const double a_n = config.model.norming(n_mc, NormingMode::ByMarginal);
  const double u_lo = 0.1, u_hi = 0.5;
  std::vector<unsigned char> lo_flag(reps_mc, 0), hi_flag(reps_mc, 0), huge_flag(reps_mc, 0);
  parallel_chunks(reps_mc, [&](std::size_t clo, std::size_t chi) {
    std::vector<double> x(n_mc);
    for (std::size_t rep = clo; rep < chi; ++rep) {
      Philox rng(config.seed, stream_id(kStreamModel, rep));
      moving_maxima_sequence(rng, config.model, x);
      CompensatedSum lo, hi;
      for (double v : x) {
        if (v <= u_lo * a_n) {
          lo.add(v);
        }
        if (v <= u_hi * a_n) {
          hi.add(v);
        }
      }
      lo_flag[rep] = lo.value() / a_n > config.epsilon;
      hi_flag[rep] = hi.value() / a_n > config.epsilon;
      huge_flag[rep] = hi.value() / a_n > 1e9;
    }
  }, config.threads);
  const auto count_set = [](const std::vector<unsigned char>& flags) {
    return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
  };
  const std::size_t lo_hits = count_set(lo_flag);
  const std::size_t hi_hits = count_set(hi_flag);
  const std::size_t huge_hits = count_set(huge_flag);
  const double p_lo = static_cast<double>(lo_hits) / static_cast<double>(reps_mc);
  const double p_hi = static_cast<double>(hi_hits) / static_cast<double>(reps_mc);
  report.scalars["remainder_p_u_0.1"] = p_lo;
  report.scalars["remainder_p_u_0.5"] = p_hi;
  report.scalars["remainder_epsilon"] = config.epsilon;
  report.scalars["remainder_n"] = static_cast<double>(n_mc);
  report.scalars["remainder_reps"] = static_cast<double>(reps_mc);
  report.criteria["remainder_monotone_in_u"] = p_lo <= p_hi;
  report.criteria["remainder_vanishes_for_large_epsilon"] = huge_hits == 0;
  report.notes.push_back(
      "truncated moment n E[(X/a_n) 1{X <= u a_n}] vs the limit u^(1-alpha) alpha/(1-alpha)");
  report.notes.push_back(model_note(config.model, NormingMode::ByMarginal));
  report.finalize();
  report.wall_seconds = timer.seconds();
  return report;
}

double gn_oscillation(std::span<const double> sample, double a_n) {
  require(a_n > 0.0 && std::isfinite(a_n), "oscillation scan requires a_n > 0");
  // G_n jumps only at the sample points, so the strict 2/n window admits
  // exactly the consecutive piece triples of g_k = (S_k - 2 M_k) / a_n,
  // g_0 = 0 included
  CompensatedSum sum;
  double running_max = 0.0;
  double g2 = 0.0, g1 = 0.0;  // g_{k-1}, g_k while processing sample k
  double osc = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    sum.add(sample[k]);
    running_max = std::max(running_max, sample[k]);
    const double g = (sum.value() - 2.0 * running_max) / a_n;
    if (k >= 1) {
      osc = std::max(osc, m1_point_oscillation(g2, g1, g));
    }
    g2 = g1;
    g1 = g;
  }
  return osc;
}

ExperimentReport exp_m1_failure(const ExperimentConfig& config) {
  config.validate();
  require(config.norming == NormingMode::ByInnovation,
          "oscillation experiment requires ByInnovation norming");
  Timer timer;
  ExperimentReport report;
  report.name = "m1_failure";
  report.seed = config.seed;

  const double alpha = config.model.alpha;
  const double eps = config.epsilon;
  const double level = eps / 2.0;
  const double bound =
      (1.0 - std::exp(-std::pow(eps, -alpha))) - std::pow(4.0, alpha) * std::pow(eps, -2.0 * alpha);

  std::vector<std::size_t> ladder{std::max<std::size_t>(1000, config.n / 100),
                                  std::max<std::size_t>(1000, config.n / 10), config.n};
  ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());

  std::vector<double> p_hats, stderrs;
  std::vector<unsigned char> hit(config.reps);
  for (std::size_t n : ladder) {
    const double a_n = config.model.norming(n, NormingMode::ByInnovation);
    parallel_chunks(config.reps, [&](std::size_t lo, std::size_t hi) {
      std::vector<double> x(n);
      for (std::size_t rep = lo; rep < hi; ++rep) {
        Philox rng(config.seed, stream_id(kStreamModel, rep));
        moving_maxima_sequence(rng, config.model, x);
        hit[rep] = gn_oscillation(x, a_n) > level;
      }
    }, config.threads);
    const std::size_t hits =
        static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
    const double p = static_cast<double>(hits) / static_cast<double>(config.reps);
    p_hats.push_back(p);
    stderrs.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(config.reps)));
  }

  // monotone control: the maxima coordinate alone has zero oscillation
  {
    const std::size_t n = ladder.back();
    const double a_n = config.model.norming(n, NormingMode::ByInnovation);
    Philox rng(config.seed, stream_id(kStreamModel, 0));
    std::vector<double> x(n);
    moving_maxima_sequence(rng, config.model, x);
    std::vector<double> scaled(n);
    for (std::size_t k = 0; k < n; ++k) {
      scaled[k] = x[k] / a_n;
    }
    const auto w_path = CadlagPath::from_samples(scaled, 1, SampleRule::RunningMax);
    report.criteria["monotone_control_zero"] =
        omega_delta(w_path, 2.0 / static_cast<double>(n)) == 0.0;
  }

  const double p_last = p_hats.back();
  const double se_last = stderrs.back();
  bool no_decay = true;
  for (std::size_t i = 0; i + 1 < p_hats.size(); ++i) {
    no_decay = no_decay && p_hats[i + 1] >= p_hats[i] - 3.0 * (stderrs[i] + stderrs[i + 1]);
  }
  report.scalars["lower_bound"] = bound;
  report.scalars["epsilon"] = eps;
  report.scalars["oscillation_level"] = level;
  report.scalars["alpha"] = alpha;
  report.scalars["p_hat_final"] = p_last;
  report.scalars["stderr_final"] = se_last;
  report.scalars["reps"] = static_cast<double>(config.reps);
  report.criteria["final_p_above_bound"] = p_last >= bound - 3.0 * se_last;
  report.criteria["no_ladder_decay"] = no_decay;
  report.notes.push_back(
      "lower bound formula: (1 - exp(-eps^-alpha)) - 4^alpha * eps^(-2 alpha)");
  report.notes.push_back(
      "no_ladder_decay: each successive p_hat within 3 combined stderrs of the previous");
  report.notes.push_back(model_note(config.model, config.norming));
  std::vector<double> ns, bounds;
  for (std::size_t n : ladder) {
    ns.push_back(static_cast<double>(n));
    bounds.push_back(bound);
  }
  report.series["n_ladder"] = ns;
  report.series["p_hat"] = p_hats;
  report.series["stderr"] = stderrs;
  report.curve.emplace_back("n", std::move(ns));
  report.curve.emplace_back("p_hat", p_hats);
  report.curve.emplace_back("stderr", stderrs);
  report.curve.emplace_back("lower_bound", std::move(bounds));
  report.finalize();
  report.wall_seconds = timer.seconds();
  return report;
}

ExperimentReport exp_two_atom(const ExperimentConfig& config) {
  require(config.u > 0.0 && std::isfinite(config.u), "two-atom geometry requires u > 0");
  Timer timer;
  ExperimentReport report;
  report.name = "two_atom";
  report.seed = config.seed;

  const double u = config.u;
  const CadlagPath zero(1, {0.0}, {}, {});
  const auto limit_image = sum_max_functional(
      TimeSpacePointMeasure::from_atoms({{0.5, u / 2.0}, {0.5, 2.0 * u}}), u);

  double scalar_dev = 0.0;
  double joint_floor_slack = 1e300;
  double lipschitz_slack = 1e300;
  bool brackets_closed = true;
  bool wm1_monotone = true;
  double prev_wm1 = 1e300;
  double final_wm1 = 0.0;
  for (int n = 3; n <= 50; ++n) {
    const double dn = static_cast<double>(n);
    const CadlagPath witness(1, {0.0}, {0.5 - 1.0 / dn, 0.5}, {u / 2.0, 0.0});
    const auto scalar = m1_distance(witness, zero, 256, 1e-10);
    brackets_closed = brackets_closed && scalar.bracket.closed;
    scalar_dev = std::max(scalar_dev, std::abs(scalar.value - u / 2.0));

    const auto image = sum_max_functional(
        TimeSpacePointMeasure::from_atoms({{0.5 - 1.0 / dn, u / 2.0}, {0.5, 2.0 * u}}), u);
    const auto weak = wm1_distance(image, limit_image);
    wm1_monotone = wm1_monotone && weak.value <= prev_wm1 + 1e-12;
    prev_wm1 = weak.value;
    final_wm1 = weak.value;

    const auto joint = m1_distance(image, limit_image, 256, 1e-10);
    brackets_closed = brackets_closed && joint.bracket.closed;
    joint_floor_slack = std::min(joint_floor_slack, joint.value - (u / 4.0 - 1e-8));
    lipschitz_slack =
        std::min(lipschitz_slack, 2.0 * joint.bracket.upper + 1e-8 - scalar.value);

    report.series["n"].push_back(dn);
    report.series["scalar_distance"].push_back(scalar.value);
    report.series["wm1_distance"].push_back(weak.value);
    report.series["joint_distance"].push_back(joint.value);
  }

  report.scalars["u"] = u;
  report.scalars["scalar_max_abs_dev_from_half_u"] = scalar_dev;
  report.scalars["wm1_final"] = final_wm1;
  report.scalars["joint_floor_slack"] = joint_floor_slack;
  report.scalars["lipschitz_slack"] = lipschitz_slack;
  report.criteria["scalar_distance_equals_half_u"] = scalar_dev <= 1e-9;
  report.criteria["wm1_vanishes"] = final_wm1 <= 0.05 * u;
  report.criteria["wm1_monotone"] = wm1_monotone;
  report.criteria["joint_distance_stays_above_quarter_u"] = joint_floor_slack >= 0.0;
  report.criteria["two_lipschitz_domination"] = lipschitz_slack >= 0.0;
  report.criteria["brackets_closed"] = brackets_closed;
  report.notes.push_back(
      "(a, b) -> b - a is 2-Lipschitz for the max norm, so the persistent scalar gap u/2 "
      "forces the joint strong distance to stay >= u/4; the joint distance pins at u/4, so "
      "the factor 2 in the domination is sharp and an unfactored comparison would fail");
  report.notes.push_back(
      "weak product distance of the image pair is the pure time mismatch 1/n, independent of u");
  report.finalize();
  report.wall_seconds = timer.seconds();
  return report;
}

ExperimentReport exp_extremal_index(const ExperimentConfig& config) {
  config.validate();
  Timer timer;
  ExperimentReport report;
  report.name = "extremal_index";
  report.seed = config.seed;

  const double alpha = config.model.alpha;
  struct Case {
    const char* label;
    MovingMaximaModel model;
    double theta;
  };
  const Case cases[] = {
      {"iid", MovingMaximaModel::iid(alpha), 1.0},
      {"pair", MovingMaximaModel::mm11(alpha), 0.5},
      {"triple", MovingMaximaModel(alpha, {1.0, 1.0, 1.0}), 1.0 / 3.0},
  };
  const std::size_t reps = std::min<std::size_t>(std::max<std::size_t>(config.reps, 1), 20);
  bool all_within = true;
  std::uint64_t stream_base = 0;
  for (const auto& c : cases) {
    // sparse level (quantile 1/2000) so block collisions stay negligible
    const double threshold = c.model.norming(2000, NormingMode::ByMarginal);
    std::vector<std::optional<double>> slots(reps);
    parallel_chunks(reps, [&](std::size_t lo, std::size_t hi) {
      std::vector<double> x(config.n);
      for (std::size_t rep = lo; rep < hi; ++rep) {
        Philox rng(config.seed, stream_id(kStreamModel, stream_base + rep));
        moving_maxima_sequence(rng, c.model, x);
        slots[rep] = blocks_extremal_index_estimator(x, threshold, config.block_length);
      }
    }, config.threads);
    stream_base += reps;
    std::vector<double> estimates;
    for (const auto& est : slots) {
      if (est) {
        estimates.push_back(*est);
      }
    }
    const double avg = estimates.empty() ? -1.0 : mean(estimates);
    const bool within = !estimates.empty() && std::abs(avg - c.theta) <= 0.05;
    all_within = all_within && within;
    report.scalars[std::string("theta_hat_") + c.label] = avg;
    report.scalars[std::string("theta_") + c.label] = c.theta;
    report.criteria[std::string("within_band_") + c.label] = within;
  }
  report.criteria["all_within_band"] = all_within;
  report.scalars["n"] = static_cast<double>(config.n);
  report.scalars["block_length"] = static_cast<double>(config.block_length);
  report.scalars["reps"] = static_cast<double>(reps);
  report.notes.push_back("blocks with max above the level / exceedances above the level");
  report.finalize();
  report.wall_seconds = timer.seconds();
  return report;
}

}  // namespace sklab
