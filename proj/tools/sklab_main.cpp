// Command-line front end: sample generation, path distances, limit draws,
// the Monte Carlo experiment suite, and report merging.  Config files
// (TOML or JSON) fill defaults, explicit flags override them, and the
// SKLAB_SEED environment variable overrides every seed source.
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sklab/experiments.hpp"
#include "sklab/json_io.hpp"
#include "sklab/limits.hpp"
#include "sklab/models.hpp"
#include "sklab/skorokhod.hpp"
#include "sklab/stats.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailedCriteria = 1;
constexpr int kExitConfigError = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path);
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// "-" means stdout
void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << content;
}

// flat JSON objects as a CLI11 config source, so --config works the same
// for TOML and JSON files
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    input >> j;
    if (!j.is_object()) {
      throw CLI::ConversionError("config root must be a JSON object");
    }
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_array()) {
        for (const auto& element : value) {
          item.inputs.push_back(element.is_string() ? element.get<std::string>()
                                                    : element.dump());
        }
      } else if (value.is_string()) {
        item.inputs.push_back(value.get<std::string>());
      } else {
        item.inputs.push_back(value.dump());
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

// located before CLI11 parsing so file values can fill defaults and every
// explicitly given flag still wins
std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--config=", 0) == 0) {
      return arg.substr(9);
    }
    if (arg == "--config" && i + 1 < argc) {
      return argv[i + 1];
    }
  }
  return {};
}

bool ends_with(const std::string& text, const std::string& suffix) {
  return text.size() >= suffix.size() &&
         text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<CLI::ConfigItem> load_config_items(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config file " + path);
  }
  if (ends_with(path, ".json")) {
    return JsonConfig{}.from_config(in);
  }
  return CLI::ConfigTOML{}.from_config(in);
}

double parse_config_double(const CLI::ConfigItem& item) {
  if (item.inputs.size() != 1) {
    throw std::runtime_error("config key '" + item.name + "' expects one value");
  }
  std::size_t used = 0;
  const double value = std::stod(item.inputs.front(), &used);
  if (used != item.inputs.front().size()) {
    throw std::runtime_error("config key '" + item.name + "' is not a number");
  }
  return value;
}

std::uint64_t parse_config_u64(const CLI::ConfigItem& item) {
  if (item.inputs.size() != 1) {
    throw std::runtime_error("config key '" + item.name + "' expects one value");
  }
  std::size_t used = 0;
  const unsigned long long value = std::stoull(item.inputs.front(), &used);
  if (used != item.inputs.front().size()) {
    throw std::runtime_error("config key '" + item.name + "' is not an unsigned integer");
  }
  return value;
}

std::vector<double> parse_config_doubles(const CLI::ConfigItem& item) {
  std::vector<double> values;
  for (const auto& input : item.inputs) {
    std::size_t used = 0;
    values.push_back(std::stod(input, &used));
    if (used != input.size()) {
      throw std::runtime_error("config key '" + item.name + "' holds a non-number");
    }
  }
  return values;
}

// final override: the environment wins over flags and config files
void apply_seed_env(std::uint64_t& seed) {
  const char* raw = std::getenv("SKLAB_SEED");
  if (raw == nullptr || *raw == '\0') {
    return;
  }
  std::uint64_t value = 0;
  for (const char* p = raw; *p; ++p) {
    if (!std::isdigit(static_cast<unsigned char>(*p))) {
      throw std::runtime_error("SKLAB_SEED must be a decimal unsigned integer");
    }
    value = value * 10 + static_cast<std::uint64_t>(*p - '0');
  }
  seed = value;
}

struct SampleArgs {
  double alpha = 0.5;
  std::vector<double> coeffs{1.0, 1.0};
  std::size_t n = 10000;
  std::uint64_t seed = 1;
  std::string norming = "marginal";
  bool partial = false;
  std::string out = "-";
};

struct LimitArgs {
  double alpha = 0.5;
  std::vector<double> coeffs{1.0, 1.0};
  std::vector<double> t_grid{0.5, 1.0};
  std::size_t truncation = 10000;
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  std::string out = "-";
};

struct DistArgs {
  std::string file_a;
  std::string file_b;
  std::size_t resolution = 256;
  double tol = 1e-10;
  double delta = 0.1;
};

struct ExpArgs {
  double alpha = 0.5;
  std::vector<double> coeffs{1.0, 1.0};
  std::size_t n = 10000;
  std::size_t reps = 10000;
  std::uint64_t seed = 1;
  std::string norming;  // per-experiment default filled at dispatch
  double u = 1.0;
  double eps = 100.0;
  std::vector<double> t_grid{0.5, 1.0};
  std::size_t block = 100;
  std::size_t truncation = 10000;
  std::size_t limit_reps = 0;
  std::string out = "-";
  std::string csv;
  std::string config;
};

void apply_config_items(const std::vector<CLI::ConfigItem>& items, ExpArgs& args) {
  for (const auto& item : items) {
    if (!item.parents.empty()) {
      throw std::runtime_error("config keys must be top-level, got section for '" +
                               item.name + "'");
    }
    if (item.name == "alpha") {
      args.alpha = parse_config_double(item);
    } else if (item.name == "coeffs") {
      args.coeffs = parse_config_doubles(item);
    } else if (item.name == "n") {
      args.n = parse_config_u64(item);
    } else if (item.name == "reps") {
      args.reps = parse_config_u64(item);
    } else if (item.name == "seed") {
      args.seed = parse_config_u64(item);
    } else if (item.name == "norming") {
      if (item.inputs.size() != 1) {
        throw std::runtime_error("config key 'norming' expects one value");
      }
      args.norming = item.inputs.front();
    } else if (item.name == "u") {
      args.u = parse_config_double(item);
    } else if (item.name == "eps") {
      args.eps = parse_config_double(item);
    } else if (item.name == "t-grid" || item.name == "t_grid") {
      args.t_grid = parse_config_doubles(item);
    } else if (item.name == "block") {
      args.block = parse_config_u64(item);
    } else if (item.name == "truncation") {
      args.truncation = parse_config_u64(item);
    } else if (item.name == "limit-reps" || item.name == "limit_reps") {
      args.limit_reps = parse_config_u64(item);
    } else {
      throw std::runtime_error("unknown config key '" + item.name + "'");
    }
  }
}

struct ReportArgs {
  std::vector<std::string> files;
  std::string out = "-";
};

sklab::NormingMode parse_norming(const std::string& name) {
  if (name == "marginal") {
    return sklab::NormingMode::ByMarginal;
  }
  if (name == "innovation") {
    return sklab::NormingMode::ByInnovation;
  }
  throw std::runtime_error("norming must be 'marginal' or 'innovation'");
}

void add_exp_options(CLI::App* sub, ExpArgs& args, const std::string& default_norming) {
  args.norming = default_norming;
  sub->add_option("--alpha", args.alpha, "tail index in (0, 1)")->capture_default_str();
  sub->add_option("--coeffs", args.coeffs, "moving-maxima coefficients")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--n", args.n, "sample length per replicate")->capture_default_str();
  sub->add_option("--reps", args.reps, "Monte Carlo replicates")->capture_default_str();
  sub->add_option("--seed", args.seed, "base seed (SKLAB_SEED overrides)")
      ->capture_default_str();
  sub->add_option("--norming", args.norming,
                  "scaling sequence: 'marginal' or 'innovation'")
      ->capture_default_str();
  sub->add_option("--u", args.u, "truncation level / geometry scale")->capture_default_str();
  sub->add_option("--eps", args.eps, "oscillation / remainder level")->capture_default_str();
  sub->add_option("--t-grid", args.t_grid, "comparison times in (0, 1]")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--block", args.block, "block length for the extremal-index estimator")
      ->capture_default_str();
  sub->add_option("--truncation", args.truncation, "series truncation for limit draws")
      ->capture_default_str();
  sub->add_option("--limit-reps", args.limit_reps, "limit draws (0: 10x reps)")
      ->capture_default_str();
  sub->add_option("--out", args.out, "report destination ('-' for stdout)")
      ->capture_default_str();
  sub->add_option("--csv", args.csv, "also write the plot-ready curve as CSV");
  sub->add_option("--config", args.config, "TOML or JSON config file (flags win)");
}

sklab::ExperimentConfig to_config(const ExpArgs& args) {
  sklab::ExperimentConfig config;
  config.model = sklab::MovingMaximaModel(args.alpha, args.coeffs);
  config.n = args.n;
  config.reps = args.reps;
  config.seed = args.seed;
  config.norming = parse_norming(args.norming);
  config.u = args.u;
  config.epsilon = args.eps;
  config.t_grid = args.t_grid;
  config.block_length = args.block;
  config.truncation = args.truncation;
  config.limit_reps = args.limit_reps;
  return config;
}

int run_experiment(const std::string& which, ExpArgs args, unsigned threads) {
  apply_seed_env(args.seed);
  auto config = to_config(args);
  config.threads = threads;
  sklab::ExperimentReport report;
  if (which == "e1") {
    report = sklab::exp_marginal_max(config);
  } else if (which == "e2") {
    report = sklab::exp_sum(config);
  } else if (which == "e3") {
    report = sklab::exp_joint(config);
  } else if (which == "e4") {
    report = sklab::exp_karamata(config);
  } else if (which == "e5") {
    report = sklab::exp_m1_failure(config);
  } else if (which == "e6") {
    report = sklab::exp_two_atom(config);
  } else {
    report = sklab::exp_extremal_index(config);
  }
  write_output(args.out, report.to_json() + "\n");
  if (!args.csv.empty()) {
    write_output(args.csv, report.curve_csv());
  }
  return report.pass ? kExitPass : kExitFailedCriteria;
}

int run_simulate(SampleArgs args) {
  apply_seed_env(args.seed);
  const sklab::MovingMaximaModel model(args.alpha, args.coeffs);
  const auto x = sklab::moving_maxima_sample(model, args.n, args.seed);
  std::string csv;
  if (args.partial) {
    const double a_n = model.norming(args.n, parse_norming(args.norming));
    csv = "t,v,w\n0,0,0\n";
    sklab::CompensatedSum sum;
    double running_max = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      sum.add(x[k]);
      running_max = std::max(running_max, x[k]);
      csv += fmt(static_cast<double>(k + 1) / static_cast<double>(args.n)) + "," +
             fmt(sum.value() / a_n) + "," + fmt(running_max / a_n) + "\n";
    }
  } else {
    csv = "k,x\n";
    for (std::size_t k = 0; k < x.size(); ++k) {
      csv += std::to_string(k + 1) + "," + fmt(x[k]) + "\n";
    }
  }
  write_output(args.out, csv);
  return kExitPass;
}

int run_limit(LimitArgs args, unsigned threads) {
  apply_seed_env(args.seed);
  const sklab::MovingMaximaModel model(args.alpha, args.coeffs);
  const auto spec = sklab::limit_spec_for(model);
  const auto draws = sklab::simulate_limit_joint(spec, args.t_grid, args.truncation, args.reps,
                                                 args.seed, nullptr, threads);
  std::string csv = "rep,t,v,w\n";
  const std::size_t tcount = args.t_grid.size();
  for (std::size_t rep = 0; rep < args.reps; ++rep) {
    for (std::size_t g = 0; g < tcount; ++g) {
      csv += std::to_string(rep) + "," + fmt(args.t_grid[g]) + "," +
             fmt(draws.v[rep * tcount + g]) + "," + fmt(draws.w[rep * tcount + g]) + "\n";
    }
  }
  write_output(args.out, csv);
  nlohmann::json summary;
  summary["tail_bound"] = draws.tail_bound;
  summary["theta"] = spec.theta;
  summary["drift"] = spec.drift();
  std::cerr << summary.dump() << "\n";
  return kExitPass;
}

int run_dist(const std::string& which, const DistArgs& args) {
  nlohmann::json out;
  if (which == "omega") {
    const auto path = sklab::path_from_json(read_file(args.file_a));
    out["value"] = sklab::omega_delta(path, args.delta);
  } else {
    const auto a = sklab::path_from_json(read_file(args.file_a));
    const auto b = sklab::path_from_json(read_file(args.file_b));
    const auto result = which == "m1" ? sklab::m1_distance(a, b, args.resolution, args.tol)
                                      : sklab::wm1_distance(a, b, args.resolution, args.tol);
    out["value"] = result.value;
    out["lower"] = result.bracket.lower;
    out["upper"] = result.bracket.upper;
    out["closed"] = result.bracket.closed;
  }
  std::cout << out.dump() << "\n";
  return kExitPass;
}

int run_report_merge(const ReportArgs& args) {
  nlohmann::json merged = nlohmann::json::array();
  bool all_pass = true;
  for (const auto& file : args.files) {
    const auto parsed = nlohmann::json::parse(read_file(file));
    const auto absorb = [&](const nlohmann::json& report) {
      if (!report.is_object() || !report.contains("pass")) {
        throw std::runtime_error(file + ": not an experiment report");
      }
      all_pass = all_pass && report.at("pass").get<bool>();
      merged.push_back(report);
    };
    if (parsed.is_array()) {
      for (const auto& report : parsed) {
        absorb(report);
      }
    } else {
      absorb(parsed);
    }
  }
  write_output(args.out, merged.dump(2) + "\n");
  return all_pass ? kExitPass : kExitFailedCriteria;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tailed moving maxima: samples, path distances, limit draws, "
               "and the seeded experiment suite"};
  app.require_subcommand(1);
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--threads", threads,
                 "worker threads; per-replicate streams make results independent of this")
      ->check(CLI::PositiveNumber);

  SampleArgs sample_args;
  auto* simulate = app.add_subcommand("simulate", "draw a moving-maxima sample as CSV");
  simulate->add_option("--alpha", sample_args.alpha, "tail index in (0, 1)")
      ->capture_default_str();
  simulate->add_option("--coeffs", sample_args.coeffs, "moving-maxima coefficients")->delimiter(',')
      ->capture_default_str();
  simulate->add_option("--n", sample_args.n, "sample length")->capture_default_str();
  simulate->add_option("--seed", sample_args.seed, "seed (SKLAB_SEED overrides)")
      ->capture_default_str();
  simulate->add_flag("--partial", sample_args.partial,
                     "emit the scaled running sum and running max instead of raw values");
  simulate->add_option("--norming", sample_args.norming,
                       "scaling for --partial: 'marginal' or 'innovation'")
      ->capture_default_str();
  simulate->add_option("--out", sample_args.out, "destination ('-' for stdout)")
      ->capture_default_str();

  DistArgs dist_args;
  auto* dist = app.add_subcommand("dist", "distances between stored paths");
  dist->require_subcommand(1);
  auto* dist_m1 = dist->add_subcommand("m1", "strong metric with a certified bracket");
  auto* dist_wm1 = dist->add_subcommand("wm1", "coordinatewise product metric");
  for (auto* sub : {dist_m1, dist_wm1}) {
    sub->add_option("a", dist_args.file_a, "path JSON file")->required();
    sub->add_option("b", dist_args.file_b, "path JSON file")->required();
    sub->add_option("--resolution", dist_args.resolution, "refinement of the search grid")
        ->capture_default_str();
    sub->add_option("--tol", dist_args.tol, "bracket width target")->capture_default_str();
  }
  auto* dist_omega = dist->add_subcommand("omega", "oscillation within a sliding window");
  dist_omega->add_option("a", dist_args.file_a, "path JSON file")->required();
  dist_omega->add_option("--delta", dist_args.delta, "window width in (0, 1]")
      ->capture_default_str();

  LimitArgs limit_args;
  auto* limit = app.add_subcommand("limit", "draw the limit pair on a time grid as CSV");
  limit->add_option("--alpha", limit_args.alpha, "tail index in (0, 1)")->capture_default_str();
  limit->add_option("--coeffs", limit_args.coeffs, "moving-maxima coefficients")->delimiter(',')
      ->capture_default_str();
  limit->add_option("--t-grid", limit_args.t_grid, "evaluation times in (0, 1]")->delimiter(',')
      ->capture_default_str();
  limit->add_option("--truncation", limit_args.truncation, "series truncation")
      ->capture_default_str();
  limit->add_option("--reps", limit_args.reps, "number of draws")->capture_default_str();
  limit->add_option("--seed", limit_args.seed, "seed (SKLAB_SEED overrides)")
      ->capture_default_str();
  limit->add_option("--out", limit_args.out, "destination ('-' for stdout)")
      ->capture_default_str();

  auto* exp = app.add_subcommand("exp", "run one experiment and write its report");
  exp->require_subcommand(1);
  struct ExpSub {
    const char* name;
    const char* help;
    const char* norming;
    ExpArgs args;
  };
  std::vector<ExpSub> exp_subs{
      {"e1", "maxima at t = 1 against the closed-form extremal marginal", "marginal", {}},
      {"e2", "sums at t = 1 against truncated-series limit draws", "marginal", {}},
      {"e3", "joint sum/max pairs against simulated limit pairs", "marginal", {}},
      {"e4", "truncated moments against the regular-variation limit", "marginal", {}},
      {"e5", "oscillation probabilities along an n-ladder", "innovation", {}},
      {"e6", "deterministic two-atom geometry separating the metrics", "marginal", {}},
      {"calib", "blocks extremal-index calibration on reference models", "marginal", {}},
  };
  for (auto& sub : exp_subs) {
    add_exp_options(exp->add_subcommand(sub.name, sub.help), sub.args, sub.norming);
  }

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "operate on stored reports");
  auto* merge = report->add_subcommand("merge", "concatenate reports into one JSON array");
  merge->add_option("files", report_args.files, "report JSON files")->required();
  merge->add_option("--out", report_args.out, "destination ('-' for stdout)")
      ->capture_default_str();
  report->require_subcommand(1);

  const std::string config_path = find_config_path(argc, argv);
  if (!config_path.empty()) {
    try {
      const auto items = load_config_items(config_path);
      for (auto& sub : exp_subs) {
        apply_config_items(items, sub.args);
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfigError;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion") {
      return app.exit(e);
    }
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (simulate->parsed()) {
      return run_simulate(sample_args);
    }
    if (dist->parsed()) {
      const std::string which = dist->get_subcommands().front()->get_name();
      return run_dist(which, dist_args);
    }
    if (limit->parsed()) {
      return run_limit(limit_args);
    }
    if (exp->parsed()) {
      const std::string which = exp->get_subcommands().front()->get_name();
      for (auto& sub : exp_subs) {
        if (which == sub.name) {
          return run_experiment(which, sub.args);
        }
      }
    }
    if (report->parsed()) {
      return run_report_merge(report_args);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
