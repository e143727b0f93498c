// qpsim: command-line driver for the input-queued switch simulator.
//
//   qpsim run    --alg swqps --pattern uniform --n 64 --t 16 --load 0.5 --seed 1
//   qpsim sweep  --algs swqps,sbqps --patterns uniform,diag --loads 0.1:0.95:0.05 --out d.csv
//   qpsim table1 [--slots 2048000]
//
// Exit codes: 0 success, 2 usage error, 3 runtime failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qps/qps.hpp"
#include "qps/reference.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join_names(auto const& all) {
  std::string s;
  for (auto v : all) s += (s.empty() ? "" : "|") + std::string(qps::to_string(v));
  return s;
}

template <typename T, typename Parse>
std::vector<T> parse_names(const std::string& flag, const std::string& text, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse(item);
    if (!v) throw UsageError(flag + ": unknown value '" + item + "'");
    out.push_back(*v);
  }
  if (out.empty()) throw UsageError(flag + ": needs at least one value");
  return out;
}

std::vector<double> parse_numbers(const std::string& flag, const std::string& text) {
  try {
    return qps::parse_number_list(text);
  } catch (const std::exception& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::vector<std::size_t> parse_counts(const std::string& flag, const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_numbers(flag, text)) {
    if (v < 0 || v != std::floor(v)) throw UsageError(flag + ": expected whole numbers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// Opens `path + ".tmp"` right away so an unwritable destination fails
// before any simulation; commit() renames it into place.
class AtomicFile {
 public:
  explicit AtomicFile(std::string path) : path_(std::move(path)), tmp_(path_ + ".tmp") {
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot write output file: " + path_);
  }
  ~AtomicFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }
  void commit(const std::string& content) {
    out_ << content;
    out_.close();
    if (!out_) throw std::runtime_error("failed writing " + tmp_);
    std::filesystem::rename(tmp_, path_);
    committed_ = true;
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

struct RunFlags {
  std::string alg = "swqps";
  std::string pattern = "uniform";
  std::size_t n = 64;
  std::size_t t = 16;
  double load = 0.5;
  std::string arrivals = "bernoulli";
  double burst = 16;
  std::size_t knockout = 3;
  std::uint64_t seed = 1;
  qps::Slot max_slots = 0;
  std::uint64_t min_slots_factor = 500;
  std::string weights = "unscheduled";
  std::string qps1_accept = "longest";
  std::string out;
};

qps::RunConfig to_config(const RunFlags& f) {
  qps::RunConfig c;
  const auto a = qps::parse_algorithm(f.alg);
  if (!a) throw UsageError("--alg must be one of " + join_names(qps::kAllAlgorithms));
  const auto p = qps::parse_pattern(f.pattern);
  if (!p) throw UsageError("--pattern must be one of " + join_names(qps::kAllPatterns));
  const auto m = qps::parse_arrival_model(f.arrivals);
  if (!m) throw UsageError("--arrivals must be bernoulli or onoff");
  if (!(f.load >= 0.0 && f.load <= 1.0)) throw UsageError("--load: load must be in [0,1]");
  if (f.n < 2) throw UsageError("--n: must be >= 2");
  if (f.t < 1) throw UsageError("--t: must be >= 1");
  if (f.knockout < 1) throw UsageError("--knockout: must be >= 1");
  if (*m == qps::ArrivalModel::OnOff && !(f.burst >= 1.0)) throw UsageError("--burst-size: must be >= 1");
  if (*m == qps::ArrivalModel::OnOff && !(f.load > 0.0 && f.load < 1.0))
    throw UsageError("--load: on-off arrivals need a load in (0,1)");
  c.algorithm = *a;
  c.pattern = *p;
  c.arrivals = *m;
  c.ports = f.n;
  c.window = f.t;
  c.load = f.load;
  c.burst_size = f.burst;
  c.knockout = f.knockout;
  c.seed = f.seed;
  c.max_slots = f.max_slots;
  c.stopping.min_slots_per_port_squared = f.min_slots_factor;
  if (f.weights == "unscheduled")
    c.weights = qps::ProposalWeights::Unscheduled;
  else if (f.weights == "queued")
    c.weights = qps::ProposalWeights::Queued;
  else
    throw UsageError("--weights must be unscheduled or queued");
  if (f.qps1_accept == "longest")
    c.qps1_accept = qps::SingleAccept::LongestVoq;
  else if (f.qps1_accept == "random")
    c.qps1_accept = qps::SingleAccept::Random;
  else
    throw UsageError("--qps1-accept must be longest or random");
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--") + e.what());
  }
  return c;
}

void warn_if_expensive(const qps::RunConfig& c) {
  if (c.algorithm == qps::Algorithm::Mwm && c.ports >= 128)
    std::cerr << "warning: mwm solves an O(N^3) assignment every slot; N=" << c.ports
              << " will take a very long time\n";
}

int cmd_run(const RunFlags& f, bool throughput_mode) {
  qps::RunConfig c = to_config(f);
  if (throughput_mode) c.load = 0.9999;
  warn_if_expensive(c);
  std::optional<AtomicFile> file;
  if (!f.out.empty()) file.emplace(f.out);
  const auto stats = qps::run_cell(c, throughput_mode ? qps::SweepMode::Throughput : qps::SweepMode::Delay);
  const std::string csv = qps::render_csv({c}, {stats});
  std::cout << csv;
  if (file) file->commit(csv);
  return 0;
}

struct SweepFlags {
  std::string spec_file;
  std::string algs, patterns, loads, ns, ts, bursts, arrivals, mode;
  std::size_t replications = 1;
  std::uint64_t seed = 1;
  qps::Slot max_slots = 0;
  std::size_t knockout = 3;
  std::uint64_t min_slots_factor = 500;
  std::size_t workers = 0;
  std::string out;
};

int cmd_sweep(const SweepFlags& f, const CLI::App& sub) {
  qps::SweepSpec spec;
  if (!f.spec_file.empty()) {
    std::ifstream in(f.spec_file);
    if (!in) throw UsageError("--spec: cannot read " + f.spec_file);
    try {
      spec = qps::parse_sweep_json(nlohmann::json::parse(in));
    } catch (const std::exception& e) {
      throw UsageError("--spec: " + std::string(e.what()));
    }
  }
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (given("--algs"))
    spec.algorithms = parse_names<qps::Algorithm>("--algs", f.algs, [](auto& s) { return qps::parse_algorithm(s); });
  if (given("--patterns"))
    spec.patterns = parse_names<qps::Pattern>("--patterns", f.patterns, [](auto& s) { return qps::parse_pattern(s); });
  if (given("--loads")) spec.loads = parse_numbers("--loads", f.loads);
  if (given("--ns")) spec.ports = parse_counts("--ns", f.ns);
  if (given("--ts")) spec.windows = parse_counts("--ts", f.ts);
  if (given("--burst-sizes")) spec.burst_sizes = parse_numbers("--burst-sizes", f.bursts);
  if (given("--arrivals")) {
    const auto m = qps::parse_arrival_model(f.arrivals);
    if (!m) throw UsageError("--arrivals must be bernoulli or onoff");
    spec.arrivals = *m;
  }
  if (given("--mode")) {
    if (f.mode == "delay")
      spec.mode = qps::SweepMode::Delay;
    else if (f.mode == "throughput")
      spec.mode = qps::SweepMode::Throughput;
    else
      throw UsageError("--mode must be delay or throughput");
  }
  if (given("--replications")) spec.replications = f.replications;
  if (given("--seed")) spec.master_seed = f.seed;
  if (given("--max-slots")) spec.max_slots = f.max_slots;
  if (given("--knockout")) spec.knockout = f.knockout;
  if (given("--min-slots-factor")) spec.min_slots_per_port_squared = f.min_slots_factor;
  if (given("--out")) spec.output = f.out;
  if (spec.output.empty()) throw UsageError("--out: an output path is required");

  std::vector<qps::RunConfig> configs;
  try {
    configs = qps::expand(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  for (const auto& c : configs) {
    if (c.algorithm == qps::Algorithm::Mwm && c.ports >= 128) {
      warn_if_expensive(c);
      break;
    }
  }

  AtomicFile file(spec.output);
  const std::size_t workers = f.workers ? f.workers : qps::default_workers();
  std::cerr << "sweep: " << configs.size() << " runs on " << workers << " worker(s)\n";
  const auto stats = qps::run_all(configs, spec.mode, workers,
                                  [](std::size_t done, std::size_t total, const qps::RunConfig& c) {
                                    std::cerr << "[" << done << "/" << total << "] " << qps::to_string(c.algorithm)
                                              << ' ' << qps::to_string(c.pattern) << " N=" << c.ports
                                              << " T=" << c.window << " load=" << qps::format_fixed(c.load);
                                    if (c.arrivals == qps::ArrivalModel::OnOff) std::cerr << " burst=" << c.burst_size;
                                    std::cerr << '\n';
                                  });
  file.commit(qps::render_csv(configs, stats));
  std::cerr << "wrote " << spec.output << '\n';
  return 0;
}

struct Table1Flags {
  qps::Slot slots = 0;
  std::uint64_t seed = 1;
  std::size_t workers = 0;
  std::string out;
};

int cmd_table1(const Table1Flags& f) {
  qps::SweepSpec spec;
  spec.algorithms.assign(qps::kReferenceAlgorithms.begin(), qps::kReferenceAlgorithms.end());
  spec.patterns.assign(qps::kAllPatterns.begin(), qps::kAllPatterns.end());
  spec.mode = qps::SweepMode::Throughput;
  spec.master_seed = f.seed;
  spec.max_slots = f.slots;
  const auto configs = qps::expand(spec);
  std::optional<AtomicFile> file;
  if (!f.out.empty()) file.emplace(f.out);
  const std::size_t workers = f.workers ? f.workers : qps::default_workers();
  std::cerr << "table1: 16 cells, " << (f.slots ? f.slots : configs.front().min_slots()) << " slots each\n";
  const auto stats = qps::run_all(configs, spec.mode, workers,
                                  [](std::size_t done, std::size_t total, const qps::RunConfig& c) {
                                    std::cerr << "[" << done << "/" << total << "] " << qps::to_string(c.algorithm)
                                              << ' ' << qps::to_string(c.pattern) << '\n';
                                  });
  std::printf("Maximum achievable throughput (N=64, T=16, load=0.9999)\n");
  std::printf("%-8s %-10s %9s %10s %10s\n", "alg", "pattern", "measured", "reference", "deviation");
  std::size_t flagged = 0;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const auto& c = configs[k];
    const double ref = *qps::reference_max_throughput(c.algorithm, c.pattern);
    const double dev = stats[k].throughput - ref;
    const bool off = std::fabs(dev) > qps::kReferenceTolerance;
    flagged += off;
    std::printf("%-8s %-10s %9.4f %10.4f %+10.4f%s\n", std::string(qps::to_string(c.algorithm)).c_str(),
                std::string(qps::to_string(c.pattern)).c_str(), stats[k].throughput, ref, dev,
                off ? "  <-- |dev| > 0.02" : "");
  }
  std::printf("%zu of %zu cells outside +-%.2f\n", flagged, configs.size(), qps::kReferenceTolerance);
  if (file) file->commit(qps::render_csv(configs, stats));
  return 0;
}

void add_run_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--alg", f.alg, "sbqps|swqps|qps1|islip|mwm");
  app->add_option("--pattern", f.pattern, "uniform|quasidiag|logdiag|diag");
  app->add_option("--n", f.n, "port count N");
  app->add_option("--t", f.t, "batch / window size T");
  app->add_option("--load", f.load, "offered load in [0,1]");
  app->add_option("--arrivals", f.arrivals, "bernoulli|onoff");
  app->add_option("--burst-size", f.burst, "mean burst size for onoff arrivals");
  app->add_option("--knockout", f.knockout, "knockout threshold K");
  app->add_option("--seed", f.seed, "rng seed");
  app->add_option("--max-slots", f.max_slots, "slot cap (0: ten times the minimum)");
  app->add_option("--min-slots-factor", f.min_slots_factor, "minimum slots as a multiple of N^2");
  app->add_option("--weights", f.weights, "sampler weights for sbqps/swqps: unscheduled|queued");
  app->add_option("--qps1-accept", f.qps1_accept, "qps1 output choice: longest|random");
  app->add_option("--out", f.out, "also write the CSV to this path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Input-queued crossbar switch scheduling simulator"};
  app.require_subcommand(1);

  RunFlags run_flags;
  bool throughput_mode = false;
  auto* run = app.add_subcommand("run", "simulate one configuration and print a CSV row");
  add_run_flags(run, run_flags);
  run->add_flag("--throughput", throughput_mode, "fixed-horizon saturation run at load 0.9999");

  SweepFlags sf;
  auto* sweep = app.add_subcommand("sweep", "run a cross product of configurations into a CSV file");
  sweep->add_option("--spec", sf.spec_file, "JSON sweep description");
  sweep->add_option("--algs", sf.algs, "comma-separated algorithms");
  sweep->add_option("--patterns", sf.patterns, "comma-separated patterns");
  sweep->add_option("--loads", sf.loads, "list a,b,c or range lo:hi:step");
  sweep->add_option("--ns", sf.ns, "port counts");
  sweep->add_option("--ts", sf.ts, "window sizes");
  sweep->add_option("--burst-sizes", sf.bursts, "mean burst sizes (onoff)");
  sweep->add_option("--arrivals", sf.arrivals, "bernoulli|onoff");
  sweep->add_option("--mode", sf.mode, "delay|throughput");
  sweep->add_option("--replications", sf.replications, "runs per configuration");
  sweep->add_option("--seed", sf.seed, "master seed");
  sweep->add_option("--max-slots", sf.max_slots, "slot cap per run");
  sweep->add_option("--knockout", sf.knockout, "knockout threshold K");
  sweep->add_option("--min-slots-factor", sf.min_slots_factor, "minimum slots as a multiple of N^2");
  sweep->add_option("--workers", sf.workers, "worker threads (default: QPS_WORKERS or CPU count)");
  sweep->add_option("--out", sf.out, "CSV output path");

  Table1Flags tf;
  auto* table1 = app.add_subcommand("table1", "measure maximum throughput and compare with reference values");
  table1->add_option("--slots", tf.slots, "slots per cell (default 500 N^2)");
  table1->add_option("--seed", tf.seed, "master seed");
  table1->add_option("--workers", tf.workers, "worker threads");
  table1->add_option("--out", tf.out, "also write the cells as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_flags, throughput_mode);
    if (*sweep) return cmd_sweep(sf, *sweep);
    if (*table1) return cmd_table1(tf);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
