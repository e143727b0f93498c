#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "qps/engine.hpp"

namespace qps {

enum class SweepMode {
  Delay,       // run(): stopping rule on the mean-delay confidence interval
  Throughput,  // saturation_run(): fixed horizon at load 0.9999
};

struct SweepSpec {
  std::vector<Algorithm> algorithms{Algorithm::SwQps};
  std::vector<Pattern> patterns{Pattern::Uniform};
  std::vector<double> loads{0.5};
  std::vector<std::size_t> ports{64};
  std::vector<std::size_t> windows{16};
  std::vector<double> burst_sizes{16};
  ArrivalModel arrivals = ArrivalModel::Bernoulli;
  SweepMode mode = SweepMode::Delay;
  std::size_t replications = 1;
  std::uint64_t master_seed = 1;
  Slot max_slots = 0;
  std::size_t knockout = 3;
  std::uint64_t min_slots_per_port_squared = 500;
  std::string output;
};

// Seed of one sweep cell. Depends only on its coordinates, never on the
// order in which cells run.
inline std::uint64_t cell_seed(std::uint64_t master, Algorithm a, Pattern p, std::size_t n,
                               std::size_t t, double load, std::size_t replication) {
  return derive_seed(master, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(p),
                     static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(t), load,
                     static_cast<std::uint64_t>(replication));
}

// Cross product in a fixed nesting order: algorithm, pattern, N, T, burst,
// load, replication (innermost).
inline std::vector<RunConfig> expand(const SweepSpec& spec) {
  if (spec.algorithms.empty() || spec.patterns.empty() || spec.loads.empty() || spec.ports.empty() ||
      spec.windows.empty() || spec.replications == 0)
    throw std::invalid_argument("sweep: every axis needs at least one value");
  const std::vector<double> bursts =
      spec.arrivals == ArrivalModel::OnOff ? spec.burst_sizes : std::vector<double>{0.0};
  if (bursts.empty()) throw std::invalid_argument("sweep: on-off arrivals need a burst size");
  std::vector<RunConfig> out;
  for (auto a : spec.algorithms)
    for (auto p : spec.patterns)
      for (auto n : spec.ports)
        for (auto t : spec.windows)
          for (auto b : bursts)
            for (auto load : spec.loads)
              for (std::size_t r = 0; r < spec.replications; ++r) {
                RunConfig c;
                c.algorithm = a;
                c.pattern = p;
                c.ports = n;
                c.window = t;
                c.arrivals = spec.arrivals;
                c.burst_size = spec.arrivals == ArrivalModel::OnOff ? b : 16;
                c.load = spec.mode == SweepMode::Throughput ? 0.9999 : load;
                c.knockout = spec.knockout;
                c.max_slots = spec.max_slots;
                c.stopping.min_slots_per_port_squared = spec.min_slots_per_port_squared;
                c.seed = cell_seed(spec.master_seed, a, p, n, t, c.load, r);
                c.validate();
                out.push_back(c);
              }
  return out;
}

// Inclusive range "lo:hi:step" or a comma-separated list. Values are
// rounded to 1e-9 to keep accumulated step error out of seeds and output.
inline std::vector<double> parse_number_list(const std::string& text) {
  auto to_d = [](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("not a number: " + s);
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
      throw std::invalid_argument("range must be lo:hi:step");
    const double lo = to_d(a), hi = to_d(b), step = to_d(c);
    if (!(step > 0) || hi < lo) throw std::invalid_argument("range must have lo <= hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k)
      out.push_back(std::round((lo + static_cast<double>(k) * step) * 1e9) / 1e9);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(to_d(item));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

inline std::string format_fixed(double v, int decimals = 4) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::string csv_header() {
  return "algorithm,pattern,N,T,load,arrival_model,burst,seed,slots,throughput,mean_delay,delay_ci,stable";
}

inline std::string csv_row(const RunConfig& c, const RunStats& s) {
  std::string row;
  row += std::string(to_string(c.algorithm)) + ',';
  row += std::string(to_string(c.pattern)) + ',';
  row += std::to_string(c.ports) + ',' + std::to_string(c.window) + ',';
  row += format_fixed(c.load) + ',';
  row += std::string(to_string(c.arrivals)) + ',';
  row += (c.arrivals == ArrivalModel::OnOff ? format_fixed(c.burst_size) : std::string("0")) + ',';
  row += std::to_string(c.seed) + ',';
  row += std::to_string(s.slots) + ',';
  row += format_fixed(s.throughput) + ',';
  row += (s.stable ? format_fixed(s.mean_delay) : std::string("unstable")) + ',';
  row += (s.stable ? format_fixed(s.delay_half_width) : std::string("unstable")) + ',';
  row += s.stable ? "true" : "false";
  return row;
}

// In throughput mode a nonzero max_slots is the fixed horizon.
inline RunStats run_cell(const RunConfig& c, SweepMode mode) {
  return mode == SweepMode::Throughput ? saturation_run(c, c.max_slots) : run(c);
}

// Worker count from QPS_WORKERS, else the number of logical CPUs.
inline std::size_t default_workers() {
  if (const char* env = std::getenv("QPS_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

using ProgressFn = std::function<void(std::size_t done, std::size_t total, const RunConfig&)>;

// Runs every config on a bounded pool. Results come back in input order.
inline std::vector<RunStats> run_all(const std::vector<RunConfig>& configs, SweepMode mode,
                                     std::size_t workers, const ProgressFn& progress = {}) {
  std::vector<RunStats> results(configs.size());
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mu;
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= configs.size()) return;
      try {
        results[k] = run_cell(configs[k], mode);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = configs.size();
        return;
      }
      std::lock_guard lock(mu);
      ++done;
      if (progress) progress(done, configs.size(), configs[k]);
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, configs.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

inline std::string render_csv(const std::vector<RunConfig>& configs, const std::vector<RunStats>& stats) {
  std::string out = csv_header() + '\n';
  for (std::size_t k = 0; k < configs.size(); ++k) out += csv_row(configs[k], stats[k]) + '\n';
  return out;
}

// JSON sweep description. Keys mirror the command-line flags; anything
// missing keeps its default.
inline SweepSpec parse_sweep_json(const nlohmann::json& j) {
  SweepSpec s;
  auto names = [&](const char* key, auto parse, auto& dest) {
    if (!j.contains(key)) return;
    dest.clear();
    for (const auto& v : j.at(key)) {
      const auto parsed = parse(v.template get<std::string>());
      if (!parsed) throw std::invalid_argument(std::string("unknown value in ") + key + ": " + v.dump());
      dest.push_back(*parsed);
    }
  };
  names("algorithms", [](const std::string& x) { return parse_algorithm(x); }, s.algorithms);
  names("patterns", [](const std::string& x) { return parse_pattern(x); }, s.patterns);
  if (j.contains("loads")) s.loads = j.at("loads").get<std::vector<double>>();
  if (j.contains("ports")) s.ports = j.at("ports").get<std::vector<std::size_t>>();
  if (j.contains("windows")) s.windows = j.at("windows").get<std::vector<std::size_t>>();
  if (j.contains("burst_sizes")) s.burst_sizes = j.at("burst_sizes").get<std::vector<double>>();
  if (j.contains("arrivals")) {
    const auto m = parse_arrival_model(j.at("arrivals").get<std::string>());
    if (!m) throw std::invalid_argument("arrivals must be bernoulli or onoff");
    s.arrivals = *m;
  }
  if (j.contains("mode")) {
    const auto m = j.at("mode").get<std::string>();
    if (m == "delay")
      s.mode = SweepMode::Delay;
    else if (m == "throughput")
      s.mode = SweepMode::Throughput;
    else
      throw std::invalid_argument("mode must be delay or throughput");
  }
  if (j.contains("replications")) s.replications = j.at("replications").get<std::size_t>();
  if (j.contains("seed")) s.master_seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("max_slots")) s.max_slots = j.at("max_slots").get<Slot>();
  if (j.contains("knockout")) s.knockout = j.at("knockout").get<std::size_t>();
  if (j.contains("min_slots_factor")) s.min_slots_per_port_squared = j.at("min_slots_factor").get<std::uint64_t>();
  if (j.contains("out")) s.output = j.at("out").get<std::string>();
  return s;
}

}  // namespace qps
