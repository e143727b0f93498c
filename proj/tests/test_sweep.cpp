#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "qps/reference.hpp"
#include "qps/sweep.hpp"

namespace qps {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

TEST(Sweep, Table1Shape) {
  SweepSpec s;
  s.algorithms.assign(kReferenceAlgorithms.begin(), kReferenceAlgorithms.end());
  s.patterns.assign(kAllPatterns.begin(), kAllPatterns.end());
  s.mode = SweepMode::Throughput;
  const auto cfgs = expand(s);
  ASSERT_EQ(cfgs.size(), 16u);
  for (const auto& c : cfgs) {
    EXPECT_EQ(c.load, 0.9999);
    EXPECT_EQ(c.ports, 64u);
    EXPECT_EQ(c.window, 16u);
    EXPECT_EQ(c.knockout, 3u);
  }
}

TEST(Sweep, DelayVersusLoadCount) {
  SweepSpec s;
  s.algorithms.assign(kAllAlgorithms.begin(), kAllAlgorithms.end());
  s.patterns.assign(kAllPatterns.begin(), kAllPatterns.end());
  s.loads = parse_number_list("0.1:0.95:0.05");
  ASSERT_EQ(s.loads.size(), 18u);
  EXPECT_EQ(s.loads.front(), 0.1);
  EXPECT_EQ(s.loads.back(), 0.95);
  EXPECT_EQ(s.loads[3], 0.25);
  EXPECT_EQ(expand(s).size(), 360u);
}

TEST(Sweep, ReplicationsGetDistinctSeeds) {
  SweepSpec s;
  s.replications = 3;
  const auto cfgs = expand(s);
  ASSERT_EQ(cfgs.size(), 3u);
  std::set<std::uint64_t> seeds;
  for (const auto& c : cfgs) seeds.insert(c.seed);
  EXPECT_EQ(seeds.size(), 3u);
}

TEST(Sweep, SeedDependsOnlyOnCoordinates) {
  const auto a = cell_seed(7, Algorithm::SwQps, Pattern::Diagonal, 64, 16, 0.5, 0);
  EXPECT_EQ(a, cell_seed(7, Algorithm::SwQps, Pattern::Diagonal, 64, 16, 0.5, 0));
  EXPECT_NE(a, cell_seed(8, Algorithm::SwQps, Pattern::Diagonal, 64, 16, 0.5, 0));
  EXPECT_NE(a, cell_seed(7, Algorithm::SbQps, Pattern::Diagonal, 64, 16, 0.5, 0));
  EXPECT_NE(a, cell_seed(7, Algorithm::SwQps, Pattern::Uniform, 64, 16, 0.5, 0));
  EXPECT_NE(a, cell_seed(7, Algorithm::SwQps, Pattern::Diagonal, 32, 16, 0.5, 0));
  EXPECT_NE(a, cell_seed(7, Algorithm::SwQps, Pattern::Diagonal, 64, 8, 0.5, 0));
  EXPECT_NE(a, cell_seed(7, Algorithm::SwQps, Pattern::Diagonal, 64, 16, 0.55, 0));
  EXPECT_NE(a, cell_seed(7, Algorithm::SwQps, Pattern::Diagonal, 64, 16, 0.5, 1));

  SweepSpec one;
  one.algorithms = {Algorithm::Islip};
  one.loads = {0.3};
  SweepSpec many = one;
  many.algorithms = {Algorithm::SwQps, Algorithm::Islip};
  many.loads = {0.1, 0.3};
  const auto lone = expand(one).front();
  const auto cfgs = expand(many);
  EXPECT_EQ(cfgs[3].seed, lone.seed);
}

TEST(Sweep, NumberLists) {
  EXPECT_EQ(parse_number_list("0.5"), std::vector<double>{0.5});
  EXPECT_EQ(parse_number_list("8,16,32"), (std::vector<double>{8, 16, 32}));
  EXPECT_EQ(parse_number_list("1:3:1"), (std::vector<double>{1, 2, 3}));
  EXPECT_THROW(parse_number_list("1:3"), std::invalid_argument);
  EXPECT_THROW(parse_number_list("a,b"), std::invalid_argument);
  EXPECT_THROW(parse_number_list("3:1:1"), std::invalid_argument);
}

TEST(Sweep, InvalidCombinationRejected) {
  SweepSpec s;
  s.loads = {0.5, 1.2};
  EXPECT_THROW(expand(s), std::invalid_argument);
  SweepSpec empty;
  empty.patterns.clear();
  EXPECT_THROW(expand(empty), std::invalid_argument);
}

TEST(Csv, HeaderAndRowShape) {
  EXPECT_EQ(csv_header(),
            "algorithm,pattern,N,T,load,arrival_model,burst,seed,slots,throughput,mean_delay,delay_ci,stable");
  RunConfig c;
  c.ports = 8;
  c.window = 4;
  c.load = 0.25;
  c.seed = 99;
  c.stopping.min_slots_per_port_squared = 10;
  const auto st = run(c);
  const auto fields = split(csv_row(c, st), ',');
  ASSERT_EQ(fields.size(), 13u);
  EXPECT_EQ(fields[0], "swqps");
  EXPECT_EQ(fields[1], "uniform");
  EXPECT_EQ(fields[2], "8");
  EXPECT_EQ(fields[3], "4");
  EXPECT_EQ(fields[4], "0.2500");
  EXPECT_EQ(fields[5], "bernoulli");
  EXPECT_EQ(fields[6], "0");
  EXPECT_EQ(fields[7], "99");
  EXPECT_EQ(fields[8], std::to_string(st.slots));
  EXPECT_EQ(fields[9].size(), 6u);  // d.dddd
  EXPECT_EQ(fields[12], "true");
}

TEST(Csv, UnstableRowsMarkDelay) {
  RunConfig c;
  RunStats st;
  st.stable = false;
  st.mean_delay = 1234.5;
  const auto fields = split(csv_row(c, st), ',');
  EXPECT_EQ(fields[10], "unstable");
  EXPECT_EQ(fields[11], "unstable");
  EXPECT_EQ(fields[12], "false");
}

TEST(Csv, FixedFormatting) {
  EXPECT_EQ(format_fixed(0.92556), "0.9256");
  EXPECT_EQ(format_fixed(12.0), "12.0000");
  EXPECT_EQ(format_fixed(std::nan("")), "nan");
}

TEST(RunAll, ResultsInInputOrderIndependentOfWorkers) {
  SweepSpec s;
  s.algorithms = {Algorithm::SwQps, Algorithm::Islip, Algorithm::Qps1};
  s.loads = {0.2, 0.6};
  s.ports = {8};
  s.windows = {4};
  s.min_slots_per_port_squared = 20;
  const auto cfgs = expand(s);
  const auto serial = render_csv(cfgs, run_all(cfgs, SweepMode::Delay, 1));
  const auto parallel = render_csv(cfgs, run_all(cfgs, SweepMode::Delay, 4));
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(split(serial, '\n').size(), cfgs.size() + 1);
}

TEST(RunAll, ProgressReportsEveryRun) {
  SweepSpec s;
  s.loads = {0.1, 0.2, 0.3};
  s.ports = {4};
  s.min_slots_per_port_squared = 10;
  const auto cfgs = expand(s);
  std::size_t calls = 0, last = 0;
  run_all(cfgs, SweepMode::Delay, 2, [&](std::size_t done, std::size_t total, const RunConfig&) {
    ++calls;
    last = done;
    EXPECT_EQ(total, 3u);
  });
  EXPECT_EQ(calls, 3u);
  EXPECT_EQ(last, 3u);
}

TEST(Json, SpecKeys) {
  const auto j = nlohmann::json::parse(R"({
    "algorithms": ["sbqps", "mwm"], "patterns": ["logdiag"], "loads": [0.3, 0.4],
    "ports": [16], "windows": [8], "arrivals": "onoff", "burst_sizes": [16, 64],
    "replications": 2, "seed": 5, "max_slots": 1000, "knockout": 2, "out": "x.csv"})");
  const auto s = parse_sweep_json(j);
  EXPECT_EQ(s.algorithms, (std::vector<Algorithm>{Algorithm::SbQps, Algorithm::Mwm}));
  EXPECT_EQ(s.patterns, std::vector<Pattern>{Pattern::LogDiagonal});
  EXPECT_EQ(s.arrivals, ArrivalModel::OnOff);
  EXPECT_EQ(s.output, "x.csv");
  const auto cfgs = expand(s);
  EXPECT_EQ(cfgs.size(), 2u * 1 * 2 * 2 * 2);
  EXPECT_EQ(cfgs[0].burst_size, 16);
  EXPECT_EQ(cfgs[0].knockout, 2u);
  EXPECT_THROW(parse_sweep_json(nlohmann::json::parse(R"({"algorithms": ["fifo"]})")), std::invalid_argument);
}

TEST(Reference, Table1Values) {
  EXPECT_EQ(reference_max_throughput(Algorithm::SwQps, Pattern::Uniform), 0.9256);
  EXPECT_EQ(reference_max_throughput(Algorithm::SbQps, Pattern::Diagonal), 0.8647);
  EXPECT_EQ(reference_max_throughput(Algorithm::Islip, Pattern::QuasiDiagonal), 0.8043);
  EXPECT_EQ(reference_max_throughput(Algorithm::Qps1, Pattern::LogDiagonal), 0.6878);
  EXPECT_EQ(reference_max_throughput(Algorithm::Mwm, Pattern::Uniform), std::nullopt);
}

}  // namespace
}  // namespace qps
