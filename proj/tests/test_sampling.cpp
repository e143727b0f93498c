#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <vector>

#include "qps/calendar.hpp"
#include "qps/proposal.hpp"
#include "qps/sampler.hpp"

namespace qps {
namespace {

QpsSampler sampler_with(const std::vector<std::int64_t>& w) {
  QpsSampler s(w.size());
  for (std::size_t j = 0; j < w.size(); ++j)
    if (w[j]) s.update(static_cast<int>(j), w[j]);
  return s;
}

// Pearson goodness of fit of draws against weights; cells with zero weight
// must never be drawn and are excluded from the statistic.
double chi_square_p(const QpsSampler& s, std::uint64_t seed, int draws) {
  Rng rng(seed);
  std::vector<std::int64_t> counts(s.ports(), 0);
  for (int k = 0; k < draws; ++k) ++counts[static_cast<std::size_t>(*s.draw(rng))];
  double stat = 0;
  int cells = 0;
  for (std::size_t j = 0; j < s.ports(); ++j) {
    const double w = static_cast<double>(s.weight(static_cast<int>(j)));
    if (w == 0) {
      if (counts[j] != 0) return 0.0;
      continue;
    }
    const double expected = draws * w / static_cast<double>(s.total());
    stat += (counts[j] - expected) * (counts[j] - expected) / expected;
    ++cells;
  }
  if (cells < 2) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(cells - 1), stat));
}

TEST(Sampler, UpdateFromZero) {
  QpsSampler s(3);
  s.update(1, +3);
  EXPECT_EQ(s.weight(0), 0);
  EXPECT_EQ(s.weight(1), 3);
  EXPECT_EQ(s.weight(2), 0);
  EXPECT_EQ(s.total(), 3);
}

TEST(Sampler, DecrementToZero) {
  auto s = sampler_with({2, 3});
  s.update(0, -2);
  EXPECT_EQ(s.weight(0), 0);
  EXPECT_EQ(s.weight(1), 3);
  EXPECT_EQ(s.total(), 3);
}

TEST(Sampler, NegativeWeightRejected) {
  auto s = sampler_with({1, 0});
  EXPECT_THROW(s.update(1, -1), std::invalid_argument);
  EXPECT_THROW(s.update(0, -2), std::invalid_argument);
  EXPECT_EQ(s.total(), 1);
}

TEST(Sampler, EmptyDrawsNothing) {
  QpsSampler s(3);
  Rng rng(1);
  EXPECT_EQ(s.draw(rng), std::nullopt);
}

TEST(Sampler, SingleOutputAlwaysDrawn) {
  auto s = sampler_with({5});
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) EXPECT_EQ(s.draw(rng), 0);
}

TEST(Sampler, ProportionalToWeights) {
  auto s = sampler_with({2, 0, 6});
  Rng rng(4);
  constexpr int kDraws = 400000;
  std::array<int, 3> counts{};
  for (int k = 0; k < kDraws; ++k) ++counts[static_cast<std::size_t>(*s.draw(rng))];
  EXPECT_EQ(counts[1], 0);
  EXPECT_NEAR(counts[0] / double(kDraws), 0.25, 0.003);
  EXPECT_NEAR(counts[2] / double(kDraws), 0.75, 0.003);
  EXPECT_GT(chi_square_p(s, 4, 200000), 0.001);
}

TEST(Sampler, ChiSquareAfterIncrementalUpdates) {
  Rng rng(10);
  QpsSampler s(13);
  std::vector<std::int64_t> mirror(13, 0);
  for (int k = 0; k < 5000; ++k) {
    const int j = static_cast<int>(uniform_below(rng, 13));
    if (mirror[static_cast<std::size_t>(j)] > 0 && bernoulli(rng, 0.4)) {
      s.update(j, -1);
      --mirror[static_cast<std::size_t>(j)];
    } else {
      s.update(j, +1);
      ++mirror[static_cast<std::size_t>(j)];
    }
  }
  for (int j = 0; j < 13; ++j) EXPECT_EQ(s.weight(j), mirror[static_cast<std::size_t>(j)]);
  EXPECT_GT(chi_square_p(s, 77, 200000), 0.001);
}

TEST(Sampler, DegenerateSizes) {
  auto s = sampler_with({0, 0, 0, 0, 0, 0, 0, 9});
  Rng rng(2);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(s.draw(rng), 7);
}

TEST(Propose, AllEmpty) {
  std::vector<QpsSampler> samplers(4, QpsSampler(4));
  ProposalBoard board(4);
  Rng rng(1);
  propose_all(samplers, nullptr, rng, board);
  EXPECT_EQ(board.total(), 0u);
}

TEST(Propose, SingleNonemptyVoq) {
  std::vector<QpsSampler> samplers(4, QpsSampler(4));
  samplers[0].update(3, 5);
  ProposalBoard board(4);
  Rng rng(1);
  JointCalendar cal(4, 4);
  propose_all(samplers, &cal, rng, board);
  ASSERT_EQ(board.at(3).size(), 1u);
  EXPECT_EQ(board.total(), 1u);
  EXPECT_EQ(board.at(3)[0].input, 0);
  EXPECT_EQ(board.at(3)[0].voq_len, 5);
  EXPECT_EQ(board.at(3)[0].avail, cal.input_availability(0));
}

TEST(Propose, ReproducibleWithSameSeed) {
  std::vector<QpsSampler> samplers(2, QpsSampler(2));
  samplers[0].update(0, 3);
  samplers[0].update(1, 4);
  samplers[1].update(0, 1);
  samplers[1].update(1, 1);
  auto trace = [&](std::uint64_t seed) {
    Rng rng(seed);
    ProposalBoard board(2);
    std::vector<int> out;
    for (int k = 0; k < 50; ++k) {
      propose_all(samplers, nullptr, rng, board);
      for (int j = 0; j < 2; ++j)
        for (const auto& p : board.at(j)) out.push_back(p.input * 2 + j);
    }
    return out;
  };
  EXPECT_EQ(trace(9), trace(9));
  EXPECT_NE(trace(9), trace(10));
}

std::vector<Proposal> proposals(int count) {
  std::vector<Proposal> v;
  for (int k = 0; k < count; ++k) v.push_back({k, k + 1, {}});
  return v;
}

TEST(Knockout, KeepsFirstK) {
  auto v = proposals(5);
  knockout(v, 3);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].input, 0);
  EXPECT_EQ(v[2].input, 2);
}

TEST(Knockout, FewerThanKUntouched) {
  auto v = proposals(2);
  knockout(v, 3);
  EXPECT_EQ(v.size(), 2u);
  auto none = proposals(0);
  knockout(none, 3);
  EXPECT_TRUE(none.empty());
}

TEST(Knockout, ArrivalOrderIsUniform) {
  // Each of 5 proposals should be among the 3 survivors with probability 3/5.
  Rng rng(6);
  std::array<int, 5> kept{};
  constexpr int kTrials = 100000;
  for (int k = 0; k < kTrials; ++k) {
    auto v = proposals(5);
    shuffle_arrival_order(v, 3, rng);
    knockout(v, 3);
    for (const auto& p : v) ++kept[static_cast<std::size_t>(p.input)];
  }
  for (int c : kept) EXPECT_NEAR(c / double(kTrials), 0.6, 0.01);
}

TEST(Ffa, SingleProposalFreePortsSlotZero) {
  JointCalendar cal(4, 3);
  std::vector<Proposal> v{{1, 2, cal.input_availability(1)}};
  const auto acc = ffa_accept(0, v, cal);
  ASSERT_EQ(acc.size(), 1u);
  EXPECT_EQ(acc[0].input, 1);
  EXPECT_EQ(acc[0].slot, 0u);
  EXPECT_EQ(cal.cell(0, 0), 1);
}

TEST(Ffa, LongerVoqWinsTheOnlyFreeSlot) {
  JointCalendar cal(3, 4);
  // Output 0 is busy at slots 0 and 2, leaving slot 1.
  cal.commit(0, 3, 0);
  cal.commit(2, 3, 0);
  std::vector<Proposal> v{{1, 4, cal.input_availability(1)}, {2, 7, cal.input_availability(2)}};
  const auto acc = ffa_accept(0, v, cal);
  ASSERT_EQ(acc.size(), 1u);
  EXPECT_EQ(acc[0].input, 2);
  EXPECT_EQ(acc[0].slot, 1u);
}

TEST(Ffa, DisjointAvailabilityRejected) {
  JointCalendar cal(2, 4);
  cal.commit(0, 0, 1);
  cal.commit(1, 0, 2);
  cal.commit(0, 3, 0);
  // Input 0 is busy in both slots; output 0 is free only at slot 1.
  std::vector<Proposal> v{{0, 9, cal.input_availability(0)}};
  EXPECT_TRUE(ffa_accept(0, v, cal).empty());
}

TEST(Ffa, SecondProposalTakesNextFreeSlot) {
  JointCalendar cal(4, 4);
  std::vector<Proposal> v{{1, 3, cal.input_availability(1)}, {2, 3, cal.input_availability(2)},
                          {0, 5, cal.input_availability(0)}};
  const auto acc = ffa_accept(3, v, cal);
  ASSERT_EQ(acc.size(), 3u);
  // Longest first, ties in arrival order.
  EXPECT_EQ(acc[0].input, 0);
  EXPECT_EQ(acc[1].input, 1);
  EXPECT_EQ(acc[2].input, 2);
  EXPECT_EQ(acc[0].slot, 0u);
  EXPECT_EQ(acc[1].slot, 1u);
  EXPECT_EQ(acc[2].slot, 2u);
  EXPECT_TRUE(cal.consistent());
}

}  // namespace
}  // namespace qps
