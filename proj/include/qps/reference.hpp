#pragma once

#include <array>
#include <optional>

#include "qps/scheduler.hpp"
#include "qps/traffic.hpp"

namespace qps {

// Reference maximum achievable throughput at N = 64, T = 16, load 0.9999,
// indexed [algorithm][pattern] in kAllPatterns order. MWM is omitted: it
// attains 100%.
inline std::optional<double> reference_max_throughput(Algorithm a, Pattern p) {
  constexpr std::array<double, 4> sw{0.9256, 0.9171, 0.9140, 0.8774};
  constexpr std::array<double, 4> sb{0.8688, 0.8710, 0.8731, 0.8647};
  constexpr std::array<double, 4> islip{0.9956, 0.8043, 0.8316, 0.8296};
  constexpr std::array<double, 4> qps1{0.6354, 0.6660, 0.6878, 0.7516};
  const auto k = static_cast<std::size_t>(p);
  switch (a) {
    case Algorithm::SwQps: return sw[k];
    case Algorithm::SbQps: return sb[k];
    case Algorithm::Islip: return islip[k];
    case Algorithm::Qps1: return qps1[k];
    case Algorithm::Mwm: return std::nullopt;
  }
  return std::nullopt;
}

inline constexpr std::array<Algorithm, 4> kReferenceAlgorithms = {
    Algorithm::SwQps, Algorithm::SbQps, Algorithm::Islip, Algorithm::Qps1};

inline constexpr double kReferenceTolerance = 0.02;

}  // namespace qps
