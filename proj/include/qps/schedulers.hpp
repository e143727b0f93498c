#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>

#include "qps/islip.hpp"
#include "qps/mwm.hpp"
#include "qps/qps_schedulers.hpp"
#include "qps/scheduler.hpp"

namespace qps {

inline std::unique_ptr<Scheduler> make_scheduler(Algorithm a, std::size_t ports,
                                                 const SchedulerOptions& opt = {}) {
  if (ports < 1) throw std::invalid_argument("make_scheduler: need at least one port");
  switch (a) {
    case Algorithm::SbQps: return std::make_unique<SbQpsScheduler>(ports, opt);
    case Algorithm::SwQps: return std::make_unique<SwQpsScheduler>(ports, opt);
    case Algorithm::Qps1: return std::make_unique<Qps1Scheduler>(ports, opt);
    case Algorithm::Islip: return std::make_unique<IslipScheduler>(ports);
    case Algorithm::Mwm: return std::make_unique<MwmScheduler>();
  }
  throw std::invalid_argument("make_scheduler: unknown algorithm");
}

}  // namespace qps
