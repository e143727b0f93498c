#pragma once

#include "qps/bitmap.hpp"
#include "qps/calendar.hpp"
#include "qps/engine.hpp"
#include "qps/islip.hpp"
#include "qps/matching.hpp"
#include "qps/mwm.hpp"
#include "qps/port_set.hpp"
#include "qps/proposal.hpp"
#include "qps/qps_schedulers.hpp"
#include "qps/reference.hpp"
#include "qps/rng.hpp"
#include "qps/sampler.hpp"
#include "qps/scheduler.hpp"
#include "qps/schedulers.hpp"
#include "qps/stats.hpp"
#include "qps/sweep.hpp"
#include "qps/traffic.hpp"
#include "qps/voq.hpp"
