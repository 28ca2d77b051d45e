#pragma once

// Umbrella header.

#include "mnoswitch/agents/dqn.hpp"
#include "mnoswitch/agents/exploration.hpp"
#include "mnoswitch/agents/features.hpp"
#include "mnoswitch/agents/qlearning.hpp"
#include "mnoswitch/agents/replay_buffer.hpp"
#include "mnoswitch/agents/training_log.hpp"
#include "mnoswitch/assignment.hpp"
#include "mnoswitch/dp_oracle.hpp"
#include "mnoswitch/env.hpp"
#include "mnoswitch/error.hpp"
#include "mnoswitch/experiments/analysis.hpp"
#include "mnoswitch/experiments/config.hpp"
#include "mnoswitch/experiments/csv.hpp"
#include "mnoswitch/experiments/policy_io.hpp"
#include "mnoswitch/experiments/scenario_io.hpp"
#include "mnoswitch/experiments/sweep.hpp"
#include "mnoswitch/experiments/templates.hpp"
#include "mnoswitch/experiments/traces.hpp"
#include "mnoswitch/latency.hpp"
#include "mnoswitch/nn.hpp"
#include "mnoswitch/policy.hpp"
#include "mnoswitch/random.hpp"
#include "mnoswitch/scenario.hpp"
