#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mnoswitch/agents/exploration.hpp"
#include "mnoswitch/agents/features.hpp"
#include "mnoswitch/agents/replay_buffer.hpp"
#include "mnoswitch/agents/training_log.hpp"
#include "mnoswitch/dp_oracle.hpp"
#include "mnoswitch/env.hpp"
#include "mnoswitch/nn.hpp"
#include "mnoswitch/policy.hpp"

namespace mnoswitch::agents {

// Which network picks the bootstrap action and which one scores it.
//   standard:     argmin over the primary network, value from the target network
//   swapped:      argmin over the target network, value from the primary network
enum class TargetMode { standard, swapped };

inline TargetMode parse_target_mode(const std::string& s) {
  if (s == "standard") return TargetMode::standard;
  if (s == "swapped") return TargetMode::swapped;
  throw ValidationError("target_mode", "expected standard or swapped, got '" + s + "'");
}

inline const char* to_string(TargetMode m) { return m == TargetMode::standard ? "standard" : "swapped"; }

struct DqnConfig {
  std::vector<int> hidden{64, 64};
  nn::Activation activation = nn::Activation::relu;
  std::size_t minibatch = 32;        // D'
  std::size_t sync_period = 50;      // C, counted in gradient steps
  double discount = 0.95;            // b
  double learning_rate = 1e-3;       // upsilon
  std::size_t replay_capacity = 10000;
  std::size_t episodes = 2000;       // N
  std::size_t updates_per_episode = 1;
  EpsilonSchedule epsilon{0.8, 0.05, Decay::linear, 1200};
  bool include_time_feature = false;
  TargetMode target_mode = TargetMode::standard;

  void validate() const {
    if (minibatch < 1) throw ValidationError("minibatch", "must be >= 1");
    if (sync_period < 1) throw ValidationError("sync_period", "must be >= 1");
    if (!(discount >= 0.0 && discount <= 1.0)) throw ValidationError("discount", "must be in [0, 1]");
    if (!(learning_rate > 0.0)) throw ValidationError("learning_rate", "must be > 0");
    if (replay_capacity < 1) throw ValidationError("replay_capacity", "must be >= 1");
    for (int h : hidden)
      if (h < 1) throw ValidationError("hidden", "layer widths must be >= 1");
    epsilon.validate();
  }

  nn::Architecture architecture(int input_dim, int num_actions) const {
    nn::Architecture arch;
    arch.dims.push_back(input_dim);
    for (int h : hidden) {
      arch.dims.push_back(h);
      arch.hidden.push_back(activation);
    }
    arch.dims.push_back(num_actions);
    return arch;
  }
};

// Fires once every `period` ticks.
class SyncCounter {
 public:
  explicit SyncCounter(std::size_t period) : period_(period) {}
  bool tick() {
    if (++count_ < period_) return false;
    count_ = 0;
    ++fired_;
    return true;
  }
  std::size_t fired() const noexcept { return fired_; }

 private:
  std::size_t period_;
  std::size_t count_ = 0;
  std::size_t fired_ = 0;
};

// Double-DQN regression target. Terminal transitions use y = R.
inline double dqn_target(const nn::Network& primary, const nn::Network& target, const Transition& tr,
                         double discount, const FeatureEncoder& enc,
                         TargetMode mode = TargetMode::standard) {
  if (tr.terminal || discount == 0.0) return tr.utility;
  const auto f = enc.encode(tr.next_state);
  const auto q_primary = primary.forward(f);
  const auto q_target = target.forward(f);
  if (mode == TargetMode::standard)
    return tr.utility + discount * q_target[static_cast<std::size_t>(argmin(q_primary))];
  return tr.utility + discount * q_primary[static_cast<std::size_t>(argmin(q_target))];
}

// argmin_a Q(s, a) for every (t, state).
inline Policy greedy_policy(const Environment& env, const nn::Network& net, const FeatureEncoder& enc) {
  Policy p(env.horizon(), env.num_states());
  if (env.horizon() == 0) return p;
  if (!enc.include_time()) {
    for (int i = 0; i < env.num_states(); ++i) {
      const int a = argmin(net.forward(enc.encode(env.state_from_index(i, 1))));
      for (int t = 1; t <= env.horizon(); ++t) p.set(t, i, a);
    }
    return p;
  }
  for (int t = 1; t <= env.horizon(); ++t)
    for (int i = 0; i < env.num_states(); ++i)
      p.set(t, i, argmin(net.forward(enc.encode(env.state_from_index(i, t)))));
  return p;
}

struct DqnResult {
  nn::Network primary;
  nn::Network target;
  std::vector<EpisodeLog> log;
  std::size_t gradient_steps = 0;
  std::size_t syncs = 0;
};

// Double DQN: epsilon-greedy episodes fill the replay pool; after each
// episode, `updates_per_episode` minibatch SGD steps on 1/2 (y - Q)^2, with
// the target network refreshed every `sync_period` steps.
inline DqnResult train_dqn(const Environment& env, const DqnConfig& cfg, Rng& rng) {
  cfg.validate();
  const FeatureEncoder enc(env, cfg.include_time_feature);
  const auto arch = cfg.architecture(enc.dim(), env.num_mnos());
  DqnResult out{nn::Network(arch, rng), nn::Network(arch), {}, 0, 0};
  nn::sync(out.target, out.primary);
  ReplayBuffer pool(cfg.replay_capacity);
  SyncCounter syncer(cfg.sync_period);
  std::vector<nn::Sample> batch(cfg.minibatch);
  out.log.reserve(cfg.episodes);

  for (std::size_t ep = 0; ep < cfg.episodes; ++ep) {
    const double eps = cfg.epsilon.value(ep);
    State s = env.sample_initial(rng);
    while (s.t <= env.horizon()) {
      const int a = select_action(out.primary.forward(enc.encode(s)), eps, rng);
      const Transition tr = env.step(s, a, rng);
      pool.push(tr);
      s = tr.next_state;
    }

    double loss = 0.0;
    std::size_t updates = 0;
    if (pool.size() >= cfg.minibatch) {
      for (std::size_t u = 0; u < cfg.updates_per_episode; ++u) {
        const auto drawn = pool.sample(cfg.minibatch, rng);
        for (std::size_t i = 0; i < drawn.size(); ++i) {
          batch[i].features = enc.encode(drawn[i].state);
          batch[i].action = drawn[i].action;
          batch[i].target = dqn_target(out.primary, out.target, drawn[i], cfg.discount, enc, cfg.target_mode);
        }
        const auto grad = nn::minibatch_gradient(out.primary, batch);
        nn::sgd_step(out.primary, grad, cfg.learning_rate);
        loss += grad.loss;
        ++updates;
        ++out.gradient_steps;
        if (syncer.tick()) nn::sync(out.target, out.primary);
      }
    }
    out.log.push_back({ep + 1, eps, policy_cost(env, greedy_policy(env, out.primary, enc)),
                       updates > 0 ? loss / static_cast<double>(updates) : 0.0});
  }
  out.syncs = syncer.fired();
  return out;
}

}  // namespace mnoswitch::agents
