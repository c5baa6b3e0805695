#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "areasearch/policy.hpp"
#include "areasearch/reward.hpp"

namespace areasearch {

struct TrainConfig {
  double learning_rate = 5e-4;
  double clip = 0.2;
  double gamma = 0.9;
  double gae_lambda = 0.95;
  double c1_r = 0.5, c2_r = 1e-4, c3_r = 0.01;
  double c1_p = 0.5, c2_p = 1e-4, c3_p = 0.01;
  int batch = 5000;
  int minibatch = 1000;
  int epochs = 4;
  long total_timesteps = 200000;
  int role_period = 1;
  RewardWeights weights{0.4, 0.6};
  AbilityMode ability_mode = AbilityMode::AsPrinted;

  void validate() const;
};

// One (robot, step) record carrying both policy levels.
struct Transition {
  std::vector<double> local;
  std::vector<double> joint;
  std::vector<double> agg;
  int role = 0;
  double role_logp = 0;
  bool role_selected = true;  // false on persistence steps (role_period > 1)
  int action = 0;
  double act_logp = 0;
  double v_r = 0;
  double v_p = 0;
  double r_role = 0;
  double r_prim = 0;
  bool done = false;
  // filled by GAE
  double adv_r = 0, ret_r = 0;
  double adv_p = 0, ret_p = 0;
};

struct RolloutBuffer {
  std::vector<Transition> samples;
  double exploration_reward_mean = 0;
  double coverage_reward_mean = 0;
  double role_explore_fraction = 0;
  int episodes = 0;
};

// delta_t = r_t + gamma*V_{t+1}*(1-done_t) - V_t;  A_t = sum (gamma*lambda)^l delta;
// returns_t = A_t + V_t. Linear backward pass.
void gae(std::span<const double> rewards, std::span<const double> values,
         std::span<const uint8_t> dones, double bootstrap_value, double gamma,
         double lambda, std::vector<double>& advantages,
         std::vector<double>& returns);

// Zero mean, unit variance per minibatch; left untouched when the variance
// is below 1e-8.
std::vector<double> normalize_advantages(std::span<const double> adv);

struct LevelLoss {
  double clip_loss = 0;
  double kl = 0;
  double vf = 0;
  double entropy = 0;  // mean entropy (the bonus term is its negation)
  double total = 0;
};

// Clipped-surrogate + KL penalty + value error + entropy bonus for one
// policy level, with gradients w.r.t. the per-sample log-probs and values.
LevelLoss level_loss(std::span<const double> new_logp,
                     std::span<const double> new_v,
                     std::span<const double> entropy,
                     std::span<const double> old_logp,
                     std::span<const double> adv_norm,
                     std::span<const double> returns, double c1, double c2,
                     double c3, double clip,
                     std::vector<double>* d_logp = nullptr,
                     std::vector<double>* d_v = nullptr);

struct Diagnostics {
  LevelLoss role;
  LevelLoss prim;
  double total = 0;
};

// Total loss (role + primitive) over the indexed samples; when grads is
// non-null, accumulates parameter gradients for
// {role_actor, role_critic, prim_actor, prim_critic}.
Diagnostics eval_minibatch(const Nets& nets,
                           const std::vector<Transition>& samples,
                           std::span<const int> indices,
                           const TrainConfig& cfg,
                           std::array<std::vector<double>, 4>* grads);

struct Checkpoint {
  ScenarioConfig scenario;
  TrainConfig train;
  Nets nets;
  std::array<Adam, 4> adam;
  std::string rng_state;
  long timesteps_done = 0;
  long update_index = 0;
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);
Nets load_nets(const std::string& path);

class Trainer {
 public:
  Trainer(ScenarioConfig scenario, TrainConfig cfg);
  explicit Trainer(Checkpoint ck);

  RolloutBuffer collect_rollouts();
  Diagnostics update(RolloutBuffer& buffer);

  // Collect/update until total_timesteps robot-steps; appends one CSV row
  // per update (with header when starting fresh).
  void run(std::ostream* log_csv);

  Checkpoint checkpoint() const;
  const Nets& nets() const { return nets_; }
  long timesteps_done() const { return timesteps_done_; }
  long update_index() const { return update_index_; }

 private:
  ScenarioConfig scenario_;
  TrainConfig cfg_;
  Nets nets_;
  std::array<Adam, 4> adam_;
  std::mt19937_64 rng_;
  double exploration_normalizer_ = 1.0;
  long timesteps_done_ = 0;
  long update_index_ = 0;
};

}  // namespace areasearch
