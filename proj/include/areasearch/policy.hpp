#pragma once

#include <random>
#include <span>
#include <vector>

#include "areasearch/nn.hpp"
#include "areasearch/observation.hpp"
#include "areasearch/world.hpp"

namespace areasearch {

// The four shared networks. Actors run at execution time; critics exist only
// for training.
struct Nets {
  Mlp role_actor;    // [local || joint || aggregated] -> 2 logits
  Mlp role_critic;   // [local || joint || aggregated] -> 1
  Mlp prim_actor;    // [local || role] -> 5 logits
  Mlp prim_critic;   // [local || role || joint] -> 1
  int role_period = 1;

  static Nets init(int r_fov, std::mt19937_64& rng, int role_period = 1);
};

int role_input_dim(int r_fov);
int prim_actor_input_dim(int r_fov);
int prim_critic_input_dim(int r_fov);

std::vector<double> role_input(std::span<const double> local,
                               std::span<const double> joint,
                               std::span<const double> aggregated);
std::vector<double> prim_actor_input(std::span<const double> local,
                                     RoleAction role);
std::vector<double> prim_critic_input(std::span<const double> local,
                                      RoleAction role,
                                      std::span<const double> joint);

std::vector<double> role_distribution(const Mlp& role_actor,
                                      std::span<const double> local,
                                      std::span<const double> joint,
                                      std::span<const double> aggregated);
std::vector<double> primitive_distribution(const Mlp& prim_actor,
                                           std::span<const double> local,
                                           RoleAction role);

// Inverse-CDF sampling with an explicitly constructed uniform draw so the
// stream is identical across standard libraries.
double canonical_uniform(std::mt19937_64& rng);
int sample_index(std::span<const double> probs, std::mt19937_64& rng);

// Roles are resampled when step_index % role_period == 0 and persist
// otherwise.
std::vector<RoleAction> select_roles(const Nets& nets, const GridWorld& world,
                                     long step_index, std::mt19937_64& rng,
                                     const std::vector<RoleAction>& prev_roles);

std::vector<PrimitiveAction> random_policy(std::mt19937_64& rng, int n_robots);

enum class GoalMode { FrontierOrTarget, FrontierOnly, TargetOnly };

// One step toward the nearest goal cell by BFS over known-traversable space
// (unexplored cells optimistic, explored obstacles blocked). Ties break in
// row-major cell order; a goal behind the robot turns right first.
PrimitiveAction greedy_policy(const GridWorld& world, int robot_id,
                              GoalMode mode);

PrimitiveAction scripted_executor(const GridWorld& world, int robot_id,
                                  RoleAction role);

}  // namespace areasearch
