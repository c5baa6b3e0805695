#pragma once

#include <cmath>
#include <vector>

#include "areasearch/types.hpp"

namespace areasearch {

struct RewardWeights {
  double alpha = 0.5;
  double beta = 0.5;

  void validate() const {
    if (alpha < 0 || alpha > 1 || beta < 0 || beta > 1 ||
        std::abs(alpha + beta - 1.0) > 1e-9)
      throw ConfigError("reward weights must lie in [0,1] and sum to 1");
  }
};

struct RewardRecord {
  double exploration = 0;  // global exploration reward
  double coverage = 0;     // global coverage reward
  double role = 0;         // alpha*exploration + beta*coverage
  std::vector<double> per_robot_primitive;
};

enum class AbilityMode {
  AsPrinted,  // default
  Geometric   // standard circle-lens intersection area
};

// Exploration-ability normalizer: the area newly visible after moving
// distance d with sensing radius rad_e. AsPrinted uses
//   S = 2*r^2*acos(d^2/(2*d*r)) - sqrt(4*r^2 - d^2),  B = 2*pi*r^2 - S;
// Geometric uses the standard lens area
//   S = 2*r^2*acos(d/(2*r)) - (d/2)*sqrt(4*r^2 - d^2), B = pi*r^2 - S.
double exploration_ability(double rad_e, double d, AbilityMode mode);

// Robots sharing a role share that role's global reward.
RewardRecord primitive_rewards(const StepEvents& events,
                               const std::vector<RoleAction>& roles,
                               double exploration_normalizer,
                               const RewardWeights& weights);

double role_reward(double exploration, double coverage,
                   const RewardWeights& weights);

}  // namespace areasearch
