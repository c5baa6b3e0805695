#include "areasearch/reward.hpp"

#include <cmath>

namespace areasearch {

double exploration_ability(double rad_e, double d, AbilityMode mode) {
  if (rad_e <= 0) throw DomainError("rad_e must be positive");
  if (d < 0 || d > 2 * rad_e)
    throw DomainError("d must lie in [0, 2*rad_e]");
  if (mode == AbilityMode::AsPrinted) {
    if (d == 0)
      throw DomainError("d = 0 is outside the as-printed formula's domain");
    double s = 2 * rad_e * rad_e * std::acos(d * d / (2 * d * rad_e)) -
               std::sqrt(4 * rad_e * rad_e - d * d);
    return 2 * M_PI * rad_e * rad_e - s;
  }
  double s = 2 * rad_e * rad_e * std::acos(d / (2 * rad_e)) -
             (d / 2) * std::sqrt(4 * rad_e * rad_e - d * d);
  return M_PI * rad_e * rad_e - s;
}

RewardRecord primitive_rewards(const StepEvents& events,
                               const std::vector<RoleAction>& roles,
                               double exploration_normalizer,
                               const RewardWeights& weights) {
  const size_t n = roles.size();
  if (events.newly_explored.size() != n || events.targets_covered.size() != n)
    throw ShapeMismatch("one role per robot required");
  if (exploration_normalizer <= 0)
    throw DomainError("exploration normalizer must be positive");
  RewardRecord rec;
  for (size_t i = 0; i < n; ++i) {
    if (roles[i] == RoleAction::Explore)
      rec.exploration += events.newly_explored[i] / exploration_normalizer;
    else
      rec.coverage += events.targets_covered[i];
  }
  rec.role = role_reward(rec.exploration, rec.coverage, weights);
  rec.per_robot_primitive.resize(n);
  for (size_t i = 0; i < n; ++i)
    rec.per_robot_primitive[i] =
        roles[i] == RoleAction::Explore ? rec.exploration : rec.coverage;
  return rec;
}

double role_reward(double exploration, double coverage,
                   const RewardWeights& weights) {
  return weights.alpha * exploration + weights.beta * coverage;
}

}  // namespace areasearch
