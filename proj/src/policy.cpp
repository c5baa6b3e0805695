#include "areasearch/policy.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace areasearch {

int role_input_dim(int r_fov) {
  return 2 * local_feature_dim(r_fov) + kJointFeatureDim;
}
int prim_actor_input_dim(int r_fov) { return local_feature_dim(r_fov) + 1; }
int prim_critic_input_dim(int r_fov) {
  return local_feature_dim(r_fov) + 1 + kJointFeatureDim;
}

Nets Nets::init(int r_fov, std::mt19937_64& rng, int role_period) {
  if (role_period < 1) throw ConfigError("role_period must be >= 1");
  Nets n;
  n.role_actor = Mlp::init({{role_input_dim(r_fov), 64, 32, kNumRoles}}, rng);
  n.role_critic = Mlp::init({{role_input_dim(r_fov), 64, 32, 1}}, rng, 1.0);
  n.prim_actor =
      Mlp::init({{prim_actor_input_dim(r_fov), 64, 32, kNumPrimitives}}, rng);
  n.prim_critic =
      Mlp::init({{prim_critic_input_dim(r_fov), 64, 32, 1}}, rng, 1.0);
  n.role_period = role_period;
  return n;
}

std::vector<double> role_input(std::span<const double> local,
                               std::span<const double> joint,
                               std::span<const double> aggregated) {
  std::vector<double> in;
  in.reserve(local.size() + joint.size() + aggregated.size());
  in.insert(in.end(), local.begin(), local.end());
  in.insert(in.end(), joint.begin(), joint.end());
  in.insert(in.end(), aggregated.begin(), aggregated.end());
  return in;
}

std::vector<double> prim_actor_input(std::span<const double> local,
                                     RoleAction role) {
  std::vector<double> in(local.begin(), local.end());
  in.push_back(static_cast<double>(role));
  return in;
}

std::vector<double> prim_critic_input(std::span<const double> local,
                                      RoleAction role,
                                      std::span<const double> joint) {
  std::vector<double> in(local.begin(), local.end());
  in.push_back(static_cast<double>(role));
  in.insert(in.end(), joint.begin(), joint.end());
  return in;
}

namespace {

std::vector<double> softmax(const std::vector<double>& logits) {
  double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0;
  for (size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

}  // namespace

std::vector<double> role_distribution(const Mlp& role_actor,
                                      std::span<const double> local,
                                      std::span<const double> joint,
                                      std::span<const double> aggregated) {
  return softmax(role_actor.forward(role_input(local, joint, aggregated)));
}

std::vector<double> primitive_distribution(const Mlp& prim_actor,
                                           std::span<const double> local,
                                           RoleAction role) {
  return softmax(prim_actor.forward(prim_actor_input(local, role)));
}

double canonical_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample_index(std::span<const double> probs, std::mt19937_64& rng) {
  double u = canonical_uniform(rng);
  double acc = 0;
  for (size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

std::vector<RoleAction> select_roles(const Nets& nets, const GridWorld& world,
                                     long step_index, std::mt19937_64& rng,
                                     const std::vector<RoleAction>& prev_roles) {
  const int n = world.n_robots();
  if (step_index % nets.role_period != 0) {
    if (static_cast<int>(prev_roles.size()) != n)
      throw ShapeMismatch("prev_roles arity mismatch");
    return prev_roles;
  }
  const auto graph = world.comm_graph();
  const auto joint = featurize_joint(joint_observation(world));
  std::vector<std::vector<double>> locals(n);
  for (int i = 0; i < n; ++i)
    locals[i] = featurize_local(local_observation(world, i));
  const auto agg = aggregate_neighbors(locals, graph);
  std::vector<RoleAction> roles(n);
  for (int i = 0; i < n; ++i) {
    auto p = role_distribution(nets.role_actor, locals[i], joint, agg[i]);
    roles[i] = static_cast<RoleAction>(sample_index(p, rng));
  }
  return roles;
}

std::vector<PrimitiveAction> random_policy(std::mt19937_64& rng,
                                           int n_robots) {
  std::vector<PrimitiveAction> out(n_robots);
  for (int i = 0; i < n_robots; ++i) {
    double u = canonical_uniform(rng);
    out[i] = static_cast<PrimitiveAction>(
        std::min(kNumPrimitives - 1, static_cast<int>(u * kNumPrimitives)));
  }
  return out;
}

namespace {

PrimitiveAction step_toward(Heading heading, Heading required) {
  int diff = (static_cast<int>(required) - static_cast<int>(heading) + 4) % 4;
  switch (diff) {
    case 0: return PrimitiveAction::MoveForward;
    case 1: return PrimitiveAction::TurnRight;
    case 3: return PrimitiveAction::TurnLeft;
    default: return PrimitiveAction::TurnRight;  // behind: tie broken right
  }
}

}  // namespace

PrimitiveAction greedy_policy(const GridWorld& world, int robot_id,
                              GoalMode mode) {
  const int w = world.width(), h = world.height();
  const Cell start = world.robots().at(robot_id).position;
  const Heading heading = world.robots()[robot_id].heading;

  auto traversable = [&](int x, int y) {
    return !world.explored(x, y) || world.kind(x, y) != CellKind::Obstacle;
  };
  auto is_goal = [&](int x, int y) {
    bool frontier = world.is_frontier(x, y);
    bool target = world.explored(x, y) &&
                  world.kind(x, y) == CellKind::Target && !world.covered(x, y);
    switch (mode) {
      case GoalMode::FrontierOrTarget: return frontier || target;
      case GoalMode::FrontierOnly: return frontier;
      case GoalMode::TargetOnly: return target;
    }
    return false;
  };

  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<size_t>(w) * h, kInf);
  std::queue<int> q;
  dist[start.y * w + start.x] = 0;
  q.push(start.y * w + start.x);
  while (!q.empty()) {
    int c = q.front();
    q.pop();
    int x = c % w, y = c / w;
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      int nx = x + dx[k], ny = y + dy[k];
      if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
      if (!traversable(nx, ny)) continue;
      int ni = ny * w + nx;
      if (dist[ni] != kInf) continue;
      dist[ni] = dist[c] + 1;
      q.push(ni);
    }
  }

  // Nearest goal, ties in row-major cell order.
  int best = -1, best_d = kInf;
  for (int i = 0; i < w * h; ++i)
    if (dist[i] < best_d && is_goal(i % w, i / w)) {
      best = i;
      best_d = dist[i];
    }
  if (best < 0 || best_d == 0) return PrimitiveAction::Stop;

  // Backtrack from the goal to find the cell adjacent to the robot; neighbor
  // ties also break row-major.
  int cur = best;
  while (dist[cur] > 1) {
    int x = cur % w, y = cur / w;
    int next = -1;
    const int nx[4] = {x, x - 1, x + 1, x};
    const int ny[4] = {y - 1, y, y, y + 1};  // row-major neighbor order
    for (int k = 0; k < 4; ++k) {
      if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
      int ni = ny[k] * w + nx[k];
      if (dist[ni] == dist[cur] - 1) {
        next = ni;
        break;
      }
    }
    cur = next;
  }
  const int tx = cur % w, ty = cur / w;
  Heading required;
  if (tx > start.x) required = Heading::East;
  else if (tx < start.x) required = Heading::West;
  else if (ty < start.y) required = Heading::North;
  else required = Heading::South;
  return step_toward(heading, required);
}

PrimitiveAction scripted_executor(const GridWorld& world, int robot_id,
                                  RoleAction role) {
  return greedy_policy(world, robot_id,
                       role == RoleAction::Explore ? GoalMode::FrontierOnly
                                                   : GoalMode::TargetOnly);
}

}  // namespace areasearch
