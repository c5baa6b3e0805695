#include "areasearch/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "areasearch/learner.hpp"

namespace areasearch {

std::vector<std::string> preset_names() {
  return {"easy",     "medium",   "hard",    "super_hard",
          "obs_easy", "obs_medium", "obs_hard", "desk"};
}

ScenarioConfig preset_config(const std::string& name, int n_robots,
                             uint64_t seed) {
  ScenarioConfig c;
  c.width = 25;
  c.height = 25;
  c.n_obstacles = 250;  // 40% obstacle ratio
  c.n_robots = 4;
  // A tighter sensing disc than the robots' training-time maximum: with r=4,
  // four initial 49-cell discs already reveal ~30% of the free area before any
  // motion, which washes out the gap between purposeful and random movement.
  c.r_fov = 2;
  c.r_comm = 10;
  c.rad_e = 2;
  c.episode_len = 128;
  auto targets = [](int free, double ratio) {
    return static_cast<int>(std::lround(free * ratio));
  };
  if (name == "easy") {
    c.n_targets = targets(375, 0.56);
  } else if (name == "medium") {
    c.n_targets = targets(375, 0.24);
  } else if (name == "hard") {
    c.n_targets = targets(375, 0.16);
  } else if (name == "super_hard") {
    c.n_targets = targets(375, 0.08);
  } else if (name == "obs_easy") {
    c.n_obstacles = 100;  // 16%
    c.n_targets = targets(525, 0.16);
  } else if (name == "obs_medium") {
    c.n_obstacles = 250;  // 40%
    c.n_targets = targets(375, 0.16);
  } else if (name == "obs_hard") {
    c.n_obstacles = 325;  // 52%
    c.n_targets = targets(300, 0.16);
  } else if (name == "desk") {
    c.width = 10;
    c.height = 10;
    c.n_obstacles = 20;
    c.n_targets = 16;  // 20% of the 80 free cells
    c.n_robots = 2;
    c.r_fov = 2;
    c.r_comm = 5;
    // rad_e below r_fov keeps the exploration reward on the same footing as
    // the 0/1 coverage reward at this map size.
    c.rad_e = 1;
    c.episode_len = 120;
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  if (n_robots > 0) c.n_robots = n_robots;
  c.seed = seed;
  return c;
}

namespace {

class RandomPolicy : public Policy {
 public:
  std::vector<PrimitiveAction> act(const GridWorld& world, long,
                                   std::mt19937_64& rng,
                                   std::vector<RoleAction>&) override {
    return random_policy(rng, world.n_robots());
  }
};

class GreedyPolicy : public Policy {
 public:
  std::vector<PrimitiveAction> act(const GridWorld& world, long,
                                   std::mt19937_64&,
                                   std::vector<RoleAction>&) override {
    std::vector<PrimitiveAction> out(world.n_robots());
    for (int i = 0; i < world.n_robots(); ++i)
      out[i] = greedy_policy(world, i, GoalMode::FrontierOrTarget);
    return out;
  }
};

// Even ids explore, odd ids cover; each arm runs the greedy executor.
class ScriptedPolicy : public Policy {
 public:
  std::vector<PrimitiveAction> act(const GridWorld& world, long,
                                   std::mt19937_64&,
                                   std::vector<RoleAction>& roles) override {
    const int n = world.n_robots();
    roles.resize(n);
    std::vector<PrimitiveAction> out(n);
    for (int i = 0; i < n; ++i) {
      roles[i] = i % 2 == 0 ? RoleAction::Explore : RoleAction::Cover;
      out[i] = scripted_executor(world, i, roles[i]);
    }
    return out;
  }
};

// Decentralized execution: the two actors only, sampled stochastically as
// during training.
class LearnedPolicy : public Policy {
 public:
  explicit LearnedPolicy(Nets nets) : nets_(std::move(nets)) {}

  void reset(const GridWorld& world) override {
    prev_roles_.assign(world.n_robots(), RoleAction::Explore);
  }

  std::vector<PrimitiveAction> act(const GridWorld& world, long step,
                                   std::mt19937_64& rng,
                                   std::vector<RoleAction>& roles) override {
    prev_roles_ = select_roles(nets_, world, step, rng, prev_roles_);
    roles = prev_roles_;
    const int n = world.n_robots();
    std::vector<PrimitiveAction> out(n);
    for (int i = 0; i < n; ++i) {
      auto local = featurize_local(local_observation(world, i));
      auto probs = primitive_distribution(nets_.prim_actor, local, roles[i]);
      out[i] = static_cast<PrimitiveAction>(sample_index(probs, rng));
    }
    return out;
  }

 private:
  Nets nets_;
  std::vector<RoleAction> prev_roles_;
};

bool episode_finished(const GridWorld& w) {
  return w.explored_free_count() == w.free_cell_count() &&
         w.covered_count() == w.target_cell_count();
}

}  // namespace

std::unique_ptr<Policy> make_random_policy() {
  return std::make_unique<RandomPolicy>();
}
std::unique_ptr<Policy> make_greedy_policy() {
  return std::make_unique<GreedyPolicy>();
}
std::unique_ptr<Policy> make_scripted_policy() {
  return std::make_unique<ScriptedPolicy>();
}
std::unique_ptr<Policy> make_learned_policy(Nets nets) {
  return std::make_unique<LearnedPolicy>(std::move(nets));
}

PolicyFactory policy_factory(const std::string& name,
                             const std::string& checkpoint_path) {
  if (name == "random") return [] { return make_random_policy(); };
  if (name == "greedy") return [] { return make_greedy_policy(); };
  if (name == "scripted") return [] { return make_scripted_policy(); };
  if (name == "learned") {
    Nets nets = load_nets(checkpoint_path);
    return [nets] { return make_learned_policy(nets); };
  }
  throw ConfigError("unknown policy: " + name);
}

EpisodeLog run_episode(const ScenarioConfig& config, Policy& policy,
                       uint64_t seed, bool detailed) {
  ScenarioConfig cfg = config;
  cfg.seed = seed;
  GridWorld world = GridWorld::generate(cfg);
  world.initial_sense();
  policy.reset(world);
  std::mt19937_64 rng(mix_seed(seed, 0x65706973));

  EpisodeLog log;
  log.free_cells = world.free_cell_count();
  log.target_cells = world.target_cell_count();
  log.n_robots = world.n_robots();
  log.detailed = detailed;
  log.explored_counts.push_back(world.explored_free_count());
  log.covered_counts.push_back(world.covered_count());

  for (int t = 0; t < cfg.episode_len; ++t) {
    if (episode_finished(world)) break;
    std::vector<RoleAction> roles;
    std::vector<PrimitiveAction> actions = policy.act(world, t, rng, roles);
    std::vector<Cell> covered_before;
    if (detailed)
      for (int y = 0; y < world.height(); ++y)
        for (int x = 0; x < world.width(); ++x)
          if (world.covered(x, y)) covered_before.push_back({x, y});
    std::vector<std::vector<uint8_t>> explored_before;
    if (detailed) {
      explored_before.assign(world.height(),
                             std::vector<uint8_t>(world.width(), 0));
      for (int y = 0; y < world.height(); ++y)
        for (int x = 0; x < world.width(); ++x)
          explored_before[y][x] = world.explored(x, y) ? 1 : 0;
    }

    world.step(actions);
    ++log.steps;
    log.explored_counts.push_back(world.explored_free_count());
    log.covered_counts.push_back(world.covered_count());
    if (!roles.empty()) log.roles.push_back(roles);
    log.actions.push_back(actions);
    log.poses.push_back(world.robots());
    if (detailed) {
      std::vector<Cell> ne, nc;
      for (int y = 0; y < world.height(); ++y)
        for (int x = 0; x < world.width(); ++x)
          if (world.explored(x, y) && !explored_before[y][x])
            ne.push_back({x, y});
      for (int y = 0; y < world.height(); ++y)
        for (int x = 0; x < world.width(); ++x)
          if (world.covered(x, y) &&
              std::find(covered_before.begin(), covered_before.end(),
                        Cell{x, y}) == covered_before.end())
            nc.push_back({x, y});
      log.newly_explored.push_back(std::move(ne));
      log.newly_covered.push_back(std::move(nc));
    }
  }
  return log;
}

double exploration_percentage(const std::vector<EpisodeLog>& logs) {
  if (logs.empty()) throw ConfigError("no episodes");
  double acc = 0;
  for (const auto& l : logs)
    acc += 100.0 * l.explored_counts.back() / l.free_cells;
  return acc / logs.size();
}

double coverage_percentage(const std::vector<EpisodeLog>& logs) {
  if (logs.empty()) throw ConfigError("no episodes");
  double acc = 0;
  for (const auto& l : logs)
    acc += l.target_cells ? 100.0 * l.covered_counts.back() / l.target_cells
                          : 100.0;
  return acc / logs.size();
}

std::optional<double> time_to_90(const std::vector<EpisodeLog>& logs) {
  if (logs.empty()) throw ConfigError("no episodes");
  double acc = 0;
  for (const auto& l : logs) {
    const double need = 0.9 * l.free_cells;
    int found = -1;
    for (size_t t = 0; t < l.explored_counts.size(); ++t) {
      if (l.explored_counts[t] >= need) {
        found = static_cast<int>(t);
        break;
      }
    }
    if (found < 0) return std::nullopt;
    acc += found;
  }
  return acc / logs.size();
}

std::optional<std::pair<double, double>> role_proportions(
    const std::vector<EpisodeLog>& logs) {
  long total = 0, explore = 0;
  for (const auto& l : logs)
    for (const auto& step : l.roles)
      for (RoleAction r : step) {
        ++total;
        if (r == RoleAction::Explore) ++explore;
      }
  if (total == 0) return std::nullopt;
  double e = 100.0 * explore / total;
  return std::make_pair(e, 100.0 - e);
}

int resolve_thread_count(int requested) {
  int n = requested;
  if (n <= 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
  }
  if (const char* cap = std::getenv("AREASEARCH_THREADS")) {
    int c = std::atoi(cap);
    if (c > 0) n = std::min(n, c);
  }
  return std::max(1, n);
}

std::vector<EpisodeLog> run_episodes(const ScenarioConfig& config,
                                     const PolicyFactory& factory,
                                     int episodes, uint64_t base_seed,
                                     int threads) {
  if (episodes < 1) throw ConfigError("episodes must be >= 1");
  std::vector<EpisodeLog> logs(episodes);
  const int workers = std::min(resolve_thread_count(threads), episodes);
  if (workers == 1) {
    auto policy = factory();
    for (int e = 0; e < episodes; ++e)
      logs[e] = run_episode(config, *policy, mix_seed(base_seed, e));
    return logs;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        auto policy = factory();
        for (int e = w; e < episodes; e += workers)
          logs[e] = run_episode(config, *policy, mix_seed(base_seed, e));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  return logs;
}

MetricsReport evaluate(const std::string& preset_name,
                       const ScenarioConfig& config,
                       const std::string& policy_name,
                       const PolicyFactory& factory, int episodes,
                       uint64_t base_seed, int threads) {
  auto logs = run_episodes(config, factory, episodes, base_seed, threads);
  MetricsReport r;
  r.preset = preset_name;
  r.n_robots = config.n_robots;
  r.policy = policy_name;
  r.episodes = episodes;
  r.explo_pct = exploration_percentage(logs);
  r.cover_pct = coverage_percentage(logs);
  r.time_e = time_to_90(logs);
  if (auto rp = role_proportions(logs)) r.role_explore_fraction = rp->first;
  return r;
}

std::string metrics_csv_header() {
  return "preset,n_robots,policy,episodes,explo_pct,cover_pct,time_e,"
         "role_explore_fraction\n";
}

std::string metrics_csv_row(const MetricsReport& r) {
  std::ostringstream os;
  char num[64];
  os << r.preset << ',' << r.n_robots << ',' << r.policy << ',' << r.episodes;
  std::snprintf(num, sizeof num, ",%.2f,%.2f", r.explo_pct, r.cover_pct);
  os << num;
  if (r.time_e) {
    std::snprintf(num, sizeof num, ",%.2f", *r.time_e);
    os << num;
  } else {
    os << ",-";
  }
  if (r.role_explore_fraction) {
    std::snprintf(num, sizeof num, ",%.2f", *r.role_explore_fraction);
    os << num;
  } else {
    os << ",-";
  }
  os << '\n';
  return os.str();
}

}  // namespace areasearch
