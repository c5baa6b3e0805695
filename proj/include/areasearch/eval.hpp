#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "areasearch/policy.hpp"

namespace areasearch {

// Named scenario presets. Target-ratio presets fix obstacles at 40% and vary
// the target share of free cells; obstacle presets fix the target share at
// 16% and vary obstacle density. "desk" is a small 10x10 training scenario.
std::vector<std::string> preset_names();
ScenarioConfig preset_config(const std::string& name, int n_robots,
                             uint64_t seed);

struct EpisodeLog {
  int free_cells = 0;
  int target_cells = 0;
  int n_robots = 0;
  int steps = 0;
  // index 0 is the state after initial sensing, before any action
  std::vector<int> explored_counts;
  std::vector<int> covered_counts;
  // per executed step
  std::vector<std::vector<RoleAction>> roles;       // empty for role-less policies
  std::vector<std::vector<PrimitiveAction>> actions;
  std::vector<std::vector<RobotPose>> poses;        // post-step
  // optional per-step detail for replay export
  bool detailed = false;
  std::vector<std::vector<Cell>> newly_explored;
  std::vector<std::vector<Cell>> newly_covered;
};

// Per-episode decision maker. reset() is called at episode start.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual void reset(const GridWorld&) {}
  // Fills roles (may be left empty for policies without a role level) and
  // returns one primitive action per robot.
  virtual std::vector<PrimitiveAction> act(const GridWorld& world, long step,
                                           std::mt19937_64& rng,
                                           std::vector<RoleAction>& roles) = 0;
};

std::unique_ptr<Policy> make_random_policy();
std::unique_ptr<Policy> make_greedy_policy();
std::unique_ptr<Policy> make_scripted_policy();  // fixed half/half roles
std::unique_ptr<Policy> make_learned_policy(Nets nets);

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;
PolicyFactory policy_factory(const std::string& name,
                             const std::string& checkpoint_path);

EpisodeLog run_episode(const ScenarioConfig& config, Policy& policy,
                       uint64_t seed, bool detailed = false);

double exploration_percentage(const std::vector<EpisodeLog>& logs);
double coverage_percentage(const std::vector<EpisodeLog>& logs);
std::optional<double> time_to_90(const std::vector<EpisodeLog>& logs);
// (explore %, cover %) over all recorded role decisions; empty when the
// policy emits no roles.
std::optional<std::pair<double, double>> role_proportions(
    const std::vector<EpisodeLog>& logs);

struct MetricsReport {
  std::string preset;
  int n_robots = 0;
  std::string policy;
  int episodes = 0;
  double explo_pct = 0;
  double cover_pct = 0;
  std::optional<double> time_e;
  std::optional<double> role_explore_fraction;
};

// Runs independent episodes (seeds derived by counter from base_seed),
// optionally across threads; results are ordered by episode index either way.
std::vector<EpisodeLog> run_episodes(const ScenarioConfig& config,
                                     const PolicyFactory& factory,
                                     int episodes, uint64_t base_seed,
                                     int threads);

MetricsReport evaluate(const std::string& preset_name,
                       const ScenarioConfig& config,
                       const std::string& policy_name,
                       const PolicyFactory& factory, int episodes,
                       uint64_t base_seed, int threads);

std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& r);

// AREASEARCH_THREADS caps worker parallelism; 0 requests the default.
int resolve_thread_count(int requested);

}  // namespace areasearch
