#include "areasearch.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "areasearch/config.hpp"
#include "areasearch/eval.hpp"
#include "areasearch/learner.hpp"
#include "areasearch/replay.hpp"
#include "areasearch/world.hpp"

using namespace areasearch;

namespace {

thread_local std::string g_last_error;

as_status fail(as_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
as_status guarded(Fn&& fn) {
  try {
    fn();
    return AS_OK;
  } catch (const ConfigError& e) {
    return fail(AS_ERR_CONFIG, e.what());
  } catch (const ShapeMismatch& e) {
    return fail(AS_ERR_CONFIG, e.what());
  } catch (const InfeasibleScenario& e) {
    return fail(AS_ERR_INFEASIBLE, e.what());
  } catch (const NumericError& e) {
    return fail(AS_ERR_NUMERIC, e.what());
  } catch (const DomainError& e) {
    return fail(AS_ERR_NUMERIC, e.what());
  } catch (const IoError& e) {
    return fail(AS_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(AS_ERR, e.what());
  }
}

ScenarioConfig to_cpp(const as_scenario& s) {
  ScenarioConfig c;
  c.width = s.width;
  c.height = s.height;
  c.n_obstacles = s.obstacles;
  c.n_targets = s.targets;
  c.n_robots = s.robots;
  c.r_fov = s.fov;
  c.r_comm = s.comm;
  c.rad_e = s.rad_e;
  c.episode_len = s.episode_len;
  c.seed = s.seed;
  return c;
}

as_scenario to_c(const ScenarioConfig& c) {
  as_scenario s;
  s.width = c.width;
  s.height = c.height;
  s.obstacles = c.n_obstacles;
  s.targets = c.n_targets;
  s.robots = c.n_robots;
  s.fov = c.r_fov;
  s.comm = c.r_comm;
  s.rad_e = c.rad_e;
  s.episode_len = c.episode_len;
  s.seed = c.seed;
  return s;
}

}  // namespace

struct as_sim {
  GridWorld world;
};

struct as_run {
  RunConfig cfg;
};

extern "C" {

const char* as_last_error(void) { return g_last_error.c_str(); }

const char* as_status_name(as_status status) {
  switch (status) {
    case AS_OK: return "ok";
    case AS_ERR: return "error";
    case AS_ERR_CONFIG: return "config error";
    case AS_ERR_INFEASIBLE: return "infeasible scenario";
    case AS_ERR_NUMERIC: return "numeric failure";
    case AS_ERR_IO: return "io error";
  }
  return "unknown";
}

void as_scenario_defaults(as_scenario* out) {
  if (out) *out = to_c(ScenarioConfig{});
}

as_status as_scenario_preset(const char* name, int robots, uint64_t seed,
                             as_scenario* out) {
  if (!name || !out) return fail(AS_ERR_CONFIG, "null argument");
  return guarded([&] { *out = to_c(preset_config(name, robots, seed)); });
}

as_status as_sim_generate(const as_scenario* scenario, as_sim** out) {
  if (!scenario || !out) return fail(AS_ERR_CONFIG, "null argument");
  return guarded([&] {
    *out = new as_sim{GridWorld::generate(to_cpp(*scenario))};
  });
}

as_status as_sim_load(const char* path, const as_scenario* defaults,
                      as_sim** out) {
  if (!path || !out) return fail(AS_ERR_CONFIG, "null argument");
  return guarded([&] {
    std::ifstream is(path);
    if (!is) throw IoError(std::string("cannot open map: ") + path);
    ScenarioConfig d = defaults ? to_cpp(*defaults) : ScenarioConfig{};
    *out = new as_sim{GridWorld::load(is, d)};
  });
}

as_status as_sim_save(const as_sim* sim, const char* path) {
  if (!sim || !path) return fail(AS_ERR_CONFIG, "null argument");
  return guarded([&] {
    std::ofstream os(path);
    if (!os) throw IoError(std::string("cannot write map: ") + path);
    sim->world.save(os);
  });
}

void as_sim_free(as_sim* sim) { delete sim; }

int as_sim_width(const as_sim* sim) { return sim ? sim->world.width() : 0; }
int as_sim_height(const as_sim* sim) { return sim ? sim->world.height() : 0; }
int as_sim_robot_count(const as_sim* sim) {
  return sim ? sim->world.n_robots() : 0;
}

int as_sim_cell(const as_sim* sim, int x, int y) {
  if (!sim || !sim->world.in_bounds(x, y)) return -1;
  return static_cast<int>(sim->world.kind(x, y));
}

int as_sim_explored(const as_sim* sim, int x, int y) {
  if (!sim || !sim->world.in_bounds(x, y)) return -1;
  return sim->world.explored(x, y) ? 1 : 0;
}

int as_sim_covered(const as_sim* sim, int x, int y) {
  if (!sim || !sim->world.in_bounds(x, y)) return -1;
  return sim->world.covered(x, y) ? 1 : 0;
}

as_status as_sim_robot(const as_sim* sim, int robot_id, int* x, int* y,
                       int* heading) {
  if (!sim) return fail(AS_ERR_CONFIG, "null argument");
  if (robot_id < 0 || robot_id >= sim->world.n_robots())
    return fail(AS_ERR_CONFIG, "invalid robot id");
  const RobotPose& r = sim->world.robots()[robot_id];
  if (x) *x = r.position.x;
  if (y) *y = r.position.y;
  if (heading) *heading = static_cast<int>(r.heading);
  return AS_OK;
}

as_status as_sim_initial_sense(as_sim* sim) {
  if (!sim) return fail(AS_ERR_CONFIG, "null argument");
  return guarded([&] { sim->world.initial_sense(); });
}

as_status as_sim_step(as_sim* sim, const int* actions, int n_actions) {
  if (!sim || !actions) return fail(AS_ERR_CONFIG, "null argument");
  return guarded([&] {
    std::vector<PrimitiveAction> acts(n_actions);
    for (int i = 0; i < n_actions; ++i) {
      if (actions[i] < 0 || actions[i] >= kNumPrimitives)
        throw ConfigError("action out of range");
      acts[i] = static_cast<PrimitiveAction>(actions[i]);
    }
    sim->world.step(acts);
  });
}

as_status as_sim_counts(const as_sim* sim, int* explored_free, int* free_cells,
                        int* covered, int* targets) {
  if (!sim) return fail(AS_ERR_CONFIG, "null argument");
  if (explored_free) *explored_free = sim->world.explored_free_count();
  if (free_cells) *free_cells = sim->world.free_cell_count();
  if (covered) *covered = sim->world.covered_count();
  if (targets) *targets = sim->world.target_cell_count();
  return AS_OK;
}

as_status as_run_create(as_run** out) {
  if (!out) return fail(AS_ERR_CONFIG, "null argument");
  *out = new as_run{};
  return AS_OK;
}

as_status as_run_load(const char* config_path, as_run** out) {
  if (!config_path || !out) return fail(AS_ERR_CONFIG, "null argument");
  return guarded([&] { *out = new as_run{load_run_config(config_path)}; });
}

as_status as_run_set(as_run* run, const char* key, const char* value) {
  if (!run || !key || !value) return fail(AS_ERR_CONFIG, "null argument");
  return guarded([&] {
    std::string k(key);
    auto dot = k.find('.');
    if (dot == std::string::npos)
      throw ConfigError("key must be section.name: " + k);
    std::istringstream snippet("[" + k.substr(0, dot) + "]\n" +
                               k.substr(dot + 1) + "=" + value + "\n");
    apply_run_config(run->cfg, snippet);
  });
}

as_status as_run_serialize(const as_run* run, char* buf, int buf_len) {
  if (!run || !buf || buf_len < 1) return fail(AS_ERR_CONFIG, "null argument");
  std::string s = serialize_run_config(run->cfg);
  if (static_cast<int>(s.size()) + 1 > buf_len)
    return fail(AS_ERR_CONFIG, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return AS_OK;
}

void as_run_free(as_run* run) { delete run; }

as_status as_cmd_gen_map(const as_run* run, const char* out_path,
                         char* summary, int summary_len) {
  if (!run || !out_path) return fail(AS_ERR_CONFIG, "null argument");
  return guarded([&] {
    GridWorld world = GridWorld::generate(run->cfg.effective_scenario());
    std::ofstream os(out_path);
    if (!os) throw IoError(std::string("cannot write map: ") + out_path);
    world.save(os);
    if (summary && summary_len > 0) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "%dx%d map: %d obstacles, %d targets, %d robots",
                    world.width(), world.height(),
                    world.width() * world.height() - world.free_cell_count(),
                    world.target_cell_count(), world.n_robots());
      std::snprintf(summary, summary_len, "%s", buf);
    }
  });
}

as_status as_cmd_train(const as_run* run) {
  if (!run) return fail(AS_ERR_CONFIG, "null argument");
  return guarded([&] {
    namespace fs = std::filesystem;
    const RunConfig& c = run->cfg;
    fs::create_directories(c.out_dir);
    bool resume = !c.checkpoint.empty() && fs::exists(c.checkpoint);
    auto resumed = [&] {
      Checkpoint ck = load_checkpoint(c.checkpoint);
      // The run's budget wins so a finished checkpoint can be extended.
      ck.train.total_timesteps = c.train.total_timesteps;
      return Trainer(std::move(ck));
    };
    Trainer trainer =
        resume ? resumed() : Trainer(c.effective_scenario(), c.train);
    std::ofstream log(fs::path(c.out_dir) / "train_log.csv",
                      resume ? std::ios::app : std::ios::out);
    if (!log) throw IoError("cannot write training log in " + c.out_dir);
    if (!resume) {
      char hdr[128];
      std::snprintf(hdr, sizeof hdr, "# alpha=%g beta=%g seed=%llu\n",
                    c.train.weights.alpha, c.train.weights.beta,
                    static_cast<unsigned long long>(c.seed));
      log << hdr;
    }
    trainer.run(&log);
    save_checkpoint((fs::path(c.out_dir) / "checkpoint.bin").string(),
                    trainer.checkpoint());
  });
}

as_status as_cmd_eval(const as_run* run) {
  if (!run) return fail(AS_ERR_CONFIG, "null argument");
  return guarded([&] {
    namespace fs = std::filesystem;
    const RunConfig& c = run->cfg;
    fs::create_directories(c.out_dir);
    ScenarioConfig sc = c.effective_scenario();
    auto factory = policy_factory(c.policy, c.checkpoint);
    MetricsReport rep =
        evaluate(c.preset.empty() ? "custom" : c.preset, sc, c.policy,
                 factory, c.episodes, c.seed, c.threads);
    std::ofstream os(fs::path(c.out_dir) / "metrics.csv");
    if (!os) throw IoError("cannot write metrics in " + c.out_dir);
    os << metrics_csv_header() << metrics_csv_row(rep);
    if (c.render) {
      auto policy = factory();
      export_replay(sc, *policy, mix_seed(c.seed, 0), c.out_dir, true);
    } else {
      auto policy = factory();
      export_replay(sc, *policy, mix_seed(c.seed, 0), c.out_dir, false);
    }
  });
}

as_status as_cmd_replay(const as_run* run) {
  if (!run) return fail(AS_ERR_CONFIG, "null argument");
  return guarded([&] {
    const RunConfig& c = run->cfg;
    ScenarioConfig sc = c.effective_scenario();
    auto policy = policy_factory(c.policy, c.checkpoint)();
    export_replay(sc, *policy, c.seed, c.out_dir, c.render);
  });
}

}  // extern "C"
