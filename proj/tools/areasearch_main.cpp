// Command-line front end; talks to the core exclusively through the C API.
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "areasearch.h"

namespace {

struct CommonArgs {
  std::optional<std::string> config;
  std::optional<unsigned long long> seed;
  std::optional<std::string> preset;
  std::optional<int> robots;
  std::optional<int> episodes;
  std::optional<long long> timesteps;
  std::optional<double> alpha, beta;
  std::optional<std::string> policy;
  std::optional<std::string> checkpoint;
  std::optional<std::string> out_dir;
  bool render = false;
  std::optional<int> width, height, obstacles, targets, fov, comm, episode_len;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config, "config file (key=value sections)");
  cmd->add_option("--seed", a.seed, "base seed");
  cmd->add_option("--preset", a.preset,
                  "scenario preset (easy|medium|hard|super_hard|obs_easy|"
                  "obs_medium|obs_hard|desk)");
  cmd->add_option("--robots", a.robots, "robot count override");
  cmd->add_option("--episodes", a.episodes, "evaluation episodes");
  cmd->add_option("--timesteps", a.timesteps, "training robot-timesteps");
  cmd->add_option("--alpha", a.alpha, "exploration reward weight");
  cmd->add_option("--beta", a.beta, "coverage reward weight");
  cmd->add_option("--policy", a.policy,
                  "policy: random|greedy|scripted|learned");
  cmd->add_option("--checkpoint", a.checkpoint, "checkpoint path");
  cmd->add_option("--out", a.out_dir, "output directory");
  cmd->add_flag("--render", a.render, "write PPM frames");
  cmd->add_option("--width", a.width, "map width");
  cmd->add_option("--height", a.height, "map height");
  cmd->add_option("--obstacles", a.obstacles, "obstacle count");
  cmd->add_option("--targets", a.targets, "target count");
  cmd->add_option("--fov", a.fov, "sensing radius");
  cmd->add_option("--comm", a.comm, "communication radius");
  cmd->add_option("--episode-len", a.episode_len, "steps per episode");
}

int exit_code(as_status s) {
  switch (s) {
    case AS_OK: return 0;
    case AS_ERR_CONFIG: return 2;
    case AS_ERR_INFEASIBLE: return 3;
    case AS_ERR_NUMERIC: return 4;
    default: return 1;
  }
}

int check(as_status s) {
  if (s != AS_OK)
    std::fprintf(stderr, "error (%s): %s\n", as_status_name(s),
                 as_last_error());
  return exit_code(s);
}

as_run* build_run(const CommonArgs& a, as_status& st) {
  as_run* run = nullptr;
  st = a.config ? as_run_load(a.config->c_str(), &run) : as_run_create(&run);
  if (st != AS_OK) return nullptr;
  auto set = [&](const char* key, const std::string& v) {
    if (st == AS_OK) st = as_run_set(run, key, v.c_str());
  };
  if (a.seed) set("run.seed", std::to_string(*a.seed));
  if (a.preset) set("scenario.preset", *a.preset);
  if (a.robots) set("scenario.robots", std::to_string(*a.robots));
  if (a.width) set("scenario.width", std::to_string(*a.width));
  if (a.height) set("scenario.height", std::to_string(*a.height));
  if (a.obstacles) set("scenario.obstacles", std::to_string(*a.obstacles));
  if (a.targets) set("scenario.targets", std::to_string(*a.targets));
  if (a.fov) set("scenario.fov", std::to_string(*a.fov));
  if (a.comm) set("scenario.comm", std::to_string(*a.comm));
  if (a.episode_len)
    set("scenario.episode_len", std::to_string(*a.episode_len));
  if (a.episodes) set("run.episodes", std::to_string(*a.episodes));
  if (a.timesteps) set("train.timesteps", std::to_string(*a.timesteps));
  if (a.alpha) set("reward.alpha", std::to_string(*a.alpha));
  if (a.beta) set("reward.beta", std::to_string(*a.beta));
  if (a.policy) set("run.policy", *a.policy);
  if (a.checkpoint) set("run.checkpoint", *a.checkpoint);
  if (a.out_dir) set("run.out_dir", *a.out_dir);
  if (a.render) set("run.render", "1");
  if (st != AS_OK) {
    as_run_free(run);
    return nullptr;
  }
  return run;
}

void print_file(const std::string& path) {
  if (FILE* f = std::fopen(path.c_str(), "r")) {
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0)
      std::fwrite(buf, 1, n, stdout);
    std::fclose(f);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-robot area-search simulator, trainer, and benchmark"};
  app.require_subcommand(1);

  CommonArgs gen_args, train_args, eval_args, replay_args;
  std::string map_out = "map.txt";

  CLI::App* gen = app.add_subcommand("gen-map", "generate a map file");
  add_common(gen, gen_args);
  gen->add_option("--map-out", map_out, "output map path");

  CLI::App* train = app.add_subcommand("train", "train the hierarchical policy");
  add_common(train, train_args);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a policy, write metrics CSV");
  add_common(eval, eval_args);

  CLI::App* replay = app.add_subcommand("replay", "export a replay (and frames)");
  add_common(replay, replay_args);

  CLI11_PARSE(app, argc, argv);

  as_status st = AS_OK;
  int rc = 0;
  if (gen->parsed()) {
    as_run* run = build_run(gen_args, st);
    if (!run) return check(st);
    char summary[200] = {0};
    st = as_cmd_gen_map(run, map_out.c_str(), summary, sizeof summary);
    if (st == AS_OK) std::printf("%s -> %s\n", summary, map_out.c_str());
    rc = check(st);
    as_run_free(run);
  } else if (train->parsed()) {
    as_run* run = build_run(train_args, st);
    if (!run) return check(st);
    st = as_cmd_train(run);
    rc = check(st);
    as_run_free(run);
  } else if (eval->parsed()) {
    as_run* run = build_run(eval_args, st);
    if (!run) return check(st);
    st = as_cmd_eval(run);
    if (st == AS_OK) {
      std::string out = eval_args.out_dir.value_or(".");
      print_file(out + "/metrics.csv");
    }
    rc = check(st);
    as_run_free(run);
  } else if (replay->parsed()) {
    as_run* run = build_run(replay_args, st);
    if (!run) return check(st);
    st = as_cmd_replay(run);
    rc = check(st);
    as_run_free(run);
  }
  return rc;
}
