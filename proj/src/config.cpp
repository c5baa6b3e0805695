#include "areasearch/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "areasearch/eval.hpp"

namespace areasearch {

ScenarioConfig RunConfig::effective_scenario() const {
  ScenarioConfig sc = scenario;
  if (!preset.empty()) sc = preset_config(preset, robots_override, seed);
  else if (robots_override > 0) sc.n_robots = robots_override;
  sc.seed = seed;
  return sc;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct KvReader {
  std::map<std::string, std::string> kv;  // "section.key" -> value

  const std::string* find(const std::string& key) const {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  }
  void get(const std::string& key, std::string& out) const {
    if (auto* v = find(key)) out = *v;
  }
  void get(const std::string& key, int& out) const {
    if (auto* v = find(key)) out = std::stoi(*v);
  }
  void get(const std::string& key, long& out) const {
    if (auto* v = find(key)) out = std::stol(*v);
  }
  void get(const std::string& key, uint64_t& out) const {
    if (auto* v = find(key)) out = std::stoull(*v);
  }
  void get(const std::string& key, double& out) const {
    if (auto* v = find(key)) out = std::stod(*v);
  }
  void get(const std::string& key, bool& out) const {
    if (auto* v = find(key)) out = (*v == "1" || *v == "true");
  }
};

}  // namespace

RunConfig parse_run_config(std::istream& is) {
  RunConfig c;
  apply_run_config(c, is);
  return c;
}

void apply_run_config(RunConfig& c, std::istream& is) {
  KvReader r;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r");
    std::string t = line.substr(a, b - a + 1);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = t.substr(1, t.size() - 2);
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key=value");
    r.kv[section + "." + t.substr(0, eq)] = t.substr(eq + 1);
  }

  try {
    r.get("scenario.preset", c.preset);
    r.get("scenario.width", c.scenario.width);
    r.get("scenario.height", c.scenario.height);
    r.get("scenario.obstacles", c.scenario.n_obstacles);
    r.get("scenario.targets", c.scenario.n_targets);
    r.get("scenario.robots", c.robots_override);
    c.scenario.n_robots = c.robots_override > 0 ? c.robots_override
                                                : c.scenario.n_robots;
    r.get("scenario.fov", c.scenario.r_fov);
    r.get("scenario.comm", c.scenario.r_comm);
    r.get("scenario.rad_e", c.scenario.rad_e);
    r.get("scenario.episode_len", c.scenario.episode_len);
    r.get("reward.alpha", c.train.weights.alpha);
    r.get("reward.beta", c.train.weights.beta);
    std::string mode = "as_printed";
    r.get("reward.ability_mode", mode);
    if (mode == "as_printed") c.train.ability_mode = AbilityMode::AsPrinted;
    else if (mode == "geometric") c.train.ability_mode = AbilityMode::Geometric;
    else throw ConfigError("unknown ability_mode: " + mode);
    r.get("train.learning_rate", c.train.learning_rate);
    r.get("train.clip", c.train.clip);
    r.get("train.gamma", c.train.gamma);
    r.get("train.gae_lambda", c.train.gae_lambda);
    r.get("train.c1_r", c.train.c1_r);
    r.get("train.c2_r", c.train.c2_r);
    r.get("train.c3_r", c.train.c3_r);
    r.get("train.c1_p", c.train.c1_p);
    r.get("train.c2_p", c.train.c2_p);
    r.get("train.c3_p", c.train.c3_p);
    r.get("train.batch", c.train.batch);
    r.get("train.minibatch", c.train.minibatch);
    r.get("train.epochs", c.train.epochs);
    r.get("train.timesteps", c.train.total_timesteps);
    r.get("train.role_period", c.train.role_period);
    r.get("run.policy", c.policy);
    r.get("run.checkpoint", c.checkpoint);
    r.get("run.out_dir", c.out_dir);
    r.get("run.episodes", c.episodes);
    r.get("run.seed", c.seed);
    r.get("run.render", c.render);
    r.get("run.threads", c.threads);
  } catch (const std::invalid_argument&) {
    throw ConfigError("malformed numeric value in config");
  } catch (const std::out_of_range&) {
    throw ConfigError("numeric value out of range in config");
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config: " + path);
  return parse_run_config(is);
}

std::string serialize_run_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[scenario]\n";
  os << "preset=" << c.preset << '\n';
  os << "width=" << c.scenario.width << '\n';
  os << "height=" << c.scenario.height << '\n';
  os << "obstacles=" << c.scenario.n_obstacles << '\n';
  os << "targets=" << c.scenario.n_targets << '\n';
  os << "robots=" << c.robots_override << '\n';
  os << "fov=" << c.scenario.r_fov << '\n';
  os << "comm=" << c.scenario.r_comm << '\n';
  os << "rad_e=" << c.scenario.rad_e << '\n';
  os << "episode_len=" << c.scenario.episode_len << '\n';
  os << "[reward]\n";
  os << "alpha=" << fmt_double(c.train.weights.alpha) << '\n';
  os << "beta=" << fmt_double(c.train.weights.beta) << '\n';
  os << "ability_mode="
     << (c.train.ability_mode == AbilityMode::AsPrinted ? "as_printed"
                                                        : "geometric")
     << '\n';
  os << "[train]\n";
  os << "learning_rate=" << fmt_double(c.train.learning_rate) << '\n';
  os << "clip=" << fmt_double(c.train.clip) << '\n';
  os << "gamma=" << fmt_double(c.train.gamma) << '\n';
  os << "gae_lambda=" << fmt_double(c.train.gae_lambda) << '\n';
  os << "c1_r=" << fmt_double(c.train.c1_r) << '\n';
  os << "c2_r=" << fmt_double(c.train.c2_r) << '\n';
  os << "c3_r=" << fmt_double(c.train.c3_r) << '\n';
  os << "c1_p=" << fmt_double(c.train.c1_p) << '\n';
  os << "c2_p=" << fmt_double(c.train.c2_p) << '\n';
  os << "c3_p=" << fmt_double(c.train.c3_p) << '\n';
  os << "batch=" << c.train.batch << '\n';
  os << "minibatch=" << c.train.minibatch << '\n';
  os << "epochs=" << c.train.epochs << '\n';
  os << "timesteps=" << c.train.total_timesteps << '\n';
  os << "role_period=" << c.train.role_period << '\n';
  os << "[run]\n";
  os << "policy=" << c.policy << '\n';
  os << "checkpoint=" << c.checkpoint << '\n';
  os << "out_dir=" << c.out_dir << '\n';
  os << "episodes=" << c.episodes << '\n';
  os << "seed=" << c.seed << '\n';
  os << "render=" << (c.render ? 1 : 0) << '\n';
  os << "threads=" << c.threads << '\n';
  return os.str();
}

}  // namespace areasearch
