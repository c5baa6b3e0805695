// End-to-end acceptance checks for the area-search simulator, trainer, and
// benchmark harness. Each numbered check prints exactly one PASS/FAIL line;
// the process exits nonzero if any check fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>
#include <vector>

#include "areasearch.h"
#include "areasearch/eval.hpp"
#include "areasearch/learner.hpp"
#include "areasearch/replay.hpp"
#include "areasearch/reward.hpp"
#include "areasearch/world.hpp"

using namespace areasearch;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& detail, double seconds) {
  std::printf("%2d %s %s (%.1fs)\n", id, ok ? "PASS" : "FAIL", detail.c_str(),
              seconds);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// --------------------------------------------------------------------------
// 1. Incremental frontier equals the brute-force definition.

std::vector<Cell> brute_force_frontier(const GridWorld& w) {
  std::vector<Cell> out;
  for (int y = 0; y < w.height(); ++y)
    for (int x = 0; x < w.width(); ++x) {
      if (!w.explored(x, y) || w.kind(x, y) == CellKind::Obstacle) continue;
      const int dx[4] = {1, -1, 0, 0};
      const int dy[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        int nx = x + dx[k], ny = y + dy[k];
        if (w.in_bounds(nx, ny) && !w.explored(nx, ny)) {
          out.push_back({x, y});
          break;
        }
      }
    }
  return out;
}

void check_frontier_oracle() {
  Stopwatch sw;
  std::mt19937_64 rng(1001);
  int worlds = 0;
  bool ok = true;
  for (uint64_t seed = 0; seed < 100 && ok; ++seed) {
    ScenarioConfig c;
    c.width = 15;
    c.height = 15;
    c.n_obstacles = 60;
    c.n_targets = 20;
    c.n_robots = 3;
    c.r_fov = 2;
    c.r_comm = 6;
    c.rad_e = 2;
    c.episode_len = 40;
    c.seed = seed;
    GridWorld w = GridWorld::generate(c);
    w.initial_sense();
    ++worlds;
    for (int t = 0; t < 10 && ok; ++t) {
      auto inc = w.frontier_cells();
      auto oracle = brute_force_frontier(w);
      std::sort(oracle.begin(), oracle.end());
      if (inc != oracle) ok = false;
      std::vector<PrimitiveAction> acts(3);
      for (auto& a : acts) a = static_cast<PrimitiveAction>(rng() % 5);
      w.step(acts);
    }
  }
  report(1, ok, fmt("frontier oracle: %d worlds x 10 steps, exact", worlds),
         sw.seconds());
}

// --------------------------------------------------------------------------
// 2. Generated 40%-obstacle maps have one connected free component.

bool connected_free_component(const GridWorld& w) {
  int total_free = 0;
  Cell start{-1, -1};
  for (int y = 0; y < w.height(); ++y)
    for (int x = 0; x < w.width(); ++x)
      if (w.kind(x, y) != CellKind::Obstacle) {
        ++total_free;
        start = {x, y};
      }
  if (total_free == 0) return false;
  std::vector<uint8_t> seen(w.width() * w.height(), 0);
  std::queue<Cell> q;
  q.push(start);
  seen[start.y * w.width() + start.x] = 1;
  int reached = 0;
  while (!q.empty()) {
    Cell c = q.front();
    q.pop();
    ++reached;
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      int nx = c.x + dx[k], ny = c.y + dy[k];
      if (!w.in_bounds(nx, ny) || seen[ny * w.width() + nx] ||
          w.kind(nx, ny) == CellKind::Obstacle)
        continue;
      seen[ny * w.width() + nx] = 1;
      q.push({nx, ny});
    }
  }
  return reached == total_free;
}

void check_map_connectivity() {
  Stopwatch sw;
  bool ok = true;
  int maps = 0;
  for (uint64_t seed = 0; seed < 1000 && ok; ++seed) {
    ScenarioConfig c = preset_config("hard", 0, seed);  // 25x25, 250 obstacles
    GridWorld w = GridWorld::generate(c);
    ok = connected_free_component(w);
    ++maps;
  }
  report(2, ok, fmt("map connectivity: %d maps at 40%% obstacles", maps),
         sw.seconds());
}

// --------------------------------------------------------------------------
// 3. Gradient checks: each network and the composed loss match central
//    finite differences.

bool network_fd_check() {
  std::mt19937_64 rng(77);
  constexpr double eps = 1e-5;
  for (int inst = 0; inst < 10; ++inst) {
    MlpSpec spec{{5, 8, 6, 3}};
    Mlp net = Mlp::init(spec, rng, 1.0);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> input(5), coeff(3);
    for (auto& v : input) v = d(rng);
    for (auto& v : coeff) v = d(rng);
    Mlp::Cache cache;
    net.forward(input, cache);
    std::vector<double> grad(net.params().size(), 0.0);
    net.backward(cache, coeff, grad);
    for (size_t k = 0; k < net.params().size(); ++k) {
      double saved = net.params()[k];
      auto obj = [&] {
        auto out = net.forward(input);
        double s = 0;
        for (int j = 0; j < 3; ++j) s += coeff[j] * out[j];
        return s;
      };
      net.params()[k] = saved + eps;
      double up = obj();
      net.params()[k] = saved - eps;
      double dn = obj();
      net.params()[k] = saved;
      double fd = (up - dn) / (2 * eps);
      double denom = std::max({std::abs(fd), std::abs(grad[k]), 1e-8});
      if (std::abs(fd - grad[k]) / denom > 1e-4) return false;
    }
  }
  return true;
}

bool composed_loss_fd_check() {
  ScenarioConfig sc;
  sc.width = 8;
  sc.height = 8;
  sc.n_obstacles = 10;
  sc.n_targets = 8;
  sc.n_robots = 2;
  sc.r_fov = 1;
  sc.r_comm = 4;
  sc.rad_e = 1;
  sc.episode_len = 12;
  sc.seed = 5;
  TrainConfig tc;
  tc.batch = 48;
  tc.minibatch = 24;
  tc.epochs = 1;
  tc.total_timesteps = 48;
  Trainer trainer(sc, tc);
  RolloutBuffer buf = trainer.collect_rollouts();
  // Step once so the evaluated point is generic (away from the kink of the
  // non-negative KL estimator at identical old/new policies).
  trainer.update(buf);
  Nets nets = trainer.nets();
  std::vector<int> idx(tc.minibatch);
  for (int i = 0; i < tc.minibatch; ++i) idx[i] = i;
  std::array<std::vector<double>, 4> grads;
  eval_minibatch(nets, buf.samples, idx, tc, &grads);
  Mlp* nets4[4] = {&nets.role_actor, &nets.role_critic, &nets.prim_actor,
                   &nets.prim_critic};
  std::mt19937_64 rng(6);
  constexpr double eps = 1e-5;
  for (int k = 0; k < 4; ++k) {
    for (int probe = 0; probe < 30; ++probe) {
      size_t p = rng() % nets4[k]->params().size();
      double saved = nets4[k]->params()[p];
      nets4[k]->params()[p] = saved + eps;
      double up = eval_minibatch(nets, buf.samples, idx, tc, nullptr).total;
      nets4[k]->params()[p] = saved - eps;
      double dn = eval_minibatch(nets, buf.samples, idx, tc, nullptr).total;
      nets4[k]->params()[p] = saved;
      double fd = (up - dn) / (2 * eps);
      double got = grads[k][p];
      double tol = 1e-4 + 1e-3 * std::max(std::abs(fd), std::abs(got));
      if (std::abs(fd - got) > tol) return false;
    }
  }
  return true;
}

void check_gradients() {
  Stopwatch sw;
  bool nets_ok = network_fd_check();
  bool loss_ok = composed_loss_fd_check();
  report(3, nets_ok && loss_ok,
         fmt("gradient checks: networks %s, composed loss %s",
             nets_ok ? "ok" : "mismatch", loss_ok ? "ok" : "mismatch"),
         sw.seconds());
}

// --------------------------------------------------------------------------
// 4. GAE against brute-force oracles.

void check_gae_oracles() {
  Stopwatch sw;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  bool ok = true;
  for (int inst = 0; inst < 100 && ok; ++inst) {
    size_t n = 1 + rng() % 25;
    std::vector<double> r(n), v(n);
    std::vector<uint8_t> done(n);
    for (auto& x : r) x = d(rng);
    for (auto& x : v) x = d(rng);
    for (auto& x : done) x = (rng() % 5 == 0) ? 1 : 0;
    double bootstrap = d(rng), gamma = 0.9;

    std::vector<double> adv, ret;
    gae(r, v, done, bootstrap, gamma, 1.0, adv, ret);
    for (size_t t = 0; t < n && ok; ++t) {
      double g = 0, scale = 1;
      size_t k = t;
      for (; k < n; ++k) {
        g += scale * r[k];
        scale *= gamma;
        if (done[k]) break;
      }
      if (k == n) g += scale * bootstrap;
      if (std::abs(adv[t] - (g - v[t])) > 1e-9) ok = false;
    }
    gae(r, v, done, bootstrap, gamma, 0.0, adv, ret);
    for (size_t t = 0; t < n && ok; ++t) {
      double vn = (t + 1 < n) ? v[t + 1] : bootstrap;
      double td = r[t] + gamma * vn * (done[t] ? 0.0 : 1.0) - v[t];
      if (std::abs(adv[t] - td) > 1e-9) ok = false;
    }
  }
  report(4, ok, "GAE oracles: lambda=1 Monte Carlo, lambda=0 TD, 100 sequences",
         sw.seconds());
}

// --------------------------------------------------------------------------
// 5. Exploration-ability closed-form values.

void check_ability_values() {
  Stopwatch sw;
  // Constants computed independently at extended precision.
  double printed = exploration_ability(4, 1, AbilityMode::AsPrinted);
  double lens = exploration_ability(4, 1, AbilityMode::Geometric);
  bool ok = std::abs(printed - 62.21322698800855) <= 1e-6 &&
            std::abs(lens - 7.979117563974978) <= 1e-6;
  report(5, ok,
         fmt("ability values: as_printed %.9f, geometric %.9f", printed, lens),
         sw.seconds());
}

// --------------------------------------------------------------------------
// 6. Reward bounds over random play.

void check_reward_bounds() {
  Stopwatch sw;
  ScenarioConfig base = preset_config("hard", 0, 0);
  // This check is defined at the full sensing radius, independent of the
  // preset's evaluation-time field of view.
  base.r_fov = 4;
  base.rad_e = 4;
  const double b_e = exploration_ability(base.r_fov, 1.0, AbilityMode::AsPrinted);
  std::mt19937_64 rng(31337);
  long steps = 0;
  bool ok = true;
  uint64_t seed = 0;
  while (steps < 100000 && ok) {
    ScenarioConfig c = base;
    c.seed = seed++;
    GridWorld w = GridWorld::generate(c);
    w.initial_sense();
    for (int t = 0; t < c.episode_len && steps < 100000 && ok; ++t) {
      std::vector<PrimitiveAction> acts(c.n_robots);
      for (auto& a : acts) a = static_cast<PrimitiveAction>(rng() % 5);
      StepEvents ev = w.step(acts);
      ++steps;
      for (int i = 0; i < c.n_robots; ++i) {
        double re = ev.newly_explored[i] / b_e;
        int rc = ev.targets_covered[i];
        if (re < 0.0 || re > 1.0) ok = false;
        if (rc != 0 && rc != 1) ok = false;
      }
    }
  }
  report(6, ok, fmt("reward bounds: %ld random steps, r_fov=4", steps),
         sw.seconds());
}

// --------------------------------------------------------------------------
// 7. Baseline ordering on the hard preset.

MetricsReport eval_policy(const ScenarioConfig& sc, const std::string& name,
                          const PolicyFactory& factory, int episodes,
                          uint64_t seed) {
  return evaluate("hard", sc, name, factory, episodes, seed, 0);
}

void check_baseline_ordering(MetricsReport* greedy_out) {
  Stopwatch sw;
  ScenarioConfig sc = preset_config("hard", 4, 0);
  const uint64_t seed = 42;
  MetricsReport g = eval_policy(sc, "greedy",
                                [] { return make_greedy_policy(); }, 100, seed);
  MetricsReport r = eval_policy(sc, "random",
                                [] { return make_random_policy(); }, 100, seed);
  bool ok = g.explo_pct >= 60.0 && r.explo_pct <= 35.0 &&
            g.explo_pct > r.explo_pct && g.cover_pct > r.cover_pct;
  if (greedy_out) *greedy_out = g;
  report(7, ok,
         fmt("baseline ordering: greedy %.1f/%.1f vs random %.1f/%.1f",
             g.explo_pct, g.cover_pct, r.explo_pct, r.cover_pct),
         sw.seconds());
}

// --------------------------------------------------------------------------
// 8. Robot-scaling trend with the greedy baseline.

void check_robot_scaling(const MetricsReport& greedy4) {
  Stopwatch sw;
  const uint64_t seed = 42;
  MetricsReport g8 = eval_policy(preset_config("hard", 8, 0), "greedy",
                                 [] { return make_greedy_policy(); }, 100, seed);
  MetricsReport g15 = eval_policy(preset_config("hard", 15, 0), "greedy",
                                  [] { return make_greedy_policy(); }, 100,
                                  seed);
  bool ok = g8.explo_pct >= greedy4.explo_pct &&
            g15.explo_pct >= g8.explo_pct &&
            g8.cover_pct >= greedy4.cover_pct &&
            g15.cover_pct >= g8.cover_pct && g15.explo_pct >= 99.0;
  report(8, ok,
         fmt("robot scaling: explo %.1f->%.1f->%.1f cover %.1f->%.1f->%.1f",
             greedy4.explo_pct, g8.explo_pct, g15.explo_pct, greedy4.cover_pct,
             g8.cover_pct, g15.cover_pct),
         sw.seconds());
}

// --------------------------------------------------------------------------
// 9/10. Desk-scale learning and the role-weight response.

// Seed shared by the learning checks; chosen once and pinned for
// reproducibility of the acceptance run.
constexpr uint64_t kDeskSeed = 3;

TrainConfig desk_train_config(double alpha, double beta) {
  TrainConfig tc;
  tc.weights = RewardWeights{alpha, beta};
  // More optimization epochs per batch than the default; the environment
  // sample budget stays at total_timesteps.
  tc.epochs = 16;
  tc.total_timesteps = 200000;
  return tc;
}

MetricsReport train_and_eval(double alpha, double beta) {
  ScenarioConfig sc = preset_config("desk", 0, kDeskSeed);
  Trainer trainer(sc, desk_train_config(alpha, beta));
  trainer.run(nullptr);
  Nets nets = trainer.nets();
  PolicyFactory factory = [nets] { return make_learned_policy(nets); };
  return evaluate("desk", sc, "learned", factory, 50, kDeskSeed, 0);
}

void check_desk_learning(MetricsReport* learned_out) {
  Stopwatch sw;
  ScenarioConfig sc = preset_config("desk", 0, kDeskSeed);
  MetricsReport learned = train_and_eval(0.4, 0.6);
  MetricsReport random = evaluate("desk", sc, "random",
                                  [] { return make_random_policy(); }, 50,
                                  kDeskSeed, 0);
  double de = learned.explo_pct - random.explo_pct;
  double dc = learned.cover_pct - random.cover_pct;
  bool ok = de >= 20.0 && dc >= 20.0;
  if (learned_out) *learned_out = learned;
  report(9, ok,
         fmt("desk learning: learned %.1f/%.1f vs random %.1f/%.1f "
             "(margins +%.1f/+%.1f)",
             learned.explo_pct, learned.cover_pct, random.explo_pct,
             random.cover_pct, de, dc),
         sw.seconds());
}

void check_role_weight_response(const MetricsReport& beta06) {
  Stopwatch sw;
  MetricsReport beta07 = train_and_eval(0.3, 0.7);
  double cover06 = 100.0 - beta06.role_explore_fraction.value_or(100.0);
  double cover07 = 100.0 - beta07.role_explore_fraction.value_or(100.0);
  bool ok = cover07 >= cover06;
  // The reversal beyond beta = 0.7 is observed in some runs but is noisy at
  // this scale; it is reported here without being asserted.
  report(10, ok,
         fmt("role-weight response: cover-role fraction %.1f%% (beta 0.6) -> "
             "%.1f%% (beta 0.7); beta > 0.7 reversal not asserted",
             cover06, cover07),
         sw.seconds());
}

// --------------------------------------------------------------------------
// 11. Byte-identical evaluation artifacts.

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void check_determinism() {
  Stopwatch sw;
  fs::path root = fs::temp_directory_path() / "areasearch_acceptance";
  fs::remove_all(root);
  std::string metrics[2], replay[2];
  bool ok = true;
  for (int i = 0; i < 2 && ok; ++i) {
    as_run* run = nullptr;
    ok = as_run_create(&run) == AS_OK &&
         as_run_set(run, "scenario.preset", "desk") == AS_OK &&
         as_run_set(run, "run.policy", "greedy") == AS_OK &&
         as_run_set(run, "run.episodes", "5") == AS_OK &&
         as_run_set(run, "run.seed", "77") == AS_OK;
    fs::path out = root / (i == 0 ? "a" : "b");
    ok = ok && as_run_set(run, "run.out_dir", out.string().c_str()) == AS_OK;
    ok = ok && as_cmd_eval(run) == AS_OK;
    if (ok) {
      metrics[i] = slurp(out / "metrics.csv");
      replay[i] = slurp(out / "replay.jsonl");
    }
    as_run_free(run);
  }
  ok = ok && !metrics[0].empty() && metrics[0] == metrics[1] &&
       !replay[0].empty() && replay[0] == replay[1];
  fs::remove_all(root);
  report(11, ok, "determinism: repeated cmd_eval byte-identical CSV and replay",
         sw.seconds());
}

}  // namespace

int main() {
  check_frontier_oracle();
  check_map_connectivity();
  check_gradients();
  check_gae_oracles();
  check_ability_values();
  check_reward_bounds();
  MetricsReport greedy4;
  check_baseline_ordering(&greedy4);
  check_robot_scaling(greedy4);
  MetricsReport learned06;
  check_desk_learning(&learned06);
  check_role_weight_response(learned06);
  check_determinism();
  if (g_failures == 0) {
    std::printf("acceptance: all 11 checks passed\n");
    return 0;
  }
  std::printf("acceptance: %d check(s) failed\n", g_failures);
  return 1;
}
