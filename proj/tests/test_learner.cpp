#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "areasearch/learner.hpp"
#include "doctest.h"

using namespace areasearch;

namespace {

constexpr double kFdEps = 1e-5;

ScenarioConfig tiny_scenario(uint64_t seed) {
  ScenarioConfig c;
  c.width = 8;
  c.height = 8;
  c.n_obstacles = 10;
  c.n_targets = 8;
  c.n_robots = 2;
  c.r_fov = 1;
  c.r_comm = 4;
  c.rad_e = 1;
  c.episode_len = 12;
  c.seed = seed;
  return c;
}

TrainConfig tiny_train() {
  TrainConfig t;
  t.batch = 48;
  t.minibatch = 24;
  t.epochs = 2;
  t.total_timesteps = 96;
  return t;
}

// Brute-force discounted-return advantage for lambda = 1.
std::vector<double> mc_advantages(const std::vector<double>& r,
                                  const std::vector<double>& v,
                                  const std::vector<uint8_t>& d,
                                  double bootstrap, double gamma) {
  const size_t n = r.size();
  std::vector<double> adv(n);
  for (size_t t = 0; t < n; ++t) {
    double g = 0, scale = 1;
    size_t k = t;
    for (; k < n; ++k) {
      g += scale * r[k];
      scale *= gamma;
      if (d[k]) break;
    }
    if (k == n) g += scale * bootstrap;  // truncated tail
    adv[t] = g - v[t];
  }
  return adv;
}

std::vector<double> randv(std::mt19937_64& rng, size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("GAE with lambda=1 equals Monte Carlo advantages") {
  std::mt19937_64 rng(31);
  for (int inst = 0; inst < 100; ++inst) {
    size_t n = 1 + rng() % 20;
    auto r = randv(rng, n, -1, 1);
    auto v = randv(rng, n, -1, 1);
    std::vector<uint8_t> d(n, 0);
    for (auto& x : d) x = (rng() % 5 == 0) ? 1 : 0;
    double bootstrap = (rng() % 2) ? 0.5 : 0.0;
    double gamma = 0.9;
    std::vector<double> adv, ret;
    gae(r, v, d, bootstrap, gamma, 1.0, adv, ret);
    auto oracle = mc_advantages(r, v, d, bootstrap, gamma);
    for (size_t t = 0; t < n; ++t) {
      REQUIRE(adv[t] == doctest::Approx(oracle[t]).epsilon(1e-9));
      REQUIRE(ret[t] == doctest::Approx(oracle[t] + v[t]).epsilon(1e-9));
    }
  }
}

TEST_CASE("GAE with lambda=0 equals the one-step TD error") {
  std::mt19937_64 rng(32);
  for (int inst = 0; inst < 100; ++inst) {
    size_t n = 1 + rng() % 20;
    auto r = randv(rng, n, -1, 1);
    auto v = randv(rng, n, -1, 1);
    std::vector<uint8_t> d(n, 0);
    for (auto& x : d) x = (rng() % 4 == 0) ? 1 : 0;
    double gamma = 0.95, bootstrap = 0.25;
    std::vector<double> adv, ret;
    gae(r, v, d, bootstrap, gamma, 0.0, adv, ret);
    for (size_t t = 0; t < n; ++t) {
      double vn = (t + 1 < n) ? v[t + 1] : bootstrap;
      double td = r[t] + gamma * vn * (d[t] ? 0.0 : 1.0) - v[t];
      REQUIRE(adv[t] == doctest::Approx(td).epsilon(1e-9));
    }
  }
}

TEST_CASE("GAE rejects mismatched inputs") {
  std::vector<double> r = {1, 2}, v = {0};
  std::vector<uint8_t> d = {0, 0};
  std::vector<double> adv, ret;
  CHECK_THROWS_AS(gae(r, v, d, 0, 0.9, 0.95, adv, ret), ShapeMismatch);
}

TEST_CASE("advantage normalization and its degenerate guard") {
  std::vector<double> adv = {1.0, 2.0, 3.0, 4.0};
  auto n = normalize_advantages(adv);
  double mean = 0, var = 0;
  for (double x : n) mean += x;
  mean /= n.size();
  for (double x : n) var += (x - mean) * (x - mean);
  var /= n.size();
  CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(var == doctest::Approx(1.0).epsilon(1e-12));
  // constant advantages are left untouched
  std::vector<double> flat(6, 0.75);
  CHECK(normalize_advantages(flat) == flat);
}

TEST_CASE("level_loss identities at ratio one") {
  // new == old log-probs: ratio 1, no clipping, KL = 0.
  std::vector<double> logp = {-1.0, -2.0, -0.5};
  std::vector<double> v = {0.5, 0.0, -0.5};
  std::vector<double> ent = {1.0, 1.2, 0.8};
  std::vector<double> adv = {1.0, -1.0, 0.0};
  std::vector<double> ret = {1.5, 0.0, -1.0};
  double c1 = 0.5, c2 = 1e-4, c3 = 0.01, clip = 0.2;
  LevelLoss l = level_loss(logp, v, ent, logp, adv, ret, c1, c2, c3, clip);
  CHECK(l.kl == doctest::Approx(0.0).epsilon(1e-12));
  double clip_expect = -(1.0 * 1.0 + 1.0 * -1.0 + 0.0) / 3;
  CHECK(l.clip_loss == doctest::Approx(clip_expect).epsilon(1e-12));
  double vf_expect = (1.0 + 0.0 + 0.25) / 3;
  CHECK(l.vf == doctest::Approx(vf_expect).epsilon(1e-12));
  CHECK(l.entropy == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l.total == doctest::Approx(clip_expect + c2 * vf_expect - c3 * 1.0)
                       .epsilon(1e-12));
}

TEST_CASE("level_loss clips large ratios") {
  // One sample, positive advantage, ratio e >> 1.2: surrogate is clipped and
  // the policy gradient through this sample vanishes.
  std::vector<double> new_logp = {0.0}, old_logp = {-1.0};
  std::vector<double> v = {0.0}, ent = {1.0}, adv = {2.0}, ret = {0.0};
  std::vector<double> dlp, dv;
  LevelLoss l = level_loss(new_logp, v, ent, old_logp, adv, ret, 0.0, 0.0, 0.0,
                           0.2, &dlp, &dv);
  CHECK(l.clip_loss == doctest::Approx(-1.2 * 2.0).epsilon(1e-12));
  CHECK(dlp[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("level_loss gradients match finite differences") {
  std::mt19937_64 rng(33);
  const size_t m = 12;
  auto new_logp = randv(rng, m, -2.0, -0.1);
  auto old_logp = randv(rng, m, -2.0, -0.1);
  auto v = randv(rng, m, -1.0, 1.0);
  auto ent = randv(rng, m, 0.5, 1.5);
  auto adv = randv(rng, m, -1.5, 1.5);
  auto ret = randv(rng, m, -1.0, 1.0);
  double c1 = 0.5, c2 = 1e-4, c3 = 0.01, clip = 0.2;
  std::vector<double> dlp, dv;
  level_loss(new_logp, v, ent, old_logp, adv, ret, c1, c2, c3, clip, &dlp, &dv);
  for (size_t k = 0; k < m; ++k) {
    auto up = new_logp, dn = new_logp;
    up[k] += kFdEps;
    dn[k] -= kFdEps;
    double lu = level_loss(up, v, ent, old_logp, adv, ret, c1, c2, c3, clip).total;
    double ld = level_loss(dn, v, ent, old_logp, adv, ret, c1, c2, c3, clip).total;
    double fd = (lu - ld) / (2 * kFdEps);
    CHECK(dlp[k] == doctest::Approx(fd).epsilon(1e-5));

    auto vu = v, vd = v;
    vu[k] += kFdEps;
    vd[k] -= kFdEps;
    lu = level_loss(new_logp, vu, ent, old_logp, adv, ret, c1, c2, c3, clip).total;
    ld = level_loss(new_logp, vd, ent, old_logp, adv, ret, c1, c2, c3, clip).total;
    fd = (lu - ld) / (2 * kFdEps);
    CHECK(dv[k] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("composed minibatch loss matches finite differences through all nets") {
  ScenarioConfig sc = tiny_scenario(3);
  TrainConfig tc = tiny_train();
  Trainer trainer(sc, tc);
  RolloutBuffer buf = trainer.collect_rollouts();
  REQUIRE(static_cast<int>(buf.samples.size()) == tc.batch);

  // One update first so the evaluated parameters differ from the rollout-time
  // parameters: at the freshly collected point the KL guard max(0, kl_mean)
  // sits exactly on its kink and central differences are ill-defined.
  trainer.update(buf);
  Nets nets = trainer.nets();
  std::vector<int> idx(tc.minibatch);
  for (int i = 0; i < tc.minibatch; ++i) idx[i] = i;

  std::array<std::vector<double>, 4> grads;
  Diagnostics d0 = eval_minibatch(nets, buf.samples, idx, tc, &grads);

  Mlp* nets4[4] = {&nets.role_actor, &nets.role_critic, &nets.prim_actor,
                   &nets.prim_critic};
  std::mt19937_64 rng(5);
  for (int k = 0; k < 4; ++k) {
    // spot-check 40 random parameters per network
    for (int probe = 0; probe < 40; ++probe) {
      size_t p = rng() % nets4[k]->params().size();
      double saved = nets4[k]->params()[p];
      nets4[k]->params()[p] = saved + kFdEps;
      double up = eval_minibatch(nets, buf.samples, idx, tc, nullptr).total;
      nets4[k]->params()[p] = saved - kFdEps;
      double dn = eval_minibatch(nets, buf.samples, idx, tc, nullptr).total;
      nets4[k]->params()[p] = saved;
      double fd = (up - dn) / (2 * kFdEps);
      double got = grads[k][p];
      // Central differences on the full minibatch loss carry ~1e-5 absolute
      // noise, comparable to the c2-scaled critic gradients, hence the mixed
      // absolute/relative tolerance.
      double tol = 1e-4 + 1e-3 * std::max(std::abs(fd), std::abs(got));
      CAPTURE(k);
      CAPTURE(p);
      CAPTURE(fd);
      CAPTURE(got);
      REQUIRE(std::abs(fd - got) <= tol);
    }
  }
  CHECK(std::isfinite(d0.total));
}

TEST_CASE("rollouts are sized, masked, and summarized consistently") {
  Trainer trainer(tiny_scenario(9), tiny_train());
  RolloutBuffer buf = trainer.collect_rollouts();
  REQUIRE(static_cast<int>(buf.samples.size()) == tiny_train().batch);
  CHECK(buf.episodes >= 2);
  for (const Transition& t : buf.samples) {
    CHECK(t.role_selected);  // role_period = 1
    CHECK(t.role >= 0);
    CHECK(t.role < kNumRoles);
    CHECK(t.action >= 0);
    CHECK(t.action < kNumPrimitives);
    CHECK(t.act_logp <= 0.0);
    CHECK(t.role_logp <= 0.0);
    CHECK(std::isfinite(t.adv_r));
    CHECK(std::isfinite(t.adv_p));
  }
  CHECK(buf.role_explore_fraction >= 0.0);
  CHECK(buf.role_explore_fraction <= 1.0);
}

TEST_CASE("an update with zero learning rate leaves parameters unchanged") {
  TrainConfig tc = tiny_train();
  tc.learning_rate = 0.0;
  Trainer trainer(tiny_scenario(4), tc);
  std::vector<double> before[4] = {
      trainer.nets().role_actor.params(), trainer.nets().role_critic.params(),
      trainer.nets().prim_actor.params(), trainer.nets().prim_critic.params()};
  RolloutBuffer buf = trainer.collect_rollouts();
  trainer.update(buf);
  CHECK(trainer.nets().role_actor.params() == before[0]);
  CHECK(trainer.nets().role_critic.params() == before[1]);
  CHECK(trainer.nets().prim_actor.params() == before[2]);
  CHECK(trainer.nets().prim_critic.params() == before[3]);
  CHECK(trainer.update_index() == 1);
}

TEST_CASE("an ordinary update changes every network") {
  Trainer trainer(tiny_scenario(6), tiny_train());
  std::vector<double> before = trainer.nets().prim_actor.params();
  std::vector<double> before_rc = trainer.nets().role_critic.params();
  RolloutBuffer buf = trainer.collect_rollouts();
  Diagnostics d = trainer.update(buf);
  CHECK(std::isfinite(d.total));
  CHECK(trainer.nets().prim_actor.params() != before);
  CHECK(trainer.nets().role_critic.params() != before_rc);
}

TEST_CASE("training is deterministic for a fixed seed") {
  Trainer a(tiny_scenario(12), tiny_train());
  Trainer b(tiny_scenario(12), tiny_train());
  for (int u = 0; u < 2; ++u) {
    RolloutBuffer ba = a.collect_rollouts();
    RolloutBuffer bb = b.collect_rollouts();
    a.update(ba);
    b.update(bb);
  }
  CHECK(a.nets().role_actor.params() == b.nets().role_actor.params());
  CHECK(a.nets().prim_critic.params() == b.nets().prim_critic.params());
}

TEST_CASE("checkpoints resume bit-identically") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "areasearch_ck_test.bin";

  TrainConfig tc = tiny_train();
  tc.total_timesteps = 4 * tc.batch;
  Trainer full(tiny_scenario(21), tc);
  Trainer half(tiny_scenario(21), tc);
  for (int u = 0; u < 4; ++u) {
    RolloutBuffer buf = full.collect_rollouts();
    full.update(buf);
  }
  for (int u = 0; u < 2; ++u) {
    RolloutBuffer buf = half.collect_rollouts();
    half.update(buf);
  }
  save_checkpoint(path.string(), half.checkpoint());
  Trainer resumed(load_checkpoint(path.string()));
  CHECK(resumed.timesteps_done() == 2 * tc.batch);
  for (int u = 0; u < 2; ++u) {
    RolloutBuffer buf = resumed.collect_rollouts();
    resumed.update(buf);
  }
  CHECK(resumed.nets().role_actor.params() == full.nets().role_actor.params());
  CHECK(resumed.nets().role_critic.params() == full.nets().role_critic.params());
  CHECK(resumed.nets().prim_actor.params() == full.nets().prim_actor.params());
  CHECK(resumed.nets().prim_critic.params() == full.nets().prim_critic.params());
  CHECK(resumed.update_index() == full.update_index());
  fs::remove(path);
}

TEST_CASE("checkpoint files reject corruption") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "areasearch_ck_bad.bin";
  Trainer t(tiny_scenario(2), tiny_train());
  save_checkpoint(path.string(), t.checkpoint());
  // truncate
  auto size = fs::file_size(path);
  fs::resize_file(path, size / 2);
  CHECK_THROWS_AS(load_checkpoint(path.string()), IoError);
  // bad magic
  {
    std::FILE* f = std::fopen(path.string().c_str(), "r+b");
    REQUIRE(f);
    std::fputc('X', f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_checkpoint(path.string()), IoError);
  fs::remove(path);
  CHECK_THROWS_AS(load_checkpoint(path.string()), IoError);
}

TEST_CASE("train config validation") {
  TrainConfig tc;
  CHECK_NOTHROW(tc.validate());
  tc.minibatch = 999;  // does not divide 5000
  CHECK_THROWS_AS(tc.validate(), ConfigError);
  tc = TrainConfig{};
  tc.gamma = 0;
  CHECK_THROWS_AS(tc.validate(), ConfigError);
  tc = TrainConfig{};
  tc.role_period = 0;
  CHECK_THROWS_AS(tc.validate(), ConfigError);
  tc = TrainConfig{};
  tc.weights = RewardWeights{0.9, 0.2};
  CHECK_THROWS_AS(tc.validate(), ConfigError);
}

TEST_CASE("role_period > 1 marks only selection steps") {
  TrainConfig tc = tiny_train();
  tc.role_period = 3;
  Trainer trainer(tiny_scenario(14), tc);
  RolloutBuffer buf = trainer.collect_rollouts();
  int selected = 0;
  for (const Transition& t : buf.samples) {
    if (t.role_selected) ++selected;
  }
  CHECK(selected > 0);
  CHECK(selected < static_cast<int>(buf.samples.size()));
  CHECK_NOTHROW(trainer.update(buf));
}

TEST_CASE("run() writes one CSV row per update and stops at the budget") {
  TrainConfig tc = tiny_train();
  tc.total_timesteps = 3 * tc.batch;
  Trainer trainer(tiny_scenario(8), tc);
  std::ostringstream log;
  trainer.run(&log);
  CHECK(trainer.timesteps_done() == 3 * tc.batch);
  int lines = 0;
  std::string s = log.str(), line;
  std::istringstream is(s);
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 4);  // header + 3 updates
  CHECK(s.rfind("update_index,", 0) == 0);
}
