#include "areasearch/learner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace areasearch {

void TrainConfig::validate() const {
  if (gamma <= 0 || gamma > 1) throw ConfigError("gamma must be in (0,1]");
  if (gae_lambda < 0 || gae_lambda > 1)
    throw ConfigError("gae_lambda must be in [0,1]");
  if (clip <= 0) throw ConfigError("clip must be positive");
  if (batch < 1 || minibatch < 1 || batch % minibatch != 0)
    throw ConfigError("minibatch must divide batch");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (role_period < 1) throw ConfigError("role_period must be >= 1");
  weights.validate();
}

void gae(std::span<const double> rewards, std::span<const double> values,
         std::span<const uint8_t> dones, double bootstrap_value, double gamma,
         double lambda, std::vector<double>& advantages,
         std::vector<double>& returns) {
  const size_t n = rewards.size();
  if (values.size() != n || dones.size() != n)
    throw ShapeMismatch("gae input lengths differ");
  advantages.assign(n, 0.0);
  returns.assign(n, 0.0);
  double running = 0.0;
  for (size_t t = n; t-- > 0;) {
    double v_next = (t + 1 < n) ? values[t + 1] : bootstrap_value;
    double mask = dones[t] ? 0.0 : 1.0;
    double delta = rewards[t] + gamma * v_next * mask - values[t];
    running = delta + gamma * lambda * mask * running;
    advantages[t] = running;
    returns[t] = running + values[t];
  }
}

std::vector<double> normalize_advantages(std::span<const double> adv) {
  std::vector<double> out(adv.begin(), adv.end());
  if (out.empty()) return out;
  double mean = std::accumulate(out.begin(), out.end(), 0.0) / out.size();
  double var = 0;
  for (double v : out) var += (v - mean) * (v - mean);
  var /= out.size();
  if (var < 1e-8) return out;
  double inv = 1.0 / std::sqrt(var);
  for (double& v : out) v = (v - mean) * inv;
  return out;
}

LevelLoss level_loss(std::span<const double> new_logp,
                     std::span<const double> new_v,
                     std::span<const double> entropy,
                     std::span<const double> old_logp,
                     std::span<const double> adv_norm,
                     std::span<const double> returns, double c1, double c2,
                     double c3, double clip, std::vector<double>* d_logp,
                     std::vector<double>* d_v) {
  const size_t m = new_logp.size();
  if (new_v.size() != m || entropy.size() != m || old_logp.size() != m ||
      adv_norm.size() != m || returns.size() != m)
    throw ShapeMismatch("level_loss input lengths differ");
  LevelLoss out;
  if (d_logp) d_logp->assign(m, 0.0);
  if (d_v) d_v->assign(m, 0.0);
  if (m == 0) return out;

  double kl_sum = 0;
  for (size_t i = 0; i < m; ++i) {
    double ratio = std::exp(new_logp[i] - old_logp[i]);
    double surr1 = ratio * adv_norm[i];
    double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
    double surr2 = clipped * adv_norm[i];
    out.clip_loss += -std::min(surr1, surr2);
    if (d_logp && surr1 <= surr2)
      (*d_logp)[i] += -adv_norm[i] * ratio / m;
    kl_sum += old_logp[i] - new_logp[i];
    double verr = new_v[i] - returns[i];
    out.vf += verr * verr;
    if (d_v) (*d_v)[i] = c2 * 2.0 * verr / m;
    out.entropy += entropy[i];
  }
  out.clip_loss /= m;
  out.vf /= m;
  out.entropy /= m;
  double kl_mean = kl_sum / m;
  out.kl = std::max(0.0, kl_mean);
  if (d_logp && kl_mean > 0)
    for (size_t i = 0; i < m; ++i) (*d_logp)[i] += c1 * (-1.0 / m);
  out.total = out.clip_loss + c1 * out.kl + c2 * out.vf + c3 * (-out.entropy);
  if (!std::isfinite(out.total)) throw NumericError("non-finite loss");
  return out;
}

Diagnostics eval_minibatch(const Nets& nets,
                           const std::vector<Transition>& samples,
                           std::span<const int> indices,
                           const TrainConfig& cfg,
                           std::array<std::vector<double>, 4>* grads) {
  const size_t m = indices.size();
  // Role-level terms only exist where a role was actually sampled.
  std::vector<int> role_rows;
  role_rows.reserve(m);
  for (size_t i = 0; i < m; ++i)
    if (samples[indices[i]].role_selected) role_rows.push_back(indices[i]);

  struct PerSample {
    Mlp::Cache cache;
    SoftmaxResult sm;
  };
  std::vector<PerSample> ra(role_rows.size()), pa(m);
  std::vector<Mlp::Cache> rc(role_rows.size()), pc(m);

  std::vector<double> r_logp(role_rows.size()), r_v(role_rows.size()),
      r_ent(role_rows.size()), r_old(role_rows.size()), r_adv(role_rows.size()),
      r_ret(role_rows.size());
  std::vector<double> p_logp(m), p_v(m), p_ent(m), p_old(m), p_adv(m), p_ret(m);

  for (size_t i = 0; i < role_rows.size(); ++i) {
    const Transition& s = samples[role_rows[i]];
    auto in = role_input(s.local, s.joint, s.agg);
    auto logits = nets.role_actor.forward(in, ra[i].cache);
    ra[i].sm = softmax_logprob_entropy(logits, s.role);
    r_logp[i] = ra[i].sm.log_prob;
    r_ent[i] = ra[i].sm.entropy;
    r_v[i] = nets.role_critic.forward(in, rc[i])[0];
    r_old[i] = s.role_logp;
    r_adv[i] = s.adv_r;
    r_ret[i] = s.ret_r;
  }
  for (size_t i = 0; i < m; ++i) {
    const Transition& s = samples[indices[i]];
    auto role = static_cast<RoleAction>(s.role);
    auto logits =
        nets.prim_actor.forward(prim_actor_input(s.local, role), pa[i].cache);
    pa[i].sm = softmax_logprob_entropy(logits, s.action);
    p_logp[i] = pa[i].sm.log_prob;
    p_ent[i] = pa[i].sm.entropy;
    p_v[i] = nets.prim_critic.forward(prim_critic_input(s.local, role, s.joint),
                                      pc[i])[0];
    p_old[i] = s.act_logp;
    p_adv[i] = s.adv_p;
    p_ret[i] = s.ret_p;
  }

  auto r_advn = normalize_advantages(r_adv);
  auto p_advn = normalize_advantages(p_adv);

  std::vector<double> r_dlogp, r_dv, p_dlogp, p_dv;
  Diagnostics diag;
  diag.role = level_loss(r_logp, r_v, r_ent, r_old, r_advn, r_ret, cfg.c1_r,
                         cfg.c2_r, cfg.c3_r, cfg.clip,
                         grads ? &r_dlogp : nullptr, grads ? &r_dv : nullptr);
  diag.prim = level_loss(p_logp, p_v, p_ent, p_old, p_advn, p_ret, cfg.c1_p,
                         cfg.c2_p, cfg.c3_p, cfg.clip,
                         grads ? &p_dlogp : nullptr, grads ? &p_dv : nullptr);
  diag.total = diag.role.total + diag.prim.total;
  if (!grads) return diag;

  auto& g = *grads;
  for (int k = 0; k < 4; ++k) {
    const Mlp* nets4[4] = {&nets.role_actor, &nets.role_critic,
                           &nets.prim_actor, &nets.prim_critic};
    if (g[k].size() != nets4[k]->params().size())
      g[k].assign(nets4[k]->params().size(), 0.0);
  }

  const size_t mr = role_rows.size();
  for (size_t i = 0; i < mr; ++i) {
    const SoftmaxResult& sm = ra[i].sm;
    auto hgrad = entropy_grad_logits(sm);
    std::vector<double> dlogits(sm.probs.size());
    for (size_t j = 0; j < dlogits.size(); ++j)
      dlogits[j] =
          r_dlogp[i] * sm.grad_logits[j] + (-cfg.c3_r / mr) * hgrad[j];
    nets.role_actor.backward(ra[i].cache, dlogits, g[0]);
    double dv[1] = {r_dv[i]};
    nets.role_critic.backward(rc[i], dv, g[1]);
  }
  for (size_t i = 0; i < m; ++i) {
    const SoftmaxResult& sm = pa[i].sm;
    auto hgrad = entropy_grad_logits(sm);
    std::vector<double> dlogits(sm.probs.size());
    for (size_t j = 0; j < dlogits.size(); ++j)
      dlogits[j] = p_dlogp[i] * sm.grad_logits[j] + (-cfg.c3_p / m) * hgrad[j];
    nets.prim_actor.backward(pa[i].cache, dlogits, g[2]);
    double dv[1] = {p_dv[i]};
    nets.prim_critic.backward(pc[i], dv, g[3]);
  }
  return diag;
}

// ---------------------------------------------------------------------------
// Trainer

Trainer::Trainer(ScenarioConfig scenario, TrainConfig cfg)
    : scenario_(scenario), cfg_(cfg), rng_(mix_seed(scenario.seed, 0x7261696e)) {
  scenario_.validate();
  cfg_.validate();
  if (scenario_.n_robots < 1)
    throw ConfigError("training needs at least one robot");
  std::mt19937_64 init_rng(mix_seed(scenario.seed, 0x696e6974));
  nets_ = Nets::init(scenario_.r_fov, init_rng, cfg_.role_period);
  for (auto& a : adam_) a.lr = cfg_.learning_rate;
  exploration_normalizer_ =
      exploration_ability(scenario_.rad_e, 1.0, cfg_.ability_mode);
}

Trainer::Trainer(Checkpoint ck)
    : scenario_(ck.scenario),
      cfg_(ck.train),
      nets_(std::move(ck.nets)),
      adam_(std::move(ck.adam)),
      timesteps_done_(ck.timesteps_done),
      update_index_(ck.update_index) {
  std::istringstream ss(ck.rng_state);
  ss >> rng_;
  exploration_normalizer_ =
      exploration_ability(scenario_.rad_e, 1.0, cfg_.ability_mode);
}

namespace {

bool task_complete(const GridWorld& w) {
  return w.explored_free_count() == w.free_cell_count() &&
         w.covered_count() == w.target_cell_count();
}

// Per-episode, per-robot sequences prior to GAE.
struct RobotSeq {
  std::vector<Transition> steps;
  double bootstrap_vr = 0;
  double bootstrap_vp = 0;
};

}  // namespace

RolloutBuffer Trainer::collect_rollouts() {
  RolloutBuffer buf;
  const int n = scenario_.n_robots;
  const double b_e = exploration_normalizer_;
  double re_sum = 0, rc_sum = 0;
  long step_records = 0, explore_roles = 0, role_decisions = 0;

  int episode = 0;
  while (static_cast<int>(buf.samples.size()) < cfg_.batch) {
    ScenarioConfig sc = scenario_;
    sc.seed = mix_seed(scenario_.seed,
                       0x9000000ULL + update_index_ * 4096 + episode);
    GridWorld world = GridWorld::generate(sc);
    world.initial_sense();
    ++buf.episodes;

    std::vector<RobotSeq> seq(n);
    std::vector<RoleAction> roles(n, RoleAction::Explore);
    bool cut = false;

    for (int t = 0; t < scenario_.episode_len; ++t) {
      const auto graph = world.comm_graph();
      const auto joint = featurize_joint(joint_observation(world));
      std::vector<std::vector<double>> locals(n);
      for (int i = 0; i < n; ++i)
        locals[i] = featurize_local(local_observation(world, i));
      const auto agg = aggregate_neighbors(locals, graph);

      const bool selecting = (t % cfg_.role_period == 0);
      std::vector<double> role_logps(n, 0.0);
      if (selecting) {
        for (int i = 0; i < n; ++i) {
          auto in = role_input(locals[i], joint, agg[i]);
          auto logits = nets_.role_actor.forward(in);
          auto probs = softmax_logprob_entropy(logits, 0).probs;
          int r = sample_index(probs, rng_);
          roles[i] = static_cast<RoleAction>(r);
          role_logps[i] = std::log(probs[r]);
          ++role_decisions;
          if (roles[i] == RoleAction::Explore) ++explore_roles;
        }
      }

      std::vector<PrimitiveAction> actions(n);
      std::vector<double> act_logps(n), vrs(n), vps(n);
      for (int i = 0; i < n; ++i) {
        auto in = role_input(locals[i], joint, agg[i]);
        vrs[i] = nets_.role_critic.forward(in)[0];
        auto probs = primitive_distribution(nets_.prim_actor, locals[i], roles[i]);
        int a = sample_index(probs, rng_);
        actions[i] = static_cast<PrimitiveAction>(a);
        act_logps[i] = std::log(probs[a]);
        vps[i] = nets_.prim_critic
                     .forward(prim_critic_input(locals[i], roles[i], joint))[0];
      }

      StepEvents ev = world.step(actions);
      RewardRecord rec = primitive_rewards(ev, roles, b_e, cfg_.weights);
      re_sum += rec.exploration;
      rc_sum += rec.coverage;
      ++step_records;

      bool done = (t + 1 == scenario_.episode_len) || task_complete(world);
      for (int i = 0; i < n; ++i) {
        Transition tr;
        tr.local = locals[i];
        tr.joint = joint;
        tr.agg = agg[i];
        tr.role = static_cast<int>(roles[i]);
        tr.role_logp = role_logps[i];
        tr.role_selected = selecting;
        tr.action = static_cast<int>(actions[i]);
        tr.act_logp = act_logps[i];
        tr.v_r = vrs[i];
        tr.v_p = vps[i];
        tr.r_role = rec.role;
        tr.r_prim = rec.per_robot_primitive[i];
        tr.done = done;
        seq[i].steps.push_back(std::move(tr));
      }

      bool capacity = static_cast<int>(buf.samples.size()) +
                          static_cast<int>(seq[0].steps.size()) * n >=
                      cfg_.batch;
      if (done) break;
      if (capacity) {
        // Bootstrapped tail: value the successor state under current roles.
        cut = true;
        const auto g2 = world.comm_graph();
        const auto j2 = featurize_joint(joint_observation(world));
        std::vector<std::vector<double>> l2(n);
        for (int i = 0; i < n; ++i)
          l2[i] = featurize_local(local_observation(world, i));
        const auto a2 = aggregate_neighbors(l2, g2);
        for (int i = 0; i < n; ++i) {
          seq[i].bootstrap_vr =
              nets_.role_critic.forward(role_input(l2[i], j2, a2[i]))[0];
          seq[i].bootstrap_vp = nets_.prim_critic.forward(
              prim_critic_input(l2[i], roles[i], j2))[0];
        }
        break;
      }
    }

    // GAE per robot, then flatten in (step, robot) order.
    const int T = static_cast<int>(seq[0].steps.size());
    for (int i = 0; i < n; ++i) {
      auto& steps = seq[i].steps;
      std::vector<double> rp(T), vp(T);
      std::vector<uint8_t> dn(T);
      for (int t = 0; t < T; ++t) {
        rp[t] = steps[t].r_prim;
        vp[t] = steps[t].v_p;
        dn[t] = steps[t].done ? 1 : 0;
      }
      std::vector<double> adv, ret;
      gae(rp, vp, dn, cut ? seq[i].bootstrap_vp : 0.0, cfg_.gamma,
          cfg_.gae_lambda, adv, ret);
      for (int t = 0; t < T; ++t) {
        steps[t].adv_p = adv[t];
        steps[t].ret_p = ret[t];
      }

      // Role level: subsample at selection steps, summing role rewards over
      // each persistence interval.
      std::vector<int> sel;
      for (int t = 0; t < T; ++t)
        if (steps[t].role_selected) sel.push_back(t);
      std::vector<double> rr(sel.size()), vr(sel.size());
      std::vector<uint8_t> dr(sel.size(), 0);
      for (size_t s = 0; s < sel.size(); ++s) {
        int lo = sel[s];
        int hi = (s + 1 < sel.size()) ? sel[s + 1] : T;
        for (int t = lo; t < hi; ++t) rr[s] += steps[t].r_role;
        vr[s] = steps[lo].v_r;
        dr[s] = steps[hi - 1].done ? 1 : 0;
      }
      std::vector<double> adv_r, ret_r;
      gae(rr, vr, dr, cut ? seq[i].bootstrap_vr : 0.0, cfg_.gamma,
          cfg_.gae_lambda, adv_r, ret_r);
      for (size_t s = 0; s < sel.size(); ++s) {
        steps[sel[s]].adv_r = adv_r[s];
        steps[sel[s]].ret_r = ret_r[s];
      }
    }
    for (int t = 0; t < T; ++t)
      for (int i = 0; i < n; ++i)
        buf.samples.push_back(std::move(seq[i].steps[t]));
    ++episode;
  }

  if (static_cast<int>(buf.samples.size()) > cfg_.batch)
    buf.samples.resize(cfg_.batch);
  buf.exploration_reward_mean = step_records ? re_sum / step_records : 0.0;
  buf.coverage_reward_mean = step_records ? rc_sum / step_records : 0.0;
  buf.role_explore_fraction =
      role_decisions ? static_cast<double>(explore_roles) / role_decisions : 0.0;
  return buf;
}

Diagnostics Trainer::update(RolloutBuffer& buffer) {
  if (static_cast<int>(buffer.samples.size()) != cfg_.batch)
    throw ShapeMismatch("rollout buffer is not full");
  std::vector<int> order(buffer.samples.size());
  std::iota(order.begin(), order.end(), 0);

  Diagnostics last{};
  int count = 0;
  Mlp* nets4[4] = {&nets_.role_actor, &nets_.role_critic, &nets_.prim_actor,
                   &nets_.prim_critic};
  std::array<std::vector<double>, 4> grads;
  for (int e = 0; e < cfg_.epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng_);
    for (int start = 0; start < cfg_.batch; start += cfg_.minibatch) {
      std::span<const int> mb(order.data() + start,
                              static_cast<size_t>(cfg_.minibatch));
      for (auto& g : grads) g.clear();
      Diagnostics d = eval_minibatch(nets_, buffer.samples, mb, cfg_, &grads);
      for (int k = 0; k < 4; ++k) adam_[k].step(nets4[k]->params(), grads[k]);
      last.role.clip_loss += d.role.clip_loss;
      last.role.kl += d.role.kl;
      last.role.vf += d.role.vf;
      last.role.entropy += d.role.entropy;
      last.role.total += d.role.total;
      last.prim.clip_loss += d.prim.clip_loss;
      last.prim.kl += d.prim.kl;
      last.prim.vf += d.prim.vf;
      last.prim.entropy += d.prim.entropy;
      last.prim.total += d.prim.total;
      last.total += d.total;
      ++count;
    }
  }
  auto scale = [count](LevelLoss& l) {
    l.clip_loss /= count;
    l.kl /= count;
    l.vf /= count;
    l.entropy /= count;
    l.total /= count;
  };
  scale(last.role);
  scale(last.prim);
  last.total /= count;
  ++update_index_;
  timesteps_done_ += cfg_.batch;
  return last;
}

void Trainer::run(std::ostream* log_csv) {
  if (log_csv && update_index_ == 0)
    *log_csv << "update_index,steps,L_r,L_p,R_e_mean,R_c_mean,"
                "role_explore_fraction,entropy_role,entropy_prim\n";
  while (timesteps_done_ < cfg_.total_timesteps) {
    RolloutBuffer buf = collect_rollouts();
    Diagnostics d = update(buf);
    if (log_csv) {
      char line[256];
      std::snprintf(line, sizeof line,
                    "%ld,%ld,%.6f,%.6f,%.6f,%.6f,%.4f,%.4f,%.4f\n",
                    update_index_, timesteps_done_, d.role.total, d.prim.total,
                    buf.exploration_reward_mean, buf.coverage_reward_mean,
                    buf.role_explore_fraction, d.role.entropy, d.prim.entropy);
      *log_csv << line;
      log_csv->flush();
    }
  }
}

Checkpoint Trainer::checkpoint() const {
  Checkpoint ck;
  ck.scenario = scenario_;
  ck.train = cfg_;
  ck.nets = nets_;
  ck.adam = adam_;
  std::ostringstream ss;
  ss << rng_;
  ck.rng_state = ss.str();
  ck.timesteps_done = timesteps_done_;
  ck.update_index = update_index_;
  return ck;
}

// ---------------------------------------------------------------------------
// Checkpoint serialization: versioned binary, length-prefixed vectors.

namespace {

constexpr uint32_t kCkptMagic = 0x4153434bU;  // "ASCK"
constexpr uint32_t kCkptVersion = 1;

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw IoError("truncated checkpoint");
  return v;
}
void put_vec(std::ostream& os, const std::vector<double>& v) {
  put<uint64_t>(os, v.size());
  os.write(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double));
}
std::vector<double> get_vec(std::istream& is) {
  auto n = get<uint64_t>(is);
  std::vector<double> v(n);
  is.read(reinterpret_cast<char*>(v.data()), n * sizeof(double));
  if (!is) throw IoError("truncated checkpoint");
  return v;
}
void put_mlp(std::ostream& os, const Mlp& m) {
  put<uint32_t>(os, static_cast<uint32_t>(m.spec().sizes.size()));
  for (int s : m.spec().sizes) put<int32_t>(os, s);
  put_vec(os, m.params());
}
Mlp get_mlp(std::istream& is) {
  auto n = get<uint32_t>(is);
  MlpSpec spec;
  for (uint32_t i = 0; i < n; ++i) spec.sizes.push_back(get<int32_t>(is));
  return Mlp(std::move(spec), get_vec(is));
}
void put_adam(std::ostream& os, const Adam& a) {
  put(os, a.lr);
  put(os, a.beta1);
  put(os, a.beta2);
  put(os, a.eps);
  put<int64_t>(os, a.t);
  put_vec(os, a.m);
  put_vec(os, a.v);
}
Adam get_adam(std::istream& is) {
  Adam a;
  a.lr = get<double>(is);
  a.beta1 = get<double>(is);
  a.beta2 = get<double>(is);
  a.eps = get<double>(is);
  a.t = get<int64_t>(is);
  a.m = get_vec(is);
  a.v = get_vec(is);
  return a;
}
void put_str(std::ostream& os, const std::string& s) {
  put<uint64_t>(os, s.size());
  os.write(s.data(), s.size());
}
std::string get_str(std::istream& is) {
  auto n = get<uint64_t>(is);
  std::string s(n, '\0');
  is.read(s.data(), n);
  if (!is) throw IoError("truncated checkpoint");
  return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open checkpoint for writing: " + path);
  put(os, kCkptMagic);
  put(os, kCkptVersion);
  const ScenarioConfig& s = ck.scenario;
  put<int32_t>(os, s.width);
  put<int32_t>(os, s.height);
  put<int32_t>(os, s.n_obstacles);
  put<int32_t>(os, s.n_targets);
  put<int32_t>(os, s.n_robots);
  put<int32_t>(os, s.r_fov);
  put<int32_t>(os, s.r_comm);
  put<int32_t>(os, s.rad_e);
  put<int32_t>(os, s.episode_len);
  put<uint64_t>(os, s.seed);
  const TrainConfig& t = ck.train;
  put(os, t.learning_rate);
  put(os, t.clip);
  put(os, t.gamma);
  put(os, t.gae_lambda);
  put(os, t.c1_r);
  put(os, t.c2_r);
  put(os, t.c3_r);
  put(os, t.c1_p);
  put(os, t.c2_p);
  put(os, t.c3_p);
  put<int32_t>(os, t.batch);
  put<int32_t>(os, t.minibatch);
  put<int32_t>(os, t.epochs);
  put<int64_t>(os, t.total_timesteps);
  put<int32_t>(os, t.role_period);
  put(os, t.weights.alpha);
  put(os, t.weights.beta);
  put<int32_t>(os, static_cast<int32_t>(t.ability_mode));
  put_mlp(os, ck.nets.role_actor);
  put_mlp(os, ck.nets.role_critic);
  put_mlp(os, ck.nets.prim_actor);
  put_mlp(os, ck.nets.prim_critic);
  put<int32_t>(os, ck.nets.role_period);
  for (const Adam& a : ck.adam) put_adam(os, a);
  put_str(os, ck.rng_state);
  put<int64_t>(os, ck.timesteps_done);
  put<int64_t>(os, ck.update_index);
  if (!os) throw IoError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint: " + path);
  if (get<uint32_t>(is) != kCkptMagic) throw IoError("bad checkpoint magic");
  if (get<uint32_t>(is) != kCkptVersion)
    throw IoError("unsupported checkpoint version");
  Checkpoint ck;
  ScenarioConfig& s = ck.scenario;
  s.width = get<int32_t>(is);
  s.height = get<int32_t>(is);
  s.n_obstacles = get<int32_t>(is);
  s.n_targets = get<int32_t>(is);
  s.n_robots = get<int32_t>(is);
  s.r_fov = get<int32_t>(is);
  s.r_comm = get<int32_t>(is);
  s.rad_e = get<int32_t>(is);
  s.episode_len = get<int32_t>(is);
  s.seed = get<uint64_t>(is);
  TrainConfig& t = ck.train;
  t.learning_rate = get<double>(is);
  t.clip = get<double>(is);
  t.gamma = get<double>(is);
  t.gae_lambda = get<double>(is);
  t.c1_r = get<double>(is);
  t.c2_r = get<double>(is);
  t.c3_r = get<double>(is);
  t.c1_p = get<double>(is);
  t.c2_p = get<double>(is);
  t.c3_p = get<double>(is);
  t.batch = get<int32_t>(is);
  t.minibatch = get<int32_t>(is);
  t.epochs = get<int32_t>(is);
  t.total_timesteps = get<int64_t>(is);
  t.role_period = get<int32_t>(is);
  t.weights.alpha = get<double>(is);
  t.weights.beta = get<double>(is);
  t.ability_mode = static_cast<AbilityMode>(get<int32_t>(is));
  ck.nets.role_actor = get_mlp(is);
  ck.nets.role_critic = get_mlp(is);
  ck.nets.prim_actor = get_mlp(is);
  ck.nets.prim_critic = get_mlp(is);
  ck.nets.role_period = get<int32_t>(is);
  for (Adam& a : ck.adam) a = get_adam(is);
  ck.rng_state = get_str(is);
  ck.timesteps_done = get<int64_t>(is);
  ck.update_index = get<int64_t>(is);
  return ck;
}

Nets load_nets(const std::string& path) {
  return load_checkpoint(path).nets;
}

}  // namespace areasearch
