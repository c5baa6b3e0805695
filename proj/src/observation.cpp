#include "areasearch/observation.hpp"

#include <algorithm>

namespace areasearch {

LocalObservation local_observation(const GridWorld& world, int robot_id) {
  const int r = world.config().r_fov;
  const int win = 2 * r + 1;
  LocalObservation obs;
  obs.window = win;
  obs.obstacle.assign(win * win, 0);
  obs.frontier.assign(win * win, 0);
  obs.target.assign(win * win, 0);
  obs.neighbor.assign(win * win, 0);
  const RobotPose& me = world.robots().at(robot_id);
  obs.center = me.position;
  obs.heading = me.heading;
  obs.world_w = world.width();
  obs.world_h = world.height();

  for (int wy = 0; wy < win; ++wy) {
    for (int wx = 0; wx < win; ++wx) {
      int x = me.position.x + wx - r;
      int y = me.position.y + wy - r;
      if (!world.in_bounds(x, y) || !world.explored(x, y)) continue;
      int wi = wy * win + wx;
      if (world.kind(x, y) == CellKind::Obstacle) obs.obstacle[wi] = 1;
      if (world.is_frontier(x, y)) obs.frontier[wi] = 1;
      if (world.kind(x, y) == CellKind::Target && !world.covered(x, y))
        obs.target[wi] = 1;
    }
  }

  const auto graph = world.comm_graph();
  for (int j : graph[robot_id]) {
    Cell p = world.robots()[j].position;
    int wx = p.x - me.position.x + r;
    int wy = p.y - me.position.y + r;
    if (wx < 0 || wx >= win || wy < 0 || wy >= win) continue;
    if (!world.explored(p.x, p.y)) continue;  // unexplored cells stay masked
    obs.neighbor[wy * win + wx] = 1;
  }
  obs.neighbor[r * win + r] = 0;  // self excluded
  return obs;
}

JointObservation joint_observation(const GridWorld& world) {
  JointObservation jo;
  jo.w = world.width();
  jo.h = world.height();
  jo.explored.resize(jo.w * jo.h);
  jo.covered.resize(jo.w * jo.h);
  for (int y = 0; y < jo.h; ++y) {
    for (int x = 0; x < jo.w; ++x) {
      jo.explored[y * jo.w + x] = world.explored(x, y) ? 1 : 0;
      jo.covered[y * jo.w + x] = world.covered(x, y) ? 1 : 0;
    }
  }
  return jo;
}

namespace {

// 2x2 block averages; edge blocks average over the cells they contain.
void pool2x2(const std::vector<uint8_t>& ch, int win, std::vector<double>& out) {
  const int p = (win + 1) / 2;
  for (int by = 0; by < p; ++by) {
    for (int bx = 0; bx < p; ++bx) {
      double sum = 0;
      int cnt = 0;
      for (int y = 2 * by; y < std::min(2 * by + 2, win); ++y)
        for (int x = 2 * bx; x < std::min(2 * bx + 2, win); ++x) {
          sum += ch[y * win + x];
          ++cnt;
        }
      out.push_back(cnt ? sum / cnt : 0.0);
    }
  }
}

}  // namespace

int local_feature_dim(int r_fov) {
  const int win = 2 * r_fov + 1;
  const int p = (win + 1) / 2;
  return 4 * p * p + 2 + 4;
}

std::vector<double> featurize_local(const LocalObservation& obs) {
  std::vector<double> f;
  f.reserve(local_feature_dim((obs.window - 1) / 2));
  pool2x2(obs.obstacle, obs.window, f);
  pool2x2(obs.frontier, obs.window, f);
  pool2x2(obs.target, obs.window, f);
  pool2x2(obs.neighbor, obs.window, f);
  f.push_back(static_cast<double>(obs.center.x) / obs.world_w);
  f.push_back(static_cast<double>(obs.center.y) / obs.world_h);
  for (int h = 0; h < 4; ++h)
    f.push_back(h == static_cast<int>(obs.heading) ? 1.0 : 0.0);
  return f;
}

namespace {

// Partition rows/columns into 5 buckets (bucket of index i is i*5/n) so every
// cell is counted exactly once.
void pool_to_5x5(const std::vector<uint8_t>& grid, int w, int h,
                 std::vector<double>& out) {
  double sums[25] = {0};
  int counts[25] = {0};
  for (int y = 0; y < h; ++y) {
    int by = y * 5 / h;
    for (int x = 0; x < w; ++x) {
      int bx = x * 5 / w;
      sums[by * 5 + bx] += grid[y * w + x];
      ++counts[by * 5 + bx];
    }
  }
  for (int i = 0; i < 25; ++i)
    out.push_back(counts[i] ? sums[i] / counts[i] : 0.0);
}

}  // namespace

std::vector<double> featurize_joint(const JointObservation& obs) {
  std::vector<double> f;
  f.reserve(kJointFeatureDim);
  pool_to_5x5(obs.explored, obs.w, obs.h, f);
  pool_to_5x5(obs.covered, obs.w, obs.h, f);
  return f;
}

std::vector<std::vector<double>> aggregate_neighbors(
    const std::vector<std::vector<double>>& features,
    const std::vector<std::vector<int>>& graph) {
  if (features.size() != graph.size())
    throw ShapeMismatch("one feature vector per robot required");
  std::vector<std::vector<double>> out(features.size());
  for (size_t i = 0; i < features.size(); ++i) {
    if (graph[i].empty()) {
      out[i] = features[i];
      continue;
    }
    std::vector<double> mean(features[i].size(), 0.0);
    for (int j : graph[i]) {
      if (features[j].size() != mean.size())
        throw ShapeMismatch("feature dimensions differ across robots");
      for (size_t k = 0; k < mean.size(); ++k) mean[k] += features[j][k];
    }
    out[i].resize(mean.size());
    for (size_t k = 0; k < mean.size(); ++k)
      out[i][k] = 0.5 * (features[i][k] + mean[k] / graph[i].size());
  }
  return out;
}

}  // namespace areasearch
