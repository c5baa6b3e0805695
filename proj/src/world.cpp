#include "areasearch/world.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

namespace areasearch {

void ScenarioConfig::validate() const {
  if (width < 1 || height < 1) throw ConfigError("map dimensions must be positive");
  if (n_obstacles < 0 || n_targets < 0 || n_robots < 0)
    throw ConfigError("cell counts must be nonnegative");
  if (n_obstacles + n_targets + n_robots > width * height)
    throw ConfigError("obstacles + targets + robots exceed map area");
  if (r_fov < 1) throw ConfigError("r_fov must be >= 1");
  if (r_comm < 0) throw ConfigError("r_comm must be >= 0");
  if (rad_e < 1) throw ConfigError("rad_e must be >= 1");
  if (episode_len < 1) throw ConfigError("episode_len must be >= 1");
}

GridWorld::GridWorld(ScenarioConfig config, std::vector<CellKind> kinds,
                     std::vector<RobotPose> robots)
    : config_(config),
      kinds_(std::move(kinds)),
      robots_(std::move(robots)) {
  const int area = config_.width * config_.height;
  if (static_cast<int>(kinds_.size()) != area)
    throw ConfigError("cell grid size does not match dimensions");
  explored_.assign(area, 0);
  covered_.assign(area, 0);
  frontier_.assign(area, 0);
  for (CellKind k : kinds_) {
    if (k != CellKind::Obstacle) ++free_cells_;
    if (k == CellKind::Target) ++target_cells_;
  }
  for (const RobotPose& r : robots_) {
    if (!in_bounds(r.position.x, r.position.y))
      throw ConfigError("robot out of bounds");
    if (kind(r.position.x, r.position.y) == CellKind::Obstacle)
      throw ConfigError("robot placed on obstacle");
  }
  config_.n_robots = static_cast<int>(robots_.size());
}

namespace {

bool non_obstacle_connected(const std::vector<CellKind>& kinds, int w, int h) {
  const int area = w * h;
  int start = -1, open = 0;
  for (int i = 0; i < area; ++i) {
    if (kinds[i] != CellKind::Obstacle) {
      if (start < 0) start = i;
      ++open;
    }
  }
  if (open == 0) return false;
  std::vector<uint8_t> seen(area, 0);
  std::queue<int> q;
  q.push(start);
  seen[start] = 1;
  int reached = 0;
  while (!q.empty()) {
    int c = q.front();
    q.pop();
    ++reached;
    int x = c % w, y = c / w;
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      int nx = x + dx[k], ny = y + dy[k];
      if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
      int ni = ny * w + nx;
      if (seen[ni] || kinds[ni] == CellKind::Obstacle) continue;
      seen[ni] = 1;
      q.push(ni);
    }
  }
  return reached == open;
}

}  // namespace

GridWorld GridWorld::generate(const ScenarioConfig& config) {
  config.validate();
  const int w = config.width, h = config.height, area = w * h;
  const int free_needed = config.n_targets + config.n_robots;
  if (free_needed > area - config.n_obstacles)
    throw InfeasibleScenario("not enough non-obstacle cells for targets and robots");

  std::mt19937_64 rng(config.seed);

  // Phase 1: whole-layout rejection — scatter all obstacles uniformly and
  // keep the layout only if the non-obstacle cells are connected. Unbiased
  // within the connected family, and cheap at the densities where it works.
  std::vector<int> perm(area);
  constexpr int kLayoutRetries = 1000;
  for (int attempt = 0; attempt < kLayoutRetries; ++attempt) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<CellKind> kinds(area, CellKind::Free);
    for (int i = 0; i < config.n_obstacles; ++i)
      kinds[perm[i]] = CellKind::Obstacle;
    if (!non_obstacle_connected(kinds, w, h)) continue;

    // Remaining permutation entries are uniformly ordered non-obstacle cells.
    int cursor = config.n_obstacles;
    for (int i = 0; i < config.n_targets; ++i)
      kinds[perm[cursor++]] = CellKind::Target;
    std::vector<RobotPose> robots(config.n_robots);
    for (int i = 0; i < config.n_robots; ++i) {
      int c = perm[cursor++];
      robots[i] = RobotPose{{c % w, c / w}, Heading::North, i};
    }
    return GridWorld(config, std::move(kinds), std::move(robots));
  }

  // Phase 2: at dense obstacle ratios an independently scattered layout is
  // essentially never fully connected, so place obstacles one at a time and
  // reject any single placement that would split the remaining non-obstacle
  // cells. The free space stays connected by construction.
  std::vector<CellKind> kinds(area, CellKind::Free);
  std::vector<int> open(area);
  std::iota(open.begin(), open.end(), 0);
  constexpr int kPlacementRejects = 10000;
  int rejects = 0;
  for (int placed = 0; placed < config.n_obstacles;) {
    std::uniform_int_distribution<size_t> pick(0, open.size() - 1);
    size_t p = pick(rng);
    int cell = open[p];
    kinds[cell] = CellKind::Obstacle;
    if (non_obstacle_connected(kinds, w, h)) {
      open[p] = open.back();
      open.pop_back();
      ++placed;
    } else {
      kinds[cell] = CellKind::Free;
      if (++rejects >= kPlacementRejects)
        throw InfeasibleScenario(
            "no connected obstacle layout found within retry budget");
    }
  }
  std::shuffle(open.begin(), open.end(), rng);
  int cursor = 0;
  for (int i = 0; i < config.n_targets; ++i)
    kinds[open[cursor++]] = CellKind::Target;
  std::vector<RobotPose> robots(config.n_robots);
  for (int i = 0; i < config.n_robots; ++i) {
    int c = open[cursor++];
    robots[i] = RobotPose{{c % w, c / w}, Heading::North, i};
  }
  return GridWorld(config, std::move(kinds), std::move(robots));
}

std::vector<Cell> GridWorld::sense(int robot_id) const {
  if (robot_id < 0 || robot_id >= n_robots())
    throw ConfigError("invalid robot id");
  const Cell p = robots_[robot_id].position;
  const int r = config_.r_fov;
  std::vector<Cell> out;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy > r * r) continue;
      int x = p.x + dx, y = p.y + dy;
      if (!in_bounds(x, y) || explored_[idx(x, y)]) continue;
      out.push_back({x, y});
    }
  }
  return out;
}

void GridWorld::refresh_frontier(int x, int y) {
  if (!in_bounds(x, y)) return;
  bool f = false;
  if (explored_[idx(x, y)] && kind(x, y) != CellKind::Obstacle) {
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4 && !f; ++k) {
      int nx = x + dx[k], ny = y + dy[k];
      if (in_bounds(nx, ny) && !explored_[idx(nx, ny)]) f = true;
    }
  }
  frontier_[idx(x, y)] = f ? 1 : 0;
}

void GridWorld::mark_explored(Cell c) {
  explored_[idx(c.x, c.y)] = 1;
  refresh_frontier(c.x, c.y);
  refresh_frontier(c.x + 1, c.y);
  refresh_frontier(c.x - 1, c.y);
  refresh_frontier(c.x, c.y + 1);
  refresh_frontier(c.x, c.y - 1);
}

void GridWorld::initial_sense() {
  for (int i = 0; i < n_robots(); ++i)
    for (Cell c : sense(i)) mark_explored(c);
}

StepEvents GridWorld::step(const std::vector<PrimitiveAction>& actions) {
  const int n = n_robots();
  if (static_cast<int>(actions.size()) != n)
    throw ConfigError("action arity mismatch");
  StepEvents ev;
  ev.newly_explored.assign(n, 0);
  ev.targets_covered.assign(n, 0);
  ev.collisions.assign(n, 0);

  // Movement resolves sequentially in ascending robot id; a contested cell
  // stays with whoever holds it in the evolving occupancy state.
  for (int i = 0; i < n; ++i) {
    RobotPose& r = robots_[i];
    switch (actions[i]) {
      case PrimitiveAction::TurnLeft:
        r.heading = turn_left(r.heading);
        break;
      case PrimitiveAction::TurnRight:
        r.heading = turn_right(r.heading);
        break;
      case PrimitiveAction::Stop:
        break;
      case PrimitiveAction::MoveForward:
      case PrimitiveAction::MoveBackward: {
        Cell d = heading_delta(r.heading);
        int sgn = actions[i] == PrimitiveAction::MoveForward ? 1 : -1;
        Cell t{r.position.x + sgn * d.x, r.position.y + sgn * d.y};
        bool blocked = !in_bounds(t.x, t.y) ||
                       kind(t.x, t.y) == CellKind::Obstacle;
        for (int j = 0; j < n && !blocked; ++j)
          if (j != i && robots_[j].position == t) blocked = true;
        if (blocked)
          ev.collisions[i] = 1;
        else
          r.position = t;
        break;
      }
    }
  }

  // Sensing: a cell seen by several robots this step credits the lowest id.
  for (int i = 0; i < n; ++i) {
    for (Cell c : sense(i)) {
      mark_explored(c);
      ++ev.newly_explored[i];
    }
  }

  for (int i = 0; i < n; ++i) {
    Cell p = robots_[i].position;
    if (kind(p.x, p.y) == CellKind::Target && !covered_[idx(p.x, p.y)]) {
      covered_[idx(p.x, p.y)] = 1;
      ev.targets_covered[i] = 1;
    }
  }
  ++step_count_;
  return ev;
}

std::vector<Cell> GridWorld::frontier_cells() const {
  std::vector<Cell> out;
  for (int y = 0; y < config_.height; ++y)
    for (int x = 0; x < config_.width; ++x)
      if (frontier_[idx(x, y)]) out.push_back({x, y});
  return out;
}

std::vector<std::vector<int>> GridWorld::comm_graph() const {
  const int n = n_robots();
  const long r2 = static_cast<long>(config_.r_comm) * config_.r_comm;
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      long dx = robots_[i].position.x - robots_[j].position.x;
      long dy = robots_[i].position.y - robots_[j].position.y;
      if (dx * dx + dy * dy <= r2) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }
  return adj;
}

int GridWorld::explored_free_count() const {
  int c = 0;
  for (size_t i = 0; i < kinds_.size(); ++i)
    if (kinds_[i] != CellKind::Obstacle && explored_[i]) ++c;
  return c;
}

int GridWorld::covered_count() const {
  int c = 0;
  for (uint8_t v : covered_)
    if (v) ++c;
  return c;
}

void GridWorld::save(std::ostream& os) const {
  if (n_robots() > 10)
    throw ConfigError("map text format supports at most 10 robots");
  os << config_.width << ' ' << config_.height << '\n';
  std::vector<char> row(config_.width);
  for (int y = 0; y < config_.height; ++y) {
    for (int x = 0; x < config_.width; ++x) {
      char c = '.';
      switch (kind(x, y)) {
        case CellKind::Free: c = '.'; break;
        case CellKind::Obstacle: c = '#'; break;
        case CellKind::Target: c = 'T'; break;
      }
      row[x] = c;
    }
    for (const RobotPose& r : robots_)
      if (r.position.y == y) row[r.position.x] = static_cast<char>('0' + r.id);
    os.write(row.data(), row.size());
    os << '\n';
  }
}

GridWorld GridWorld::load(std::istream& is, const ScenarioConfig& defaults) {
  int w = 0, h = 0;
  if (!(is >> w >> h) || w < 1 || h < 1)
    throw IoError("bad map header");
  std::string line;
  std::getline(is, line);
  std::vector<CellKind> kinds(static_cast<size_t>(w) * h, CellKind::Free);
  std::vector<RobotPose> robots;
  for (int y = 0; y < h; ++y) {
    if (!std::getline(is, line) || static_cast<int>(line.size()) < w)
      throw IoError("truncated map row");
    for (int x = 0; x < w; ++x) {
      char c = line[x];
      if (c == '.') {
        kinds[y * w + x] = CellKind::Free;
      } else if (c == '#') {
        kinds[y * w + x] = CellKind::Obstacle;
      } else if (c == 'T') {
        kinds[y * w + x] = CellKind::Target;
      } else if (c >= '0' && c <= '9') {
        robots.push_back(RobotPose{{x, y}, Heading::North, c - '0'});
      } else {
        throw IoError(std::string("unknown map character '") + c + "'");
      }
    }
  }
  std::sort(robots.begin(), robots.end(),
            [](const RobotPose& a, const RobotPose& b) { return a.id < b.id; });
  for (size_t i = 0; i < robots.size(); ++i)
    if (robots[i].id != static_cast<int>(i))
      throw IoError("robot ids in map file must be 0..N-1 without gaps");
  ScenarioConfig cfg = defaults;
  cfg.width = w;
  cfg.height = h;
  cfg.n_robots = static_cast<int>(robots.size());
  cfg.n_obstacles = 0;
  cfg.n_targets = 0;
  for (CellKind k : kinds) {
    if (k == CellKind::Obstacle) ++cfg.n_obstacles;
    if (k == CellKind::Target) ++cfg.n_targets;
  }
  return GridWorld(cfg, std::move(kinds), std::move(robots));
}

}  // namespace areasearch
