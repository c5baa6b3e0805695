#include "areasearch/replay.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace areasearch {

namespace {

using nlohmann::json;

// Fixed palette, one row per cell state; robots cycle through ten colors.
struct Rgb {
  int r, g, b;
};
constexpr Rgb kUnexplored{40, 40, 40};
constexpr Rgb kFree{255, 255, 255};
constexpr Rgb kObstacle{128, 128, 128};
constexpr Rgb kTarget{255, 165, 0};
constexpr Rgb kCoveredTarget{255, 220, 160};
constexpr Rgb kFrontier{0, 200, 0};
constexpr Rgb kRobots[10] = {
    {220, 30, 30},  {30, 60, 220},  {150, 30, 200}, {0, 140, 140},
    {200, 120, 0},  {120, 70, 20},  {230, 60, 160}, {60, 60, 60},
    {160, 180, 30}, {30, 160, 70},
};

void write_frame(const GridWorld& w, const std::string& path) {
  constexpr int kScale = 8;
  std::ofstream os(path);
  if (!os) throw IoError("cannot write frame: " + path);
  const int pw = w.width() * kScale, ph = w.height() * kScale;
  os << "P3\n" << pw << ' ' << ph << "\n255\n";
  std::vector<Rgb> row(w.width());
  for (int y = 0; y < w.height(); ++y) {
    for (int x = 0; x < w.width(); ++x) {
      Rgb c = kUnexplored;
      if (w.explored(x, y)) {
        switch (w.kind(x, y)) {
          case CellKind::Free: c = kFree; break;
          case CellKind::Obstacle: c = kObstacle; break;
          case CellKind::Target:
            c = w.covered(x, y) ? kCoveredTarget : kTarget;
            break;
        }
        if (w.is_frontier(x, y)) c = kFrontier;
      } else if (w.kind(x, y) == CellKind::Obstacle) {
        c = kObstacle;  // ground truth stays visible in renders
      }
      row[x] = c;
    }
    for (const RobotPose& r : w.robots())
      if (r.position.y == y) row[r.position.x] = kRobots[r.id % 10];
    for (int sy = 0; sy < kScale; ++sy) {
      for (int x = 0; x < w.width(); ++x) {
        for (int sx = 0; sx < kScale; ++sx)
          os << row[x].r << ' ' << row[x].g << ' ' << row[x].b << '\n';
      }
    }
  }
}

json cells_json(const std::vector<Cell>& cells) {
  json arr = json::array();
  for (Cell c : cells) arr.push_back({c.x, c.y});
  return arr;
}

}  // namespace

ReplayResult export_replay(const ScenarioConfig& config, Policy& policy,
                           uint64_t seed, const std::string& out_dir,
                           bool frames) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  ScenarioConfig cfg = config;
  cfg.seed = seed;
  GridWorld world = GridWorld::generate(cfg);
  world.initial_sense();
  policy.reset(world);
  // Same stream derivation as run_episode, so a replay of an evaluated seed
  // reproduces the evaluated trajectory.
  std::mt19937_64 rng(mix_seed(seed, 0x65706973));

  std::ofstream os(fs::path(out_dir) / "replay.jsonl");
  if (!os) throw IoError("cannot write replay in " + out_dir);

  json header;
  header["type"] = "header";
  header["width"] = world.width();
  header["height"] = world.height();
  header["robots"] = world.n_robots();
  json rows = json::array();
  for (int y = 0; y < world.height(); ++y) {
    std::string row(world.width(), '.');
    for (int x = 0; x < world.width(); ++x) {
      if (world.kind(x, y) == CellKind::Obstacle) row[x] = '#';
      else if (world.kind(x, y) == CellKind::Target) row[x] = 'T';
    }
    rows.push_back(row);
  }
  header["map"] = rows;
  os << header.dump() << '\n';

  ReplayResult res;
  auto frame_path = [&](int i) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04d.ppm", i);
    return (fs::path(out_dir) / name).string();
  };
  if (frames) {
    write_frame(world, frame_path(0));
    ++res.frames;
  }

  for (int t = 0; t < cfg.episode_len; ++t) {
    if (world.explored_free_count() == world.free_cell_count() &&
        world.covered_count() == world.target_cell_count())
      break;
    std::vector<RoleAction> roles;
    auto actions = policy.act(world, t, rng, roles);
    std::vector<std::vector<uint8_t>> explored_before(
        world.height(), std::vector<uint8_t>(world.width()));
    std::vector<std::vector<uint8_t>> covered_before(
        world.height(), std::vector<uint8_t>(world.width()));
    for (int y = 0; y < world.height(); ++y)
      for (int x = 0; x < world.width(); ++x) {
        explored_before[y][x] = world.explored(x, y);
        covered_before[y][x] = world.covered(x, y);
      }
    world.step(actions);

    std::vector<Cell> ne, nc;
    for (int y = 0; y < world.height(); ++y)
      for (int x = 0; x < world.width(); ++x) {
        if (world.explored(x, y) && !explored_before[y][x])
          ne.push_back({x, y});
        if (world.covered(x, y) && !covered_before[y][x]) nc.push_back({x, y});
      }

    json rec;
    rec["type"] = "step";
    rec["t"] = t;
    json pos = json::array(), head = json::array(), acts = json::array(),
         rls = json::array();
    for (const RobotPose& r : world.robots()) {
      pos.push_back({r.position.x, r.position.y});
      head.push_back(static_cast<int>(r.heading));
    }
    for (PrimitiveAction a : actions) acts.push_back(static_cast<int>(a));
    for (RoleAction r : roles) rls.push_back(static_cast<int>(r));
    rec["positions"] = pos;
    rec["headings"] = head;
    rec["actions"] = acts;
    rec["roles"] = rls;
    rec["newly_explored"] = cells_json(ne);
    rec["newly_covered"] = cells_json(nc);
    os << rec.dump() << '\n';
    ++res.steps;
    if (frames) {
      write_frame(world, frame_path(res.steps));
      ++res.frames;
    }
  }
  return res;
}

int validate_replay(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty replay");
  json header = json::parse(line);
  if (header.at("type") != "header") throw IoError("missing replay header");
  const int n = header.at("robots").get<int>();
  const int w = header.at("width").get<int>();
  const int h = header.at("height").get<int>();
  if (static_cast<int>(header.at("map").size()) != h)
    throw IoError("map row count mismatch");
  int steps = 0;
  int expect_t = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json rec = json::parse(line);
    if (rec.at("type") != "step") throw IoError("unexpected record type");
    if (rec.at("t").get<int>() != expect_t++) throw IoError("step gap");
    if (static_cast<int>(rec.at("positions").size()) != n ||
        static_cast<int>(rec.at("headings").size()) != n ||
        static_cast<int>(rec.at("actions").size()) != n)
      throw IoError("per-robot array arity mismatch");
    for (const auto& p : rec.at("positions")) {
      int x = p.at(0).get<int>(), y = p.at(1).get<int>();
      if (x < 0 || x >= w || y < 0 || y >= h)
        throw IoError("position out of bounds");
    }
    ++steps;
  }
  return steps;
}

}  // namespace areasearch
