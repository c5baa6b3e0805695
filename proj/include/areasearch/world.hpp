#pragma once

#include <iosfwd>
#include <random>
#include <vector>

#include "areasearch/types.hpp"

namespace areasearch {

// Ground-truth environment. Mutated only through step(); everything else is
// const. Explored/covered masks grow monotonically.
class GridWorld {
 public:
  GridWorld(ScenarioConfig config, std::vector<CellKind> kinds,
            std::vector<RobotPose> robots);

  // Rejection sampling: scatter obstacles, keep only layouts whose
  // non-obstacle cells form a single 4-connected component, then place
  // targets and robots. Pure function of config.seed.
  static GridWorld generate(const ScenarioConfig& config);

  int width() const { return config_.width; }
  int height() const { return config_.height; }
  const ScenarioConfig& config() const { return config_; }
  int n_robots() const { return static_cast<int>(robots_.size()); }
  const std::vector<RobotPose>& robots() const { return robots_; }
  long step_count() const { return step_count_; }

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < config_.width && y >= 0 && y < config_.height;
  }
  CellKind kind(int x, int y) const { return kinds_[idx(x, y)]; }
  bool explored(int x, int y) const { return explored_[idx(x, y)] != 0; }
  bool covered(int x, int y) const { return covered_[idx(x, y)] != 0; }
  bool is_frontier(int x, int y) const { return frontier_[idx(x, y)] != 0; }

  // Unexplored in-bounds cells within Euclidean distance r_fov of the robot.
  std::vector<Cell> sense(int robot_id) const;

  // Marks every robot's current sensing disc explored without moving anyone.
  // Called once when an episode begins so the robots see their surroundings.
  void initial_sense();

  StepEvents step(const std::vector<PrimitiveAction>& actions);

  // Incrementally maintained frontier set, sorted row-major.
  std::vector<Cell> frontier_cells() const;

  // Undirected adjacency over robot ids; edge iff distance <= r_comm.
  std::vector<std::vector<int>> comm_graph() const;

  int free_cell_count() const { return free_cells_; }
  int target_cell_count() const { return target_cells_; }
  int explored_free_count() const;
  int covered_count() const;

  void save(std::ostream& os) const;
  static GridWorld load(std::istream& is, const ScenarioConfig& defaults);

 private:
  int idx(int x, int y) const { return y * config_.width + x; }
  void mark_explored(Cell c);
  void refresh_frontier(int x, int y);

  ScenarioConfig config_;
  std::vector<CellKind> kinds_;
  std::vector<uint8_t> explored_;
  std::vector<uint8_t> covered_;
  std::vector<uint8_t> frontier_;
  std::vector<RobotPose> robots_;
  long step_count_ = 0;
  int free_cells_ = 0;
  int target_cells_ = 0;
};

}  // namespace areasearch
