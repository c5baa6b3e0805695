#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace areasearch {

enum class CellKind : uint8_t { Free = 0, Obstacle = 1, Target = 2 };

enum class Heading : uint8_t { North = 0, East = 1, South = 2, West = 3 };

// High-level sub-task selected by the role policy.
enum class RoleAction : uint8_t { Explore = 0, Cover = 1 };

// Movement primitives executed in the grid.
enum class PrimitiveAction : uint8_t {
  MoveForward = 0,
  TurnRight = 1,
  MoveBackward = 2,
  TurnLeft = 3,
  Stop = 4
};

inline constexpr int kNumRoles = 2;
inline constexpr int kNumPrimitives = 5;

struct Cell {
  int x = 0;
  int y = 0;

  bool operator==(const Cell&) const = default;
  // Row-major order; used everywhere ties must break deterministically.
  bool operator<(const Cell& o) const {
    return y != o.y ? y < o.y : x < o.x;
  }
};

inline Cell heading_delta(Heading h) {
  switch (h) {
    case Heading::North: return {0, -1};
    case Heading::East: return {1, 0};
    case Heading::South: return {0, 1};
    case Heading::West: return {-1, 0};
  }
  return {0, 0};
}

inline Heading turn_left(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 3) % 4);
}
inline Heading turn_right(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 1) % 4);
}

struct RobotPose {
  Cell position;
  Heading heading = Heading::North;
  int id = 0;
};

struct ScenarioConfig {
  int width = 25;
  int height = 25;
  int n_obstacles = 250;
  int n_targets = 100;
  int n_robots = 4;
  int r_fov = 4;
  int r_comm = 10;
  int rad_e = 4;  // exploration-ability radius; presets keep it equal to r_fov
  int episode_len = 128;
  uint64_t seed = 0;

  void validate() const;
};

// Per-step bookkeeping emitted by GridWorld::step.
struct StepEvents {
  std::vector<int> newly_explored;
  std::vector<int> targets_covered;
  std::vector<uint8_t> collisions;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleScenario : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic seed-stream derivation (splitmix64 over mixed words).
inline uint64_t mix_seed(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace areasearch
