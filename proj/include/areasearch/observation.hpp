#pragma once

#include <vector>

#include "areasearch/types.hpp"
#include "areasearch/world.hpp"

namespace areasearch {

// Egocentric 4-channel window of side 2*r_fov+1, everything outside the
// explored area zeroed.
struct LocalObservation {
  int window = 0;  // side length
  std::vector<uint8_t> obstacle;  // explored obstacle cells
  std::vector<uint8_t> frontier;  // frontier cells
  std::vector<uint8_t> target;    // explored, uncovered target cells
  std::vector<uint8_t> neighbor;  // communication neighbors' positions
  Cell center;
  Heading heading = Heading::North;
  int world_w = 0;
  int world_h = 0;
};

struct JointObservation {
  int w = 0;
  int h = 0;
  std::vector<uint8_t> explored;
  std::vector<uint8_t> covered;
};

LocalObservation local_observation(const GridWorld& world, int robot_id);
JointObservation joint_observation(const GridWorld& world);

// Fixed 2x2 average pooling per channel plus normalized position and a
// heading one-hot. Dimension: 4*ceil(window/2)^2 + 2 + 4.
std::vector<double> featurize_local(const LocalObservation& obs);
int local_feature_dim(int r_fov);

// Each joint map average-pooled onto a fixed 5x5 summary; dimension 50.
std::vector<double> featurize_joint(const JointObservation& obs);
inline constexpr int kJointFeatureDim = 50;

// out_i = 0.5*(f_i + mean over neighbors), or f_i when i is isolated.
std::vector<std::vector<double>> aggregate_neighbors(
    const std::vector<std::vector<double>>& features,
    const std::vector<std::vector<int>>& graph);

}  // namespace areasearch
