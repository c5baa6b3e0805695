#pragma once

#include <iosfwd>
#include <string>

#include "areasearch/learner.hpp"

namespace areasearch {

// Everything a CLI run needs. Serialized as flat key=value text with
// [scenario] / [reward] / [train] / [run] sections.
struct RunConfig {
  std::string preset;        // empty = use the explicit scenario fields
  int robots_override = 0;   // 0 = preset/scenario default
  ScenarioConfig scenario;
  TrainConfig train;
  std::string policy = "greedy";
  std::string checkpoint;
  std::string out_dir = ".";
  int episodes = 50;
  uint64_t seed = 1;
  bool render = false;
  int threads = 0;

  // Scenario with preset and robot override applied.
  ScenarioConfig effective_scenario() const;
};

RunConfig parse_run_config(std::istream& is);
// Applies only the keys present in the stream onto an existing config.
void apply_run_config(RunConfig& cfg, std::istream& is);
RunConfig load_run_config(const std::string& path);
std::string serialize_run_config(const RunConfig& cfg);

}  // namespace areasearch
