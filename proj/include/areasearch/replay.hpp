#pragma once

#include <iosfwd>
#include <string>

#include "areasearch/eval.hpp"

namespace areasearch {

struct ReplayResult {
  int steps = 0;
  int frames = 0;
};

// Runs one episode and writes <out_dir>/replay.jsonl (a header record plus
// one record per step) and, when frames is set, plain-PPM frames
// frame_NNNN.ppm (steps+1 of them, frame 0 being the initial state).
ReplayResult export_replay(const ScenarioConfig& config, Policy& policy,
                           uint64_t seed, const std::string& out_dir,
                           bool frames);

// Schema check over a replay stream; returns the step count.
int validate_replay(std::istream& is);

}  // namespace areasearch
