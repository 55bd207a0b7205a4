#pragma once

#include "core/graph.hpp"
#include "core/tables.hpp"
#include "core/weights.hpp"

namespace tw {

struct EnumerateOptions {
  int nmax = 8;
  int threads = 0;          // 0 = hardware concurrency
  bool want_two_point = false;
  int prefix_depth = 3;     // parallel work-splitting prefix length
};

// Exact one-pass enumeration: fills partition, bridge, half-space and descent
// tables (and optionally the per-vertex two-point decomposition) for all
// walks from the root of length <= nmax. Requires a ball sealed to radius
// >= nmax. Output is bit-identical for any thread count (integer merges).
WalkTables enumerate_walks(const GraphModel& model, const Weight& w,
                           const EnumerateOptions& opt);

}  // namespace tw
