#pragma once

#include <functional>

#include "core/graph.hpp"
#include "core/tables.hpp"

namespace tw {

// Last-move classes for non-backtracking (= self-avoiding) walks on the tree
// models. Transitions are height-homogeneous, which makes SAW enumeration a
// height-indexed linear recursion.
struct TransferClass {
  int height_inc;
  // (target class, multiplicity) continuations
  std::vector<std::pair<int, int>> next;
};

struct TransferSystem {
  std::vector<TransferClass> classes;
  std::vector<std::pair<int, int>> start;  // (class, multiplicity) first moves
  std::uint64_t w_base;
};

// Errors on models without a SAW transfer representation (products).
TransferSystem transfer_system(const GraphModel& model);
bool transfer_supported(const GraphModel& model);

// Exact SAW partition table via the transfer recursion. Bridge and half-space
// tables are filled in closed form on EndFixedTree (bridges there are single
// up-geodesics and pure descents); on OrientedTree112 only the partition
// table is populated (DFS covers bridge tables at enumeration depths).
WalkTables tree_transfer_tables(const GraphModel& model, int nmax);

// Streaming row access for depths beyond full materialization: calls
// row(n, counts) where counts[m + nmax] is the exact number of SAWs of
// length n ending at height m.
void transfer_row_scan(const GraphModel& model, int nmax,
                       const std::function<void(int, const std::vector<BigInt>&)>& row);

// ---- numeric bracket evidence (fixed z, long double) ----------------------

// Endpoint generating profile of all SAWs up to length L at weight z per
// step: G[h + B] = sum over walks ending at height h of z^len, heights
// clipped below at -B (clipped flux is reported for rigorous accounting).
struct EndpointProfile {
  int B = 0;         // low clip
  int L = 0;         // length truncation
  std::vector<long double> g;       // size B + L + 1, index h + B
  std::vector<long double> g_late;  // contributions from len > L - 64
  std::vector<long double> half_tilted;  // T[len] = z^len * Z(1/2;len), len <= L
  long double clip_flux = 0;  // mass dropped at the low clip
};

EndpointProfile endpoint_profile(const GraphModel& model, long double z, int L, int B);

// Truncated up-bridge generating function A(z;n): walks staying in [0, n]
// (start at min, end at max) ending at height n, lengths <= L.
long double up_bridge_gf(const GraphModel& model, long double z, int n, int L);

}  // namespace tw
