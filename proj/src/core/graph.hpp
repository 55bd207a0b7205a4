#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/error.hpp"

namespace tw {

using VertexId = std::uint32_t;
inline constexpr VertexId kRoot = 0;

enum class ModelKind { EndFixedTree, OrientedTree112, ProductTreeZd };

// One move type of a transitive model. Moves are the edge labels; the
// multiset of (increment, label) is the same at every vertex.
struct MoveDef {
  std::int8_t height_inc;   // in units of tau
  std::uint8_t undo;        // move index that undoes this one
  bool is_lattice;          // Z^d edge (increment 0) vs tree edge
  std::string label;
};

// Canonical vertex address: reduced word of tree moves from the root plus an
// integer lattice vector (products only). Reduction cancels adjacent
// (move, undo) pairs; child slot 0 of a chain vertex is the next vertex
// toward the root, which makes the word form canonical.
struct Address {
  std::vector<std::uint8_t> word;
  std::vector<std::int32_t> lattice;

  bool operator==(const Address& o) const = default;
};

struct AddressHash {
  std::size_t operator()(const Address& a) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
      h ^= x;
      h *= 1099511628211ull;
    };
    for (auto b : a.word) mix(b + 1);
    mix(0xff);
    for (auto v : a.lattice) mix((std::uint64_t)(std::uint32_t)v);
    return (std::size_t)h;
  }
};

struct VertexRecord {
  Address address;
  std::int32_t height_units = 0;
  std::int32_t dist_root = 0;     // BFS distance from the root
  bool expanded = false;          // all neighbor slots interned
  std::vector<VertexId> nbr;      // per move index, valid when expanded
};

struct Neighbor {
  VertexId id;
  int height_inc;
  const MoveDef* move;
};

struct ModelParams {
  ModelKind kind = ModelKind::EndFixedTree;
  int k = 3;  // tree degree
  int d = 0;  // lattice dimension (ProductTreeZd)
};

// A transitive graph with nonunimodular group structure, materialized as a
// lazily grown interned ball around the root. Heights are exact integers in
// units of tau; the modular function is W^(height difference) with integer
// base W = e^tau.
class GraphModel {
 public:
  explicit GraphModel(const ModelParams& params, std::size_t max_vertices = 64u << 20);

  const ModelParams& params() const { return params_; }
  ModelKind kind() const { return params_.kind; }
  int degree() const { return (int)moves_.size(); }
  const std::vector<MoveDef>& moves() const { return moves_; }

  // integer base of the modular function, e^tau
  std::uint64_t w_base() const { return w_base_; }
  double tau() const { return tau_; }
  int t0_units() const { return 1; }

  std::size_t vertex_count() const { return records_.size(); }
  const VertexRecord& record(VertexId v) const;
  int height_units(VertexId v) const { return record(v).height_units; }
  int dist_root(VertexId v) const { return record(v).dist_root; }

  bool sealed() const { return sealed_; }
  int seal_radius() const { return seal_radius_; }

  // Interns everything within graph distance `radius` of the root and makes
  // the ball immutable. Safe to share across threads afterwards.
  void seal(int radius);

  // All deg(G) neighbors of v, interning lazily while unsealed. On a sealed
  // model, querying an unexpanded frontier vertex is a BallTooSmall error.
  std::vector<Neighbor> neighbors(VertexId v);

  // Fast adjacency on a sealed model (no allocation).
  const std::vector<VertexId>& neighbor_ids(VertexId v) const;

  double modular_ratio(VertexId u, VertexId v) const;

  // Address arithmetic without interning; lets long walks (samplers) move
  // through the graph with per-walk local state instead of a global ball.
  Address apply_move(const Address& a, int move_idx) const;
  static int address_dist_root(const Address& a);

  // BFS shortest path inside the sealed region; errors rather than guessing
  // when the path could route through unexplored territory.
  int graph_distance(VertexId u, VertexId v) const;

  std::string describe() const;

 private:
  VertexId intern(Address&& addr, int height, int dist_hint);
  Address neighbor_address(const VertexRecord& rec, int move_idx) const;
  void expand(VertexId v);

  ModelParams params_;
  std::vector<MoveDef> moves_;
  std::uint64_t w_base_ = 2;
  double tau_ = 0;
  std::size_t max_vertices_;
  bool sealed_ = false;
  int seal_radius_ = -1;

  std::vector<VertexRecord> records_;
  std::unordered_map<Address, VertexId, AddressHash> intern_;
};

ModelParams parse_model_descriptor(const std::string& descriptor);
std::string canonical_model_descriptor(const ModelParams& p);

}  // namespace tw
