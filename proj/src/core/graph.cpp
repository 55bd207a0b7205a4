#include "core/graph.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace tw {

namespace {

std::vector<MoveDef> build_moves(const ModelParams& p) {
  std::vector<MoveDef> moves;
  switch (p.kind) {
    case ModelKind::EndFixedTree:
    case ModelKind::ProductTreeZd: {
      if (p.k < 3) fail(ErrorCode::Usage, "end-fixed tree requires k >= 3");
      moves.push_back({+1, 1, false, "up"});
      for (int j = 0; j + 1 < p.k; ++j)
        moves.push_back({-1, 0, false, "down" + std::to_string(j)});
      if (p.kind == ModelKind::ProductTreeZd) {
        if (p.d < 1) fail(ErrorCode::Usage, "product model requires d >= 1");
        for (int j = 0; j < p.d; ++j) {
          std::uint8_t base = (std::uint8_t)moves.size();
          moves.push_back({0, (std::uint8_t)(base + 1), true, "z" + std::to_string(j) + "+"});
          moves.push_back({0, base, true, "z" + std::to_string(j) + "-"});
        }
      }
      break;
    }
    case ModelKind::OrientedTree112: {
      moves.push_back({+1, 1, false, "up"});
      moves.push_back({-1, 0, false, "down0"});
      moves.push_back({-1, 0, false, "down1"});
      moves.push_back({0, 3, false, "flat"});
      break;
    }
  }
  return moves;
}

}  // namespace

GraphModel::GraphModel(const ModelParams& params, std::size_t max_vertices)
    : params_(params), max_vertices_(max_vertices) {
  moves_ = build_moves(params_);
  switch (params_.kind) {
    case ModelKind::EndFixedTree:
    case ModelKind::ProductTreeZd:
      w_base_ = (std::uint64_t)(params_.k - 1);
      break;
    case ModelKind::OrientedTree112:
      w_base_ = 2;
      break;
  }
  tau_ = std::log((double)w_base_);
  Address root;
  if (params_.kind == ModelKind::ProductTreeZd)
    root.lattice.assign((std::size_t)params_.d, 0);
  intern(std::move(root), 0, 0);
}

const VertexRecord& GraphModel::record(VertexId v) const {
  if (v >= records_.size()) fail(ErrorCode::Usage, "unknown vertex id");
  return records_[v];
}

VertexId GraphModel::intern(Address&& addr, int height, int dist_hint) {
  auto it = intern_.find(addr);
  if (it != intern_.end()) return it->second;
  if (records_.size() >= max_vertices_)
    fail(ErrorCode::SizeLimit,
         "vertex limit exceeded: " + std::to_string(records_.size()) + " interned");
  VertexId id = (VertexId)records_.size();
  VertexRecord rec;
  rec.address = addr;
  rec.height_units = height;
  rec.dist_root = dist_hint;
  records_.push_back(std::move(rec));
  intern_.emplace(std::move(addr), id);
  return id;
}

Address GraphModel::neighbor_address(const VertexRecord& rec, int move_idx) const {
  return apply_move(rec.address, move_idx);
}

Address GraphModel::apply_move(const Address& a0, int move_idx) const {
  Address a = a0;
  const MoveDef& mv = moves_[(std::size_t)move_idx];
  if (mv.is_lattice) {
    // lattice axis j has moves at indices k + 2j (plus) and k + 2j + 1 (minus)
    int j = (move_idx - params_.k) / 2;
    a.lattice[(std::size_t)j] += ((move_idx - params_.k) % 2 == 0) ? 1 : -1;
  } else {
    if (!a.word.empty() && moves_[a.word.back()].undo == move_idx)
      a.word.pop_back();
    else
      a.word.push_back((std::uint8_t)move_idx);
  }
  return a;
}

int GraphModel::address_dist_root(const Address& a) {
  int d = (int)a.word.size();
  for (auto x : a.lattice) d += std::abs((int)x);
  return d;
}

void GraphModel::expand(VertexId v) {
  if (records_[v].expanded) return;
  if (sealed_)
    fail(ErrorCode::BallTooSmall,
         "sealed ball too small: vertex " + std::to_string(v) + " not expanded");
  // copy out: intern() may reallocate records_
  const Address addr = records_[v].address;
  const int h = records_[v].height_units;
  const int dist = records_[v].dist_root;
  std::vector<VertexId> nbr(moves_.size());
  for (int mi = 0; mi < (int)moves_.size(); ++mi) {
    Address na = apply_move(addr, mi);
    int nh = h + moves_[(std::size_t)mi].height_inc;
    nbr[(std::size_t)mi] = intern(std::move(na), nh, dist + 1);
  }
  records_[v].nbr = std::move(nbr);
  records_[v].expanded = true;
}

void GraphModel::seal(int radius) {
  if (radius < 0) fail(ErrorCode::Usage, "seal radius must be >= 0");
  if (sealed_) {
    if (radius <= seal_radius_) return;
    fail(ErrorCode::Usage, "model already sealed at smaller radius");
  }
  // Clean BFS from the root; assigns authoritative dist_root to everything
  // in the ball, regardless of earlier lazy exploration order.
  std::vector<char> seen(records_.size(), 0);
  std::deque<std::pair<VertexId, int>> queue;
  seen[kRoot] = 1;
  queue.emplace_back(kRoot, 0);
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    records_[v].dist_root = d;
    if (d >= radius) continue;
    expand(v);
    if (seen.size() < records_.size()) seen.resize(records_.size(), 0);
    for (VertexId y : records_[v].nbr) {
      if (!seen[y]) {
        seen[y] = 1;
        queue.emplace_back(y, d + 1);
      }
    }
  }
  sealed_ = true;
  seal_radius_ = radius;
}

std::vector<Neighbor> GraphModel::neighbors(VertexId v) {
  if (v >= records_.size()) fail(ErrorCode::Usage, "unknown vertex id");
  expand(v);
  std::vector<Neighbor> out;
  out.reserve(moves_.size());
  for (int mi = 0; mi < (int)moves_.size(); ++mi)
    out.push_back({records_[v].nbr[(std::size_t)mi], moves_[(std::size_t)mi].height_inc,
                   &moves_[(std::size_t)mi]});
  return out;
}

const std::vector<VertexId>& GraphModel::neighbor_ids(VertexId v) const {
  const VertexRecord& rec = record(v);
  if (!rec.expanded)
    fail(ErrorCode::BallTooSmall,
         "vertex " + std::to_string(v) + " at the frontier of the sealed ball");
  return rec.nbr;
}

double GraphModel::modular_ratio(VertexId u, VertexId v) const {
  int dh = record(v).height_units - record(u).height_units;
  return std::pow((double)w_base_, (double)dh);
}

int GraphModel::graph_distance(VertexId u, VertexId v) const {
  record(u);
  record(v);
  if (u == v) return 0;
  std::vector<std::int32_t> dist(records_.size(), -1);
  std::deque<VertexId> queue;
  dist[u] = 0;
  queue.push_back(u);
  int min_skip = std::numeric_limits<int>::max();
  while (!queue.empty()) {
    VertexId x = queue.front();
    queue.pop_front();
    if (dist[x] >= min_skip) break;
    if (!records_[x].expanded) {
      min_skip = std::min(min_skip, (int)dist[x]);
      continue;
    }
    for (VertexId y : records_[x].nbr) {
      if (dist[y] >= 0) continue;
      dist[y] = dist[x] + 1;
      if (y == v) {
        // certain only if no route through an unexpanded vertex could be shorter
        if (dist[y] <= min_skip) return dist[y];
        fail(ErrorCode::BallTooSmall, "graph_distance: sealed ball too small");
      }
      queue.push_back(y);
    }
  }
  fail(ErrorCode::BallTooSmall, "graph_distance: target unreachable in sealed ball");
}

std::string GraphModel::describe() const { return canonical_model_descriptor(params_); }

namespace {

// "name:key=val,key=val"; numbers are plain integers
std::pair<std::string, std::unordered_map<std::string, long>> split_descriptor(
    const std::string& s) {
  auto colon = s.find(':');
  std::string name = s.substr(0, colon);
  std::unordered_map<std::string, long> kv;
  if (colon != std::string::npos) {
    std::string rest = s.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      auto comma = rest.find(',', pos);
      std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                     : comma - pos);
      auto eq = item.find('=');
      if (eq == std::string::npos)
        fail(ErrorCode::Usage, "bad descriptor parameter '" + item + "'");
      try {
        kv[item.substr(0, eq)] = std::stol(item.substr(eq + 1));
      } catch (const std::exception&) {
        fail(ErrorCode::Usage, "bad integer in descriptor '" + item + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  return {name, kv};
}

}  // namespace

ModelParams parse_model_descriptor(const std::string& descriptor) {
  auto [name, kv] = split_descriptor(descriptor);
  ModelParams p;
  if (name == "end-fixed-tree") {
    p.kind = ModelKind::EndFixedTree;
    if (!kv.count("k")) fail(ErrorCode::Usage, "end-fixed-tree needs k");
    p.k = (int)kv["k"];
    kv.erase("k");
  } else if (name == "oriented-tree-112") {
    p.kind = ModelKind::OrientedTree112;
    p.k = 4;
  } else if (name == "product-tree-zd") {
    p.kind = ModelKind::ProductTreeZd;
    if (!kv.count("k") || !kv.count("d"))
      fail(ErrorCode::Usage, "product-tree-zd needs k and d");
    p.k = (int)kv["k"];
    p.d = (int)kv["d"];
    kv.erase("k");
    kv.erase("d");
  } else {
    fail(ErrorCode::Usage, "unknown model '" + name + "'");
  }
  if (!kv.empty()) fail(ErrorCode::Usage, "unknown model parameter in '" + descriptor + "'");
  if (p.k < 3) fail(ErrorCode::Usage, "k must be >= 3");
  if (p.kind == ModelKind::ProductTreeZd && (p.d < 1 || p.d > 4))
    fail(ErrorCode::Usage, "d must be in 1..4");
  return p;
}

std::string canonical_model_descriptor(const ModelParams& p) {
  switch (p.kind) {
    case ModelKind::EndFixedTree:
      return "end-fixed-tree:k=" + std::to_string(p.k);
    case ModelKind::OrientedTree112:
      return "oriented-tree-112";
    case ModelKind::ProductTreeZd:
      return "product-tree-zd:k=" + std::to_string(p.k) + ",d=" + std::to_string(p.d);
  }
  fail(ErrorCode::Internal, "bad model kind");
}

}  // namespace tw
