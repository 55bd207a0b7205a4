#include "core/weights.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace tw {

namespace {

// Shared base: path vertex list with linear-scan visit counts (paths are
// short; a scan beats hashing).
class PathState : public WeightState {
 public:
  explicit PathState(VertexId start) { path_.push_back(start); }

  int count_visits(VertexId v) const {
    return (int)std::count(path_.begin(), path_.end(), v);
  }
  VertexId current() const { return path_.back(); }
  int length() const { return (int)path_.size() - 1; }

  void undo_last() override { path_.pop_back(); }

 protected:
  std::vector<VertexId> path_;
};

// ---- self-avoiding walk --------------------------------------------------

class SawState final : public PathState {
 public:
  using PathState::PathState;
  StepOutcome extend(VertexId to, const MoveDef&) override {
    bool ok = count_visits(to) == 0;
    path_.push_back(to);
    return {ok, 0};
  }
  std::unique_ptr<WeightState> clone() const override {
    return std::make_unique<SawState>(*this);
  }
};

class SawWeight final : public Weight {
 public:
  const std::string& name() const override {
    static const std::string n = "saw";
    return n;
  }
  std::unique_ptr<WeightState> start(VertexId at) const override {
    return std::make_unique<SawState>(at);
  }
};

// ---- weakly self-avoiding (Domb-Joyce) -----------------------------------
// mark of a step = number of earlier visits of the target vertex; the total
// over the walk equals the number of self-intersection pairs.

class WeaklySawState final : public PathState {
 public:
  using PathState::PathState;
  StepOutcome extend(VertexId to, const MoveDef&) override {
    int j = count_visits(to);
    path_.push_back(to);
    return {true, j};
  }
  std::unique_ptr<WeightState> clone() const override {
    return std::make_unique<WeaklySawState>(*this);
  }
};

class WeaklySawWeight final : public Weight {
 public:
  explicit WeaklySawWeight(double g) : g_(g), name_("weakly-saw:g=" + fmt(g)) {}
  const std::string& name() const override { return name_; }
  bool indicator() const override { return false; }
  std::int64_t max_mark(int length) const override {
    return (std::int64_t)length * (length - 1) / 2 + length;
  }
  double bin_log_weight(std::int64_t mark, int) const override { return -g_ * (double)mark; }
  std::unique_ptr<WeightState> start(VertexId at) const override {
    return std::make_unique<WeaklySawState>(at);
  }
  static std::string fmt(double g) {
    std::ostringstream os;
    os << g;
    return os.str();
  }

 private:
  double g_;
  std::string name_;
};

// ---- anisotropic SAW on products ------------------------------------------
// mark of a step = 1 for a Z^d edge; weight = 1[SA] * exp(a*lattice + b*tree).

class AnisoState final : public PathState {
 public:
  using PathState::PathState;
  StepOutcome extend(VertexId to, const MoveDef& mv) override {
    bool ok = count_visits(to) == 0;
    path_.push_back(to);
    return {ok, mv.is_lattice ? 1 : 0};
  }
  std::unique_ptr<WeightState> clone() const override {
    return std::make_unique<AnisoState>(*this);
  }
};

class AnisoWeight final : public Weight {
 public:
  AnisoWeight(double a, double b)
      : a_(a), b_(b),
        name_("anisotropic:a=" + WeaklySawWeight::fmt(a) + ",b=" + WeaklySawWeight::fmt(b)) {}
  const std::string& name() const override { return name_; }
  bool indicator() const override { return false; }
  std::int64_t max_mark(int length) const override { return length; }
  double bin_log_weight(std::int64_t mark, int length) const override {
    return a_ * (double)mark + b_ * (double)(length - mark);
  }
  std::unique_ptr<WeightState> start(VertexId at) const override {
    return std::make_unique<AnisoState>(at);
  }

 private:
  double a_, b_;
  std::string name_;
};

// ---- at most twice --------------------------------------------------------

class AtMostTwiceState final : public PathState {
 public:
  using PathState::PathState;
  StepOutcome extend(VertexId to, const MoveDef&) override {
    bool ok = count_visits(to) < 2;
    path_.push_back(to);
    return {ok, 0};
  }
  std::unique_ptr<WeightState> clone() const override {
    return std::make_unique<AtMostTwiceState>(*this);
  }
};

class AtMostTwiceWeight final : public Weight {
 public:
  const std::string& name() const override {
    static const std::string n = "at-most-twice";
    return n;
  }
  std::unique_ptr<WeightState> start(VertexId at) const override {
    return std::make_unique<AtMostTwiceState>(at);
  }
};

// ---- prime-gap indicator ---------------------------------------------------
// omega(i) != omega(j) whenever |i-j| is not prime.

bool is_prime(int n) {
  if (n < 2) return false;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

class PrimeGapState final : public PathState {
 public:
  using PathState::PathState;
  StepOutcome extend(VertexId to, const MoveDef&) override {
    int idx = (int)path_.size();
    bool ok = true;
    for (int j = 0; j < idx; ++j)
      if (path_[(std::size_t)j] == to && !is_prime(idx - j)) {
        ok = false;
        break;
      }
    path_.push_back(to);
    return {ok, 0};
  }
  std::unique_ptr<WeightState> clone() const override {
    return std::make_unique<PrimeGapState>(*this);
  }
};

class PrimeGapWeight final : public Weight {
 public:
  const std::string& name() const override {
    static const std::string n = "prime-gap";
    return n;
  }
  std::unique_ptr<WeightState> start(VertexId at) const override {
    return std::make_unique<PrimeGapState>(at);
  }
};

// ---- spanned-subgraph-is-a-tree indicator ----------------------------------

class TreeSpanState final : public PathState {
 public:
  using PathState::PathState;
  StepOutcome extend(VertexId to, const MoveDef&) override {
    VertexId from = current();
    std::uint64_t key = edge_key(from, to);
    bool known_edge = std::find(edges_.begin(), edges_.end(), key) != edges_.end();
    bool ok;
    if (known_edge) {
      ok = true;  // retraversal, span unchanged
      added_.push_back(false);
    } else if (count_visits(to) > 0) {
      ok = false;  // new edge into a visited vertex closes a cycle
      added_.push_back(false);
    } else {
      ok = true;
      edges_.push_back(key);
      added_.push_back(true);
    }
    path_.push_back(to);
    return {ok, 0};
  }
  void undo_last() override {
    if (added_.back()) edges_.pop_back();
    added_.pop_back();
    path_.pop_back();
  }
  std::unique_ptr<WeightState> clone() const override {
    return std::make_unique<TreeSpanState>(*this);
  }

 private:
  static std::uint64_t edge_key(VertexId a, VertexId b) {
    if (a > b) std::swap(a, b);
    return ((std::uint64_t)a << 32) | b;
  }
  std::vector<std::uint64_t> edges_;
  std::vector<bool> added_;
};

class TreeSpanWeight final : public Weight {
 public:
  const std::string& name() const override {
    static const std::string n = "tree-span";
    return n;
  }
  std::unique_ptr<WeightState> start(VertexId at) const override {
    return std::make_unique<TreeSpanState>(at);
  }
};

// ---- planted violation: w = 2^(length^2) -----------------------------------
// Supermultiplicative, so repulsivity fails; used to prove the suite bites.

class BrokenSuperState final : public PathState {
 public:
  using PathState::PathState;
  StepOutcome extend(VertexId to, const MoveDef&) override {
    path_.push_back(to);
    return {true, 0};
  }
  std::unique_ptr<WeightState> clone() const override {
    return std::make_unique<BrokenSuperState>(*this);
  }
};

class BrokenSuperWeight final : public Weight {
 public:
  const std::string& name() const override {
    static const std::string n = "broken-super";
    return n;
  }
  bool indicator() const override { return false; }
  double bin_log_weight(std::int64_t, int length) const override {
    return (double)length * (double)length * std::log(2.0);
  }
  std::unique_ptr<WeightState> start(VertexId at) const override {
    return std::make_unique<BrokenSuperState>(at);
  }
};

double parse_param(const std::string& item) {
  auto eq = item.find('=');
  if (eq == std::string::npos) fail(ErrorCode::Usage, "bad weight parameter '" + item + "'");
  try {
    return std::stod(item.substr(eq + 1));
  } catch (const std::exception&) {
    fail(ErrorCode::Usage, "bad number in weight parameter '" + item + "'");
  }
}

}  // namespace

std::unique_ptr<Weight> make_weight(const std::string& descriptor) {
  auto colon = descriptor.find(':');
  std::string name = descriptor.substr(0, colon);
  std::vector<std::string> items;
  if (colon != std::string::npos) {
    std::string rest = descriptor.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      auto comma = rest.find(',', pos);
      items.push_back(rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                  : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  auto want = [&](std::size_t n) {
    if (items.size() != n)
      fail(ErrorCode::Usage, "weight '" + name + "' takes " + std::to_string(n) +
                                 " parameter(s)");
  };
  if (name == "saw") {
    want(0);
    return std::make_unique<SawWeight>();
  }
  if (name == "weakly-saw") {
    want(1);
    double g = parse_param(items[0]);
    if (g < 0) fail(ErrorCode::Usage, "weakly-saw requires g >= 0");
    return std::make_unique<WeaklySawWeight>(g);
  }
  if (name == "anisotropic") {
    want(2);
    double a = parse_param(items[0]), b = parse_param(items[1]);
    if (a < 0 || b < 0) fail(ErrorCode::Usage, "anisotropic requires a,b >= 0");
    return std::make_unique<AnisoWeight>(a, b);
  }
  if (name == "at-most-twice") {
    want(0);
    return std::make_unique<AtMostTwiceWeight>();
  }
  if (name == "prime-gap") {
    want(0);
    return std::make_unique<PrimeGapWeight>();
  }
  if (name == "tree-span") {
    want(0);
    return std::make_unique<TreeSpanWeight>();
  }
  if (name == "broken-super") {
    want(0);
    return std::make_unique<BrokenSuperWeight>();
  }
  fail(ErrorCode::Usage, "unknown weight '" + name + "'");
}

std::string canonical_weight_descriptor(const std::string& descriptor) {
  return make_weight(descriptor)->name();
}

// ---- property suite --------------------------------------------------------

namespace {

struct RandomPath {
  std::vector<VertexId> vertices;  // length n+1
  std::vector<int> moves;          // move index per step
};

RandomPath random_path(GraphModel& g, VertexId start, int len, std::mt19937_64& rng) {
  RandomPath p;
  p.vertices.push_back(start);
  VertexId cur = start;
  for (int i = 0; i < len; ++i) {
    auto nbrs = g.neighbors(cur);
    int mi = (int)(rng() % nbrs.size());
    cur = nbrs[(std::size_t)mi].id;
    p.vertices.push_back(cur);
    p.moves.push_back(mi);
  }
  return p;
}

// (admissible, log weight) via the incremental contract
std::pair<bool, double> eval_path(const GraphModel& g, const Weight& w, const RandomPath& p) {
  auto st = w.start(p.vertices[0]);
  std::int64_t mark = 0;
  bool ok = true;
  for (std::size_t i = 0; i < p.moves.size(); ++i) {
    StepOutcome o = st->extend(p.vertices[i + 1], g.moves()[(std::size_t)p.moves[i]]);
    if (!o.admissible) ok = false;
    mark += o.mark_delta;
  }
  if (!ok) return {false, 0.0};
  return {true, w.bin_log_weight(mark, (int)p.moves.size())};
}

RandomPath reverse_path(const GraphModel& g, const RandomPath& p) {
  RandomPath r;
  r.vertices.assign(p.vertices.rbegin(), p.vertices.rend());
  for (auto it = p.moves.rbegin(); it != p.moves.rend(); ++it)
    r.moves.push_back(g.moves()[(std::size_t)*it].undo);
  return r;
}

bool disjoint_pair(const RandomPath& a, const RandomPath& b) {
  // paper convention: a(i) != b(j) for i < |a| and j > 0
  for (std::size_t i = 0; i + 1 < a.vertices.size(); ++i)
    for (std::size_t j = 1; j < b.vertices.size(); ++j)
      if (a.vertices[i] == b.vertices[j]) return false;
  return true;
}

std::vector<std::string> labels_of(const GraphModel& g, const RandomPath& p) {
  std::vector<std::string> out;
  for (int mi : p.moves) out.push_back(g.moves()[(std::size_t)mi].label);
  return out;
}

double weight_value(std::pair<bool, double> e) { return e.first ? std::exp(e.second) : 0.0; }

}  // namespace

PropertyReport check_good_properties(GraphModel& model, const Weight& w, int trials,
                                     int max_len, std::uint64_t seed) {
  if (trials < 1) fail(ErrorCode::Usage, "trials must be >= 1");
  PropertyReport rep;
  rep.weight = w.name();
  rep.model = model.describe();
  rep.trials = trials;
  rep.max_len = max_len;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  const double rel = 1e-12;

  for (int t = 0; t < trials; ++t) {
    int l1 = (int)(rng() % (std::uint64_t)(max_len + 1));
    int l2 = (int)(rng() % (std::uint64_t)(max_len + 1));
    RandomPath p1 = random_path(model, kRoot, l1, rng);
    RandomPath p2 = random_path(model, p1.vertices.back(), l2, rng);
    RandomPath joint = p1;
    joint.vertices.insert(joint.vertices.end(), p2.vertices.begin() + 1, p2.vertices.end());
    joint.moves.insert(joint.moves.end(), p2.moves.begin(), p2.moves.end());

    double w1 = weight_value(eval_path(model, w, p1));
    double w2 = weight_value(eval_path(model, w, p2));
    double wj = weight_value(eval_path(model, w, joint));

    if (wj > w1 * w2 * (1 + rel) + 0.0) {
      rep.violations.push_back(
          {"repulsive", labels_of(model, p1), labels_of(model, p2), w1, w2, wj});
    }
    if (disjoint_pair(p1, p2)) {
      ++rep.disjoint_pairs_seen;
      double prod = w1 * w2;
      double diff = std::abs(wj - prod);
      if (diff > rel * std::max(1.0, std::max(wj, prod))) {
        rep.violations.push_back(
            {"zero-range", labels_of(model, p1), labels_of(model, p2), w1, w2, wj});
      }
    }
    double wr = weight_value(eval_path(model, w, reverse_path(model, joint)));
    if (std::abs(wr - wj) > rel * std::max(1.0, std::max(wr, wj))) {
      rep.violations.push_back({"reversible", labels_of(model, joint), {}, wj, wr, wj});
    }
    if ((int)rep.violations.size() > 64) break;  // enough evidence
  }
  return rep;
}

}  // namespace tw
