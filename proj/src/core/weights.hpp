#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/graph.hpp"

namespace tw {

// Outcome of extending a path by one step. Inadmissible means factor 0
// (enumeration prunes). mark_delta feeds the exact bin key: the total weight
// of a path is exp(bin_log_weight(sum of marks, length)) when admissible.
struct StepOutcome {
  bool admissible;
  std::int32_t mark_delta;
};

class WeightState {
 public:
  virtual ~WeightState() = default;
  virtual StepOutcome extend(VertexId to, const MoveDef& mv) = 0;
  virtual void undo_last() = 0;
  virtual std::unique_ptr<WeightState> clone() const = 0;
};

// Good weight function contract: invariant by construction (reads only edge
// labels and the intersection pattern), reversible, repulsive, zero-range,
// non-degenerate. Incremental evaluation: product over extend steps equals
// the from-scratch definition.
class Weight {
 public:
  virtual ~Weight() = default;
  virtual const std::string& name() const = 0;
  // all admissible paths have weight exp(bin_log_weight) with mark 0
  virtual bool indicator() const { return true; }
  // largest possible mark total at the given length (bin dimension)
  virtual std::int64_t max_mark(int length) const { return 0; }
  virtual double bin_log_weight(std::int64_t mark, int length) const { return 0.0; }
  virtual std::unique_ptr<WeightState> start(VertexId at) const = 0;
};

std::unique_ptr<Weight> make_weight(const std::string& descriptor);
std::string canonical_weight_descriptor(const std::string& descriptor);

// ---- randomized good-weight property suite ------------------------------

struct PropertyViolation {
  std::string property;  // "repulsive" | "zero-range" | "reversible"
  std::vector<std::string> path1;  // move labels, verbatim
  std::vector<std::string> path2;  // empty for reversibility
  double w1, w2, w_joint;
};

struct PropertyReport {
  std::string weight;
  std::string model;
  int trials = 0;
  int max_len = 0;
  std::uint64_t seed = 0;
  int disjoint_pairs_seen = 0;
  std::vector<PropertyViolation> violations;
  bool passed() const { return violations.empty(); }
};

// Random contiguous path pairs on the (unsealed ok) model: checks
// w(a.b) <= w(a)w(b), equality when disjoint per the paper's convention
// (a(i) != b(j) for i < |a|, j > 0), and w(path) == w(reversed path).
PropertyReport check_good_properties(GraphModel& model, const Weight& w, int trials,
                                     int max_len, std::uint64_t seed);

}  // namespace tw
