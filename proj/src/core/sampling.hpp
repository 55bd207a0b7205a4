#pragma once

#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/tables.hpp"
#include "core/weights.hpp"

namespace tw {

struct SampleRow {
  std::int64_t idx;
  int height_units;
  int distance;
  double log_weight;  // 0 for exact methods
};

struct SampleRun {
  std::string model, weight, method;
  double lambda = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<SampleRow> rows;
  std::int64_t discarded = 0;  // trapped Rosenbluth walks
  double discard_rate = 0;
  double ess = 0;  // effective sample size (= count for exact methods)
};

// Exact sampling from P_{w,lambda,n}. Tree models with SAW use tilted suffix
// counts from the transfer recursion (method "exact-suffix", n <= 1000);
// anything else samples the exact endpoint law from enumeration tables with
// the two-point decomposition (method "exact-enumerated", n <= tables nmax).
SampleRun sample_exact(const GraphModel& model, const Weight& w,
                       const WalkTables* tables, double lambda, int n,
                       std::int64_t count, std::uint64_t seed);

// Sequential importance sampling: steps drawn among admissible extensions
// proportional to factor * W^(lambda * increment); per-sample weight is the
// product of local normalizers. Per-sample RNG streams split by index.
SampleRun sample_rosenbluth(const GraphModel& model, const Weight& w, double lambda,
                            int n, std::int64_t count, std::uint64_t seed,
                            int threads = 0);

struct DriftReport {
  std::int64_t samples = 0;
  double mean_dist_over_n = 0;
  double se_dist_over_n = 0;
  double mean_height_over_n = 0;     // in tau units
  double se_height_over_n = 0;
  double mean_signed_height_over_n = 0;  // sgn(lambda-1/2) * height / n
  std::vector<std::pair<double, double>> tail;  // (c, weighted P(dist < c n))
  double ess = 0;
  double discard_rate = 0;
};

DriftReport drift_report(const SampleRun& run);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace tw
