#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "core/analysis.hpp"
#include "core/sampling.hpp"
#include "core/tables.hpp"
#include "core/weights.hpp"

namespace tw {

std::uint64_t fnv64(const std::string& bytes);
std::uint64_t fnv64_file(const std::string& path);
std::string hex64(std::uint64_t v);

// ---- table cache -------------------------------------------------------------

std::string cache_key(const std::string& model_desc, const std::string& weight_desc,
                      int nmax);
// corrupt entries are ignored with a warning on stderr and recomputed
std::optional<WalkTables> cache_lookup(const std::string& dir, const std::string& key);
void cache_store(const std::string& dir, const std::string& key, const WalkTables& t);

struct EnumerateRequest {
  std::string model_desc;
  std::string weight_desc;
  int nmax = 8;
  int threads = 0;
  bool want_two_point = false;
  std::string cache_dir;  // empty = no cache
};

struct EnumerateOutcome {
  WalkTables tables;
  bool cache_hit = false;
  double seconds = 0;
};

// Seals a fresh model to radius nmax and enumerates (or loads from cache;
// two-point requests always recompute since the cache stores table families
// only).
EnumerateOutcome run_enumeration(const EnumerateRequest& req);

// ---- CSV ------------------------------------------------------------------------

// spec columns n,m_units,count for indicator weights; binned weights carry a
// mark column (FORMATS.md)
std::string partition_csv(const WalkTables& t);
std::string sample_csv(const SampleRun& run);
std::string bracket_csv_header();
std::string bracket_csv_row(const CriticalBracket& b);

// ---- JSON report serialization -----------------------------------------------------

nlohmann::json to_json(const PropertyReport& r);
nlohmann::json to_json(const IdentityReport& r);
nlohmann::json to_json(const CriticalBracket& b);
nlohmann::json to_json(const BubbleReport& r);
nlohmann::json to_json(const MadrasSladeReport& r);
nlohmann::json to_json(const QuantReport& r);
nlohmann::json to_json(const DecayReport& r);
nlohmann::json to_json(const HwDiagnostic& r);
nlohmann::json to_json(const DriftReport& r);

// ---- manifest -------------------------------------------------------------------

class Manifest {
 public:
  explicit Manifest(nlohmann::json config_echo);
  void add_output(const std::string& path);
  void add_verdict(const std::string& name, bool pass);
  void add_note(const std::string& key, const nlohmann::json& value);
  void set_timing(const std::string& phase, double seconds);
  bool all_passed() const { return all_passed_; }
  nlohmann::json json() const;
  void write(const std::string& path) const;

 private:
  nlohmann::json j_;
  bool all_passed_ = true;
};

void atomic_write(const std::string& path, const std::string& contents);

}  // namespace tw
