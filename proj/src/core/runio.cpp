#include "core/runio.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "core/enumerate.hpp"

namespace tw {

namespace fs = std::filesystem;

std::uint64_t fnv64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv64_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::Io, "cannot hash '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return fnv64(os.str());
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
  return buf;
}

std::string cache_key(const std::string& model_desc, const std::string& weight_desc,
                      int nmax) {
  return hex64(fnv64("tablev1|" + model_desc + "|" + weight_desc + "|" +
                     std::to_string(nmax)));
}

std::optional<WalkTables> cache_lookup(const std::string& dir, const std::string& key) {
  fs::path p = fs::path(dir) / (key + ".tbl");
  std::error_code ec;
  if (!fs::exists(p, ec)) return std::nullopt;
  try {
    return read_tables_file(p.string());
  } catch (const Error& e) {
    std::cerr << "warning: ignoring corrupt cache entry " << p.string() << ": "
              << e.what() << "\n";
    return std::nullopt;
  }
}

void cache_store(const std::string& dir, const std::string& key, const WalkTables& t) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  fs::path final_path = fs::path(dir) / (key + ".tbl");
  fs::path tmp = fs::path(dir) / (key + ".tmp");
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) fail(ErrorCode::Io, "cache: cannot write " + tmp.string());
    write_tables(t, os);
    if (!os.good()) fail(ErrorCode::Io, "cache: write failed");
  }
  fs::rename(tmp, final_path, ec);
  if (ec) fail(ErrorCode::Io, "cache: rename failed: " + ec.message());
}

EnumerateOutcome run_enumeration(const EnumerateRequest& req) {
  auto start = std::chrono::steady_clock::now();
  EnumerateOutcome out;
  std::string model_desc = canonical_model_descriptor(parse_model_descriptor(req.model_desc));
  std::string weight_desc = canonical_weight_descriptor(req.weight_desc);
  std::string key = cache_key(model_desc, weight_desc, req.nmax);
  if (!req.cache_dir.empty() && !req.want_two_point) {
    auto hit = cache_lookup(req.cache_dir, key);
    if (hit && hit->model == model_desc && hit->weight == weight_desc &&
        hit->nmax == req.nmax) {
      out.tables = std::move(*hit);
      out.cache_hit = true;
      out.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return out;
    }
  }
  GraphModel model(parse_model_descriptor(req.model_desc));
  model.seal(req.nmax);
  auto w = make_weight(req.weight_desc);
  EnumerateOptions opt;
  opt.nmax = req.nmax;
  opt.threads = req.threads;
  opt.want_two_point = req.want_two_point;
  out.tables = enumerate_walks(model, *w, opt);
  if (!req.cache_dir.empty()) cache_store(req.cache_dir, key, out.tables);
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string partition_csv(const WalkTables& t) {
  std::ostringstream os;
  bool binned = t.partition.mark_dim() > 1;
  os << "# tiltedwalk partition v1 model=" << t.model << " weight=" << t.weight
     << " nmax=" << t.nmax << "\n";
  os << (binned ? "n,m_units,mark,count\n" : "n,m_units,count\n");
  for (int n = 0; n <= t.nmax; ++n)
    for (int m = -n; m <= n; ++m)
      for (int mark = 0; mark < t.partition.mark_dim(); ++mark) {
        const BigInt& c = t.partition.at(n, m, mark);
        if (c == 0) continue;
        if (binned)
          os << n << ',' << m << ',' << mark << ',' << to_decimal(c) << "\n";
        else
          os << n << ',' << m << ',' << to_decimal(c) << "\n";
      }
  return os.str();
}

std::string sample_csv(const SampleRun& run) {
  std::ostringstream os;
  os << "# tiltedwalk samples v1 model=" << run.model << " weight=" << run.weight
     << " lambda=" << run.lambda << " n=" << run.n << " method=" << run.method
     << " seed=" << run.seed << "\n";
  os << "sample_idx,height_units,distance,log_weight\n";
  os.precision(17);
  for (const auto& r : run.rows)
    os << r.idx << ',' << r.height_units << ',' << r.distance << ',' << r.log_weight
       << "\n";
  return os.str();
}

std::string bracket_csv_header() { return "lambda,z_lo,z_hi,n_used,flags\n"; }

std::string bracket_csv_row(const CriticalBracket& b) {
  std::ostringstream os;
  os.precision(12);
  std::string flags;
  for (const auto& f : b.flags) {
    if (!flags.empty()) flags += ";";
    flags += f;
  }
  os << b.lambda << ',' << b.z_lo << ',' << b.z_hi << ',' << std::max(b.n_lo, b.n_hi)
     << ',' << (flags.empty() ? "ok" : flags) << "\n";
  return os.str();
}

// ---- JSON ------------------------------------------------------------------------

nlohmann::json to_json(const PropertyReport& r) {
  nlohmann::json v;
  v["weight"] = r.weight;
  v["model"] = r.model;
  v["trials"] = r.trials;
  v["max_len"] = r.max_len;
  v["seed"] = r.seed;
  v["disjoint_pairs_seen"] = r.disjoint_pairs_seen;
  v["passed"] = r.passed();
  v["violations"] = nlohmann::json::array();
  for (const auto& viol : r.violations) {
    v["violations"].push_back({{"property", viol.property},
                               {"path1", viol.path1},
                               {"path2", viol.path2},
                               {"w1", viol.w1},
                               {"w2", viol.w2},
                               {"w_joint", viol.w_joint}});
  }
  return v;
}

nlohmann::json to_json(const IdentityReport& r) {
  return {{"mtp_exact", r.mtp_exact},
          {"bridge_reversal_exact", r.bridge_reversal_exact},
          {"descent_lift_ok", r.descent_lift_ok},
          {"diff_inequality_ok", r.diff_inequality_ok},
          {"diff_max_slack", r.diff_max_slack},
          {"violations", r.violations},
          {"all_ok", r.all_ok()}};
}

nlohmann::json to_json(const CriticalBracket& b) {
  return {{"lambda", b.lambda},
          {"z_lo", b.z_lo},
          {"z_hi", b.z_hi},
          {"n_lo", b.n_lo},
          {"n_hi", b.n_hi},
          {"beta_at_lo", b.beta_at_lo},
          {"alpha_at_hi", b.alpha_at_hi},
          {"tol_met", b.tol_met},
          {"beta_rigorous", b.beta_rigorous},
          {"flags", b.flags}};
}

nlohmann::json to_json(const BubbleReport& r) {
  return {{"z", r.z},
          {"degree", r.degree},
          {"b_truncated", r.b_truncated},
          {"chi_sq_truncated", r.chi_sq_truncated},
          {"value_dominated", r.value_dominated},
          {"degreewise_dominated", r.degreewise_dominated},
          {"first_bad_degree", r.first_bad_degree}};
}

nlohmann::json to_json(const MadrasSladeReport& r) {
  return {{"z", r.z},
          {"lhs_truncated", r.lhs_truncated},
          {"rhs", r.rhs},
          {"rhs_closed_form", r.rhs_closed_form},
          {"pass", r.pass}};
}

nlohmann::json to_json(const QuantReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points)
    pts.push_back({{"z", p.z}, {"chi_trunc", p.chi_trunc}, {"bound", p.bound},
                   {"pass", p.pass}});
  return {{"mu_c_mid", r.mu_c_mid},
          {"t0", r.t0},
          {"coefficient", r.coefficient},
          {"points", pts},
          {"all_pass", r.all_pass}};
}

nlohmann::json to_json(const DecayReport& r) {
  return {{"z", r.z},
          {"chi_half", r.chi_half},
          {"chi_closed_form", r.chi_closed_form},
          {"vertices_checked", r.vertices_checked},
          {"all_dominated", r.all_dominated},
          {"c_fit", r.c_fit}};
}

nlohmann::json to_json(const HwDiagnostic& r) {
  return {{"n", r.n},
          {"log_ratio", r.log_ratio},
          {"log_bound", r.log_bound},
          {"max_ratio_over_sqrt", r.max_ratio_over_sqrt},
          {"bounded", r.bounded}};
}

nlohmann::json to_json(const DriftReport& r) {
  nlohmann::json tail = nlohmann::json::array();
  for (const auto& [c, p] : r.tail) tail.push_back({{"c", c}, {"p_below", p}});
  return {{"samples", r.samples},
          {"mean_dist_over_n", r.mean_dist_over_n},
          {"se_dist_over_n", r.se_dist_over_n},
          {"mean_height_over_n", r.mean_height_over_n},
          {"se_height_over_n", r.se_height_over_n},
          {"mean_signed_height_over_n", r.mean_signed_height_over_n},
          {"tail", tail},
          {"ess", r.ess},
          {"discard_rate", r.discard_rate}};
}

// ---- manifest ----------------------------------------------------------------------

Manifest::Manifest(nlohmann::json config_echo) {
  j_["tool"] = "tiltedwalk";
  j_["version"] = "1.0.0";
  j_["config"] = std::move(config_echo);
  j_["outputs"] = nlohmann::json::array();
  j_["verdicts"] = nlohmann::json::object();
  j_["timings_s"] = nlohmann::json::object();
}

void Manifest::add_output(const std::string& path) {
  j_["outputs"].push_back({{"path", path}, {"fnv64", hex64(fnv64_file(path))}});
}

void Manifest::add_verdict(const std::string& name, bool pass) {
  j_["verdicts"][name] = pass;
  all_passed_ = all_passed_ && pass;
}

void Manifest::add_note(const std::string& key, const nlohmann::json& value) {
  j_[key] = value;
}

void Manifest::set_timing(const std::string& phase, double seconds) {
  j_["timings_s"][phase] = seconds;
}

nlohmann::json Manifest::json() const {
  nlohmann::json out = j_;
  out["all_passed"] = all_passed_;
  return out;
}

void Manifest::write(const std::string& path) const {
  atomic_write(path, json().dump(2) + "\n");
}

void atomic_write(const std::string& path, const std::string& contents) {
  fs::path p(path);
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc | std::ios::binary);
    if (!os) fail(ErrorCode::Io, "cannot write " + tmp.string());
    os << contents;
    if (!os.good()) fail(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) fail(ErrorCode::Io, "rename failed: " + ec.message());
}

}  // namespace tw
