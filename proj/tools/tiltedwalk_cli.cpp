// Command-line front door. All computation goes through the C API in
// tiltedwalk.h; this file only parses flags, moves bytes to disk, and
// assembles run manifests.

#include <sys/stat.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tiltedwalk.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string take_string(char* s) {
  std::string out = s ? s : "";
  tw_string_free(s);
  return out;
}

[[noreturn]] void die(tw_status st, const std::string& what) {
  std::cerr << "error: " << what << ": " << tw_last_error() << "\n";
  std::exit(st == TW_ERR_USAGE ? kExitUsage : kExitViolation);
}

void check(tw_status st, const std::string& what) {
  if (st != TW_OK) die(st, what);
}

void write_file(const std::string& path, const std::string& contents) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc | std::ios::binary);
    if (!os) {
      std::cerr << "error: cannot write " << tmp << "\n";
      std::exit(kExitViolation);
    }
    os << contents;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::cerr << "error: cannot rename " << tmp << "\n";
    std::exit(kExitViolation);
  }
}

uint64_t fnv64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
  return buf;
}

json manifest_base(const std::string& subcommand, const json& config) {
  json m;
  m["tool"] = "tiltedwalk";
  m["version"] = tw_version();
  m["subcommand"] = subcommand;
  m["config"] = config;
  m["outputs"] = json::array();
  return m;
}

void manifest_output(json& m, const std::string& path, const std::string& contents) {
  m["outputs"].push_back({{"path", path}, {"fnv64", hex64(fnv64(contents))}});
}

void finish_manifest(json& m, const std::string& path, double seconds, bool passed) {
  m["wall_seconds"] = seconds;
  m["all_passed"] = passed;
  write_file(path, m.dump(2) + "\n");
  std::cerr << "manifest: " << path << "\n";
}

std::string default_cache_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  const char* env = std::getenv("TILTEDWALK_CACHE_DIR");
  return env ? env : "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tiltedwalk: exact tilted walk enumeration and analysis"};
  app.require_subcommand(1);

  std::string model, weight = "saw", out_path, cache_dir, manifest_path;
  int nmax = 12, threads = 0;
  double lambda = 0.0, z = -1.0, tol = 0.01;
  std::uint64_t seed = 1;

  // enumerate
  auto* cmd_enum = app.add_subcommand("enumerate", "exact height-resolved tables");
  cmd_enum->add_option("--model", model, "model descriptor")->required();
  cmd_enum->add_option("--weight", weight, "weight descriptor");
  cmd_enum->add_option("--nmax", nmax, "maximum walk length");
  cmd_enum->add_option("--out", out_path, "CSV output path")->required();
  cmd_enum->add_option("--cache-dir", cache_dir, "table cache directory");
  cmd_enum->add_option("--threads", threads, "worker threads (0 = auto)");
  cmd_enum->add_option("--manifest", manifest_path, "manifest path");

  // analyze
  std::string lambda_grid = "0,0.1,0.2,0.3,0.4,0.5", z_grid = "0.1,0.3";
  std::string out_json = "analyze.json", out_csv = "brackets.csv";
  auto* cmd_an = app.add_subcommand("analyze", "brackets, identities, inequality checks");
  cmd_an->add_option("--model", model)->required();
  cmd_an->add_option("--weight", weight);
  cmd_an->add_option("--nmax", nmax);
  cmd_an->add_option("--lambda-grid", lambda_grid, "comma-separated lambdas");
  cmd_an->add_option("--z-grid", z_grid, "comma-separated z values");
  cmd_an->add_option("--tol", tol, "bracket width target");
  cmd_an->add_option("--out-json", out_json);
  cmd_an->add_option("--out-csv", out_csv);
  cmd_an->add_option("--cache-dir", cache_dir);
  cmd_an->add_option("--threads", threads);
  cmd_an->add_option("--manifest", manifest_path);

  // closed-form
  int coeffs = 0;
  auto* cmd_cf = app.add_subcommand("closed-form", "tree-group closed forms");
  cmd_cf->add_option("--model", model)->required();
  cmd_cf->add_option("--lambda", lambda);
  cmd_cf->add_option("--z", z, "evaluate chi at z");
  cmd_cf->add_option("--coeffs", coeffs, "emit N Taylor coefficients");
  cmd_cf->add_option("--out", out_path, "CSV output (default stdout)");

  // sample
  std::string method = "exact";
  std::int64_t count = 1000;
  int sample_n = 10;
  auto* cmd_sm = app.add_subcommand("sample", "tilted measure sampling");
  cmd_sm->add_option("--model", model)->required();
  cmd_sm->add_option("--weight", weight);
  cmd_sm->add_option("--lambda", lambda);
  cmd_sm->add_option("--n", sample_n, "walk length");
  cmd_sm->add_option("--count", count, "number of samples");
  cmd_sm->add_option("--method", method, "exact | rosenbluth");
  cmd_sm->add_option("--seed", seed);
  cmd_sm->add_option("--threads", threads);
  cmd_sm->add_option("--out", out_path, "CSV output path")->required();
  cmd_sm->add_option("--manifest", manifest_path);

  // verify
  auto* cmd_vf = app.add_subcommand("verify", "exact identity + property suite");
  cmd_vf->add_option("--model", model)->required();
  cmd_vf->add_option("--weight", weight);
  cmd_vf->add_option("--nmax", nmax);
  cmd_vf->add_option("--seed", seed);
  cmd_vf->add_option("--threads", threads);
  cmd_vf->add_option("--manifest", manifest_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  Timer timer;
  cache_dir = default_cache_dir(cache_dir);

  if (cmd_enum->parsed()) {
    json cfg = {{"model", model}, {"weight", weight}, {"nmax", nmax},
                {"cache_dir", cache_dir}, {"threads", threads}};
    tw_tables* t = nullptr;
    int cache_hit = 0;
    check(tw_enumerate(model.c_str(), weight.c_str(), nmax, threads, 0,
                       cache_dir.empty() ? nullptr : cache_dir.c_str(), &t, &cache_hit),
          "enumerate");
    char* csv = nullptr;
    check(tw_tables_csv(t, &csv), "csv");
    std::string body = take_string(csv);
    write_file(out_path, body);
    tw_tables_free(t);
    std::cerr << "wrote " << out_path << (cache_hit ? " (cache hit)" : "") << "\n";
    if (!manifest_path.empty()) {
      json m = manifest_base("enumerate", cfg);
      m["cache_hit"] = cache_hit != 0;
      manifest_output(m, out_path, body);
      finish_manifest(m, manifest_path, timer.seconds(), true);
    }
    return kExitOk;
  }

  if (cmd_an->parsed()) {
    json cfg = {{"model", model},   {"weight", weight},       {"nmax", nmax},
                {"lambda_grid", lambda_grid}, {"z_grid", z_grid}, {"tol", tol},
                {"cache_dir", cache_dir},     {"threads", threads}};
    char* rep = nullptr;
    char* csv = nullptr;
    check(tw_analyze(model.c_str(), weight.c_str(), nmax, threads, lambda_grid.c_str(),
                     z_grid.c_str(), tol, cache_dir.empty() ? nullptr : cache_dir.c_str(),
                     &rep, &csv),
          "analyze");
    std::string rep_s = take_string(rep), csv_s = take_string(csv);
    write_file(out_json, rep_s);
    write_file(out_csv, csv_s);
    std::cerr << "wrote " << out_json << ", " << out_csv << "\n";
    json parsed = json::parse(rep_s);
    bool ok = parsed["identities"]["all_ok"].get<bool>() &&
              parsed["midpoints_monotone_below_half"].get<bool>();
    if (!manifest_path.empty()) {
      json m = manifest_base("analyze", cfg);
      manifest_output(m, out_json, rep_s);
      manifest_output(m, out_csv, csv_s);
      finish_manifest(m, manifest_path, timer.seconds(), ok);
    }
    if (!ok) {
      std::cerr << "invariant violation: see " << out_json << "\n";
      return kExitViolation;
    }
    return kExitOk;
  }

  if (cmd_cf->parsed()) {
    std::ostringstream body;
    if (coeffs > 0) {
      char* csv = nullptr;
      check(tw_closed_form_coeffs(model.c_str(), lambda, coeffs, &csv), "closed-form");
      body << take_string(csv);
    } else if (z >= 0) {
      double chi = 0, zc = 0, alpha = 0;
      check(tw_closed_form_chi(model.c_str(), z, lambda, &chi), "closed-form chi");
      check(tw_closed_form_zc(model.c_str(), lambda, &zc), "closed-form zc");
      check(tw_closed_form_alpha(model.c_str(), z, &alpha), "closed-form alpha");
      body.precision(12);
      body << "quantity,value\nchi," << chi << "\nzc_lambda," << zc << "\nalpha,"
           << alpha << "\n";
    } else {
      std::cerr << "closed-form: pass --coeffs N or --z Z\n";
      return kExitUsage;
    }
    if (out_path.empty())
      std::cout << body.str();
    else
      write_file(out_path, body.str());
    return kExitOk;
  }

  if (cmd_sm->parsed()) {
    json cfg = {{"model", model}, {"weight", weight}, {"lambda", lambda},
                {"n", sample_n},  {"count", count},   {"method", method},
                {"seed", seed},   {"threads", threads}};
    char* csv = nullptr;
    char* drift = nullptr;
    check(tw_sample(model.c_str(), weight.c_str(), lambda, sample_n, count,
                    method.c_str(), seed, threads, &csv, &drift),
          "sample");
    std::string csv_s = take_string(csv), drift_s = take_string(drift);
    write_file(out_path, csv_s);
    std::cout << drift_s << "\n";
    std::cerr << "wrote " << out_path << "\n";
    if (!manifest_path.empty()) {
      json m = manifest_base("sample", cfg);
      manifest_output(m, out_path, csv_s);
      m["drift"] = json::parse(drift_s);
      finish_manifest(m, manifest_path, timer.seconds(), true);
    }
    return kExitOk;
  }

  if (cmd_vf->parsed()) {
    json cfg = {{"model", model}, {"weight", weight}, {"nmax", nmax}, {"seed", seed},
                {"threads", threads}};
    char* rep = nullptr;
    check(tw_verify_run(model.c_str(), weight.c_str(), nmax, threads, seed, &rep),
          "verify");
    std::string rep_s = take_string(rep);
    json parsed = json::parse(rep_s);
    for (auto& [name, pass] : parsed["verdicts"].items())
      std::cout << (pass.get<bool>() ? "PASS " : "FAIL ") << name << "\n";
    bool ok = parsed["all_passed"].get<bool>();
    if (manifest_path.empty()) manifest_path = "verify_manifest.json";
    json m = manifest_base("verify", cfg);
    m["report"] = parsed;
    finish_manifest(m, manifest_path, timer.seconds(), ok);
    return ok ? kExitOk : kExitViolation;
  }

  return kExitUsage;
}
