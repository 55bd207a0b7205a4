#include "tiltedwalk.h"

#include <cstdlib>
#include <cstring>
#include <sstream>

#include "core/analysis.hpp"
#include "core/closed_forms.hpp"
#include "core/enumerate.hpp"
#include "core/runio.hpp"
#include "core/sampling.hpp"
#include "core/transfer.hpp"

using nlohmann::json;

struct tw_model {
  tw::GraphModel m;
};

struct tw_tables {
  tw::WalkTables t;
  std::unique_ptr<tw::Weight> w;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* p = (char*)std::malloc(s.size() + 1);
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <typename Fn>
tw_status wrap(Fn&& fn) {
  try {
    fn();
    return TW_OK;
  } catch (const tw::Error& e) {
    g_last_error = e.what();
    switch (e.code()) {
      case tw::ErrorCode::Usage: return TW_ERR_USAGE;
      case tw::ErrorCode::BallTooSmall: return TW_ERR_BALL_TOO_SMALL;
      case tw::ErrorCode::SizeLimit: return TW_ERR_LIMIT;
      case tw::ErrorCode::Unsupported: return TW_ERR_UNSUPPORTED;
      case tw::ErrorCode::Io: return TW_ERR_IO;
      case tw::ErrorCode::Diverged: return TW_ERR_DIVERGED;
      default: return TW_ERR_INTERNAL;
    }
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TW_ERR_INTERNAL;
  }
}

void require(bool cond, const char* msg) {
  if (!cond) tw::fail(tw::ErrorCode::Usage, msg);
}

std::vector<double> parse_grid(const char* csv) {
  std::vector<double> out;
  if (csv == nullptr) return out;
  std::string s(csv);
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto comma = s.find(',', pos);
    std::string item =
        s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) out.push_back(std::stod(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

const tw::ExactTable& table_by_kind(const tw::WalkTables& t, const std::string& kind) {
  if (kind == "N") return t.partition;
  if (kind == "a") return t.up_bridge;
  if (kind == "d") return t.down_bridge;
  if (kind == "h") return t.upper_half;
  if (kind == "r") return t.rev_descent;
  tw::fail(tw::ErrorCode::Usage, "unknown table kind '" + kind + "'");
}

// exact Laurent coefficient of the enumerated tilted series at length n
tw::Laurent enumerated_coeff(const tw::WalkTables& t, int n) {
  tw::Laurent c;
  for (int m = -n; m <= n; ++m) {
    tw::BigInt v = t.partition.count(n, m);
    if (v != 0) c.add_term(m, v);
  }
  return c;
}

json oriented_numerator_json(int nmax) {
  tw::GraphModel model(tw::parse_model_descriptor("oriented-tree-112"));
  model.seal(nmax);
  auto w = tw::make_weight("saw");
  tw::EnumerateOptions opt;
  opt.nmax = nmax;
  tw::WalkTables t = tw::enumerate_walks(model, *w, opt);
  auto cand_3z2 =
      tw::oriented_chi_candidate_coeffs(tw::OrientedNumerator::OneMinus3z2, nmax);
  auto cand_z2 =
      tw::oriented_chi_candidate_coeffs(tw::OrientedNumerator::OneMinusZ2, nmax);
  bool match_3z2 = true, match_z2 = true;
  int first_mismatch_3z2 = -1, first_mismatch_z2 = -1;
  for (int n = 0; n <= nmax; ++n) {
    tw::Laurent e = enumerated_coeff(t, n);
    if (match_3z2 && !(e == cand_3z2[(std::size_t)n])) {
      match_3z2 = false;
      first_mismatch_3z2 = n;
    }
    if (match_z2 && !(e == cand_z2[(std::size_t)n])) {
      match_z2 = false;
      first_mismatch_z2 = n;
    }
  }
  json out;
  out["nmax"] = nmax;
  out["candidate_1_minus_3z2_matches"] = match_3z2;
  out["candidate_1_minus_z2_matches"] = match_z2;
  out["first_mismatch_1_minus_3z2"] = first_mismatch_3z2;
  out["first_mismatch_1_minus_z2"] = first_mismatch_z2;
  out["resolved"] = (match_3z2 != match_z2);
  out["verdict"] = match_z2 && !match_3z2 ? "1-z^2"
                   : (match_3z2 && !match_z2 ? "1-3z^2" : "unresolved");
  return out;
}

}  // namespace

extern "C" {

const char* tw_version(void) { return "1.0.0"; }
const char* tw_last_error(void) { return g_last_error.c_str(); }
void tw_string_free(char* s) { std::free(s); }

tw_status tw_model_create(const char* descriptor, tw_model** out) {
  return wrap([&] {
    require(descriptor && out, "null argument");
    *out = new tw_model{tw::GraphModel(tw::parse_model_descriptor(descriptor))};
  });
}

void tw_model_free(tw_model* m) { delete m; }

tw_status tw_model_seal(tw_model* m, int radius) {
  return wrap([&] {
    require(m, "null model");
    m->m.seal(radius);
  });
}

tw_status tw_model_vertex_count(const tw_model* m, uint64_t* out) {
  return wrap([&] {
    require(m && out, "null argument");
    *out = m->m.vertex_count();
  });
}

tw_status tw_model_degree(const tw_model* m, int* out) {
  return wrap([&] {
    require(m && out, "null argument");
    *out = m->m.degree();
  });
}

tw_status tw_model_wbase(const tw_model* m, uint64_t* out) {
  return wrap([&] {
    require(m && out, "null argument");
    *out = m->m.w_base();
  });
}

tw_status tw_model_tau(const tw_model* m, double* out) {
  return wrap([&] {
    require(m && out, "null argument");
    *out = m->m.tau();
  });
}

tw_status tw_model_neighbors(tw_model* m, uint32_t v, tw_neighbor* buf, int cap,
                             int* out_n) {
  return wrap([&] {
    require(m && buf && out_n, "null argument");
    auto nbrs = m->m.neighbors(v);
    require(cap >= (int)nbrs.size(), "neighbor buffer too small");
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      buf[i].id = nbrs[i].id;
      buf[i].height_inc = nbrs[i].height_inc;
      std::snprintf(buf[i].label, sizeof buf[i].label, "%s",
                    nbrs[i].move->label.c_str());
    }
    *out_n = (int)nbrs.size();
  });
}

tw_status tw_model_height(const tw_model* m, uint32_t v, int* out) {
  return wrap([&] {
    require(m && out, "null argument");
    *out = m->m.height_units(v);
  });
}

tw_status tw_model_modular_ratio(const tw_model* m, uint32_t u, uint32_t v,
                                 double* out) {
  return wrap([&] {
    require(m && out, "null argument");
    *out = m->m.modular_ratio(u, v);
  });
}

tw_status tw_model_graph_distance(const tw_model* m, uint32_t u, uint32_t v, int* out) {
  return wrap([&] {
    require(m && out, "null argument");
    *out = m->m.graph_distance(u, v);
  });
}

tw_status tw_weight_properties(const char* model_desc, const char* weight_desc,
                               int trials, int max_len, uint64_t seed,
                               char** json_out) {
  return wrap([&] {
    require(model_desc && weight_desc && json_out, "null argument");
    tw::GraphModel model(tw::parse_model_descriptor(model_desc));
    auto w = tw::make_weight(weight_desc);
    auto rep = tw::check_good_properties(model, *w, trials, max_len, seed);
    *json_out = dup_string(tw::to_json(rep).dump());
  });
}

tw_status tw_enumerate(const char* model_desc, const char* weight_desc, int nmax,
                       int threads, int want_two_point, const char* cache_dir_or_null,
                       tw_tables** out, int* cache_hit_or_null) {
  return wrap([&] {
    require(model_desc && weight_desc && out, "null argument");
    tw::EnumerateRequest req;
    req.model_desc = model_desc;
    req.weight_desc = weight_desc;
    req.nmax = nmax;
    req.threads = threads;
    req.want_two_point = want_two_point != 0;
    req.cache_dir = cache_dir_or_null ? cache_dir_or_null : "";
    auto outcome = tw::run_enumeration(req);
    auto* h = new tw_tables;
    h->t = std::move(outcome.tables);
    h->w = tw::make_weight(h->t.weight);
    *out = h;
    if (cache_hit_or_null) *cache_hit_or_null = outcome.cache_hit ? 1 : 0;
  });
}

void tw_tables_free(tw_tables* t) { delete t; }

tw_status tw_tables_nmax(const tw_tables* t, int* out) {
  return wrap([&] {
    require(t && out, "null argument");
    *out = t->t.nmax;
  });
}

tw_status tw_tables_count(const tw_tables* t, const char* kind, int n, int m, int mark,
                          char** decimal_out) {
  return wrap([&] {
    require(t && kind && decimal_out, "null argument");
    *decimal_out = dup_string(tw::to_decimal(table_by_kind(t->t, kind).at(n, m, mark)));
  });
}

tw_status tw_tables_csv(const tw_tables* t, char** csv_out) {
  return wrap([&] {
    require(t && csv_out, "null argument");
    *csv_out = dup_string(tw::partition_csv(t->t));
  });
}

tw_status tw_tables_write(const tw_tables* t, const char* path) {
  return wrap([&] {
    require(t && path, "null argument");
    tw::write_tables_file(t->t, path);
  });
}

tw_status tw_tables_read(const char* path, tw_tables** out) {
  return wrap([&] {
    require(path && out, "null argument");
    auto* h = new tw_tables;
    h->t = tw::read_tables_file(path);
    h->w = tw::make_weight(h->t.weight);
    *out = h;
  });
}

tw_status tw_tilted_z(const tw_tables* t, double lambda, int n, double* out) {
  return wrap([&] {
    require(t && out, "null argument");
    *out = (double)tw::tilted_Z(t->t, *t->w, lambda, n);
  });
}

tw_status tw_transfer_tables(const char* model_desc, int nmax, tw_tables** out) {
  return wrap([&] {
    require(model_desc && out, "null argument");
    tw::GraphModel model(tw::parse_model_descriptor(model_desc));
    auto* h = new tw_tables;
    h->t = tw::tree_transfer_tables(model, nmax);
    h->w = tw::make_weight("saw");
    *out = h;
  });
}

tw_status tw_alpha_upper(const tw_tables* t, double z, int n, double* out) {
  return wrap([&] {
    require(t && out, "null argument");
    *out = tw::alpha_upper(t->t, *t->w, z, n);
  });
}

tw_status tw_beta_lower(const tw_tables* t, double z, int n, double* raw_out,
                        double* tail_corrected_out, int* tail_finite_out) {
  return wrap([&] {
    require(t && raw_out, "null argument");
    tw::BetaBound b = tw::beta_lower(t->t, *t->w, z, n);
    *raw_out = b.raw;
    if (tail_corrected_out) *tail_corrected_out = b.tail_corrected;
    if (tail_finite_out) *tail_finite_out = b.tail_finite ? 1 : 0;
  });
}

tw_status tw_zc_bracket(const char* model_desc, const char* weight_desc,
                        const tw_tables* tables_or_null, double lambda, int nmax,
                        double tol, char** json_out) {
  return wrap([&] {
    require(model_desc && weight_desc && json_out, "null argument");
    tw::GraphModel model(tw::parse_model_descriptor(model_desc));
    auto w = tw::make_weight(weight_desc);
    const tw::WalkTables* tbl = tables_or_null ? &tables_or_null->t : nullptr;
    auto br = tw::zc_bracket(model, *w, tbl, lambda, nmax, tol);
    *json_out = dup_string(tw::to_json(br).dump());
  });
}

tw_status tw_verify_identities(const tw_tables* t, char** json_out) {
  return wrap([&] {
    require(t && json_out, "null argument");
    auto rep = tw::verify_identities(t->t, *t->w);
    *json_out = dup_string(tw::to_json(rep).dump());
  });
}

tw_status tw_verify_run(const char* model_desc, const char* weight_desc, int nmax,
                        int threads, uint64_t seed, char** json_out) {
  return wrap([&] {
    require(model_desc && weight_desc && json_out, "null argument");
    json out;
    auto params = tw::parse_model_descriptor(model_desc);
    auto w = tw::make_weight(weight_desc);
    out["model"] = tw::canonical_model_descriptor(params);
    out["weight"] = w->name();
    out["nmax"] = nmax;
    bool all = true;

    tw::EnumerateRequest req;
    req.model_desc = model_desc;
    req.weight_desc = weight_desc;
    req.nmax = nmax;
    req.threads = threads;
    auto outcome = tw::run_enumeration(req);
    const tw::WalkTables& t = outcome.tables;
    out["enumerate_seconds"] = outcome.seconds;

    auto ids = tw::verify_identities(t, *w);
    out["identities"] = tw::to_json(ids);
    out["verdicts"]["mtp_exact"] = ids.mtp_exact;
    out["verdicts"]["bridge_reversal_exact"] = ids.bridge_reversal_exact;
    out["verdicts"]["descent_lift"] = ids.descent_lift_ok;
    out["verdicts"]["diff_inequality"] = ids.diff_inequality_ok;
    all = all && ids.all_ok();

    {
      tw::GraphModel pmodel(params);
      auto prop = tw::check_good_properties(pmodel, *w, 5000, std::min(nmax, 10), seed);
      out["properties"] = tw::to_json(prop);
      out["verdicts"]["good_weight_properties"] = prop.passed();
      all = all && prop.passed();
    }

    // lambda <-> 1-lambda symmetry of the tilted series
    {
      bool sym = true;
      for (double lambda : {0.2, 0.35}) {
        for (int n = 0; n <= nmax; ++n) {
          long double a = tw::tilted_Z(t, *w, lambda, n);
          long double b = tw::tilted_Z(t, *w, 1.0 - lambda, n);
          if (std::abs((double)(a - b)) > 1e-10 * std::max(1.0, (double)std::abs((double)a)))
            sym = false;
        }
      }
      out["verdicts"]["lambda_symmetry"] = sym;
      all = all && sym;
    }

    bool tree_saw = (params.kind != tw::ModelKind::ProductTreeZd) && w->name() == "saw";
    if (tree_saw) {
      tw::GraphModel model(params);
      tw::WalkTables tt = tw::tree_transfer_tables(model, nmax);
      bool agree = tt.partition == t.partition;
      if (params.kind == tw::ModelKind::EndFixedTree) {
        agree = agree && tt.up_bridge == t.up_bridge && tt.down_bridge == t.down_bridge &&
                tt.upper_half == t.upper_half && tt.rev_descent == t.rev_descent;
      }
      out["verdicts"]["transfer_matches_dfs"] = agree;
      all = all && agree;

      bool coeffs = true;
      if (params.kind == tw::ModelKind::EndFixedTree) {
        auto cf = tw::end_fixed_chi_coeffs(params.k, nmax);
        for (int n = 0; n <= nmax; ++n)
          coeffs = coeffs && (enumerated_coeff(t, n) == cf[(std::size_t)n]);
        out["verdicts"]["closed_form_coefficients"] = coeffs;
        all = all && coeffs;
      } else {
        json verdict = oriented_numerator_json(nmax);
        out["oriented_numerator"] = verdict;
        bool resolved = verdict["resolved"].get<bool>();
        out["verdicts"]["oriented_numerator_resolved"] = resolved;
        all = all && resolved;
      }
    }

    out["all_passed"] = all;
    *json_out = dup_string(out.dump());
  });
}

tw_status tw_analyze(const char* model_desc, const char* weight_desc, int nmax,
                     int threads, const char* lambda_grid_csv, const char* z_grid_csv,
                     double tol, const char* cache_dir_or_null, char** json_out,
                     char** brackets_csv_out) {
  return wrap([&] {
    require(model_desc && weight_desc && json_out, "null argument");
    auto params = tw::parse_model_descriptor(model_desc);
    auto w = tw::make_weight(weight_desc);
    std::vector<double> lambdas = parse_grid(lambda_grid_csv);
    if (lambdas.empty()) lambdas = {0.0, 0.25, 0.5};
    std::vector<double> zs = parse_grid(z_grid_csv);

    tw::EnumerateRequest req;
    req.model_desc = model_desc;
    req.weight_desc = weight_desc;
    req.nmax = nmax;
    req.threads = threads;
    req.want_two_point = w->indicator();
    req.cache_dir = (cache_dir_or_null && !req.want_two_point) ? cache_dir_or_null : "";
    auto outcome = tw::run_enumeration(req);
    const tw::WalkTables& t = outcome.tables;
    tw::GraphModel model(params);

    json out;
    out["model"] = t.model;
    out["weight"] = t.weight;
    out["nmax"] = nmax;

    std::ostringstream csv;
    csv << tw::bracket_csv_header();
    std::vector<tw::CriticalBracket> brackets;
    for (double l : lambdas) {
      auto br = tw::zc_bracket(model, *w, &t, l, nmax, tol);
      brackets.push_back(br);
      csv << tw::bracket_csv_row(br);
      out["brackets"].push_back(tw::to_json(br));
    }
    // monotone midpoints on lambda <= 1/2 (sorted subset of the grid)
    {
      std::vector<std::pair<double, double>> mids;
      for (const auto& b : brackets)
        if (b.lambda <= 0.5) mids.push_back({b.lambda, 0.5 * (b.z_lo + b.z_hi)});
      std::sort(mids.begin(), mids.end());
      bool mono = true;
      for (std::size_t i = 1; i < mids.size(); ++i)
        if (mids[i].second < mids[i - 1].second - 1e-12) mono = false;
      out["midpoints_monotone_below_half"] = mono;
    }
    out["identities"] = tw::to_json(tw::verify_identities(t, *w));

    double zt_lo = 0;
    {
      auto zt_br = tw::zc_bracket(model, *w, &t, 0.5, nmax, tol);
      zt_lo = zt_br.z_lo;
      out["zt_bracket"] = tw::to_json(zt_br);
    }
    for (double z : zs) {
      if (z <= 0 || z >= zt_lo) continue;
      out["madras_slade"].push_back(
          tw::to_json(tw::madras_slade_check(model, t, *w, z, zt_lo)));
      if (t.has_two_point) {
        out["decay"].push_back(
            tw::to_json(tw::two_point_decay_check(model, t, *w, z, zt_lo)));
        out["bubble"].push_back(
            tw::to_json(tw::bubble_check(t, *w, z, 2 * std::min(nmax, 14))));
      }
    }
    if (!zs.empty()) out["quant"] = tw::to_json(tw::quant_constants_report(model, t, *w, zs));
    if (params.kind != tw::ModelKind::ProductTreeZd && w->name() == "saw")
      out["hw_diagnostic"] = tw::to_json(tw::hw_diagnostic(model, 256));
    if (params.kind == tw::ModelKind::OrientedTree112 && w->name() == "saw")
      out["oriented_numerator"] = oriented_numerator_json(std::min(nmax, 12));

    *json_out = dup_string(out.dump());
    if (brackets_csv_out) *brackets_csv_out = dup_string(csv.str());
  });
}

tw_status tw_closed_form_chi(const char* model_desc, double z, double lambda,
                             double* out) {
  return wrap([&] {
    require(model_desc && out, "null argument");
    auto params = tw::parse_model_descriptor(model_desc);
    if (params.kind == tw::ModelKind::EndFixedTree)
      *out = tw::end_fixed_chi(params.k, z, lambda);
    else if (params.kind == tw::ModelKind::OrientedTree112)
      *out = tw::oriented_chi_candidate(tw::OrientedNumerator::OneMinusZ2, z, lambda);
    else
      tw::fail(tw::ErrorCode::Unsupported, "no closed form for product models");
  });
}

tw_status tw_closed_form_zc(const char* model_desc, double lambda, double* out) {
  return wrap([&] {
    require(model_desc && out, "null argument");
    auto params = tw::parse_model_descriptor(model_desc);
    if (params.kind == tw::ModelKind::EndFixedTree)
      *out = tw::end_fixed_zc(params.k, lambda);
    else if (params.kind == tw::ModelKind::OrientedTree112)
      *out = tw::oriented_zc(lambda);
    else
      tw::fail(tw::ErrorCode::Unsupported, "no closed form for product models");
  });
}

tw_status tw_closed_form_alpha(const char* model_desc, double z, double* out) {
  return wrap([&] {
    require(model_desc && out, "null argument");
    auto params = tw::parse_model_descriptor(model_desc);
    if (params.kind == tw::ModelKind::EndFixedTree)
      *out = tw::end_fixed_alpha(params.k, z);
    else if (params.kind == tw::ModelKind::OrientedTree112)
      *out = tw::oriented_alpha(z);
    else
      tw::fail(tw::ErrorCode::Unsupported, "no closed form for product models");
  });
}

tw_status tw_closed_form_coeffs(const char* model_desc, double lambda, int count,
                                char** csv_out) {
  return wrap([&] {
    require(model_desc && csv_out, "null argument");
    require(count >= 1, "count must be >= 1");
    auto params = tw::parse_model_descriptor(model_desc);
    std::vector<tw::Laurent> coeffs;
    if (params.kind == tw::ModelKind::EndFixedTree)
      coeffs = tw::end_fixed_chi_coeffs(params.k, count - 1);
    else if (params.kind == tw::ModelKind::OrientedTree112)
      coeffs = tw::oriented_chi_candidate_coeffs(tw::OrientedNumerator::OneMinusZ2,
                                                 count - 1);
    else
      tw::fail(tw::ErrorCode::Unsupported, "no closed form for product models");
    std::ostringstream os;
    os << "n,coeff\n";
    double K = (double)(params.kind == tw::ModelKind::OrientedTree112 ? 2 : params.k - 1);
    bool integral = lambda == 0.0 || lambda == 1.0;
    os.precision(17);
    for (int n = 0; n < count; ++n) {
      if (integral) {
        // c_n(u) = c_n(K/u) by the tilt symmetry, so lambda = 0 and 1 share
        // the exact integer value c_n(1)
        tw::BigInt v = 0;
        for (const auto& [e, c] : coeffs[(std::size_t)n].terms()) v += c;
        os << n << ',' << tw::to_decimal(v) << "\n";
      } else {
        os << n << ',' << coeffs[(std::size_t)n].eval(std::pow(K, lambda)) << "\n";
      }
    }
    *csv_out = dup_string(os.str());
  });
}

tw_status tw_oriented_numerator_verdict(int nmax, char** json_out) {
  return wrap([&] {
    require(json_out, "null argument");
    *json_out = dup_string(oriented_numerator_json(nmax).dump());
  });
}

tw_status tw_sample(const char* model_desc, const char* weight_desc, double lambda,
                    int n, int64_t count, const char* method, uint64_t seed,
                    int threads, char** csv_out, char** drift_json_out) {
  return wrap([&] {
    require(model_desc && weight_desc && method && csv_out, "null argument");
    auto params = tw::parse_model_descriptor(model_desc);
    auto w = tw::make_weight(weight_desc);
    std::string meth(method);
    tw::SampleRun run;
    if (meth == "rosenbluth") {
      tw::GraphModel model(params);
      run = tw::sample_rosenbluth(model, *w, lambda, n, count, seed, threads);
    } else if (meth == "exact") {
      tw::GraphModel model(params);
      bool tree_saw =
          (params.kind != tw::ModelKind::ProductTreeZd) && w->name() == "saw";
      if (tree_saw) {
        run = tw::sample_exact(model, *w, nullptr, lambda, n, count, seed);
      } else {
        tw::EnumerateRequest req;
        req.model_desc = model_desc;
        req.weight_desc = weight_desc;
        req.nmax = n;
        req.threads = threads;
        req.want_two_point = true;
        auto outcome = tw::run_enumeration(req);
        tw::GraphModel m2(params);
        run = tw::sample_exact(m2, *w, &outcome.tables, lambda, n, count, seed);
      }
    } else {
      tw::fail(tw::ErrorCode::Usage, "method must be 'exact' or 'rosenbluth'");
    }
    *csv_out = dup_string(tw::sample_csv(run));
    if (drift_json_out)
      *drift_json_out = dup_string(tw::to_json(tw::drift_report(run)).dump());
  });
}

}  // extern "C"
