#include "core/sampling.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "core/transfer.hpp"

namespace tw {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t idx) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(idx + 1)));
}

int pick_weighted(const std::vector<long double>& w, long double total,
                  std::mt19937_64& rng) {
  std::uniform_real_distribution<long double> uni(0.0L, 1.0L);
  long double x = uni(rng) * total;
  long double acc = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (x < acc) return (int)i;
  }
  return (int)w.size() - 1;
}

// tilted suffix counts for the tree transfer classes, normalized per level
// (ratios within a level are all that sampling needs)
std::vector<std::vector<long double>> suffix_counts(const TransferSystem& sys,
                                                    double lambda, int n) {
  int nc = (int)sys.classes.size();
  std::vector<std::vector<long double>> S((std::size_t)n + 1,
                                          std::vector<long double>((std::size_t)nc, 0));
  for (int c = 0; c < nc; ++c) S[0][(std::size_t)c] = 1;
  long double u[3];
  for (int inc = -1; inc <= 1; ++inc)
    u[inc + 1] = std::pow((long double)sys.w_base, (long double)lambda * inc);
  for (int r = 1; r <= n; ++r) {
    long double mx = 0;
    for (int c = 0; c < nc; ++c) {
      long double s = 0;
      for (const auto& [c2, mult] : sys.classes[(std::size_t)c].next)
        s += (long double)mult * u[sys.classes[(std::size_t)c2].height_inc + 1] *
             S[(std::size_t)r - 1][(std::size_t)c2];
      S[(std::size_t)r][(std::size_t)c] = s;
      mx = std::max(mx, s);
    }
    if (mx > 0)
      for (int c = 0; c < nc; ++c) S[(std::size_t)r][(std::size_t)c] /= mx;
  }
  return S;
}

SampleRun sample_exact_tree(const GraphModel& model, double lambda, int n,
                            std::int64_t count, std::uint64_t seed) {
  if (n > 1000) fail(ErrorCode::SizeLimit, "exact tree sampling supports n <= 1000");
  TransferSystem sys = transfer_system(model);
  SampleRun run;
  run.model = model.describe();
  run.weight = "saw";
  run.method = "exact-suffix";
  run.lambda = lambda;
  run.n = n;
  run.seed = seed;
  run.ess = (double)count;
  if (count <= 0) return run;
  auto S = suffix_counts(sys, lambda, n);
  long double u[3];
  for (int inc = -1; inc <= 1; ++inc)
    u[inc + 1] = std::pow((long double)sys.w_base, (long double)lambda * inc);

  std::mt19937_64 rng = stream_for(seed, 0);
  std::vector<long double> wts;
  for (std::int64_t i = 0; i < count; ++i) {
    int height = 0;
    if (n > 0) {
      // first step from the root
      wts.clear();
      long double total = 0;
      for (const auto& [c, mult] : sys.start) {
        long double v = (long double)mult * u[sys.classes[(std::size_t)c].height_inc + 1] *
                        S[(std::size_t)n - 1][(std::size_t)c];
        wts.push_back(v);
        total += v;
      }
      int pick = pick_weighted(wts, total, rng);
      int cls = sys.start[(std::size_t)pick].first;
      height += sys.classes[(std::size_t)cls].height_inc;
      for (int step = 1; step < n; ++step) {
        const auto& nx = sys.classes[(std::size_t)cls].next;
        wts.clear();
        long double tot = 0;
        for (const auto& [c2, mult] : nx) {
          long double v = (long double)mult *
                          u[sys.classes[(std::size_t)c2].height_inc + 1] *
                          S[(std::size_t)(n - step - 1)][(std::size_t)c2];
          wts.push_back(v);
          tot += v;
        }
        int p2 = pick_weighted(wts, tot, rng);
        cls = nx[(std::size_t)p2].first;
        height += sys.classes[(std::size_t)cls].height_inc;
      }
    }
    // non-backtracking tree walks are geodesics: distance equals length
    run.rows.push_back({i, height, n, 0.0});
  }
  return run;
}

SampleRun sample_exact_enumerated(const GraphModel& model, const Weight& w,
                                  const WalkTables& t, double lambda, int n,
                                  std::int64_t count, std::uint64_t seed) {
  if (!t.has_two_point)
    fail(ErrorCode::Usage, "exact enumerated sampling needs the two-point decomposition");
  if (n > t.nmax)
    fail(ErrorCode::Usage,
         "n exceeds the enumerated reach; use method=rosenbluth for larger n");
  SampleRun run;
  run.model = model.describe();
  run.weight = w.name();
  run.method = "exact-enumerated";
  run.lambda = lambda;
  run.n = n;
  run.seed = seed;
  run.ess = (double)count;
  if (count <= 0) return run;

  // exact endpoint law over (height, distance) cells
  struct Cell {
    int h, d;
    long double p;
  };
  std::vector<Cell> cells;
  long double total = 0;
  for (int v = 0; v < t.vertex_count; ++v) {
    const BigInt& c = t.g_part(v, n);
    if (c == 0) continue;
    long double p = (long double)c.get_d() *
                    std::pow((long double)t.w_base,
                             (long double)lambda * t.tp_height[(std::size_t)v]);
    cells.push_back({t.tp_height[(std::size_t)v], t.tp_dist[(std::size_t)v], p});
    total += p;
  }
  std::vector<long double> cum;
  cum.reserve(cells.size());
  long double acc = 0;
  for (const auto& c : cells) {
    acc += c.p;
    cum.push_back(acc);
  }
  std::mt19937_64 rng = stream_for(seed, 0);
  std::uniform_real_distribution<long double> uni(0.0L, 1.0L);
  for (std::int64_t i = 0; i < count; ++i) {
    long double x = uni(rng) * total;
    std::size_t lo = std::lower_bound(cum.begin(), cum.end(), x) - cum.begin();
    if (lo >= cells.size()) lo = cells.size() - 1;
    run.rows.push_back({i, cells[lo].h, cells[lo].d, 0.0});
  }
  return run;
}

}  // namespace

SampleRun sample_exact(const GraphModel& model, const Weight& w,
                       const WalkTables* tables, double lambda, int n,
                       std::int64_t count, std::uint64_t seed) {
  if (n < 0) fail(ErrorCode::Usage, "n must be >= 0");
  if (transfer_supported(model) && w.name() == "saw")
    return sample_exact_tree(model, lambda, n, count, seed);
  if (tables == nullptr)
    fail(ErrorCode::Usage, "exact sampling on this model/weight needs tables");
  return sample_exact_enumerated(model, w, *tables, lambda, n, count, seed);
}

SampleRun sample_rosenbluth(const GraphModel& model, const Weight& w, double lambda,
                            int n, std::int64_t count, std::uint64_t seed, int threads) {
  if (n < 1) fail(ErrorCode::Usage, "rosenbluth needs n >= 1");
  SampleRun run;
  run.model = model.describe();
  run.weight = w.name();
  run.method = "rosenbluth";
  run.lambda = lambda;
  run.n = n;
  run.seed = seed;
  if (count <= 0) return run;
  run.rows.resize((std::size_t)count);
  std::vector<char> kept((std::size_t)count, 0);

  double t0 = model.tau();
  long double tilt[3];
  for (int inc = -1; inc <= 1; ++inc)
    tilt[inc + 1] = std::exp((long double)lambda * t0 * inc);

  std::atomic<std::int64_t> next{0};
  std::atomic<std::int64_t> discarded{0};
  int nthreads = threads > 0 ? threads
                             : (int)std::max(1u, std::thread::hardware_concurrency());

  auto worker = [&]() {
    struct LocalIntern {
      std::unordered_map<Address, VertexId, AddressHash> map;
      VertexId get(const Address& a) {
        auto [it, fresh] = map.emplace(a, (VertexId)map.size());
        return it->second;
      }
    };
    std::vector<long double> wts;
    std::vector<int> moves;
    for (;;) {
      std::int64_t i = next.fetch_add(1);
      if (i >= count) break;
      std::mt19937_64 rng = stream_for(seed, (std::uint64_t)i);
      LocalIntern local;
      Address cur;
      if (model.kind() == ModelKind::ProductTreeZd)
        cur.lattice.assign((std::size_t)model.params().d, 0);
      VertexId cur_id = local.get(cur);
      auto st = w.start(cur_id);
      std::int64_t mark = 0;
      int height = 0;
      long double log_w = 0;
      bool trapped = false;
      for (int step = 0; step < n; ++step) {
        wts.clear();
        moves.clear();
        long double total = 0;
        for (int mi = 0; mi < (int)model.moves().size(); ++mi) {
          Address na = model.apply_move(cur, mi);
          VertexId nid = local.get(na);
          StepOutcome o = st->extend(nid, model.moves()[(std::size_t)mi]);
          st->undo_last();
          if (!o.admissible) continue;
          long double f =
              std::exp((long double)w.bin_log_weight(mark + o.mark_delta, step + 1) -
                       (long double)w.bin_log_weight(mark, step));
          long double v = f * tilt[model.moves()[(std::size_t)mi].height_inc + 1];
          wts.push_back(v);
          moves.push_back(mi);
        }
        if (wts.empty()) {
          trapped = true;
          break;
        }
        for (long double v : wts) total += v;
        int pick = pick_weighted(wts, total, rng);
        int mi = moves[(std::size_t)pick];
        cur = model.apply_move(cur, mi);
        cur_id = local.get(cur);
        StepOutcome o = st->extend(cur_id, model.moves()[(std::size_t)mi]);
        mark += o.mark_delta;
        height += model.moves()[(std::size_t)mi].height_inc;
        log_w += std::log(total);
      }
      if (trapped) {
        discarded.fetch_add(1);
        continue;
      }
      run.rows[(std::size_t)i] = {i, height, GraphModel::address_dist_root(cur),
                                  (double)log_w};
      kept[(std::size_t)i] = 1;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::vector<SampleRow> rows;
  rows.reserve((std::size_t)count);
  for (std::int64_t i = 0; i < count; ++i)
    if (kept[(std::size_t)i]) rows.push_back(run.rows[(std::size_t)i]);
  run.rows = std::move(rows);
  run.discarded = discarded.load();
  run.discard_rate = (double)run.discarded / (double)count;

  // effective sample size from the importance weights (log-sum-exp)
  if (!run.rows.empty()) {
    double mx = run.rows[0].log_weight;
    for (const auto& r : run.rows) mx = std::max(mx, r.log_weight);
    long double s1 = 0, s2 = 0;
    for (const auto& r : run.rows) {
      long double v = std::exp((long double)(r.log_weight - mx));
      s1 += v;
      s2 += v * v;
    }
    run.ess = (double)(s1 * s1 / s2);
  }
  return run;
}

DriftReport drift_report(const SampleRun& run) {
  DriftReport rep;
  rep.samples = (std::int64_t)run.rows.size();
  rep.ess = run.ess;
  rep.discard_rate = run.discard_rate;
  if (run.rows.empty() || run.n == 0) {
    for (double c = 0.05; c <= 0.751; c += 0.05) rep.tail.emplace_back(c, 0.0);
    return rep;
  }
  double mx = 0;
  for (const auto& r : run.rows) mx = std::max(mx, r.log_weight);
  long double sw = 0, sd = 0, sd2 = 0, sh = 0, sh2 = 0;
  for (const auto& r : run.rows) {
    long double v = std::exp((long double)(r.log_weight - mx));
    long double dn = (long double)r.distance / run.n;
    long double hn = (long double)r.height_units / run.n;
    sw += v;
    sd += v * dn;
    sd2 += v * dn * dn;
    sh += v * hn;
    sh2 += v * hn * hn;
  }
  rep.mean_dist_over_n = (double)(sd / sw);
  rep.mean_height_over_n = (double)(sh / sw);
  double sgn = run.lambda < 0.5 ? -1.0 : (run.lambda > 0.5 ? 1.0 : 0.0);
  rep.mean_signed_height_over_n = sgn * rep.mean_height_over_n;
  double neff = run.ess > 0 ? run.ess : (double)run.rows.size();
  double var_d = std::max(0.0, (double)(sd2 / sw) - rep.mean_dist_over_n * rep.mean_dist_over_n);
  double var_h =
      std::max(0.0, (double)(sh2 / sw) - rep.mean_height_over_n * rep.mean_height_over_n);
  rep.se_dist_over_n = std::sqrt(var_d / neff);
  rep.se_height_over_n = std::sqrt(var_h / neff);
  for (double c = 0.05; c <= 0.751; c += 0.05) {
    long double hit = 0;
    for (const auto& r : run.rows) {
      long double v = std::exp((long double)(r.log_weight - mx));
      if (r.distance < c * run.n) hit += v;
    }
    rep.tail.emplace_back(c, (double)(hit / sw));
  }
  return rep;
}

}  // namespace tw
