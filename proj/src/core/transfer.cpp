#include "core/transfer.hpp"

#include <cmath>

namespace tw {

namespace {

// class indices
constexpr int kUp = 0;
constexpr int kDown = 1;
constexpr int kFlat = 2;

}  // namespace

bool transfer_supported(const GraphModel& model) {
  return model.kind() == ModelKind::EndFixedTree ||
         model.kind() == ModelKind::OrientedTree112;
}

TransferSystem transfer_system(const GraphModel& model) {
  TransferSystem sys;
  sys.w_base = model.w_base();
  int k = model.params().k;
  switch (model.kind()) {
    case ModelKind::EndFixedTree:
      sys.classes.resize(2);
      sys.classes[kUp] = {+1, {{kUp, 1}, {kDown, k - 2}}};
      sys.classes[kDown] = {-1, {{kDown, k - 1}}};
      sys.start = {{kUp, 1}, {kDown, k - 1}};
      break;
    case ModelKind::OrientedTree112:
      sys.classes.resize(3);
      sys.classes[kUp] = {+1, {{kUp, 1}, {kDown, 1}, {kFlat, 1}}};
      sys.classes[kDown] = {-1, {{kDown, 2}, {kFlat, 1}}};
      sys.classes[kFlat] = {0, {{kUp, 1}, {kDown, 2}}};
      sys.start = {{kUp, 1}, {kDown, 2}, {kFlat, 1}};
      break;
    default:
      fail(ErrorCode::Unsupported, "transfer fast path needs a tree model with SAW");
  }
  return sys;
}

namespace {

// rows indexed [class][h + nmax]
struct BigRows {
  int nmax;
  int nclasses;
  std::vector<BigInt> v;
  BigRows(int nmax_, int nc) : nmax(nmax_), nclasses(nc) {
    v.assign((std::size_t)nc * (std::size_t)(2 * nmax + 1), BigInt(0));
  }
  BigInt& at(int c, int h) {
    return v[(std::size_t)c * (std::size_t)(2 * nmax + 1) + (std::size_t)(h + nmax)];
  }
};

void scan_rows(const TransferSystem& sys, int nmax,
               const std::function<void(int, BigRows&)>& fn) {
  int nc = (int)sys.classes.size();
  BigRows cur(nmax, nc), nxt(nmax, nc);
  // n = 0 handled by the caller (trivial walk)
  for (const auto& [c, mult] : sys.start) cur.at(c, sys.classes[(std::size_t)c].height_inc) += mult;
  for (int n = 1; n <= nmax; ++n) {
    fn(n, cur);
    if (n == nmax) break;
    for (auto& x : nxt.v) x = 0;
    for (int c = 0; c < nc; ++c) {
      for (int h = -n; h <= n; ++h) {
        const BigInt& cnt = cur.at(c, h);
        if (cnt == 0) continue;
        for (const auto& [c2, mult] : sys.classes[(std::size_t)c].next) {
          int h2 = h + sys.classes[(std::size_t)c2].height_inc;
          if (mult == 1)
            nxt.at(c2, h2) += cnt;
          else
            nxt.at(c2, h2) += cnt * mult;
        }
      }
    }
    std::swap(cur, nxt);
  }
}

// hook counts on the end-fixed tree: up^a then down^b from the root
BigInt hook_count(int k, int a, int b) {
  if (b == 0) return 1;
  if (a == 0) return bigint_pow((std::uint64_t)(k - 1), (std::uint64_t)b);
  return BigInt(k - 2) * bigint_pow((std::uint64_t)(k - 1), (std::uint64_t)(b - 1));
}

void fill_end_fixed_bridges(WalkTables& t, int k) {
  int nmax = t.nmax;
  t.up_bridge.at(0, 0, 0) = 1;
  t.down_bridge.at(0, 0, 0) = 1;
  t.upper_half.at(0, 0, 0) = 1;
  t.rev_descent.at(0, 0, 0) = 1;
  for (int n = 1; n <= nmax; ++n) {
    t.up_bridge.at(n, n, 0) = 1;  // the up-geodesic
    t.down_bridge.at(n, n, 0) = bigint_pow((std::uint64_t)(k - 1), (std::uint64_t)n);
    // hooks up^a down^b with a >= 1, a + b = n
    for (int a = 1; a <= n; ++a) {
      int b = n - a;
      int m = a - b;
      if (m >= 1) t.upper_half.at(n, m, 0) += hook_count(k, a, b);
      if (m >= 0) t.rev_descent.at(n, m, 0) += hook_count(k, a, b);
    }
  }
}

}  // namespace

WalkTables tree_transfer_tables(const GraphModel& model, int nmax) {
  if (nmax < 0) fail(ErrorCode::Usage, "nmax must be >= 0");
  if (nmax > 1024)
    fail(ErrorCode::SizeLimit,
         "full transfer tables are limited to nmax <= 1024; use the streaming scan");
  TransferSystem sys = transfer_system(model);
  WalkTables t;
  t.model = model.describe();
  t.weight = "saw";
  t.nmax = nmax;
  t.w_base = model.w_base();
  t.partition = ExactTable(nmax, 1);
  t.up_bridge = ExactTable(nmax, 1);
  t.down_bridge = ExactTable(nmax, 1);
  t.upper_half = ExactTable(nmax, 1);
  t.rev_descent = ExactTable(nmax, 1);

  t.partition.at(0, 0, 0) = 1;
  scan_rows(sys, nmax, [&](int n, BigRows& rows) {
    for (int h = -n; h <= n; ++h) {
      BigInt s = 0;
      for (int c = 0; c < (int)sys.classes.size(); ++c) s += rows.at(c, h);
      if (s != 0) t.partition.at(n, h, 0) = s;
    }
  });

  if (model.kind() == ModelKind::EndFixedTree)
    fill_end_fixed_bridges(t, model.params().k);
  return t;
}

void transfer_row_scan(const GraphModel& model, int nmax,
                       const std::function<void(int, const std::vector<BigInt>&)>& row) {
  TransferSystem sys = transfer_system(model);
  std::vector<BigInt> sums((std::size_t)(2 * nmax + 1));
  sums[(std::size_t)nmax] = 1;
  row(0, sums);
  if (nmax == 0) return;
  scan_rows(sys, nmax, [&](int n, BigRows& rows) {
    for (auto& s : sums) s = 0;
    for (int h = -n; h <= n; ++h) {
      BigInt s = 0;
      for (int c = 0; c < (int)sys.classes.size(); ++c) s += rows.at(c, h);
      sums[(std::size_t)(h + nmax)] = s;
    }
    row(n, sums);
  });
}

// ---- numeric evidence ------------------------------------------------------

namespace {

// dense multiplicity matrix: mult[c2][c1] = ways class c1 continues into c2
struct DenseSystem {
  int nc;
  int inc[4];
  long double mult[4][4];
  std::vector<std::pair<int, int>> start;
  std::uint64_t w_base;

  explicit DenseSystem(const TransferSystem& sys) : nc((int)sys.classes.size()) {
    for (int c2 = 0; c2 < nc; ++c2)
      for (int c1 = 0; c1 < nc; ++c1) mult[c2][c1] = 0;
    for (int c = 0; c < nc; ++c) {
      inc[c] = sys.classes[(std::size_t)c].height_inc;
      for (const auto& [c2, m] : sys.classes[(std::size_t)c].next)
        mult[c2][c] = (long double)m;
    }
    start = sys.start;
    w_base = sys.w_base;
  }
};

}  // namespace

EndpointProfile endpoint_profile(const GraphModel& model, long double z, int L, int B) {
  DenseSystem sys(transfer_system(model));
  int nc = sys.nc;
  EndpointProfile out;
  out.B = B;
  out.L = L;
  std::size_t width = (std::size_t)(B + L + 1);
  out.g.assign(width, 0.0L);
  out.g_late.assign(width, 0.0L);
  out.half_tilted.assign((std::size_t)L + 1, 0.0L);

  long double sqw = std::sqrt((long double)model.w_base());

  // state[c][h + B], z^len-scaled; support is [-min(len,B), len]
  std::vector<std::vector<long double>> cur((std::size_t)nc,
                                            std::vector<long double>(width, 0.0L));
  auto nxt = cur;

  out.g[(std::size_t)B] += 1.0L;  // trivial walk
  out.half_tilted[0] = 1.0L;
  for (const auto& [c, mult] : sys.start)
    cur[(std::size_t)c][(std::size_t)(sys.inc[c] + B)] += (long double)mult * z;

  std::vector<long double> tilt_pow(width);
  for (std::size_t i = 0; i < width; ++i)
    tilt_pow[i] = std::pow(sqw, (long double)((int)i - B));

  for (int n = 1; n <= L; ++n) {
    int lo = -std::min(n, B), hi = n;
    long double t_sum = 0;
    for (int c = 0; c < nc; ++c) {
      const long double* row = cur[(std::size_t)c].data();
      long double* g = out.g.data();
      for (int i = lo + B; i <= hi + B; ++i) {
        g[i] += row[i];
        t_sum += row[i] * tilt_pow[(std::size_t)i];
      }
      if (n > L - 64) {
        long double* gl = out.g_late.data();
        for (int i = lo + B; i <= hi + B; ++i) gl[i] += row[i];
      }
    }
    out.half_tilted[(std::size_t)n] = t_sum;
    if (n == L) break;
    for (auto& r : nxt) std::fill(r.begin(), r.end(), 0.0L);
    for (int c2 = 0; c2 < nc; ++c2) {
      long double* dst = nxt[(std::size_t)c2].data();
      int shift = sys.inc[c2];
      const long double m0 = z * sys.mult[c2][0];
      const long double m1 = nc > 1 ? z * sys.mult[c2][1] : 0.0L;
      const long double m2 = nc > 2 ? z * sys.mult[c2][2] : 0.0L;
      const long double* r0 = cur[0].data();
      const long double* r1 = nc > 1 ? cur[1].data() : nullptr;
      const long double* r2 = nc > 2 ? cur[2].data() : nullptr;
      for (int i = lo + B; i <= hi + B; ++i) {
        long double s = m0 * r0[i];
        if (r1) s += m1 * r1[i];
        if (r2) s += m2 * r2[i];
        int j = i + shift;
        if (j < 0) {
          out.clip_flux += s;
        } else {
          dst[(std::size_t)j] = s;
        }
      }
    }
    std::swap(cur, nxt);
  }
  return out;
}

long double up_bridge_gf(const GraphModel& model, long double z, int n, int L) {
  DenseSystem sys(transfer_system(model));
  int nc = sys.nc;
  std::size_t width = (std::size_t)n + 1;
  std::vector<std::vector<long double>> cur((std::size_t)nc,
                                            std::vector<long double>(width, 0.0L));
  auto nxt = cur;
  long double acc = (n == 0) ? 1.0L : 0.0L;  // trivial walk is an up-bridge
  for (const auto& [c, mult] : sys.start) {
    int h = sys.inc[c];
    if (h >= 0 && h <= n) cur[(std::size_t)c][(std::size_t)h] += (long double)mult * z;
  }
  for (int len = 1; len <= L; ++len) {
    for (int c = 0; c < nc; ++c) acc += cur[(std::size_t)c][(std::size_t)n];
    if (len == L) break;
    for (int c2 = 0; c2 < nc; ++c2) {
      long double* dst = nxt[(std::size_t)c2].data();
      int shift = sys.inc[c2];
      const long double m0 = z * sys.mult[c2][0];
      const long double m1 = nc > 1 ? z * sys.mult[c2][1] : 0.0L;
      const long double m2 = nc > 2 ? z * sys.mult[c2][2] : 0.0L;
      const long double* r0 = cur[0].data();
      const long double* r1 = nc > 1 ? cur[1].data() : nullptr;
      const long double* r2 = nc > 2 ? cur[2].data() : nullptr;
      for (int j = 0; j <= n; ++j) {
        int i = j - shift;  // source height
        long double s = 0;
        if (i >= 0 && i <= n) {
          s = m0 * r0[i];
          if (r1) s += m1 * r1[i];
          if (r2) s += m2 * r2[i];
        }
        dst[(std::size_t)j] = s;
      }
    }
    std::swap(cur, nxt);
  }
  return acc;
}

}  // namespace tw
