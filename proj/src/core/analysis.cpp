#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "core/closed_forms.hpp"
#include "core/transfer.hpp"

namespace tw {

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();

long double bin_factor(const Weight& w, int mark, int n) {
  return std::exp((long double)w.bin_log_weight(mark, n));
}

long double tilt(std::uint64_t w_base, double lambda, int m) {
  return std::pow((long double)w_base, (long double)lambda * (long double)m);
}

}  // namespace

long double tilted_Z(const WalkTables& t, const Weight& w, double lambda, int n) {
  long double s = 0;
  for (int m = -n; m <= n; ++m)
    for (int mark = 0; mark < t.partition.mark_dim(); ++mark) {
      const BigInt& c = t.partition.at(n, m, mark);
      if (c == 0) continue;
      s += (long double)c.get_d() * bin_factor(w, mark, n) * tilt(t.w_base, lambda, m);
    }
  return s;
}

long double tilted_Z_symmetric(const WalkTables& t, const Weight& w, double lambda,
                               int n) {
  long double s = 0;
  for (int m = 0; m <= n; ++m)
    for (int mark = 0; mark < t.partition.mark_dim(); ++mark) {
      const BigInt& c = t.partition.at(n, m, mark);
      if (c == 0) continue;
      long double base = (long double)c.get_d() * bin_factor(w, mark, n);
      if (m == 0)
        s += base;
      else
        s += base * (tilt(t.w_base, lambda, m) + tilt(t.w_base, 1.0 - lambda, m));
    }
  return s;
}

long double chi_truncated(const WalkTables& t, const Weight& w, double z, double lambda) {
  long double s = 0, zp = 1;
  for (int n = 0; n <= t.nmax; ++n, zp *= z) s += zp * tilted_Z(t, w, lambda, n);
  return s;
}

long double halfspace_gf(const WalkTables& t, const Weight& w, long double z, int n) {
  long double s = 0, zp = 1;
  for (int len = 0; len <= t.nmax; ++len, zp *= z) {
    for (int m = std::max(n, -len); m <= len; ++m)
      for (int mark = 0; mark < t.partition.mark_dim(); ++mark) {
        const BigInt& c = t.partition.at(len, m, mark);
        if (c == 0) continue;
        s += zp * (long double)c.get_d() * bin_factor(w, mark, len);
      }
  }
  return s;
}

long double slab_bridge_gf(const WalkTables& t, const Weight& w, long double z, int n) {
  long double s = 0, zp = 1;
  for (int len = 0; len <= t.nmax; ++len, zp *= z) {
    if (n > len) continue;
    for (int mark = 0; mark < t.up_bridge.mark_dim(); ++mark) {
      const BigInt& c = t.up_bridge.at(len, n, mark);
      if (c == 0) continue;
      s += zp * (long double)c.get_d() * bin_factor(w, mark, len);
    }
  }
  return s;
}

// ---- Fekete bounds -------------------------------------------------------------

double alpha_upper(const WalkTables& t, const Weight& w, double z, int n) {
  if (z <= 0 || z > 1) fail(ErrorCode::Usage, "alpha_upper needs z in (0,1]");
  long double A = slab_bridge_gf(t, w, z, n);
  if (A <= 0) return std::numeric_limits<double>::infinity();
  double t0 = std::log((double)t.w_base);
  return (double)(-std::log((long double)z * z * A) / (t0 * (long double)(n + 2)));
}

namespace {

// Rigorous tail of sum_{len>L} z^len Z(1/2;len) via submultiplicativity:
// Z(1/2;len) <= C_a mu_a^len with mu_a = Z(1/2;a)^(1/a). Returns +inf when
// z mu_a >= 1. half[len] = z^len Z(1/2;len).
long double half_tilted_tail(const std::vector<long double>& half, long double z, int L) {
  if (L < 2) return kInf;
  int a = std::max(1, L / 2);
  long double ln_z = std::log(z);
  auto lnZ = [&](int len) { return std::log(half[(std::size_t)len]) - len * ln_z; };
  long double ln_mu = lnZ(a) / a;
  long double ln_C = 0;
  for (int r = 1; r < a; ++r) ln_C = std::max(ln_C, lnZ(r) - r * ln_mu);
  long double q = ln_z + ln_mu;  // log(z mu_a)
  if (q >= 0) return kInf;
  // sum_{len > L} C (z mu)^len = C (z mu)^(L+1) / (1 - z mu)
  return std::exp(ln_C + (long double)(L + 1) * q) / (1.0L - std::exp(q));
}

}  // namespace

BetaBound beta_lower(const WalkTables& t, const Weight& w, double z, int n) {
  if (z <= 0 || z > 1) fail(ErrorCode::Usage, "beta_lower needs z in (0,1]");
  BetaBound out;
  double t0 = std::log((double)t.w_base);
  long double b = halfspace_gf(t, w, z, n);
  if (b <= 0) {
    out.raw = -std::numeric_limits<double>::infinity();
    return out;
  }
  out.raw = (double)(-std::log(b) / (t0 * (long double)(n + 1)));
  std::vector<long double> half((std::size_t)t.nmax + 1);
  long double zp = 1;
  for (int len = 0; len <= t.nmax; ++len, zp *= z)
    half[(std::size_t)len] = zp * tilted_Z(t, w, 0.5, len);
  long double tail = half_tilted_tail(half, z, t.nmax);
  // b_{len,n} <= e^(-n t0 / 2) Z(1/2;len) term by term
  if (std::isfinite((double)tail)) {
    long double full = b + tail * std::exp(-0.5L * (long double)n * (long double)t0);
    out.tail = (double)(full - b);
    out.tail_finite = true;
    out.tail_corrected = (double)(-std::log(full) / (t0 * (long double)(n + 1)));
  } else {
    out.tail = std::numeric_limits<double>::infinity();
    out.tail_corrected = -std::numeric_limits<double>::infinity();
  }
  return out;
}

// ---- bracket evidence ----------------------------------------------------------

namespace {

struct Certificate {
  double value;
  int n;
  bool rigorous;
};

class BracketEvidence {
 public:
  virtual ~BracketEvidence() = default;
  virtual Certificate beta_best(double z) = 0;   // valid lower bound of beta
  virtual Certificate alpha_best(double z) = 0;  // valid upper bound of alpha
  virtual int depth() const = 0;
};

class EndFixedClosedEvidence final : public BracketEvidence {
 public:
  EndFixedClosedEvidence(int k, int max_n) : k_(k), max_n_(max_n) {
    t0_ = std::log((double)(k - 1));
  }
  Certificate beta_best(double z) override {
    Certificate best{-std::numeric_limits<double>::infinity(), 0, true};
    for (int n = 1; n <= max_n_; n = std::max(n + 1, n * 9 / 8)) {
      long double b = end_fixed_halfspace_gf(k_, z, n);
      if (!std::isfinite((double)b) || b <= 0) continue;
      double v = (double)(-std::log(b) / (t0_ * (long double)(n + 1)));
      if (v > best.value) best = {v, n, true};
    }
    return best;
  }
  Certificate alpha_best(double z) override {
    // A(z;n) = z^n exactly (bridges are up-geodesics), so the Fekete value
    // equals alpha(z) at every n
    return {-std::log(z) / t0_, max_n_, true};
  }
  int depth() const override { return max_n_; }

 private:
  int k_, max_n_;
  double t0_;
};

class OrientedNumericEvidence final : public BracketEvidence {
 public:
  // B = L: walks of length <= L never reach the clip, so the profile is the
  // exact truncated series and the only correction is the length tail.
  explicit OrientedNumericEvidence(const GraphModel& model, int L)
      : model_(model), L_(L), B_(L) {
    t0_ = std::log(2.0);
  }

  Certificate beta_best(double z) override {
    ensure(z);
    Certificate best{-std::numeric_limits<double>::infinity(), 0, false};
    if (!have_profile_) return best;
    const auto& g = prof_.g;
    const auto& gl = prof_.g_late;
    // suffix sums over endpoint heights
    long double suffix = 0, suffix_late = 0;
    std::vector<long double> b_n((std::size_t)L_ + 1, 0), late_n((std::size_t)L_ + 1, 0);
    for (int h = L_; h >= 1; --h) {
      suffix += g[(std::size_t)(h + B_)];
      suffix_late += gl[(std::size_t)(h + B_)];
      b_n[(std::size_t)h] = suffix;
      late_n[(std::size_t)h] = suffix_late;
    }
    for (int n = 1; n <= L_; ++n) {
      long double b = b_n[(std::size_t)n];
      if (b <= 0) continue;
      long double tail = tail_base_;
      long double full = b;
      bool rigorous = false;
      if (std::isfinite((double)tail)) {
        full += tail * std::exp(-0.5L * n * (long double)t0_);
        rigorous = true;
      } else if (late_n[(std::size_t)n] > 1e-7L * b) {
        continue;  // visibly unconverged and no rigorous tail: skip
      }
      double v = (double)(-std::log(full) / (t0_ * (long double)(n + 1)));
      if (v > best.value) best = {v, n, rigorous};
    }
    return best;
  }

  Certificate alpha_best(double z) override {
    Certificate best{std::numeric_limits<double>::infinity(), 0, true};
    for (int n : {L_ / 8, L_ / 4, L_ / 2, (3 * L_) / 4}) {
      if (n < 1) continue;
      long double A = up_bridge_gf(model_, z, n, L_);
      if (A <= 0) continue;
      double v = (double)(-std::log((long double)z * z * A) / (t0_ * (long double)(n + 2)));
      if (v < best.value) best = {v, n, true};
    }
    return best;
  }

  int depth() const override { return L_; }

 private:
  void ensure(double z) {
    if (have_profile_ && z == cached_z_) return;
    prof_ = endpoint_profile(model_, z, L_, B_);
    cached_z_ = z;
    have_profile_ = true;
    tail_base_ = half_tilted_tail(prof_.half_tilted, z, L_);
  }

  const GraphModel& model_;
  int L_, B_;
  double t0_;
  double cached_z_ = -1;
  bool have_profile_ = false;
  EndpointProfile prof_;
  long double tail_base_ = 0;
};

class TableEvidence final : public BracketEvidence {
 public:
  TableEvidence(const WalkTables& t, const Weight& w) : t_(t), w_(w) {}
  Certificate beta_best(double z) override {
    Certificate best{-std::numeric_limits<double>::infinity(), 0, false};
    for (int n = 1; n <= t_.nmax; ++n) {
      BetaBound b = beta_lower(t_, w_, z, n);
      double v = b.tail_finite ? b.tail_corrected : b.raw;
      if (v > best.value) best = {v, n, b.tail_finite};
    }
    return best;
  }
  Certificate alpha_best(double z) override {
    Certificate best{std::numeric_limits<double>::infinity(), 0, true};
    for (int n = 1; n <= t_.nmax; ++n) {
      double v = alpha_upper(t_, w_, z, n);
      if (v < best.value) best = {v, n, true};
    }
    return best;
  }
  int depth() const override { return t_.nmax; }

 private:
  const WalkTables& t_;
  const Weight& w_;
};

}  // namespace

CriticalBracket zc_bracket(const GraphModel& model, const Weight& w,
                           const WalkTables* tables, double lambda, int nmax,
                           double tol) {
  if (tol <= 0) fail(ErrorCode::Usage, "tol must be > 0");
  const double maxl = std::max(lambda, 1.0 - lambda);
  const double slack = 1e-9;

  std::unique_ptr<BracketEvidence> ev;
  bool tree_saw = transfer_supported(model) && w.name() == "saw";
  if (tree_saw && model.kind() == ModelKind::EndFixedTree) {
    ev = std::make_unique<EndFixedClosedEvidence>(model.params().k,
                                                  std::max(nmax, 4096));
  } else if (tree_saw) {
    ev = std::make_unique<OrientedNumericEvidence>(model, std::max(nmax, 3072));
  } else {
    if (tables == nullptr)
      fail(ErrorCode::Usage, "zc_bracket needs enumeration tables for this model/weight");
    ev = std::make_unique<TableEvidence>(*tables, w);
  }

  auto below = [&](double z) { return ev->beta_best(z).value > maxl + slack; };
  auto above = [&](double z) { return ev->alpha_best(z).value < maxl - slack; };

  CriticalBracket out;
  out.lambda = lambda;

  // lower edge: largest z certified below z_c
  double lo = 1e-6, hi = 1.0;
  if (!below(lo)) {
    out.flags.push_back("no-lower-certificate");
    out.z_lo = 0;
  } else {
    for (int it = 0; it < 60 && hi - lo > tol / 8; ++it) {
      double mid = 0.5 * (lo + hi);
      if (below(mid))
        lo = mid;
      else
        hi = mid;
    }
    out.z_lo = lo;
  }

  // upper edge: smallest z certified above z_c
  double lo2 = out.z_lo > 0 ? out.z_lo : 1e-6, hi2 = 1.0;
  if (!above(hi2)) {
    out.flags.push_back("no-upper-certificate");
    out.z_hi = 1.0;
  } else {
    for (int it = 0; it < 60 && hi2 - lo2 > tol / 8; ++it) {
      double mid = 0.5 * (lo2 + hi2);
      if (above(mid))
        hi2 = mid;
      else
        lo2 = mid;
    }
    out.z_hi = hi2;
  }

  Certificate cb = ev->beta_best(out.z_lo);
  Certificate ca = ev->alpha_best(out.z_hi);
  out.beta_at_lo = cb.value;
  out.alpha_at_hi = ca.value;
  out.n_lo = cb.n;
  out.n_hi = ca.n;
  out.beta_rigorous = cb.rigorous;
  out.tol_met = (out.z_hi - out.z_lo) <= tol;
  if (!out.tol_met) out.flags.push_back("truncation-limited");
  if (!out.beta_rigorous) out.flags.push_back("beta-heuristic");
  return out;
}

// ---- identities ------------------------------------------------------------------

IdentityReport verify_identities(const WalkTables& t, const Weight& w,
                                 const std::vector<double>& lambdas) {
  IdentityReport rep;
  rep.mtp_exact = true;
  rep.bridge_reversal_exact = true;
  rep.descent_lift_ok = true;
  rep.diff_inequality_ok = true;

  for (int n = 0; n <= t.nmax; ++n)
    for (int m = 0; m <= n; ++m) {
      BigInt wm = bigint_pow(t.w_base, (std::uint64_t)m);
      for (int mark = 0; mark < t.partition.mark_dim(); ++mark) {
        if (t.partition.at(n, -m, mark) != wm * t.partition.at(n, m, mark)) {
          rep.mtp_exact = false;
          rep.violations.push_back("mtp: n=" + std::to_string(n) +
                                   " m=" + std::to_string(m) +
                                   " mark=" + std::to_string(mark));
        }
        if (t.down_bridge.at(n, m, mark) != wm * t.up_bridge.at(n, m, mark)) {
          rep.bridge_reversal_exact = false;
          rep.violations.push_back("bridge-reversal: n=" + std::to_string(n) +
                                   " m=" + std::to_string(m) +
                                   " mark=" + std::to_string(mark));
        }
      }
    }

  // descent lift: prepending the unit up-edge injects reverse descents into
  // upper half-space walks one level and one step higher
  for (int n = 0; n + 1 <= t.nmax; ++n)
    for (int m = 0; m <= n; ++m)
      for (int mark = 0; mark < t.partition.mark_dim(); ++mark) {
        if (t.upper_half.at(n + 1, m + 1, mark) < t.rev_descent.at(n, m, mark)) {
          rep.descent_lift_ok = false;
          rep.violations.push_back("descent-lift: n=" + std::to_string(n) +
                                   " m=" + std::to_string(m));
        }
      }

  const double rel = 1e-9;
  for (double lambda : lambdas) {
    std::vector<long double> Z((std::size_t)t.nmax + 1);
    for (int n = 0; n <= t.nmax; ++n) Z[(std::size_t)n] = tilted_Z(t, w, lambda, n);
    for (int n = 0; n <= t.nmax; ++n) {
      long double lhs = (long double)(n + 1) * Z[(std::size_t)n];
      long double rhs = 0;
      for (int j = 0; j <= n; ++j) rhs += Z[(std::size_t)j] * Z[(std::size_t)(n - j)];
      double margin = (double)((rhs - lhs) / std::max(rhs, 1.0L));
      rep.diff_max_slack = std::min(rep.diff_max_slack, margin);
      if (lhs > rhs * (1 + rel)) {
        rep.diff_inequality_ok = false;
        rep.violations.push_back("diff-ineq: lambda=" + std::to_string(lambda) +
                                 " n=" + std::to_string(n));
      }
    }
  }
  return rep;
}

// ---- bubble -----------------------------------------------------------------------

BubbleReport bubble_check(const WalkTables& t, const Weight& w, double z, int degree) {
  if (!t.has_two_point)
    fail(ErrorCode::Usage, "bubble_check needs the two-point decomposition");
  if (degree > 2 * t.nmax) fail(ErrorCode::Usage, "degree exceeds 2*nmax");
  BubbleReport rep;
  rep.z = z;
  rep.degree = degree;

  // B_j = sum_x sum_{l1+l2=j} G[x][l1] G[x][l2], exact integers for SAW
  std::vector<BigInt> bj((std::size_t)degree + 1, BigInt(0));
  for (int v = 0; v < t.vertex_count; ++v) {
    for (int l1 = 0; l1 <= std::min(t.nmax, degree); ++l1) {
      const BigInt& g1 = t.g_part(v, l1);
      if (g1 == 0) continue;
      for (int l2 = 0; l1 + l2 <= degree && l2 <= t.nmax; ++l2) {
        const BigInt& g2 = t.g_part(v, l2);
        if (g2 == 0) continue;
        bj[(std::size_t)(l1 + l2)] += g1 * g2;
      }
    }
  }
  // X_j = sum_{l1+l2=j} Z(1/2;l1) Z(1/2;l2) exactly in Z[sqrt(W)]
  std::vector<RootInt> zh((std::size_t)t.nmax + 1, RootInt(t.w_base));
  for (int n = 0; n <= t.nmax; ++n) {
    RootInt s(t.w_base);
    for (int m = -n; m <= n; ++m) {
      const BigInt& c = t.partition.at(n, m, 0);
      if (c == 0) continue;
      // W^(m/2) = W^((m+n... use shift by n: multiply everything by W^(n/2)
      RootInt term = half_power(t.w_base, (std::uint64_t)(m + t.nmax));
      term.a *= c;
      term.b *= c;
      s += term;
    }
    zh[(std::size_t)n] = s;  // scaled by W^(nmax/2), common to all n
  }
  rep.degreewise_dominated = true;
  for (int j = 0; j <= degree; ++j) {
    RootInt xj(t.w_base);
    for (int l1 = std::max(0, j - t.nmax); l1 <= std::min(j, t.nmax); ++l1)
      xj += zh[(std::size_t)l1] * zh[(std::size_t)(j - l1)];
    // both sides scaled by W^nmax
    RootInt bscaled(t.w_base);
    bscaled.a = bj[(std::size_t)j] * bigint_pow(t.w_base, (std::uint64_t)t.nmax);
    if (!(bscaled <= xj)) {
      rep.degreewise_dominated = false;
      if (rep.first_bad_degree < 0) rep.first_bad_degree = j;
    }
  }

  long double b_val = 0, zp = 1;
  for (int j = 0; j <= degree; ++j, zp *= z) b_val += zp * (long double)bj[(std::size_t)j].get_d();
  std::vector<long double> zhv((std::size_t)t.nmax + 1);
  for (int n = 0; n <= t.nmax; ++n) zhv[(std::size_t)n] = tilted_Z(t, w, 0.5, n);
  long double x_val = 0;
  zp = 1;
  for (int j = 0; j <= degree; ++j, zp *= z) {
    long double xj = 0;
    for (int l1 = std::max(0, j - t.nmax); l1 <= std::min(j, t.nmax); ++l1)
      xj += zhv[(std::size_t)l1] * zhv[(std::size_t)(j - l1)];
    x_val += zp * xj;
  }
  rep.b_truncated = (double)b_val;
  rep.chi_sq_truncated = (double)x_val;
  rep.value_dominated = b_val <= x_val * (1 + 1e-12L) + 1e-12L;
  return rep;
}

double end_fixed_bubble(int k, double z, int radius) {
  double s = 1.0;
  double sphere = (double)k;
  double zp = z * z;
  for (int r = 1; r <= radius; ++r) {
    s += sphere * zp;
    sphere *= (double)(k - 1);
    zp *= z * z;
  }
  return s;
}

// ---- Madras-Slade -------------------------------------------------------------------

MadrasSladeReport madras_slade_check(const GraphModel& model, const WalkTables& t,
                                     const Weight& w, double z, double zt_lower) {
  if (z >= zt_lower)
    fail(ErrorCode::Usage,
         "madras_slade_check: z must sit below the certified z_t lower edge");
  MadrasSladeReport rep;
  rep.z = z;
  rep.lhs_truncated = (double)chi_truncated(t, w, z, 0.5);
  double t0 = std::log((double)t.w_base);
  long double sum = 0;
  if (model.kind() == ModelKind::EndFixedTree && w.name() == "saw") {
    // a(z; m tau) = z^m: sum_m (z sqrt(W))^m = q/(1-q)
    long double q = (long double)z * std::sqrt((long double)t.w_base);
    if (q >= 1) fail(ErrorCode::Diverged, "bridge series diverges at this z");
    sum = q / (1 - q);
    rep.rhs_closed_form = true;
  } else {
    for (int m = 1; m <= t.nmax; ++m) {
      long double a = slab_bridge_gf(t, w, z, m);
      sum += a * std::exp(0.5L * m * (long double)t0);
    }
    rep.rhs_closed_form = false;
  }
  long double rhs = std::exp(2.0L * sum) / (long double)z;
  rep.rhs = (double)rhs;
  rep.pass = rep.lhs_truncated <= rep.rhs;
  return rep;
}

// ---- chi -> Z ------------------------------------------------------------------------

ChiToZBound chito_z_bound(const std::vector<double>& series, double x, double y, int n) {
  if (!(0 < y && y <= x)) fail(ErrorCode::Usage, "need 0 < y <= x");
  ChiToZBound out;
  long double phi = 0, yp = 1;
  long double last = 0;
  for (std::size_t k = 0; k < series.size(); ++k, yp *= y) {
    last = yp * (long double)series[k];
    phi += last;
  }
  if (last > 1e-6L * phi) out.diverged = true;  // tail visibly unsettled
  out.bound = (double)((phi / (n + 1)) * (phi / (n + 1)) *
                       std::pow((long double)(x / y), 2.0L * n));
  if (n < (int)series.size()) {
    out.actual = (double)(std::pow((long double)x, (long double)n) *
                          (long double)series[(std::size_t)n]);
    out.ok = out.actual <= out.bound * (1 + 1e-12);
  }
  return out;
}

ChiToZBound chito_z_bound_closed(double phi_y, double x, double y, int n,
                                 std::optional<double> actual) {
  if (!(0 < y && y <= x)) fail(ErrorCode::Usage, "need 0 < y <= x");
  ChiToZBound out;
  out.bound = (phi_y / (n + 1)) * (phi_y / (n + 1)) * std::pow(x / y, 2.0 * n);
  if (actual) {
    out.actual = *actual;
    out.ok = out.actual <= out.bound * (1 + 1e-12);
  }
  return out;
}

// ---- quantitative constants -------------------------------------------------------

QuantReport quant_constants_report(const GraphModel& model, const WalkTables& t,
                                   const Weight& w, const std::vector<double>& zs) {
  QuantReport rep;
  CriticalBracket br = zc_bracket(model, w, &t, 0.0, t.nmax, 0.05);
  double zc_mid = 0.5 * (br.z_lo + br.z_hi);
  rep.mu_c_mid = 1.0 / zc_mid;
  rep.t0 = std::log((double)t.w_base);
  double mu2 = rep.mu_c_mid * rep.mu_c_mid;
  rep.coefficient =
      mu2 * std::exp(4.0 * mu2 / (std::exp(1.5 * rep.t0) - std::exp(rep.t0)));
  for (double z : zs) {
    QuantReport::Point p;
    p.z = z;
    p.chi_trunc = (double)chi_truncated(t, w, z, 0.0);
    p.bound = rep.coefficient * zc_mid / (zc_mid - z) + rep.coefficient;
    p.pass = z < zc_mid && p.chi_trunc <= p.bound;
    rep.all_pass = rep.all_pass && p.pass;
    rep.points.push_back(p);
  }
  return rep;
}

// ---- two-point decay ----------------------------------------------------------------

DecayReport two_point_decay_check(const GraphModel& model, const WalkTables& t,
                                  const Weight& w, double z, double zt_lower) {
  if (z >= zt_lower)
    fail(ErrorCode::Usage, "two_point_decay_check: z must sit below the z_t lower edge");
  if (!t.has_two_point)
    fail(ErrorCode::Usage, "two_point_decay_check needs the two-point decomposition");
  DecayReport rep;
  rep.z = z;
  if (model.kind() == ModelKind::EndFixedTree && w.name() == "saw") {
    rep.chi_half = end_fixed_chi(model.params().k, z, 0.5);
    rep.chi_closed_form = true;
  } else {
    rep.chi_half = (double)chi_truncated(t, w, z, 0.5);
    rep.chi_closed_form = false;
  }
  double t0 = std::log((double)t.w_base);
  rep.all_dominated = true;
  double c_fit = std::numeric_limits<double>::infinity();
  for (int v = 0; v < t.vertex_count; ++v) {
    long double g = 0, zp = 1;
    for (int n = 0; n <= t.nmax; ++n, zp *= z) {
      const BigInt& c = t.g_part(v, n);
      if (c != 0) g += zp * (long double)c.get_d();
    }
    if (g <= 0) continue;
    ++rep.vertices_checked;
    double min_delta_half =
        std::exp(-0.5 * t0 * (double)std::abs(t.tp_height[(std::size_t)v]));
    if ((double)g > rep.chi_half * min_delta_half * (1 + 1e-9))
      rep.all_dominated = false;
    int d = t.tp_dist[(std::size_t)v];
    if (d > 0) c_fit = std::min(c_fit, (double)(-std::log(g) / d));
  }
  rep.c_fit = std::isfinite(c_fit) ? c_fit : 0.0;
  return rep;
}

// ---- Hammersley-Welsh diagnostic ------------------------------------------------------

HwDiagnostic hw_diagnostic(const GraphModel& model, int nmax) {
  if (nmax > 512) fail(ErrorCode::Usage, "hw_diagnostic supports nmax <= 512");
  HwDiagnostic rep;
  double zt;
  double k = model.params().k;
  if (model.kind() == ModelKind::EndFixedTree)
    zt = end_fixed_zc((int)k, 0.5);
  else if (model.kind() == ModelKind::OrientedTree112)
    zt = oriented_zc(0.5);
  else
    fail(ErrorCode::Unsupported, "hw_diagnostic runs on the tree models");

  std::vector<double> zhalf((std::size_t)nmax + 1, 0.0);
  double w_base = (double)model.w_base();
  transfer_row_scan(model, nmax, [&](int n, const std::vector<BigInt>& row) {
    long double s = 0;
    for (int m = -n; m <= n; ++m) {
      const BigInt& c = row[(std::size_t)(m + nmax)];
      if (c != 0)
        s += (long double)c.get_d() * std::pow((long double)w_base, 0.5L * m);
    }
    zhalf[(std::size_t)n] = (double)s;
  });

  for (int n = 4; n <= nmax; n += 4) {
    double lr = std::log(zhalf[(std::size_t)n]) + n * std::log(zt);
    double y = zt * (1.0 - 1.0 / std::sqrt((double)n));
    double phi;
    if (model.kind() == ModelKind::EndFixedTree)
      phi = end_fixed_chi((int)k, y, 0.5);
    else
      phi = oriented_chi_candidate(OrientedNumerator::OneMinusZ2, y, 0.5);
    double lb = 2 * std::log(phi) - 2 * std::log((double)(n + 1)) +
                2.0 * n * std::log(zt / y);
    rep.n.push_back(n);
    rep.log_ratio.push_back(lr);
    rep.log_bound.push_back(lb);
    rep.max_ratio_over_sqrt = std::max(rep.max_ratio_over_sqrt, lr / std::sqrt((double)n));
    if (lr > lb + 1e-9) rep.bounded = false;
  }
  return rep;
}

}  // namespace tw
