#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/tables.hpp"
#include "core/weights.hpp"

namespace tw {

// ---- tilted series ----------------------------------------------------------

// Z_w(lambda; n) from an exact table: sum_m sum_mark count * e^(binlog) * W^(lambda m).
long double tilted_Z(const WalkTables& t, const Weight& w, double lambda, int n);
// Evaluated through the m >= 0 half plus the coefficient-exact MTP identity,
// so that Z(lambda;n) == Z(1-lambda;n) holds identically in floating point.
long double tilted_Z_symmetric(const WalkTables& t, const Weight& w, double lambda, int n);

// truncated susceptibility sum_{n<=nmax} z^n Z(lambda;n)
long double chi_truncated(const WalkTables& t, const Weight& w, double z, double lambda);

// b(z;n): all walks ending in the half-space H_n^+ (height >= n t0 units)
long double halfspace_gf(const WalkTables& t, const Weight& w, long double z, int n);
// A(z;n): up-bridges into slab n (t0_units = 1 for the catalog)
long double slab_bridge_gf(const WalkTables& t, const Weight& w, long double z, int n);

// ---- Fekete bounds ------------------------------------------------------------

struct BetaBound {
  double raw = 0;             // -log b_trunc / ((n+1) t0): the spec value
  double tail_corrected = 0;  // valid lower bound when tail_finite
  bool tail_finite = false;
  double tail = 0;
};

// alpha_w(z) <= -log(z^2 A(z;n)) / (t0 (n+2)); +infinity when A(z;n) = 0.
double alpha_upper(const WalkTables& t, const Weight& w, double z, int n);
// beta_w(z) >= -log b(z;n) / (t0 (n+1)); the raw value treats the truncated
// series as exact, the corrected value adds a rigorous submultiplicative tail.
BetaBound beta_lower(const WalkTables& t, const Weight& w, double z, int n);

// ---- critical bracket ---------------------------------------------------------

struct CriticalBracket {
  double lambda = 0;
  double z_lo = 0, z_hi = 1;
  int n_lo = 0, n_hi = 0;       // evidence depths actually used
  double beta_at_lo = 0;        // certifying values
  double alpha_at_hi = 0;
  bool tol_met = false;
  bool beta_rigorous = false;   // tail-controlled beta evidence throughout
  std::vector<std::string> flags;
};

// Bisection bracket for z_{c,lambda}(w). Tree models with SAW deepen their
// closed-form / transfer evidence adaptively (up to depth ~4096) to meet tol;
// other combinations use the supplied tables (required) at their nmax.
CriticalBracket zc_bracket(const GraphModel& model, const Weight& w,
                           const WalkTables* tables, double lambda, int nmax,
                           double tol);

// ---- exact identity checks -----------------------------------------------------

struct IdentityReport {
  bool mtp_exact = false;            // N[n][-m] == W^m N[n][m], per bin
  bool bridge_reversal_exact = false;  // d[n][m] == W^m a[n][m], per bin
  bool descent_lift_ok = false;        // h[n+1][m+1] >= r[n][m], per bin
  bool diff_inequality_ok = false;     // (n+1)Z(l;n) <= sum Z(l;j)Z(l;n-j)
  double diff_max_slack = 0;           // most negative margin seen (>= -tol ok)
  std::vector<std::string> violations;
  bool all_ok() const {
    return mtp_exact && bridge_reversal_exact && descent_lift_ok && diff_inequality_ok;
  }
};

IdentityReport verify_identities(const WalkTables& t, const Weight& w,
                                 const std::vector<double>& lambdas = {0, 0.25, 0.5});

// ---- bubble diagram -------------------------------------------------------------

struct BubbleReport {
  double z = 0;
  int degree = 0;
  double b_truncated = 0;        // degree-truncated B(z)
  double chi_sq_truncated = 0;   // same-degree truncation of chi(z,1/2)^2
  bool value_dominated = false;  // b <= chi^2 at z
  bool degreewise_dominated = false;  // exact, coefficient-by-coefficient
  int first_bad_degree = -1;
};

// needs tables with the two-point decomposition
BubbleReport bubble_check(const WalkTables& t, const Weight& w, double z, int degree);

// closed-form bubble on the end-fixed tree: 1 + sum_r k(k-1)^(r-1) z^(2r),
// truncated at graph-distance radius
double end_fixed_bubble(int k, double z, int radius);

// ---- tilted Madras-Slade --------------------------------------------------------

struct MadrasSladeReport {
  double z = 0;
  double lhs_truncated = 0;   // chi_trunc(z, 1/2), a lower bound of the truth
  double rhs = 0;             // (1/z) exp[2 sum_t a(z;t) e^(t/2)]
  bool rhs_closed_form = false;  // closed bridge series (trees) vs truncated
  bool pass = false;
};

// zt_lower: a certified lower edge of the z_t bracket; z must sit below it.
MadrasSladeReport madras_slade_check(const GraphModel& model, const WalkTables& t,
                                     const Weight& w, double z, double zt_lower);

// ---- generating-function to coefficient bound (chi -> Z) -------------------------

struct ChiToZBound {
  double bound = 0;       // [Phi(y)/(n+1)]^2 (x/y)^(2n)
  double actual = -1;     // x^n c_n when the coefficient is known
  bool ok = true;         // actual <= bound (when known)
  bool diverged = false;  // truncated Phi(y) not settled
};

ChiToZBound chito_z_bound(const std::vector<double>& series, double x, double y, int n);
ChiToZBound chito_z_bound_closed(double phi_y, double x, double y, int n,
                                 std::optional<double> actual);

// ---- quantitative constants (untilted) --------------------------------------------

struct QuantReport {
  double mu_c_mid = 0;      // bracket midpoint used for mu_c
  double t0 = 0;
  double coefficient = 0;   // mu_c^2 exp[4 mu_c^2/(e^(3 t0/2) - e^(t0))]
  struct Point {
    double z;
    double chi_trunc;
    double bound;
    bool pass;
  };
  std::vector<Point> points;
  bool all_pass = true;
};

QuantReport quant_constants_report(const GraphModel& model, const WalkTables& t,
                                   const Weight& w, const std::vector<double>& zs);

// ---- two-point decay ----------------------------------------------------------------

struct DecayReport {
  double z = 0;
  double chi_half = 0;       // chi(z,1/2) used on the right-hand side
  bool chi_closed_form = false;
  int vertices_checked = 0;
  bool all_dominated = false;  // G(z;x) <= chi * min(Delta, 1/Delta)^(1/2)
  double c_fit = 0;            // largest c with G(z;x) <= e^(-c d(x)) on the ball
};

DecayReport two_point_decay_check(const GraphModel& model, const WalkTables& t,
                                  const Weight& w, double z, double zt_lower);

// ---- Hammersley-Welsh style diagnostic (critically tilted) ---------------------------

struct HwDiagnostic {
  std::vector<int> n;
  std::vector<double> log_ratio;   // ln(Z(1/2;n) z_t^n)
  std::vector<double> log_bound;   // ln of the lemma bound, same normalization
  double max_ratio_over_sqrt = 0;  // max log_ratio / sqrt(n)
  bool bounded = true;             // log_ratio <= log_bound for all n
};

HwDiagnostic hw_diagnostic(const GraphModel& model, int nmax);

}  // namespace tw
