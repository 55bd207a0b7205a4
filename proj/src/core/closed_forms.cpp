#include "core/closed_forms.hpp"

#include <cmath>
#include <limits>

namespace tw {

double end_fixed_chi(int k, double z, double lambda) {
  double K = (double)(k - 1);
  double zc = end_fixed_zc(k, lambda);
  if (z >= zc) fail(ErrorCode::Diverged, "end_fixed_chi: z at or above the singularity");
  double d1 = 1.0 - std::pow(K, 1.0 - lambda) * z;
  double d2 = 1.0 - std::pow(K, lambda) * z;
  return (1.0 - z * z) / (d1 * d2);
}

double end_fixed_zc(int k, double lambda) {
  double K = (double)(k - 1);
  return std::pow(K, -std::max(lambda, 1.0 - lambda));
}

double end_fixed_alpha(int k, double z) {
  if (z <= 0 || z > 1) fail(ErrorCode::Usage, "alpha needs z in (0,1]");
  return -std::log(z) / std::log((double)(k - 1));
}

std::vector<Laurent> end_fixed_chi_coeffs(int k, int nmax) {
  // (1 - s z + K z^2) chi = 1 - z^2, s = u + K/u
  BigInt K((long)(k - 1));
  Laurent s = Laurent::monomial(BigInt(1), 1) + Laurent::monomial(K, -1);
  std::vector<Laurent> c((std::size_t)nmax + 1);
  for (int n = 0; n <= nmax; ++n) {
    Laurent rhs;
    if (n == 0) rhs = Laurent(1);
    if (n == 2) rhs = Laurent(-1);
    Laurent v = rhs;
    if (n >= 1) v += s * c[(std::size_t)n - 1];
    if (n >= 2) v -= c[(std::size_t)n - 2] * K;
    c[(std::size_t)n] = v;
  }
  return c;
}

long double end_fixed_halfspace_gf(int k, long double z, int n) {
  if (n < 0) fail(ErrorCode::Usage, "half-space index must be >= 0");
  if (z <= 0) return n == 0 ? 1.0L : 0.0L;
  long double K = (long double)(k - 1);
  if (K * z * z >= 1.0L || z >= 1.0L)
    return std::numeric_limits<long double>::infinity();
  // walks on the end-fixed tree are hooks up^a down^b; endpoint height a-b.
  // b(z;n) = [n==0] + sum_{a >= max(n,1)} z^a (1 + (k-2) z sum_{j<a-n} (K z)^j)
  long double total = (n == 0) ? 1.0L : 0.0L;
  int a0 = std::max(n, 1);
  // split the sum into its two geometric parts for an exact closed value
  // sum_a z^a = z^{a0}/(1-z)
  total += std::pow(z, (long double)a0) / (1.0L - z);
  // sum_{a>=a0} z^a (k-2) z ((Kz)^{a-n} - 1)/(Kz - 1)
  long double kz = K * z;
  long double c = (long double)(k - 2) * z;
  // term1: sum z^a (Kz)^{a-n} = (Kz)^{-n} sum (K z^2)^a over a >= a0
  long double kz2 = K * z * z;
  long double term1 =
      std::pow(kz, -(long double)n) * std::pow(kz2, (long double)a0) / (1.0L - kz2);
  long double term2 = std::pow(z, (long double)a0) / (1.0L - z);
  if (std::fabs(kz - 1.0L) < 1e-15L) {
    // K z == 1: the inner sum degenerates to (a - n) terms
    // fall back to a direct sum with rigorous geometric tail in K z^2 < 1
    long double acc = 0;
    long double za = std::pow(z, (long double)a0);
    for (int a = a0; a < a0 + 100000; ++a) {
      acc += za * (long double)(a - n);
      za *= z;
      if (za * (long double)(a + 1 - n) < 1e-30L * acc) break;
    }
    total += c * acc;
    return total;
  }
  total += c * (term1 - term2) / (kz - 1.0L);
  return total;
}

// ---- oriented tree -----------------------------------------------------------

namespace {
double oriented_s(double lambda) {
  return std::pow(2.0, lambda) + std::pow(2.0, 1.0 - lambda) + 1.0;
}
}  // namespace

double oriented_zc(double lambda) {
  double s = oriented_s(lambda);
  return (s - std::sqrt(s * s - 12.0)) / 6.0;
}

double oriented_alpha(double z) {
  if (z <= 0) fail(ErrorCode::Usage, "alpha needs z > 0");
  double zt = oriented_zc(0.5);
  if (z > zt) return -std::numeric_limits<double>::infinity();
  double disc = 9 * std::pow(z, 4) - 6 * std::pow(z, 3) - z * z - 2 * z + 1;
  disc = std::max(disc, 0.0);
  return std::log2((3 * z * z - z + 1 + std::sqrt(disc)) / (2 * z));
}

double oriented_chi_candidate(OrientedNumerator which, double z, double lambda) {
  if (z < 0 || z >= oriented_zc(lambda))
    fail(ErrorCode::Diverged, "oriented chi: z outside [0, z_c_lambda)");
  double s = oriented_s(lambda);
  double den = 1.0 - s * z + 3.0 * z * z;
  double num = (which == OrientedNumerator::OneMinus3z2) ? 1.0 - 3 * z * z : 1.0 - z * z;
  return num / den;
}

std::vector<Laurent> oriented_chi_candidate_coeffs(OrientedNumerator which, int nmax) {
  // (1 - s z + 3 z^2) chi = numerator, s = u + 2/u + 1
  Laurent s = Laurent::monomial(BigInt(1), 1) + Laurent::monomial(BigInt(2), -1) + Laurent(1);
  long num2 = (which == OrientedNumerator::OneMinus3z2) ? -3 : -1;
  std::vector<Laurent> c((std::size_t)nmax + 1);
  for (int n = 0; n <= nmax; ++n) {
    Laurent rhs;
    if (n == 0) rhs = Laurent(1);
    if (n == 2) rhs = Laurent(num2);
    Laurent v = rhs;
    if (n >= 1) v += s * c[(std::size_t)n - 1];
    if (n >= 2) v -= c[(std::size_t)n - 2] * BigInt(3);
    c[(std::size_t)n] = v;
  }
  return c;
}

namespace {

// polynomial in z with Laurent-in-u coefficients
using ZPoly = std::vector<Laurent>;

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  ZPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

ZPoly zadd(ZPoly a, const ZPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) a[j] += b[j];
  return a;
}

ZPoly zneg(ZPoly a) {
  for (auto& c : a) c = Laurent(0) - c;
  return a;
}

}  // namespace

std::vector<Laurent> oriented_transfer_det() {
  // Last-move transfer matrix over {up, down, flat} with u-weight per height
  // increment; det(I - zM) computed symbolically.
  Laurent u = Laurent::monomial(BigInt(1), 1);
  Laurent two_inv_u = Laurent::monomial(BigInt(2), -1);
  Laurent inv_u = Laurent::monomial(BigInt(1), -1);
  Laurent one(1), zero;
  Laurent M[3][3] = {{u, inv_u, one}, {zero, two_inv_u, one}, {u, two_inv_u, zero}};
  ZPoly A[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      A[i][j] = ZPoly{i == j ? one : zero, Laurent(0) - M[i][j]};
    }
  auto det2 = [&](int r1, int r2, int c1, int c2) {
    return zadd(zmul(A[r1][c1], A[r2][c2]), zneg(zmul(A[r1][c2], A[r2][c1])));
  };
  ZPoly det = zmul(A[0][0], det2(1, 2, 1, 2));
  det = zadd(det, zneg(zmul(A[0][1], det2(1, 2, 0, 2))));
  det = zadd(det, zmul(A[0][2], det2(1, 2, 0, 1)));
  det.resize(4);
  return det;
}

}  // namespace tw
