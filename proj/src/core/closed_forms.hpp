#pragma once

#include <vector>

#include "core/error.hpp"
#include "core/laurent.hpp"

namespace tw {

// Closed-form evaluators for the two tree groups, used as exact oracles
// against enumeration and as safe right-hand sides in inequality checks.

// ---- end-fixed k-regular tree ----------------------------------------------

// chi(z,lambda) = (1 - z^2) / ((1 - (k-1)^(1-lambda) z)(1 - (k-1)^lambda z))
double end_fixed_chi(int k, double z, double lambda);
double end_fixed_zc(int k, double lambda);  // (k-1)^(-max{lambda,1-lambda})
double end_fixed_alpha(int k, double z);    // -log_(k-1)(z)

// Taylor coefficients of chi in z as exact Laurent polynomials in u =
// (k-1)^lambda (exponent = endpoint height in tau units), via the linear
// recurrence from the denominator.
std::vector<Laurent> end_fixed_chi_coeffs(int k, int nmax);

// b(z;n): generating function of walks ending in the half-space H_n^+,
// summed from the hook closed form with a geometric tail overestimate, so
// the value is an upper bound of the true series (safe for beta evidence).
// Diverges (returns infinity) when (k-1) z^2 >= 1.
long double end_fixed_halfspace_gf(int k, long double z, int n);

// ---- (1,1,2)-oriented 4-regular tree ----------------------------------------

double oriented_zc(double lambda);
// alpha(z) for z <= z_t, -infinity beyond (jump discontinuity at z_t)
double oriented_alpha(double z);

enum class OrientedNumerator { OneMinus3z2, OneMinusZ2 };

// The two printed-candidate susceptibilities; both share the denominator
// 1 - (2^lambda + 2^(1-lambda) + 1) z + 3 z^2.
double oriented_chi_candidate(OrientedNumerator which, double z, double lambda);
std::vector<Laurent> oriented_chi_candidate_coeffs(OrientedNumerator which, int nmax);

// det(I - z M(u)) of the last-move transfer matrix, coefficients of z^0..z^3
// as exact Laurent polynomials in u; factors as (1+z)(1 - s z + 3 z^2).
std::vector<Laurent> oriented_transfer_det();

}  // namespace tw
