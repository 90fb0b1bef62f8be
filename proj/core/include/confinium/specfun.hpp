/** \file specfun.hpp
 *  \brief Confluent hypergeometric (Kummer) function M(a,b,z), its z-derivative
 *         and the regular attractive-Coulomb series.
 *
 *  These primitives carry the analytic boundary-condition side of the solver:
 *  every exactly solvable system in this library has bound-state wavefunctions
 *  proportional to M(a,b,z) times an exponential envelope, and the energy
 *  quantization condition is a root of M (or of its positive-energy
 *  continuation, the regular Coulomb series) at the confining wall.
 *
 *  The implementation is a direct power series with term recurrence
 *      t_{k+1} = t_k * (a+k) / ((b+k)(k+1)) * z
 *  and compensated (Kahan) accumulation in extended precision. The series
 *  terminates exactly when a is a non-positive integer (polynomial case).
 */
#pragma once

#include "confinium/errors.hpp"

namespace confinium::specfun {

/// Parameter bundle (a, b, z) for one Kummer evaluation; used when a caller
/// wants to build and hand around the boundary-condition arguments of the
/// shooting backend explicitly.
struct KummerParams {
    double a = 0.0;
    double b = 1.0;
    double z = 0.0;
};

/// Value of one evaluation together with its convergence diagnostics.
struct KummerEval {
    double value = 0.0;  ///< the (partial) sum
    long terms = 0;      ///< number of series terms accumulated
    bool converged = false;
};

/// Kummer's function M(a,b,z) = sum_k (a)_k / ((b)_k k!) z^k.
///
/// Throws ParameterError if b is zero or a negative integer (pole of M), or if
/// any argument is non-finite. Throws SeriesError (carrying the partial sum
/// and term count) if the series fails to converge within the term cap.
double kummer_m(double a, double b, double z);

/// dM/dz = (a/b) * M(a+1, b+1, z).
double kummer_m_dz(double a, double b, double z);

/// Same as kummer_m but returns convergence diagnostics instead of throwing on
/// a hit term cap (converged=false in that case; errors on bad parameters are
/// still thrown).
KummerEval kummer_m_eval(const KummerParams& p);

/// Regular solution (indicial exponent l+1, unit leading coefficient) of the
/// attractive-Coulomb radial equation in Hartree units,
///     u'' = [ l(l+1)/r^2 - 2/r - 2E ] u,
/// evaluated as the power series u(r) = sum_{j >= l+1} c_j r^j with
///     c_{l+1} = 1,
///     c_j = (-2 c_{j-1} - 2E c_{j-2}) / (j(j-1) - l(l+1)).
/// The series is entire in r and valid for every real E; for E < 0 it is
/// proportional to the closed Kummer bound-state form, so it continues the
/// hard-wall boundary condition smoothly through E = 0 and shooting can
/// bracket roots on either side of zero energy with one function.
double hydrogen_regular_series(int l, double energy, double r);

namespace detail {
/// Extended-precision core used by the double-precision wrappers above and by
/// the shooting backend (which runs its boundary functions in long double).
long double kummer_m_ld(long double a, long double b, long double z,
                        long* terms_out = nullptr, bool* converged_out = nullptr);
long double hydrogen_regular_series_ld(int l, long double energy, long double r);

/// Same series as hydrogen_regular_series_ld but returning the value and the
/// radial derivative together, for log-derivative matching at a potential step.
void hydrogen_regular_series_pair_ld(int l, long double energy, long double r,
                                     long double& u, long double& du);
}  // namespace detail

}  // namespace confinium::specfun
