/** \file observables.hpp
 *  \brief Expectation values, variances and the kinetic/potential
 *         uncertainty identities for solved states.
 *
 *  For an eigenstate of H = T + V the first-order spread identities
 *
 *      (ΔT)² = (ΔV)² = ⟨T⟩⟨V⟩ − ⟨TV⟩ = ⟨T⟩⟨V⟩ − ⟨VT⟩
 *
 *  hold, and the total-energy variance (ΔH)² = (ΔT)² + (ΔV)² +
 *  (⟨TV⟩ − ⟨T⟩⟨V⟩) + (⟨VT⟩ − ⟨T⟩⟨V⟩) vanishes.  This module evaluates every
 *  ingredient by deliberately independent routes so the identities remain
 *  meaningful cross-checks instead of restatements of one another:
 *
 *   - ⟨T²⟩ comes both from the quadrature of (Tu)² and from the eigenvalue
 *     identity ⟨T²⟩ = E(E − 2⟨V⟩) + ⟨V²⟩;
 *   - ⟨TV⟩ applies T to the sampled product V·u (composition route);
 *   - ⟨VT⟩ integrates V·u·(Tu) pointwise.
 *
 *  s-wave Coulomb states need distributional care at the origin: u ~ u'(0)·r
 *  while V ~ -1/r, so V·u tends to the finite limit -u'(0) and the products
 *  (Tu)², (Vu)² and V·u·Tu all carry nonzero r -> 0 limits proportional to
 *  u'(0)².  The quadratures below include those limit values at the origin
 *  node, and the composition route subtracts the boundary term u'(0)²/2 that
 *  integration by parts produces on the half line — the same term the
 *  contact (delta-function) part of T acting on V·u generates.  All pieces
 *  are mutually consistent: for an exact eigenstate the corrections cancel
 *  in (ΔH)² identically.
 *
 *  All quantities are reported in Hartree (energies squared in Hartree²),
 *  including for the doubled-unit piecewise-step kind, whose native
 *  eigenvalue is converted before use.
 */
#pragma once

#include <Eigen/Dense>

#include "confinium/eigensolve.hpp"

namespace confinium::observables {

/// Raw expectation values of one state (all Hartree / Hartree²).
struct ExpectationSet {
    double t = 0;   ///< ⟨T⟩
    double v = 0;   ///< ⟨V⟩ (interior + confining)
    double t2 = 0;  ///< ⟨T²⟩ = ∫ (Tu)² dr, direct quadrature
    double v2 = 0;  ///< ⟨V²⟩ = ∫ (Vu)² dr
    double tv = 0;  ///< ⟨TV⟩, composition route (T applied to V·u)
    double vt = 0;  ///< ⟨VT⟩, pointwise route (V·u·Tu)

    double v_interior = 0;  ///< parent-system part of ⟨V⟩
    double v_conf = 0;      ///< confining part of ⟨V⟩
    double cross_vvc = 0;   ///< 2 ∫ v·v_c u² dr (0 for disjoint branches)
};

/// The virial-like identity chain evaluated for one state.
struct VirialReport {
    double energy = 0;  ///< eigenvalue in Hartree
    double t = 0;       ///< ⟨T⟩
    double v = 0;       ///< ⟨V⟩

    double dT2 = 0;     ///< (ΔT)² = ⟨T²⟩ − ⟨T⟩²
    double dV2 = 0;     ///< (ΔV)² = ⟨V²⟩ − ⟨V⟩²
    double cross1 = 0;  ///< ⟨T⟩⟨V⟩ − ⟨TV⟩
    double cross2 = 0;  ///< ⟨T⟩⟨V⟩ − ⟨VT⟩
    double spread = 0;  ///< max − min over {dT2, dV2, cross1, cross2}

    double t2_direct = 0;      ///< ⟨T²⟩ from quadrature
    double t2_via_energy = 0;  ///< ⟨T²⟩ from E(E − 2⟨V⟩) + ⟨V²⟩
    double t2_gap = 0;         ///< |t2_direct − t2_via_energy|

    /// (ΔH)² = dT2 + dV2 + (⟨TV⟩ − ⟨T⟩⟨V⟩) + (⟨VT⟩ − ⟨T⟩⟨V⟩); zero for
    /// eigenstates, Σ w_i c_i² (E_i − Ē)² for a mixture of eigenvectors.
    double dH2 = 0;
};

/// Both sides of the Schwartz inequality (ΔT)²(ΔV)² >= |⟨TV⟩ − ⟨T⟩⟨V⟩|².
struct SchwartzCheck {
    double lhs = 0;  ///< (ΔT)² (ΔV)²
    double rhs = 0;  ///< (⟨TV⟩ − ⟨T⟩⟨V⟩)(⟨VT⟩ − ⟨T⟩⟨V⟩)
};

/// Action of the assembled kinetic operator (weak-form second derivative
/// plus centrifugal term) on interior values.  This is the operator the
/// eigensolver diagonalizes; exposed for tests and diagnostics.
Eigen::VectorXd apply_kinetic(const grid::RadialGrid& g, const Eigen::VectorXd& psi, int ell);

/// ⟨T²⟩ from the eigenvalue route, ⟨T²⟩ = E(E − 2⟨V⟩) + ⟨V²⟩ (all Hartree).
double t_squared_via_energy(double energy_hartree, double v, double v2);

/// All expectation values of a solved state by elementwise long-double
/// quadrature with branchwise potential sampling.  Verifies that a truncated
/// tail has actually decayed (|u|² at the outermost interior node below
/// 1e-10) and throws Error otherwise.
ExpectationSet expectation_set(const eigensolve::Eigenstate& state);

/// Full identity chain for one state.
VirialReport virial_report(const eigensolve::Eigenstate& state);

/// Schwartz inequality sides for one state.
SchwartzCheck schwartz_check(const eigensolve::Eigenstate& state);

}  // namespace confinium::observables
