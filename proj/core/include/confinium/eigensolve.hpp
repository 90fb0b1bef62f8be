/** \file eigensolve.hpp
 *  \brief Bound-state solvers: dense collocation eigensolve and an
 *         independent analytic shooting backend.
 *
 *  The primary route discretizes the reduced Hamiltonian
 *      H = -1/2 d^2/dr^2 + l(l+1)/(2 r^2) + v(r)
 *  on the spectral-element grid, assembles the symmetric interior matrix in
 *  long double, diagonalizes in double, and polishes each requested
 *  eigenpair with long-double Rayleigh-quotient corrections expanded in the
 *  double eigenbasis.  Systems whose tail extends to infinity are truncated
 *  at a radius grown geometrically until the requested energies stop moving.
 *
 *  The independent backend locates the same energies as roots of analytic
 *  quantization conditions built from confluent hypergeometric evaluations,
 *  sharing no discretization machinery with the matrix route.
 */
#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "confinium/grid.hpp"
#include "confinium/model.hpp"

namespace confinium::eigensolve {

/// One converged bound state on its grid.
struct Eigenstate {
    model::SystemSpec system;
    model::StateSpec state;

    /// Eigenvalue in the system's native energy unit (Rydberg-like doubled
    /// units for the piecewise-step kind, Hartree otherwise).
    double energy = 0.0;

    /// Wavefunction values at the interior grid nodes, normalized so that
    /// sum_i weights_i psi_i^2 = 1 and psi > 0 at the innermost node.
    /// For radial kinds psi is the reduced wavefunction u(r) = r R(r).
    Eigen::VectorXd psi;

    int node_count = 0;        ///< interior sign changes (= radial index)
    double norm_residual = 0;  ///< |sum w psi^2 - 1| in double arithmetic
    double eig_residual = 0;   ///< ||H psi - E psi||_2 after refinement

    std::shared_ptr<const grid::RadialGrid> grid;
};

/// Assemble the symmetric interior Hamiltonian in Hartree form (kinetic
/// factor 1/2, potential from total_potential_hartree with branch-averaged
/// interface rows).  Exposed for tests and diagnostics.
Eigen::MatrixXd assemble_hamiltonian(const model::SystemSpec& sys,
                                     const grid::RadialGrid& g);

/// Grow the truncation radius geometrically (factor policy.growth, starting
/// from policy.initial_rmax) until the lowest \p count refined energies move
/// by less than policy.energy_tol * max(1, |E|) between consecutive rounds;
/// returns the last-grown domain.  Throws ConvergenceError (with the radius
/// -> energy trace) after policy.max_rounds unsuccessful rounds.  For hard
/// confinements this reduces to solve_domain.
model::Domain adapt_domain(const model::SystemSpec& sys, int count,
                           const model::TruncationPolicy& policy = {});

/// Solve for the lowest \p count states of \p sys.  Performs domain
/// adaptation when the tail is truncated, refines each eigenpair, verifies
/// the node count against the state index, and filters out discretized
/// continuum states (native energy must stay below the potential plateau;
/// violation raises PartialResultError with the bound count found).
std::vector<Eigenstate> solve_bound_states(const model::SystemSpec& sys, int count,
                                           const model::TruncationPolicy& policy = {});

/// Quantization mismatch for the analytic backend: a smooth function of the
/// trial energy whose zeros are the exact bound-state energies.  Walls use
/// the closed-form wavefunction evaluated at the wall; free systems use the
/// terminating-series condition; the piecewise Coulomb/step kind matches the
/// interior log-derivative against the decaying exterior solution at the
/// step.  Only the exactly solvable kinds (CHO1D, CHO3D, CHA, SPCHA) are
/// supported.
double shooting_mismatch(const model::SystemSpec& sys, const model::StateSpec& st,
                         double energy);

/// Root of shooting_mismatch inside [e_lo, e_hi] by bracketed Brent
/// iteration; throws BracketError when the bracket does not straddle a sign
/// change.  \p tol is relative on the energy.
double shoot_energy(const model::SystemSpec& sys, const model::StateSpec& st,
                    double e_lo, double e_hi, double tol = 1e-13);

}  // namespace confinium::eigensolve
