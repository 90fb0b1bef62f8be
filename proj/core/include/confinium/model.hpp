/** \file model.hpp
 *  \brief System definitions: confinement kinds, potentials, state labels,
 *         solve domains and closed-form reference wavefunctions.
 *
 *  All systems are single-particle problems in Hartree atomic units. Radial
 *  kinds are solved in reduced form, i.e. for u(r) = r R(r) obeying
 *
 *      [ -1/2 d^2/dr^2 + l(l+1)/(2r^2) + v(r) + v_c(r) ] u = E u,
 *
 *  with u -> 0 at both domain ends and normalization \int u^2 dr = 1. The
 *  one-dimensional oscillator kind uses the same equation on a symmetric
 *  interval with l = 0 and no centrifugal term.
 *
 *  One kind deviates from plain Hartree bookkeeping: the sharp penetrable
 *  hydrogen kind (Kind::SPCHA) is conventionally tabulated with energies and
 *  step heights V0 in doubled units (Rydberg), i.e. its native eigenvalue
 *  equation reads [ -d^2/dr^2 + l(l+1)/r^2 - 2/r + V0 θ(r-r_c) ] u = ε u.
 *  Solver-facing energies for that kind are native (ε); expectation values
 *  and virial reports are always Hartree. energy_scale() exposes the factor.
 */
#pragma once

#include <string>
#include <vector>

namespace confinium::model {

/// Confinement kinds. Naming follows the conventional abbreviations:
/// confined harmonic oscillator (1D/3D), confined hydrogen atom (hard
/// spherical box), shell-confined hydrogen, hydrogen in a homogeneous
/// impenetrable power-law cage, hydrogen behind a sharp penetrable step,
/// and hydrogen behind a high smooth (logistic) barrier.
enum class Kind {
    CHO1D,  ///< v = 1/2 ω² x² on [-x_c, x_c] (hard walls; x_c = inf is free)
    CHO3D,  ///< v = 1/2 ω r² inside a hard sphere of radius r_c
    CHA,    ///< v = -1/r inside a hard sphere of radius r_c
    SCHA,   ///< v = -1/r between hard shells r_a < r < r_b
    HICHA,  ///< v = -1/r + (r/r_c)^k, smooth impenetrable cage
    SPCHA,  ///< v = -1/r (r < r_c), V0 (r >= r_c), penetrable sharp step
    HPCHA,  ///< v = -1/r + U0 / (e^{w(1 - r/r_c)} + 1), penetrable smooth
};

/// Parse a kind name ("CHO1D", "cha", ...; case-insensitive).
Kind parse_kind(const std::string& name);

/// Canonical (upper-case) name of a kind.
std::string kind_name(Kind kind);

/// A fully specified system. Only the parameters relevant to `kind` are
/// meaningful; the named constructors below set exactly those and leave the
/// rest at their zero defaults. Infinite x_c / r_c (free systems) are
/// represented by the IEEE infinity. validate() enforces the per-kind
/// parameter domain.
struct SystemSpec {
    Kind kind = Kind::CHA;
    double omega = 0;  ///< oscillator frequency (CHO1D, CHO3D)
    double x_c = 0;    ///< half-width of the 1D box (CHO1D; inf = free)
    double r_c = 0;    ///< confinement radius (radial kinds; inf = free)
    double r_a = 0;    ///< inner shell radius (SCHA)
    double r_b = 0;    ///< outer shell radius (SCHA)
    double k = 0;      ///< cage exponent (HICHA), real and > 1
    double V0 = 0;     ///< step height in native (doubled) units (SPCHA; inf = hard wall)
    double U0 = 0;     ///< barrier height in Hartree (HPCHA; 0 = free)
    double w = 0;      ///< barrier steepness (HPCHA), dimensionless
    int ell = 0;       ///< orbital angular momentum (radial kinds; ignored for CHO1D)

    /// Named constructors (the only supported way to build a valid spec).
    static SystemSpec cho1d(double omega, double x_c);
    static SystemSpec cho3d(double omega, double r_c, int ell);
    static SystemSpec cha(double r_c, int ell);
    static SystemSpec scha(double r_a, double r_b, int ell);
    static SystemSpec hicha(double r_c, double k, int ell);
    static SystemSpec spcha(double V0, double r_c, int ell);
    static SystemSpec hpcha(double U0, double w, double r_c, int ell);

    /// Same system with a different angular momentum (radial kinds).
    SystemSpec with_ell(int new_ell) const;

    /// Throws ParameterError if any relevant parameter is out of domain
    /// (non-finite where finiteness is required, wrong sign, r_a >= r_b, ...).
    void validate() const;

    /// True when the system has no confinement (free oscillator / free atom):
    /// infinite box plus, for penetrable kinds, vanishing barrier.
    bool is_free() const;

    /// Short display form, e.g. "CHA[r_c=1, l=0]".
    std::string describe() const;
};

/// Serialize to a JSON object string with exactly the relevant keys
/// (kind, omega, x_c, r_c, r_a, r_b, k, V0, U0, w, ell). Infinities are
/// written as the string "inf". Keys appear in the order above.
std::string system_to_json(const SystemSpec& sys);

/// Assign one named parameter on a system.  Keys follow the canonical
/// parameter strings used by the reference catalogue and the command-line
/// tool: "omega", "x_c", "r_c", "r_a", "r_b", "k", "V0", "U0", "w".  The
/// angular-momentum quantum number is deliberately excluded (use with_ell(),
/// which validates it).  Throws ParameterError for unknown keys.
void set_system_field(SystemSpec& sys, const std::string& key, double value);

/// Ratio of the solver-native energy unit to Hartree: 2 for Kind::SPCHA
/// (tabulated in doubled units), 1 otherwise.
double energy_scale(const SystemSpec& sys);

/// Energy (native units) of the continuum edge / barrier plateau above which
/// states are not bound: V0 for penetrable-sharp, U0 for penetrable-smooth,
/// 0 for free hydrogen-like systems, +inf for hard confinement and
/// oscillators (every state bound).
double bound_plateau_native(const SystemSpec& sys);

/// Parity of a one-dimensional oscillator state under x -> -x.
enum class Parity { none, even, odd };

/// One bound state of a given system. n_index counts states within the
/// system's (kind, l) ladder from the bottom, i.e. equals the number of
/// interior nodes of the eigenfunction.
struct StateSpec {
    int n_index = 0;
    Parity parity = Parity::none;  ///< even/odd for CHO1D, none otherwise
    std::string label;             ///< display label: "n=0", "1s", "2p", ...
};

/// Build the state with `n_index` interior nodes, deriving parity and label
/// from the system's conventions:
///   - CHO1D: "n=K", parity even for even K;
///   - CHO3D: (n_r+1) + spectroscopic letter, so "2p" has one radial node;
///   - hydrogen-like kinds: principal quantum number n = n_r + l + 1, so
///     "2p" is the nodeless l = 1 state.
StateSpec make_state(const SystemSpec& sys, int n_index);

/// A state label decoded independently of any SystemSpec. `ell` is -1 when
/// the label carries no angular momentum (CHO1D labels).
struct ParsedLabel {
    int n_index = 0;
    int ell = -1;
};

/// Decode a label ("n=1", "1s", "2p", ...) under the conventions of `kind`.
/// Throws ParameterError for malformed labels or impossible combinations
/// (e.g. hydrogen-like "1p").
ParsedLabel parse_state_label(Kind kind, const std::string& label);

/// Spectroscopic letter for an angular momentum (s, p, d, f, g, h).
char ell_letter(int ell);
/// Inverse of ell_letter. Throws ParameterError for unknown letters.
int ell_from_letter(char letter);

/// How the outer edge of a solve domain is to be treated.
enum class BoundaryKind {
    dirichlet_wall,    ///< physical hard wall: u = 0 exactly at the edge
    decay_truncation,  ///< artificial box edge far inside the decay tail
};

/// A concrete interval on which the radial (or 1D) problem is discretized.
struct Domain {
    double lo = 0;
    double hi = 0;
    BoundaryKind boundary = BoundaryKind::dirichlet_wall;
    /// Potential discontinuities strictly inside (lo, hi); element boundaries
    /// must be placed here so every element sees a smooth potential.
    std::vector<double> breakpoints;
    /// All interior element boundaries the grid should use: the breakpoints
    /// plus any pure refinement splits (e.g. a thin element pair resolving a
    /// steep smooth barrier). Sorted, strictly inside (lo, hi).
    std::vector<double> splits;
};

/// Potential of the unconfined parent system at a point (Hartree):
/// 1/2 ω² x² (CHO1D), 1/2 ω r² (CHO3D), -1/r (hydrogen-like kinds).
double interior_potential(const SystemSpec& sys, double r);

/// Confining contribution at a point, in the system's native energy units.
/// Hard kinds return 0 inside the allowed region and +inf outside; HICHA
/// returns (r/r_c)^k; HPCHA returns the logistic barrier (evaluated in a
/// form stable for large w); SPCHA — whose potential is defined piecewise
/// rather than additively — returns the native total, -2/r below the step
/// and V0 above it.
double confining_potential(const SystemSpec& sys, double r);

/// Total potential in Hartree at a point, excluding hard walls (which are
/// boundary conditions, not potential values) and excluding the centrifugal
/// term. `branch_hint` selects the side of a sharp step when r sits exactly
/// on a breakpoint; pass any interior point of the evaluating element.
double total_potential_hartree(const SystemSpec& sys, double r, double branch_hint);

/// Convenience overload with branch_hint = r.
double total_potential_hartree(const SystemSpec& sys, double r);

/// True for kinds whose confinement is a hard wall only (no potential term):
/// CHO1D, CHO3D, CHA, SCHA, and SPCHA with infinite V0.
bool confinement_is_hard(const SystemSpec& sys);

/// Closed-form (unnormalized) reduced wavefunction u(r) at energy E for the
/// exactly solvable kinds:
///   - CHO1D: Kummer-form parity solutions M(a, 1/2 or 3/2, ω x²) e^{-ωx²/2}
///     (times x for odd states);
///   - CHO3D: r^{l+1} M(a, l+3/2, Ω r²) e^{-Ω r²/2} with Ω = √ω;
///   - CHA:   r (2κr)^l M(l+1-1/κ, 2l+2, 2κr) e^{-κr} for E < 0 with
///     κ = √(-2E), continued through E >= 0 by the regular Coulomb series.
/// Throws ParameterError for kinds with no closed form.
double analytic_wavefunction(const SystemSpec& sys, const StateSpec& st, double energy, double r);

/// Truncation/adaptation policy shared by the matrix solver and the
/// domain-growth loop.
struct TruncationPolicy {
    double initial_rmax = 30.0;  ///< first trial outer radius for decaying tails
    double growth = 1.5;         ///< multiplicative domain growth per round
    double energy_tol = 1e-9;    ///< relative energy agreement declaring convergence
    int max_rounds = 8;          ///< growth rounds before giving up
    int grid_n = 256;            ///< polynomial degree per element
};

/// The domain on which `sys` should be discretized: the physical box for
/// hard-wall kinds, or a truncated tail domain of radius policy.initial_rmax
/// (pre-adaptation) for decaying kinds, with breakpoints/splits filled in.
Domain solve_domain(const SystemSpec& sys, const TruncationPolicy& policy);

}  // namespace confinium::model
