/** \file observables.cpp
 *  \brief Elementwise long-double quadratures for the identity chain.
 */
#include "confinium/observables.hpp"

#include <cmath>
#include <sstream>

#include "confinium/errors.hpp"

namespace confinium::observables {

namespace {

using grid::MatLD;
using grid::VecLD;

/// Everything the quadratures need about one state, precomputed once.
struct StateData {
    const model::SystemSpec* sys = nullptr;
    const grid::RadialGrid* g = nullptr;
    VecLD u;                     ///< all-node values, zero at both endpoints
    long double ll = 0.0L;       ///< l(l+1); zero for the 1D kind
    long double q0 = 0.0L;       ///< u'(0) from the innermost element
    bool radial_origin = false;  ///< domain starts at r = 0
    bool coulomb_origin = false; ///< r = 0 with an s-wave Coulomb interior
};

StateData prepare(const eigensolve::Eigenstate& state) {
    if (!state.grid) throw ParameterError("expectation_set: state carries no grid");
    const grid::RadialGrid& g = *state.grid;
    if (state.psi.size() != g.n_interior()) {
        throw ParameterError("expectation_set: wavefunction length does not match the grid");
    }
    if (g.domain.boundary == model::BoundaryKind::decay_truncation) {
        const double edge = state.psi[state.psi.size() - 1];
        if (edge * edge > 1e-10) {
            std::ostringstream os;
            os << "expectation_set: |u|^2 = " << edge * edge
               << " at the truncation edge; the tail has not decayed "
               << "(grow the domain before computing observables)";
            throw Error(os.str());
        }
    }

    StateData d;
    d.sys = &state.system;
    d.g = &g;
    d.u = VecLD::Zero(g.n_all());
    for (int i = 0; i < g.n_interior(); ++i) {
        d.u[i + 1] = static_cast<long double>(state.psi[i]);
    }
    const model::Kind kind = state.system.kind;
    if (kind != model::Kind::CHO1D) {
        d.ll = static_cast<long double>(state.system.ell) * (state.system.ell + 1);
        d.radial_origin = g.domain.lo == 0.0;
        d.coulomb_origin =
            d.radial_origin && kind != model::Kind::CHO3D && state.system.ell == 0;
        if (d.radial_origin) {
            const grid::Element& el0 = g.elements.front();
            d.q0 = el0.d.row(0).dot(d.u.segment(el0.offset, el0.degree + 1));
        }
    }
    return d;
}

/// Per-node samples of Tu and Vu over one element, one-sided (element-local)
/// and branchwise.  At the r = 0 node the formulas are replaced by their
/// limits: Tu -> u'(0), Vu -> -u'(0) for s-wave Coulomb states (u ~ u'(0) r
/// against V ~ -1/r), both -> 0 otherwise.
struct ElementSamples {
    VecLD tu;  ///< (T u)(r_q)
    VecLD vu;  ///< (V u)(r_q)
};

ElementSamples element_samples(const StateData& d, const grid::Element& el) {
    const int n1 = el.degree + 1;
    const auto u_e = d.u.segment(el.offset, n1);
    const VecLD p = el.d * u_e;
    const VecLD pp = el.d * p;
    const double hint = 0.5 * (el.lo + el.hi);

    ElementSamples s;
    s.tu.resize(n1);
    s.vu.resize(n1);
    for (int q = 0; q < n1; ++q) {
        if (el.offset + q == 0 && d.radial_origin) {
            s.tu[q] = d.coulomb_origin ? d.q0 : 0.0L;
            s.vu[q] = d.coulomb_origin ? -d.q0 : 0.0L;
            continue;
        }
        const long double r = el.r[q];
        const long double centrifugal = d.ll == 0.0L ? 0.0L : 0.5L * d.ll / (r * r);
        s.tu[q] = -0.5L * pp[q] + centrifugal * u_e[q];
        s.vu[q] = static_cast<long double>(model::total_potential_hartree(
                      *d.sys, static_cast<double>(r), hint)) *
                  u_e[q];
    }
    return s;
}

/// Interior and confining potential branches at a point, as the disjoint or
/// additive decomposition of the total Hartree potential.
void potential_parts(const model::SystemSpec& sys, double r, double hint, double& v_int,
                     double& v_conf) {
    if (sys.kind == model::Kind::SPCHA) {
        if (hint < sys.r_c) {
            v_int = -1.0 / r;
            v_conf = 0.0;
        } else {
            v_int = 0.0;
            v_conf = 0.5 * sys.V0;
        }
        return;
    }
    v_int = model::interior_potential(sys, r);
    v_conf = model::confinement_is_hard(sys) ? 0.0 : model::confining_potential(sys, r);
}

}  // namespace

Eigen::VectorXd apply_kinetic(const grid::RadialGrid& g, const Eigen::VectorXd& psi,
                              int ell) {
    if (psi.size() != g.n_interior()) {
        throw ParameterError("apply_kinetic: vector length does not match the grid");
    }
    if (ell < 0) throw ParameterError("apply_kinetic: ell must be >= 0");
    Eigen::VectorXd out = -0.5 * (g.d2 * psi);
    if (ell > 0) {
        const double ll = static_cast<double>(ell) * (ell + 1);
        for (int i = 0; i < psi.size(); ++i) {
            const double r = g.nodes[i];
            out[i] += 0.5 * ll / (r * r) * psi[i];
        }
    }
    return out;
}

double t_squared_via_energy(double energy_hartree, double v, double v2) {
    return energy_hartree * (energy_hartree - 2.0 * v) + v2;
}

ExpectationSet expectation_set(const eigensolve::Eigenstate& state) {
    const StateData d = prepare(state);
    const grid::RadialGrid& g = *d.g;
    const int n_global = g.n_all();

    long double t = 0, v = 0, t2 = 0, v2 = 0, vt = 0, tv = 0;
    long double v_int_acc = 0, v_conf_acc = 0, cross_acc = 0;

    for (const grid::Element& el : g.elements) {
        const int n1 = el.degree + 1;
        const auto u_e = d.u.segment(el.offset, n1);
        const ElementSamples s = element_samples(d, el);
        const double hint = 0.5 * (el.lo + el.hi);

        // Single-operator moments: every integrand is a product of the
        // sampled Tu / Vu values (origin limits included), so the r -> 0
        // contributions w0 u'(0)^2 to <T^2>, <V^2> and <VT> emerge from the
        // same sample values that make (ΔH)² cancel exactly.
        for (int q = 0; q < n1; ++q) {
            const long double w = el.w[q];
            t += w * u_e[q] * s.tu[q];
            v += w * u_e[q] * s.vu[q];
            t2 += w * s.tu[q] * s.tu[q];
            v2 += w * s.vu[q] * s.vu[q];
            vt += w * s.vu[q] * s.tu[q];

            const int gi = el.offset + q;
            if (gi != 0 || !d.radial_origin) {
                double vi = 0, vc = 0;
                potential_parts(*d.sys, static_cast<double>(el.r[q]), hint, vi, vc);
                const long double uu = u_e[q] * u_e[q];
                v_int_acc += w * vi * uu;
                v_conf_acc += w * vc * uu;
                cross_acc += 2.0L * w * vi * vc * uu;
            }
        }

        // Composition route <TV> = <u | T (V u)>: differentiate the sampled
        // product V·u element-locally.  The domain endpoints are skipped
        // (their integrand carries a factor u = 0); the centrifugal part of
        // T(Vu) is finite at every used node.
        const VecLD pf = el.d * s.vu;
        const VecLD ppf = el.d * pf;
        for (int q = 0; q < n1; ++q) {
            const int gi = el.offset + q;
            if (gi == 0 || gi == n_global - 1) continue;
            const long double r = el.r[q];
            const long double centrifugal = d.ll == 0.0L ? 0.0L : 0.5L * d.ll / (r * r);
            const long double tf = -0.5L * ppf[q] + centrifugal * s.vu[q];
            tv += el.w[q] * u_e[q] * tf;
        }
    }

    // A potential discontinuity at an element interface (the interfaces the
    // solve domain lists as breakpoints) makes the product V·u jump and
    // kink there, so T(V·u) carries the distributional parts
    //     -1/2 [ (Vu)' ] δ(r-b)  and  -1/2 [ Vu ] δ'(r-b),
    // which elementwise differentiation cannot see.  Their contribution to
    // <u | T (Vu)>,
    //     -1/2 [ (Vu)' ] u(b) + 1/2 [ Vu ] u'(b),
    // is reconstructed from the one-sided element samples.  Smooth
    // confinements and hard walls have no interior breakpoints.
    for (std::size_t e = 0; e + 1 < g.elements.size(); ++e) {
        const grid::Element& left = g.elements[e];
        const grid::Element& right = g.elements[e + 1];
        bool at_break = false;
        for (const double b : g.domain.breakpoints) {
            if (std::abs(right.lo - b) <= 1e-12 * std::max(1.0, std::abs(b))) at_break = true;
        }
        if (!at_break) continue;
        const ElementSamples sl = element_samples(d, left);
        const ElementSamples sr = element_samples(d, right);
        const auto u_l = d.u.segment(left.offset, left.degree + 1);
        const auto u_r = d.u.segment(right.offset, right.degree + 1);
        const long double u_node = d.u[right.offset];
        const long double du =
            0.5L * (left.d.row(left.degree).dot(u_l) + right.d.row(0).dot(u_r));
        const long double jump_f = sr.vu[0] - sl.vu[left.degree];
        const long double jump_fp =
            right.d.row(0).dot(sr.vu) - left.d.row(left.degree).dot(sl.vu);
        tv += -0.5L * jump_fp * u_node + 0.5L * jump_f * du;
    }

    // Integration by parts on the half line leaves the boundary term
    // u'(0) (Vu)(0) = -u'(0)^2 between the composition and quadratic forms;
    // equivalently, the contact part of T acting on V·u.  Subtracting half
    // of it lands the composition route on the quadratic-form value.
    if (d.coulomb_origin) tv -= 0.5L * d.q0 * d.q0;

    ExpectationSet out;
    out.t = static_cast<double>(t);
    out.v = static_cast<double>(v);
    out.t2 = static_cast<double>(t2);
    out.v2 = static_cast<double>(v2);
    out.tv = static_cast<double>(tv);
    out.vt = static_cast<double>(vt);
    out.v_interior = static_cast<double>(v_int_acc);
    out.v_conf = static_cast<double>(v_conf_acc);
    out.cross_vvc = static_cast<double>(cross_acc);
    return out;
}

VirialReport virial_report(const eigensolve::Eigenstate& state) {
    const ExpectationSet e = expectation_set(state);
    VirialReport r;
    r.energy = state.energy / model::energy_scale(state.system);
    r.t = e.t;
    r.v = e.v;
    r.dT2 = e.t2 - e.t * e.t;
    r.dV2 = e.v2 - e.v * e.v;
    r.cross1 = e.t * e.v - e.tv;
    r.cross2 = e.t * e.v - e.vt;
    const double hi = std::max(std::max(r.dT2, r.dV2), std::max(r.cross1, r.cross2));
    const double lo = std::min(std::min(r.dT2, r.dV2), std::min(r.cross1, r.cross2));
    r.spread = hi - lo;
    r.t2_direct = e.t2;
    r.t2_via_energy = t_squared_via_energy(r.energy, e.v, e.v2);
    r.t2_gap = std::fabs(r.t2_direct - r.t2_via_energy);
    r.dH2 = r.dT2 + r.dV2 + (e.tv - e.t * e.v) + (e.vt - e.t * e.v);
    return r;
}

SchwartzCheck schwartz_check(const eigensolve::Eigenstate& state) {
    const ExpectationSet e = expectation_set(state);
    SchwartzCheck c;
    c.lhs = (e.t2 - e.t * e.t) * (e.v2 - e.v * e.v);
    c.rhs = (e.tv - e.t * e.v) * (e.vt - e.t * e.v);
    return c;
}

}  // namespace confinium::observables
