/** \file eigensolve.cpp
 *  \brief Dense collocation eigensolver with long-double refinement, domain
 *         adaptation, and the analytic shooting backend.
 */
#include "confinium/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "confinium/errors.hpp"
#include "confinium/specfun.hpp"

namespace confinium::eigensolve {

namespace {

using grid::MatLD;
using grid::VecLD;

/// Interior Hamiltonian in long double, Hartree form.  The kinetic part is
/// (1/2) S K S with S = diag(1/sqrt(W)); the potential is sampled branchwise
/// per element and blended with quadrature weights at interface nodes, plus
/// the centrifugal term for radial kinds.
MatLD assemble_ld(const model::SystemSpec& sys, const grid::RadialGrid& g) {
    const int n = g.n_interior();
    const int n_global = g.n_all();

    VecLD inv_sqw(n);
    for (int i = 0; i < n; ++i) inv_sqw[i] = 1.0L / std::sqrt(g.w_interior[i]);

    MatLD h = g.kinetic_stiffness;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            h(i, j) *= 0.5L * inv_sqw[i] * inv_sqw[j];
        }
    }

    VecLD v = VecLD::Zero(n);
    for (const grid::Element& el : g.elements) {
        const double hint = 0.5 * (el.lo + el.hi);
        for (int q = 0; q <= el.degree; ++q) {
            const int gi = el.offset + q;
            if (gi == 0 || gi == n_global - 1) continue;
            const double vq = model::total_potential_hartree(
                sys, static_cast<double>(el.r[q]), hint);
            v[gi - 1] += (el.w[q] / g.all_w[gi]) * static_cast<long double>(vq);
        }
    }
    if (sys.kind != model::Kind::CHO1D && sys.ell > 0) {
        const long double ll = static_cast<long double>(sys.ell) * (sys.ell + 1);
        for (int i = 0; i < n; ++i) {
            const long double r = g.all_r[i + 1];
            v[i] += 0.5L * ll / (r * r);
        }
    }
    h.diagonal() += v;
    return h;
}

/// One refined eigenpair: Rayleigh quotient and unit-norm coefficient vector
/// in long double, plus the final residual norm.
struct Refined {
    long double theta = 0.0L;
    VecLD x;
    double residual = 0.0;
};

/// Polish eigenpair k of the double decomposition against the long-double
/// matrix.  The correction dx solves (H - theta) dx = r approximately by
/// expanding r in the double eigenbasis and dividing by the eigenvalue gaps
/// (the component along state k is excluded); two such corrections push the
/// residual to the long-double noise floor at O(n^2) cost per step.
Refined refine_pair(const MatLD& h_ld,
                    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es, int k) {
    const int n = static_cast<int>(h_ld.rows());
    const Eigen::MatrixXd& vecs = es.eigenvectors();
    const Eigen::VectorXd& vals = es.eigenvalues();

    Refined out;
    out.x = vecs.col(k).cast<long double>();
    out.x /= out.x.norm();

    for (int iter = 0; iter < 3; ++iter) {
        const VecLD hx = h_ld * out.x;
        out.theta = out.x.dot(hx);
        const VecLD resid = hx - out.theta * out.x;
        out.residual = static_cast<double>(resid.norm());
        if (iter == 2 || out.residual < 1e-16 * std::max(1.0L, std::fabs(out.theta))) {
            break;
        }
        const Eigen::VectorXd rd = resid.cast<double>();
        const Eigen::VectorXd coef = vecs.transpose() * rd;
        const double theta_d = static_cast<double>(out.theta);
        Eigen::VectorXd dx = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            const double gap = vals[i] - theta_d;
            if (std::fabs(gap) < 1e-10 * std::max(1.0, std::fabs(theta_d))) continue;
            dx += vecs.col(i) * (coef[i] / gap);
        }
        out.x -= dx.cast<long double>();
        out.x /= out.x.norm();
    }
    return out;
}

struct DomainSolve {
    std::shared_ptr<const grid::RadialGrid> grid;
    std::vector<Refined> states;
};

DomainSolve solve_on_domain(const model::SystemSpec& sys, const model::Domain& dom,
                            int grid_n, int count) {
    auto g = std::make_shared<grid::RadialGrid>(grid::build_grid(dom, grid_n));
    const MatLD h_ld = assemble_ld(sys, *g);
    if (count > g->n_interior()) {
        throw ParameterError("solve_bound_states: requested " + std::to_string(count) +
                             " states from a grid with only " +
                             std::to_string(g->n_interior()) + " interior nodes");
    }
    const Eigen::MatrixXd h_d = h_ld.cast<double>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_d);
    if (es.info() != Eigen::Success) {
        throw Error("solve_bound_states: dense symmetric eigensolve failed for " +
                    sys.describe());
    }
    DomainSolve ds;
    ds.grid = std::move(g);
    ds.states.reserve(count);
    for (int k = 0; k < count; ++k) ds.states.push_back(refine_pair(h_ld, es, k));
    return ds;
}

/// Geometric truncation-radius growth; returns the converged (last-grown)
/// round so the caller can reuse its solve.
std::pair<model::Domain, DomainSolve> run_adaptation(const model::SystemSpec& sys,
                                                     int count,
                                                     const model::TruncationPolicy& policy) {
    double rmax = policy.initial_rmax;
    std::vector<std::pair<double, double>> trace;
    std::vector<long double> prev;

    for (int round = 0; round < policy.max_rounds; ++round) {
        model::TruncationPolicy p = policy;
        p.initial_rmax = rmax;
        model::Domain dom = model::solve_domain(sys, p);
        DomainSolve ds = solve_on_domain(sys, dom, policy.grid_n, count);

        std::vector<long double> cur(count);
        for (int k = 0; k < count; ++k) cur[k] = ds.states[k].theta;
        trace.emplace_back(rmax, static_cast<double>(cur[count - 1]));

        if (!prev.empty()) {
            bool settled = true;
            for (int k = 0; k < count; ++k) {
                const long double scale = std::max(1.0L, std::fabs(cur[k]));
                if (std::fabs(cur[k] - prev[k]) > policy.energy_tol * scale) {
                    settled = false;
                    break;
                }
            }
            if (settled) return {dom, std::move(ds)};
        }
        prev = std::move(cur);
        rmax *= policy.growth;
    }

    std::ostringstream os;
    os << "truncation radius did not converge for " << sys.describe()
       << " within " << policy.max_rounds << " rounds";
    throw ConvergenceError(os.str(), trace);
}

int count_sign_changes(const Eigen::VectorXd& psi) {
    const double floor = 1e-12 * psi.cwiseAbs().maxCoeff();
    int changes = 0;
    double last = 0.0;
    for (int i = 0; i < psi.size(); ++i) {
        if (std::fabs(psi[i]) <= floor) continue;
        const double s = psi[i] > 0.0 ? 1.0 : -1.0;
        if (last != 0.0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

}  // namespace

Eigen::MatrixXd assemble_hamiltonian(const model::SystemSpec& sys,
                                     const grid::RadialGrid& g) {
    return assemble_ld(sys, g).cast<double>();
}

model::Domain adapt_domain(const model::SystemSpec& sys, int count,
                           const model::TruncationPolicy& policy) {
    sys.validate();
    if (count < 1) throw ParameterError("adapt_domain: count must be >= 1");
    model::Domain dom = model::solve_domain(sys, policy);
    if (dom.boundary == model::BoundaryKind::dirichlet_wall) return dom;
    return run_adaptation(sys, count, policy).first;
}

std::vector<Eigenstate> solve_bound_states(const model::SystemSpec& sys, int count,
                                           const model::TruncationPolicy& policy) {
    sys.validate();
    if (count < 1) throw ParameterError("solve_bound_states: count must be >= 1");

    model::Domain dom = model::solve_domain(sys, policy);
    DomainSolve ds;
    if (dom.boundary == model::BoundaryKind::decay_truncation) {
        auto adapted = run_adaptation(sys, count, policy);
        dom = adapted.first;
        ds = std::move(adapted.second);
    } else {
        ds = solve_on_domain(sys, dom, policy.grid_n, count);
    }

    const grid::RadialGrid& g = *ds.grid;
    const double scale = model::energy_scale(sys);
    const double plateau = model::bound_plateau_native(sys);

    std::vector<Eigenstate> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        const Refined& rf = ds.states[k];
        const double native = static_cast<double>(rf.theta) * scale;
        if (!(native < plateau)) {
            std::ostringstream os;
            os << sys.describe() << " supports only " << k
               << " bound state(s); state " << k << " sits at E = " << native
               << " against a potential plateau of " << plateau;
            throw PartialResultError(os.str(), k, count);
        }

        Eigenstate st;
        st.system = sys;
        st.state = model::make_state(sys, k);
        st.energy = native;
        st.grid = ds.grid;
        st.eig_residual = rf.residual;

        // Coefficients are unit-norm in the weighted inner product, so the
        // wavefunction psi = x / sqrt(W) integrates to one automatically.
        const int n = g.n_interior();
        VecLD psi_ld(n);
        for (int i = 0; i < n; ++i) psi_ld[i] = rf.x[i] / std::sqrt(g.w_interior[i]);
        st.psi = psi_ld.cast<double>();

        const double floor = 1e-12 * st.psi.cwiseAbs().maxCoeff();
        for (int i = 0; i < n; ++i) {
            if (std::fabs(st.psi[i]) > floor) {
                if (st.psi[i] < 0.0) st.psi = -st.psi;
                break;
            }
        }

        st.node_count = count_sign_changes(st.psi);
        if (st.node_count != k) {
            std::ostringstream os;
            os << "state " << k << " of " << sys.describe() << " shows "
               << st.node_count << " interior node(s); the spectrum is "
               << "under-resolved or a state was missed";
            throw Error(os.str());
        }
        st.norm_residual = std::fabs(g.weights.dot(st.psi.cwiseProduct(st.psi)) - 1.0);
        out.push_back(std::move(st));
    }
    return out;
}

namespace {

/// Brent root bracketing on a long-double function of energy.
long double brent_root(const std::function<long double(long double)>& f, long double a,
                       long double b, long double fa, long double fb, long double rel_tol) {
    if (fa == 0.0L) return a;
    if (fb == 0.0L) return b;
    if ((fa > 0.0L) == (fb > 0.0L)) {
        throw BracketError("shoot_energy: no sign change across the energy bracket",
                           static_cast<double>(a), static_cast<double>(b),
                           static_cast<double>(fa), static_cast<double>(fb));
    }
    long double c = a, fc = fa;
    long double d = b - a, e = b - a;
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb > 0.0L) == (fc > 0.0L)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const long double tol1 =
            2.0L * std::numeric_limits<long double>::epsilon() * std::fabs(b) +
            0.5L * rel_tol * std::max(1.0L, std::fabs(b));
        const long double xm = 0.5L * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0L) return b;

        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            // Inverse quadratic interpolation (secant when a == c).
            const long double s = fb / fa;
            long double p, q;
            if (a == c) {
                p = 2.0L * xm * s;
                q = 1.0L - s;
            } else {
                const long double qq = fa / fc;
                const long double rr = fb / fc;
                p = s * (2.0L * xm * qq * (qq - rr) - (b - a) * (rr - 1.0L));
                q = (qq - 1.0L) * (rr - 1.0L) * (s - 1.0L);
            }
            if (p > 0.0L) q = -q;
            p = std::fabs(p);
            if (2.0L * p < std::min(3.0L * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0.0L ? tol1 : -tol1);
        fb = f(b);
        if (fb == 0.0L) return b;
    }
    return b;
}

long double kummer_checked(long double a, long double b, long double z) {
    long terms = 0;
    bool converged = false;
    const long double v = specfun::detail::kummer_m_ld(a, b, z, &terms, &converged);
    if (!converged) {
        throw SeriesError("shooting_mismatch: Kummer series hit its term cap",
                          static_cast<double>(v), terms);
    }
    return v;
}

long double mismatch_ld(const model::SystemSpec& sys, const model::StateSpec& st,
                        long double energy) {
    switch (sys.kind) {
        case model::Kind::CHO1D: {
            const long double om = sys.omega;
            const bool odd = st.parity == model::Parity::odd;
            const long double a = (odd ? 0.75L : 0.25L) - energy / (2.0L * om);
            if (sys.is_free()) {
                // Bound states terminate the series: a must hit a
                // non-positive integer matching the radial excitation.
                const long double a_index = odd ? (st.n_index - 1) / 2 : st.n_index / 2;
                return a + a_index;
            }
            const long double z = om * static_cast<long double>(sys.x_c) * sys.x_c;
            return kummer_checked(a, odd ? 1.5L : 0.5L, z);
        }
        case model::Kind::CHO3D: {
            const long double om_eff = std::sqrt(static_cast<long double>(sys.omega));
            const long double a = 0.5L * (sys.ell + 1.5L - energy / om_eff);
            if (sys.is_free()) return a + st.n_index;
            const long double z = om_eff * static_cast<long double>(sys.r_c) * sys.r_c;
            return kummer_checked(a, sys.ell + 1.5L, z);
        }
        case model::Kind::CHA: {
            if (sys.is_free()) {
                if (energy >= 0.0L) {
                    throw ParameterError(
                        "shooting_mismatch: free hydrogen-like states require E < 0");
                }
                const long double kappa = std::sqrt(-2.0L * energy);
                return (sys.ell + 1.0L - 1.0L / kappa) + st.n_index;
            }
            return specfun::detail::hydrogen_regular_series_ld(
                sys.ell, energy, static_cast<long double>(sys.r_c));
        }
        case model::Kind::SPCHA: {
            // Native (doubled) units throughout: inside the step the radial
            // equation matches the hydrogen series at E/2 Hartree; outside it
            // the decaying solution is r k_l(kappa r) with kappa^2 = V0 - E.
            const long double rc = sys.r_c;
            long double u = 0.0L, du = 0.0L;
            if (std::isinf(sys.V0)) {
                // Hard wall: the regular solution must vanish at the step.
                return specfun::detail::hydrogen_regular_series_ld(sys.ell, energy / 2.0L,
                                                                   rc);
            }
            if (!(energy < sys.V0)) {
                throw ParameterError(
                    "shooting_mismatch: bound states need E below the outer step");
            }
            specfun::detail::hydrogen_regular_series_pair_ld(sys.ell, energy / 2.0L, rc,
                                                             u, du);
            const long double kappa = std::sqrt(static_cast<long double>(sys.V0) - energy);
            const long double x = kappa * rc;
            // Scaled modified spherical Bessel ratio k_{l+1}/k_l via the stable
            // upward recurrence k_{n+1} = k_{n-1} + (2n+1)/x k_n.
            long double k0 = 1.0L / x;
            long double k1 = (1.0L + 1.0L / x) / x;
            for (int n = 1; n < sys.ell + 1; ++n) {
                const long double k2 = k0 + (2.0L * n + 1.0L) / x * k1;
                k0 = k1;
                k1 = k2;
            }
            const long double logderiv_out = (sys.ell + 1.0L) / rc - kappa * k1 / k0;
            return du - logderiv_out * u;
        }
        default:
            throw ParameterError("shooting backend supports only CHO1D, CHO3D, CHA and "
                                 "SPCHA, not " +
                                 model::kind_name(sys.kind));
    }
}

}  // namespace

double shooting_mismatch(const model::SystemSpec& sys, const model::StateSpec& st,
                         double energy) {
    sys.validate();
    return static_cast<double>(mismatch_ld(sys, st, energy));
}

double shoot_energy(const model::SystemSpec& sys, const model::StateSpec& st, double e_lo,
                    double e_hi, double tol) {
    sys.validate();
    if (!(e_lo < e_hi) || !std::isfinite(e_lo) || !std::isfinite(e_hi)) {
        throw ParameterError("shoot_energy: invalid energy bracket");
    }
    auto f = [&sys, &st](long double e) { return mismatch_ld(sys, st, e); };
    const long double fa = f(e_lo);
    const long double fb = f(e_hi);
    return static_cast<double>(
        brent_root(f, e_lo, e_hi, fa, fb, static_cast<long double>(tol)));
}

}  // namespace confinium::eigensolve
