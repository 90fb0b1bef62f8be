/** \file grid.cpp
 *  \brief LGL rules, differentiation matrices and grid assembly.
 */
#include "confinium/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "confinium/errors.hpp"

namespace confinium::grid {

namespace {

constexpr long double kPi = 3.14159265358979323846264338327950288L;

/// Legendre P_n and P_{n-1} at a point, by the three-term recurrence.
void legendre_pair(int n, long double x, long double& pn, long double& pnm1) {
    long double pkm1 = 1.0L;
    long double pk = x;
    for (int k = 2; k <= n; ++k) {
        const long double pkp1 = ((2.0L * k - 1.0L) * x * pk - (k - 1.0L) * pkm1) / k;
        pkm1 = pk;
        pk = pkp1;
    }
    pn = pk;
    pnm1 = pkm1;
}

}  // namespace

void lgl_rule(int degree, VecLD& x, VecLD& w) {
    if (degree < 1 || degree > 4096) {
        throw ParameterError("lgl_rule: degree must lie in [1, 4096], got " +
                             std::to_string(degree));
    }
    const int n1 = degree + 1;
    x.resize(n1);
    w.resize(n1);

    // Chebyshev-Gauss-Lobatto starting guess, then Newton on the defining
    // equation (1 - x^2) P_n'(x) = 0 written through P_n and P_{n-1}.
    for (int j = 0; j < n1; ++j) {
        x[j] = -std::cos(kPi * j / degree);
    }
    const long double tol = 4.0L * std::numeric_limits<long double>::epsilon();
    for (int iter = 0; iter < 100; ++iter) {
        long double shift = 0.0L;
        for (int j = 0; j < n1; ++j) {
            long double pn, pnm1;
            legendre_pair(degree, x[j], pn, pnm1);
            const long double dx = (x[j] * pn - pnm1) / (n1 * pn);
            x[j] -= dx;
            shift = std::max(shift, std::fabs(dx));
        }
        if (shift < tol) break;
    }
    x[0] = -1.0L;
    x[degree] = 1.0L;

    for (int j = 0; j < n1; ++j) {
        long double pn, pnm1;
        legendre_pair(degree, x[j], pn, pnm1);
        w[j] = 2.0L / (static_cast<long double>(degree) * n1 * pn * pn);
    }
}

MatLD lgl_diff_matrix(const VecLD& x) {
    const int n1 = static_cast<int>(x.size());
    if (n1 < 2) throw ParameterError("lgl_diff_matrix: need at least two nodes");

    // Barycentric weights lambda_j = 1 / prod_{k != j} (x_j - x_k), carried
    // as log magnitude plus sign so that hundreds of O(1) factors cannot
    // underflow the product.
    VecLD logprod(n1);
    for (int j = 0; j < n1; ++j) {
        long double s = 0.0L;
        for (int k = 0; k < n1; ++k) {
            if (k == j) continue;
            s += std::log(std::fabs(x[j] - x[k]));
        }
        logprod[j] = s;
    }
    auto sign_of = [n1](int j) { return ((n1 - 1 - j) % 2 == 0) ? 1.0L : -1.0L; };

    MatLD d(n1, n1);
    for (int i = 0; i < n1; ++i) {
        long double diag = 0.0L;
        for (int j = 0; j < n1; ++j) {
            if (j == i) continue;
            const long double val = sign_of(i) * sign_of(j) *
                                    std::exp(logprod[i] - logprod[j]) / (x[i] - x[j]);
            d(i, j) = val;
            diag -= val;
        }
        d(i, i) = diag;
    }
    return d;
}

namespace {

Element make_element(double lo, double hi, int degree) {
    Element e;
    e.lo = lo;
    e.hi = hi;
    e.degree = degree;
    VecLD xr, wr;
    lgl_rule(degree, xr, wr);
    const long double c = 0.5L * (static_cast<long double>(lo) + hi);
    const long double h = static_cast<long double>(hi) - lo;
    e.r = (c + 0.5L * h * xr.array()).matrix();
    e.r[0] = lo;
    e.r[degree] = hi;
    e.w = 0.5L * h * wr;
    e.d = (2.0L / h) * lgl_diff_matrix(xr);
    return e;
}

}  // namespace

RadialGrid build_grid(const model::Domain& dom, int degree) {
    if (!(std::isfinite(dom.lo) && std::isfinite(dom.hi) && dom.hi > dom.lo)) {
        std::ostringstream os;
        os << "build_grid: invalid domain [" << dom.lo << ", " << dom.hi << "]";
        throw ParameterError(os.str());
    }
    if (degree < 2 || degree > 2048) {
        throw ParameterError("build_grid: element degree must lie in [2, 2048], got " +
                             std::to_string(degree));
    }

    const double len = dom.hi - dom.lo;
    const double tol = 1e-12 * len;
    std::vector<double> bounds{dom.lo};
    for (double s : dom.splits) {
        if (s > dom.lo + tol && s < dom.hi - tol) bounds.push_back(s);
    }
    bounds.push_back(dom.hi);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end(),
                             [tol](double a, double b) { return b - a < tol; }),
                 bounds.end());

    RadialGrid g;
    g.domain = dom;
    int offset = 0;
    for (std::size_t e = 0; e + 1 < bounds.size(); ++e) {
        const double width = bounds[e + 1] - bounds[e];
        const int deg_e = (width < 0.02 * len) ? std::min(degree, 128) : degree;
        Element el = make_element(bounds[e], bounds[e + 1], deg_e);
        el.offset = offset;
        offset += deg_e;
        g.elements.push_back(std::move(el));
    }
    const int n_global = offset + 1;
    const int n_int = n_global - 2;
    if (n_int < 3) throw ParameterError("build_grid: grid too small");

    g.all_r = VecLD::Zero(n_global);
    g.all_w = VecLD::Zero(n_global);
    for (const Element& el : g.elements) {
        for (int q = 0; q <= el.degree; ++q) {
            g.all_r[el.offset + q] = el.r[q];
            g.all_w[el.offset + q] += el.w[q];
        }
    }

    g.w_interior = g.all_w.segment(1, n_int);
    g.nodes = g.all_r.segment(1, n_int).cast<double>();
    g.weights = g.w_interior.cast<double>();

    // Stiffness K_ij = sum_e sum_q w_q d_{q i} d_{q j}; exact for the
    // polynomial space because the integrand degree stays within 2*deg - 2.
    MatLD k_full = MatLD::Zero(n_global, n_global);
    for (const Element& el : g.elements) {
        const MatLD ke = el.d.transpose() * el.w.asDiagonal() * el.d;
        k_full.block(el.offset, el.offset, el.degree + 1, el.degree + 1) += ke;
    }
    g.kinetic_stiffness = k_full.block(1, 1, n_int, n_int);

    g.d2.resize(n_int, n_int);
    for (int i = 0; i < n_int; ++i) {
        for (int j = 0; j < n_int; ++j) {
            g.d2(i, j) = static_cast<double>(-k_full(i + 1, j + 1) / g.all_w[i + 1]);
        }
    }

    // First-derivative rows: element rows scattered to global indices; a row
    // at an interface node becomes the quadrature-weighted average of the
    // two one-sided element rows.
    MatLD d1_full = MatLD::Zero(n_global, n_global);
    for (const Element& el : g.elements) {
        for (int l = 0; l <= el.degree; ++l) {
            const int gr = el.offset + l;
            const long double frac = el.w[l] / g.all_w[gr];
            for (int m = 0; m <= el.degree; ++m) {
                d1_full(gr, el.offset + m) += frac * el.d(l, m);
            }
        }
    }
    g.d1 = d1_full.block(1, 1, n_int, n_int).cast<double>();
    return g;
}

}  // namespace confinium::grid
