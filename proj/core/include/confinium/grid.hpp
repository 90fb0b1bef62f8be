/** \file grid.hpp
 *  \brief Spectral-element collocation grid on an interval.
 *
 *  The radial (or 1D Cartesian) interval is partitioned into elements at the
 *  breakpoints requested by the solve domain; each element carries a
 *  Legendre–Gauss–Lobatto (LGL) node set of the requested polynomial degree
 *  together with its quadrature weights and differentiation matrix.
 *  Neighbouring elements share their interface node, so global vectors are
 *  continuous by construction.  Dirichlet data at the two domain endpoints is
 *  imposed by working with the interior nodes only.
 *
 *  All node positions, weights and element operators are computed and stored
 *  in long double; double-precision views are provided for consumers that
 *  feed LAPACK-style dense solvers.
 */
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "confinium/model.hpp"

namespace confinium::grid {

using VecLD = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using MatLD = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

/// Legendre–Gauss–Lobatto rule of polynomial degree \p degree on [-1, 1]:
/// degree+1 nodes including both endpoints, exact for polynomials of degree
/// 2*degree - 1.  Nodes ascend; x[0] = -1 and x[degree] = +1 exactly.
void lgl_rule(int degree, VecLD& x, VecLD& w);

/// Spectral differentiation matrix on an arbitrary ascending node set,
/// built from barycentric weights evaluated in log-scaled form so that
/// degrees of several hundred do not overflow.  Row sums vanish exactly
/// (the diagonal is the negative sum of the off-diagonal entries).
MatLD lgl_diff_matrix(const VecLD& x);

/// One spectral element: an affine image of the LGL reference rule.
struct Element {
    double lo = 0.0;   ///< left edge
    double hi = 0.0;   ///< right edge
    int degree = 0;    ///< polynomial degree (degree+1 local nodes)
    int offset = 0;    ///< global index of the element's first node
    VecLD r;           ///< physical node positions (ascending)
    VecLD w;           ///< physical quadrature weights (sum = hi - lo)
    MatLD d;           ///< physical first-derivative matrix (2/h scaling)
};

/// Assembled collocation grid for one solve domain.
///
/// Global node indexing: element e owns global nodes
/// [offset_e, offset_e + degree_e]; interface nodes are shared
/// (offset_{e+1} = offset_e + degree_e).  The two domain endpoints carry
/// the Dirichlet condition and are excluded from the interior views.
struct RadialGrid {
    model::Domain domain;
    std::vector<Element> elements;

    VecLD all_r;  ///< all global nodes, endpoints included
    VecLD all_w;  ///< global quadrature weights (interface nodes summed)

    Eigen::VectorXd nodes;    ///< interior nodes (double view)
    Eigen::VectorXd weights;  ///< interior global weights (double view)
    VecLD w_interior;         ///< interior global weights (long double)

    /// Interior first-derivative matrix; at an interface node the row is the
    /// quadrature-weighted average of the two one-sided element rows.
    Eigen::MatrixXd d1;

    /// Interior second-derivative matrix in weak (self-adjoint) form,
    /// d2 = -W^{-1} K.  Exact at interior nodes for polynomials that vanish
    /// at the domain endpoints and fit inside the quadrature exactness.
    Eigen::MatrixXd d2;

    /// Interior stiffness matrix K_ij = sum_e int phi_i' phi_j' dr in long
    /// double; the symmetric building block of the kinetic operator.
    MatLD kinetic_stiffness;

    int n_all() const { return static_cast<int>(all_r.size()); }
    int n_interior() const { return static_cast<int>(nodes.size()); }
};

/// Build the grid for \p dom with per-element polynomial degree \p degree.
/// Elements thinner than 2% of the domain length get their degree capped at
/// 128; splits listed in the domain become element boundaries.
RadialGrid build_grid(const model::Domain& dom, int degree);

}  // namespace confinium::grid
