/** \file test_grid.cpp
 *  \brief Collocation-grid tests: quadrature exactness, differentiation
 *         accuracy, multi-element assembly, operator symmetry.
 */
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "confinium/grid.hpp"
#include "confinium/model.hpp"

namespace g = confinium::grid;
namespace m = confinium::model;

TEST_CASE("quadrature rule: weights sum to the interval, exact for high polynomials") {
    g::VecLD x, w;
    g::lgl_rule(6, x, w);
    REQUIRE(x.size() == 7);
    CHECK(static_cast<double>(w.sum()) == doctest::Approx(2.0).epsilon(1e-15));
    // Endpoint inclusion and symmetry.
    CHECK(static_cast<double>(x[0]) == -1.0);
    CHECK(static_cast<double>(x[6]) == 1.0);
    for (int i = 0; i < x.size(); ++i) {
        CHECK(static_cast<double>(x[i] + x[x.size() - 1 - i]) ==
              doctest::Approx(0.0).epsilon(1e-15));
        CHECK(static_cast<double>(w[i] - w[x.size() - 1 - i]) ==
              doctest::Approx(0.0).epsilon(1e-15));
    }
    // A degree-n rule integrates polynomials up to degree 2n-1: x^10 with n=6.
    long double integral = 0.0L;
    for (int i = 0; i < x.size(); ++i) integral += w[i] * powl(x[i], 10);
    CHECK(static_cast<double>(integral) == doctest::Approx(2.0 / 11.0).epsilon(1e-15));
}

TEST_CASE("differentiation matrix is exact on polynomials of nodal degree") {
    g::VecLD x, w;
    g::lgl_rule(8, x, w);
    const g::MatLD d = g::lgl_diff_matrix(x);
    g::VecLD f(x.size()), expected(x.size());
    for (int i = 0; i < x.size(); ++i) {
        f[i] = powl(x[i], 5) - 2.0L * x[i] * x[i];
        expected[i] = 5.0L * powl(x[i], 4) - 4.0L * x[i];
    }
    const g::VecLD df = d * f;
    for (int i = 0; i < df.size(); ++i)
        CHECK(static_cast<double>(df[i]) ==
              doctest::Approx(static_cast<double>(expected[i])).epsilon(1e-13));
    // Derivative of a constant vanishes (rows sum to zero).
    const g::VecLD ones = g::VecLD::Ones(x.size());
    CHECK(static_cast<double>((d * ones).cwiseAbs().maxCoeff()) ==
          doctest::Approx(0.0).epsilon(1e-13));
}

namespace {
m::Domain box(double lo, double hi, std::vector<double> splits = {}) {
    m::Domain d;
    d.lo = lo;
    d.hi = hi;
    d.boundary = m::BoundaryKind::dirichlet_wall;
    d.splits = std::move(splits);
    return d;
}
}  // namespace

TEST_CASE("single-element grid on [0,1]") {
    const auto grid = g::build_grid(box(0.0, 1.0), 64);
    CHECK(grid.n_interior() == 63);
    CHECK(grid.n_all() == 65);
    CHECK(static_cast<double>(grid.all_w.sum()) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(static_cast<double>(grid.all_r[0]) == doctest::Approx(0.0));
    CHECK(static_cast<double>(grid.all_r[grid.n_all() - 1]) == doctest::Approx(1.0));
    // Interior views drop exactly the two endpoints.
    CHECK(grid.nodes[0] == doctest::Approx(static_cast<double>(grid.all_r[1])));
    CHECK(grid.weights.size() == grid.n_interior());
}

TEST_CASE("multi-element grid merges interface nodes and weights") {
    const auto grid = g::build_grid(box(0.0, 2.0, {0.5}), 16);
    REQUIRE(grid.elements.size() == 2);
    // Shared interface node appears once; nodes strictly ascending.
    for (int i = 1; i < grid.n_all(); ++i) CHECK(grid.all_r[i] > grid.all_r[i - 1]);
    CHECK(grid.n_all() == 2 * 16 + 1);
    CHECK(static_cast<double>(grid.all_w.sum()) == doctest::Approx(2.0).epsilon(1e-15));
    // Integrate r^2 over [0,2] = 8/3 with the merged weights.
    long double moment = 0.0L;
    for (int i = 0; i < grid.n_all(); ++i)
        moment += grid.all_w[i] * grid.all_r[i] * grid.all_r[i];
    CHECK(static_cast<double>(moment) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("second-derivative operator is exact for polynomials vanishing at the walls") {
    const auto grid = g::build_grid(box(0.0, 1.0, {0.37}), 24);
    const int n = grid.n_interior();
    Eigen::VectorXd f(n), expected(n);
    for (int i = 0; i < n; ++i) {
        const double r = grid.nodes[i];
        f[i] = r * r * (1.0 - r);  // vanishes at both domain endpoints
        expected[i] = 2.0 - 6.0 * r;
    }
    const Eigen::VectorXd d2f = grid.d2 * f;
    for (int i = 0; i < n; ++i)
        CHECK(d2f[i] == doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("kinetic stiffness matrix is symmetric positive definite") {
    const auto grid = g::build_grid(box(-1.0, 1.0, {0.0}), 20);
    const Eigen::MatrixXd k = grid.kinetic_stiffness.cast<double>();
    REQUIRE(k.rows() == grid.n_interior());
    CHECK((k - k.transpose()).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("thin elements cap their polynomial degree at 128") {
    // Layers thinner than 2% of the domain do not need hundreds of nodes;
    // their local degree is capped while wide elements keep the request.
    m::Domain d = box(0.0, 30.0, {1.0 - 0.024, 1.0, 1.0 + 0.024, 4.6});
    const auto grid = g::build_grid(d, 200);
    REQUIRE(grid.elements.size() == 5);
    CHECK(grid.elements[0].degree == 200);  // width 0.976 > 0.6
    CHECK(grid.elements[1].degree == 128);  // width 0.024 < 0.6
    CHECK(grid.elements[2].degree == 128);
    CHECK(grid.elements[4].degree == 200);
    CHECK(static_cast<double>(grid.all_w.sum()) == doctest::Approx(30.0).epsilon(1e-14));
    for (int i = 1; i < grid.n_all(); ++i) CHECK(grid.all_r[i] > grid.all_r[i - 1]);
}
