#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qcx/errors.hpp"
#include "qcx/quasicomplex.hpp"
#include "qcx/rng.hpp"

using namespace qcx;

namespace {

// 0 -> C^4 -> C^6 -> C^4 -> 0, the incidence chain of the tetrahedron
// boundary surface; squares to zero exactly in integer arithmetic.
QuasiComplex tetra_chain() {
    Mat d0 = Mat::Zero(6, 4);
    const int edges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (int e = 0; e < 6; ++e) {
        d0(e, edges[e][0]) = -1.0;
        d0(e, edges[e][1]) = 1.0;
    }
    // faces (1,2,3),(0,3,2),(0,1,3),(0,2,1) of the outward-oriented boundary
    Mat d1 = Mat::Zero(4, 6);
    const int faces[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
    auto edge_index = [&](int a, int b) {
        const int lo = std::min(a, b), hi = std::max(a, b);
        for (int e = 0; e < 6; ++e)
            if (edges[e][0] == lo && edges[e][1] == hi) return e;
        return -1;
    };
    for (int f = 0; f < 4; ++f)
        for (int k = 0; k < 3; ++k) {
            const int a = faces[f][k], b = faces[f][(k + 1) % 3];
            d1(f, edge_index(a, b)) = (a < b) ? 1.0 : -1.0;
        }
    return QuasiComplex({InnerProductSpace(4), InnerProductSpace(6), InnerProductSpace(4)},
                        {d0, d1});
}

} // namespace

TEST_CASE("construction validates shapes and orders") {
    InnerProductSpace a(2), b(3);
    CHECK_NOTHROW(QuasiComplex({a, b}, {Mat::Zero(3, 2)}));
    CHECK_THROWS_AS(QuasiComplex({a, b}, {Mat::Zero(2, 3)}), ShapeMismatch);
    CHECK_THROWS_AS(QuasiComplex({a, b}, {}), ShapeMismatch);
    CHECK_THROWS_AS(QuasiComplex({a, b}, {Mat::Zero(3, 2)}, std::vector<double>{1.0, 2.0}),
                    ShapeMismatch);
    QuasiComplex qc({a, b}, {Mat::Zero(3, 2)}, std::vector<double>{2.5});
    CHECK(qc.orders() == std::vector<double>{2.5});
    QuasiComplex single({a}, {});
    CHECK(single.length() == 0);
    CHECK(single.steps() == 1);
}

TEST_CASE("step accessors guard their range") {
    QuasiComplex qc = tetra_chain();
    CHECK(qc.length() == 2);
    CHECK(qc.steps() == 3);
    CHECK_NOTHROW(qc.diff(1));
    CHECK_THROWS_AS(qc.diff(2), StepOutOfRange);
    CHECK_THROWS_AS(qc.diff(-1), StepOutOfRange);
    CHECK_THROWS_AS(qc.space(3), StepOutOfRange);
    CHECK(qc.diff_or_zero(-1).mat.rows() == 4);
    CHECK(qc.diff_or_zero(-1).mat.cols() == 0);
    CHECK(qc.diff_or_zero(2).mat.rows() == 0);
    CHECK(qc.diff_or_zero(2).mat.cols() == 4);
}

TEST_CASE("an exact chain validates with zero curvature") {
    QuasiComplex qc = tetra_chain();
    CurvatureReport rep = validate(qc);
    REQUIRE(rep.absolute.size() == 1);
    CHECK(rep.absolute[0] == 0.0); // integer products cancel exactly
    CHECK(rep.is_exact);
    CHECK(rep.max_relative() == 0.0);
}

TEST_CASE("a perturbed chain reports its curvature profile") {
    QuasiComplex qc = tetra_chain();
    Rng rng(5);
    Mat noise = rng.gaussian_matrix(4, 6);
    Mat d1 = qc.diff(1).mat + 1e-4 * noise / noise.norm();
    QuasiComplex bent({qc.space(0), qc.space(1), qc.space(2)}, {qc.diff(0).mat, d1});
    CurvatureReport rep = validate(bent);
    CHECK(!rep.is_exact);
    CHECK(rep.absolute[0] > 0.0);
    CHECK(rep.absolute[0] < 1e-3);
    CHECK(rep.relative[0] == doctest::Approx(rep.absolute[0] / rep.norm_products[0]));
    // tighter policy flips nothing; looser policy accepts the bend
    ExactnessPolicy loose{1.0, 1e-12};
    CHECK(validate(bent, loose).is_exact);
}

TEST_CASE("adjoint sequence reverses the chain") {
    QuasiComplex qc = tetra_chain();
    QuasiComplex rev = adjoint_sequence(qc);
    CHECK(rev.length() == 2);
    CHECK(rev.space(0).dim() == 4);
    CHECK(rev.space(1).dim() == 6);
    CHECK(rev.diff(0).mat.rows() == 6);
    // adjoint of an adjoint sequence restores the original matrices
    QuasiComplex back = adjoint_sequence(rev);
    for (int i = 0; i < 2; ++i)
        CHECK((back.diff(i).mat - qc.diff(i).mat).norm() < 1e-14);
    // exactness carries over
    CHECK(validate(rev).is_exact);
}

TEST_CASE("laplacians are metric self-adjoint and positive semidefinite") {
    QuasiComplex qc = tetra_chain();
    std::vector<LinearOp> laps = laplacians(qc);
    REQUIRE(laps.size() == 3);
    for (const LinearOp& lap : laps) {
        CHECK((adjoint(lap).mat - lap.mat).norm() < 1e-12 * std::max(1.0, lap.mat.norm()));
        Eigen::SelfAdjointEigenSolver<Mat> es(lap.mat);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
    }
    // middle Laplacian uses both neighbors; ends degenerate to one term
    CHECK((laps[0].mat - (adjoint(qc.diff(0)).mat * qc.diff(0).mat)).norm() < 1e-13);
    CHECK((laps[2].mat - (qc.diff(1).mat * adjoint(qc.diff(1)).mat)).norm() < 1e-13);
    // kernel dimensions of the sphere chain: 1, 0, 1
    CHECK(kernel_basis(laps[0]).cols() == 1);
    CHECK(kernel_basis(laps[1]).cols() == 0);
    CHECK(kernel_basis(laps[2]).cols() == 1);
    CHECK_THROWS_AS(laplacian(qc, 3), StepOutOfRange);
}

TEST_CASE("laplacians respect a weighted metric") {
    Mat g = Mat::Identity(6, 6);
    for (int i = 0; i < 6; ++i) g(i, i) = 1.0 + 0.5 * i;
    QuasiComplex plain = tetra_chain();
    QuasiComplex weighted(
        {plain.space(0), InnerProductSpace(6, g), plain.space(2)},
        {plain.diff(0).mat, plain.diff(1).mat});
    std::vector<LinearOp> laps = laplacians(weighted);
    for (const LinearOp& lap : laps)
        CHECK((adjoint(lap).mat - lap.mat).norm() < 1e-11 * std::max(1.0, lap.mat.norm()));
    // harmonic counts are metric independent
    CHECK(kernel_basis(laps[0]).cols() == 1);
    CHECK(kernel_basis(laps[1]).cols() == 0);
    CHECK(kernel_basis(laps[2]).cols() == 1);
}
