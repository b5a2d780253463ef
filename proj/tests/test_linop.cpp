#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "qcx/errors.hpp"
#include "qcx/linop.hpp"
#include "qcx/rng.hpp"

using namespace qcx;

namespace {

Mat real_mat(int rows, int cols, std::initializer_list<double> vals) {
    Mat m(rows, cols);
    auto it = vals.begin();
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = *it++;
    return m;
}

// Rank over the rationals by fraction-free Gaussian elimination. Independent
// of any SVD so it can arbitrate integer matrices.
int integer_rank(std::vector<std::vector<long long>> m) {
    const int rows = static_cast<int>(m.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(m[0].size());
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][c] != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (int r = rank + 1; r < rows; ++r) {
            if (m[r][c] == 0) continue;
            const long long a = m[rank][c], b = m[r][c];
            for (int k = c; k < cols; ++k) m[r][k] = m[r][k] * a - m[rank][k] * b;
        }
        ++rank;
    }
    return rank;
}

// Vertex-to-edge incidence of the tetrahedron graph, edges sorted
// lexicographically: (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
Mat tetra_d0() {
    Mat d0 = Mat::Zero(6, 4);
    const int edges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (int e = 0; e < 6; ++e) {
        d0(e, edges[e][0]) = -1.0;
        d0(e, edges[e][1]) = 1.0;
    }
    return d0;
}

} // namespace

TEST_CASE("inner product space validates its metric") {
    CHECK_NOTHROW(InnerProductSpace(3));
    CHECK_NOTHROW(InnerProductSpace(0));

    Mat g = real_mat(2, 2, {2, 0, 0, 1});
    InnerProductSpace v(2, g);
    CHECK(!v.orthonormal());
    Vec x(2), y(2);
    x << 1.0, 2.0;
    y << 3.0, 4.0;
    CHECK(v.inner(x, y).real() == doctest::Approx(2.0 * 3.0 + 2.0 * 4.0));
    CHECK(v.norm(x) == doctest::Approx(std::sqrt(2.0 + 4.0)));

    Mat bad = real_mat(2, 2, {1, 2, 3, 1}); // not Hermitian
    CHECK_THROWS_AS(InnerProductSpace(2, bad), InvalidInput);
    Mat sing = real_mat(2, 2, {1, 1, 1, 1}); // PSD but singular
    CHECK_THROWS_AS(InnerProductSpace(2, sing), InvalidInput);
    CHECK_THROWS_AS(InnerProductSpace(2, Mat::Identity(3, 3)), ShapeMismatch);
}

TEST_CASE("identity gram is recognized bitwise") {
    InnerProductSpace v(3, Mat::Identity(3, 3));
    CHECK(v.orthonormal());
    Mat almost = Mat::Identity(3, 3);
    almost(0, 0) = 1.0 + 1e-16;
    // still a valid metric, but not the identity fast path
    if (almost(0, 0) != 1.0) CHECK(!InnerProductSpace(3, almost).orthonormal());
}

TEST_CASE("adjoint against a weighted metric, worked example") {
    // domain gram diag(2,1), codomain standard, M = [1 0]:
    // adjoint = G_dom^-1 M^H G_cod = [[1/2],[0]].
    InnerProductSpace dom(2, real_mat(2, 2, {2, 0, 0, 1}));
    InnerProductSpace cod(1);
    LinearOp op(dom, cod, real_mat(1, 2, {1, 0}));
    LinearOp star = adjoint(op);
    CHECK(star.mat(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(star.mat(1, 0)) < 1e-14);
}

TEST_CASE("adjoint is characterized by the pairing identity") {
    Rng rng(42);
    Mat gd = rng.gaussian_matrix(3, 3);
    Mat gc = rng.gaussian_matrix(4, 4);
    // random Hermitian positive definite metrics
    Mat gram_d = gd.adjoint() * gd + 3.0 * Mat::Identity(3, 3);
    Mat gram_c = gc.adjoint() * gc + 3.0 * Mat::Identity(4, 4);
    InnerProductSpace dom(3, gram_d), cod(4, gram_c);
    LinearOp op(dom, cod, rng.gaussian_matrix(4, 3));
    LinearOp star = adjoint(op);
    for (int trial = 0; trial < 100; ++trial) {
        Vec x = rng.gaussian_matrix(3, 1);
        Vec y = rng.gaussian_matrix(4, 1);
        const cxd lhs = cod.inner(y, op.mat * x);
        const cxd rhs = dom.inner(star.mat * y, x);
        CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
    }
    // involution
    LinearOp twice = adjoint(star);
    CHECK((twice.mat - op.mat).norm() < 1e-12 * op.mat.norm());
    CHECK(rank_profile(op).rank == rank_profile(star).rank);
}

TEST_CASE("operator norm respects the metric") {
    // M = [[0,1],[0,0]] with domain gram diag(4,1): unit ball allows
    // e2 of length 1, image e1 has length 1, so the norm is exactly 1.
    InnerProductSpace dom(2, real_mat(2, 2, {4, 0, 0, 1}));
    InnerProductSpace cod(2);
    LinearOp op(dom, cod, real_mat(2, 2, {0, 1, 0, 0}));
    CHECK(op_norm(op) == doctest::Approx(1.0).epsilon(1e-13));
    // same matrix, standard metric: norm 1 as well; scaling the domain
    // metric down to diag(1/4,1) doubles reachable input size
    InnerProductSpace dom2(2, real_mat(2, 2, {0.25, 0, 0, 1}));
    LinearOp op2(dom2, cod, real_mat(2, 2, {1, 0, 0, 0}));
    CHECK(op_norm(op2) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("rank of an integer incidence matrix matches exact arithmetic") {
    Mat d0 = tetra_d0();
    std::vector<std::vector<long long>> exact(6, std::vector<long long>(4, 0));
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 4; ++c) exact[r][c] = static_cast<long long>(d0(r, c).real());
    const int want = integer_rank(exact);
    CHECK(want == 3);
    InnerProductSpace v4(4), v6(6);
    RankProfile prof = rank_profile(LinearOp(v4, v6, d0));
    CHECK(prof.rank == want);
    CHECK(prof.singular_values.size() == 4);
}

TEST_CASE("pseudoinverse, diagonal worked example") {
    InnerProductSpace v2(2);
    LinearOp op(v2, v2, real_mat(2, 2, {2, 0, 0, 0}));
    LinearOp plus = pinv(op);
    CHECK(plus.mat(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(plus.mat(1, 1)) < 1e-14);
}

TEST_CASE("pseudoinverse satisfies the Moore-Penrose identities") {
    Rng rng(7);
    InnerProductSpace dom(4, [&] {
        Mat g = rng.gaussian_matrix(4, 4);
        return Mat(g.adjoint() * g + 4.0 * Mat::Identity(4, 4));
    }());
    InnerProductSpace cod(3, [&] {
        Mat g = rng.gaussian_matrix(3, 3);
        return Mat(g.adjoint() * g + 4.0 * Mat::Identity(3, 3));
    }());
    // rank-2 map
    Mat m = rng.gaussian_matrix(3, 2) * rng.gaussian_matrix(2, 4);
    LinearOp op(dom, cod, m);
    LinearOp plus = pinv(op);
    Mat a = op.mat, p = plus.mat;
    CHECK((a * p * a - a).norm() < 1e-10 * a.norm());
    CHECK((p * a * p - p).norm() < 1e-10 * p.norm());
    // A P and P A are metric self-adjoint projectors
    LinearOp ap(cod, cod, a * p), pa(dom, dom, p * a);
    CHECK((adjoint(ap).mat - ap.mat).norm() < 1e-10);
    CHECK((adjoint(pa).mat - pa.mat).norm() < 1e-10);
    CHECK(rank_profile(op).rank == 2);
}

TEST_CASE("kernel basis is metric-orthonormal and spans the kernel") {
    InnerProductSpace dom(4, real_mat(4, 4, {2, 0, 0, 0, 0, 1, 0, 0, 0, 0, 3, 0, 0, 0, 0, 1}));
    InnerProductSpace cod(2);
    Mat m = Mat::Zero(2, 4);
    m(0, 0) = 1.0;
    m(1, 2) = 2.0; // kernel = span(e1, e3)
    LinearOp op(dom, cod, m);
    Mat basis = kernel_basis(op);
    CHECK(basis.cols() == 2);
    CHECK((op.mat * basis).norm() < 1e-12);
    Mat grammed = basis.adjoint() * dom.gram() * basis;
    CHECK((grammed - Mat::Identity(2, 2)).norm() < 1e-12);

    // projector onto that kernel: idempotent, metric self-adjoint
    LinearOp proj = projector_from_basis(dom, basis);
    CHECK((proj.mat * proj.mat - proj.mat).norm() < 1e-12);
    CHECK((adjoint(proj).mat - proj.mat).norm() < 1e-12);
    CHECK((proj.mat * basis - basis).norm() < 1e-12);
}

TEST_CASE("zero-dimensional edge cases") {
    InnerProductSpace none(0), some(3);
    LinearOp in(some, none, Mat::Zero(0, 3));
    LinearOp out(none, some, Mat::Zero(3, 0));
    CHECK(op_norm(in) == 0.0);
    CHECK(op_norm(out) == 0.0);
    CHECK(rank_profile(in).rank == 0);
    CHECK(kernel_basis(in).cols() == 3); // everything is in the kernel
    CHECK(kernel_basis(out).cols() == 0);
    LinearOp plus = pinv(in);
    CHECK(plus.mat.rows() == 3);
    CHECK(plus.mat.cols() == 0);
}

TEST_CASE("compose and add validate shapes") {
    InnerProductSpace a(2), b(3), c(4);
    LinearOp f(a, b, Mat::Zero(3, 2));
    LinearOp g(b, c, Mat::Zero(4, 3));
    CHECK_NOTHROW(compose(g, f));
    CHECK_THROWS_AS(compose(f, g), ShapeMismatch);
    CHECK_THROWS_AS(add(f, g), ShapeMismatch);
    LinearOp id = identity_op(b);
    CHECK(id.mat.isIdentity(0.0));
}

TEST_CASE("deterministic stream replays bitwise for a fixed seed") {
    Rng a(123), b(123);
    for (int i = 0; i < 50; ++i) CHECK(a.normal() == b.normal());
    Mat ma = Rng(9).gaussian_matrix(3, 5);
    Mat mb = Rng(9).gaussian_matrix(3, 5);
    CHECK((ma - mb).norm() == 0.0);
    CHECK(Rng::kStreamName == std::string("mt19937-64/box-muller"));
}
