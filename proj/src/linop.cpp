#include "qcx/linop.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qcx {

namespace {

constexpr double kGramHermitianTol = 1e-12;

Eigen::JacobiSVD<Mat> full_svd(const Mat& m) {
    return Eigen::JacobiSVD<Mat>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

} // namespace

InnerProductSpace::InnerProductSpace(int dim) : dim_(dim) {
    if (dim < 0) throw InvalidInput("space dimension must be nonnegative");
    gram_ = Mat::Identity(dim, dim);
    orthonormal_ = true;
}

InnerProductSpace::InnerProductSpace(int dim, Mat gram) : dim_(dim), gram_(std::move(gram)) {
    if (dim < 0) throw InvalidInput("space dimension must be nonnegative");
    if (gram_.rows() != dim || gram_.cols() != dim)
        throw ShapeMismatch("gram matrix must be dim x dim");
    if (dim == 0) { orthonormal_ = true; return; }
    double scale = std::max(1.0, gram_.norm());
    if ((gram_ - gram_.adjoint()).norm() > kGramHermitianTol * scale)
        throw InvalidInput("gram matrix is not Hermitian");
    if (gram_.isIdentity(0.0)) { orthonormal_ = true; return; }
    orthonormal_ = false;
    Mat sym = 0.5 * (gram_ + gram_.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> eig(sym);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0)
        throw InvalidInput("gram matrix is not positive definite");
    Eigen::LLT<Mat> llt(sym);
    if (llt.info() != Eigen::Success)
        throw InvalidInput("gram matrix is not positive definite");
    chol_ = llt.matrixL().adjoint();
    chol_inv_ = chol_.triangularView<Eigen::Upper>().solve(Mat::Identity(dim, dim));
}

cxd InnerProductSpace::inner(const Vec& u, const Vec& v) const {
    if (u.size() != dim_ || v.size() != dim_) throw ShapeMismatch("vector size mismatch");
    return (u.adjoint() * gram_ * v)(0, 0);
}

double InnerProductSpace::norm(const Vec& u) const {
    return std::sqrt(std::max(0.0, inner(u, u).real()));
}

Mat InnerProductSpace::to_ortho(const Mat& columns) const {
    if (columns.rows() != dim_) throw ShapeMismatch("column height mismatch");
    return orthonormal_ ? columns : Mat(chol_ * columns);
}

Mat InnerProductSpace::from_ortho(const Mat& columns) const {
    if (columns.rows() != dim_) throw ShapeMismatch("column height mismatch");
    return orthonormal_ ? columns : Mat(chol_inv_ * columns);
}

LinearOp::LinearOp(InnerProductSpace dom, InnerProductSpace cod, Mat m)
    : domain(std::move(dom)), codomain(std::move(cod)), mat(std::move(m)) {
    if (mat.rows() != codomain.dim() || mat.cols() != domain.dim())
        throw ShapeMismatch("operator matrix must be codomain.dim x domain.dim");
}

LinearOp identity_op(const InnerProductSpace& space) {
    return LinearOp(space, space, Mat::Identity(space.dim(), space.dim()));
}

LinearOp zero_op(const InnerProductSpace& domain, const InnerProductSpace& codomain) {
    return LinearOp(domain, codomain, Mat::Zero(codomain.dim(), domain.dim()));
}

LinearOp compose(const LinearOp& b, const LinearOp& a) {
    if (a.codomain.dim() != b.domain.dim())
        throw ShapeMismatch("composition shapes do not chain");
    return LinearOp(a.domain, b.codomain, b.mat * a.mat);
}

LinearOp add(const LinearOp& a, const LinearOp& b) {
    if (a.domain.dim() != b.domain.dim() || a.codomain.dim() != b.codomain.dim())
        throw ShapeMismatch("operator sum shape mismatch");
    return LinearOp(a.domain, a.codomain, a.mat + b.mat);
}

LinearOp scale(cxd factor, const LinearOp& a) {
    return LinearOp(a.domain, a.codomain, factor * a.mat);
}

Mat ortho_mat(const LinearOp& op) {
    Mat m = op.mat;
    if (!op.domain.orthonormal()) m = m * op.domain.chol_inv();
    if (!op.codomain.orthonormal()) m = op.codomain.chol() * m;
    return m;
}

LinearOp adjoint(const LinearOp& op) {
    Mat star = op.mat.adjoint();
    if (!op.codomain.orthonormal()) star = star * op.codomain.gram();
    if (!op.domain.orthonormal()) {
        // gram^{-1} = C^{-1} C^{-H} through the cached factor.
        star = op.domain.chol_inv() * (op.domain.chol_inv().adjoint() * star);
    }
    return LinearOp(op.codomain, op.domain, std::move(star));
}

double op_norm(const LinearOp& op) {
    Mat m = ortho_mat(op);
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

RankProfile rank_profile(const LinearOp& op, const RankPolicy& policy) {
    RankProfile out;
    Mat m = ortho_mat(op);
    if (m.rows() == 0 || m.cols() == 0) {
        out.rank_tol = policy.cutoff(0.0);
        return out;
    }
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& sv = svd.singularValues();
    out.singular_values.assign(sv.data(), sv.data() + sv.size());
    out.rank_tol = policy.cutoff(sv.size() ? sv(0) : 0.0);
    for (double s : out.singular_values)
        if (s > out.rank_tol) ++out.rank;
    return out;
}

LinearOp pinv(const LinearOp& op, const RankPolicy& policy) {
    if (op.domain.dim() == 0 || op.codomain.dim() == 0)
        return zero_op(op.codomain, op.domain);
    Mat m = ortho_mat(op);
    auto svd = full_svd(m);
    const auto& sv = svd.singularValues();
    double cut = policy.cutoff(sv.size() ? sv(0) : 0.0);
    Mat plus = Mat::Zero(m.cols(), m.rows());
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > cut)
            plus += (1.0 / sv(k)) * svd.matrixV().col(k) * svd.matrixU().col(k).adjoint();
    }
    if (!op.domain.orthonormal()) plus = op.domain.chol_inv() * plus;
    if (!op.codomain.orthonormal()) plus = plus * op.codomain.chol();
    return LinearOp(op.codomain, op.domain, std::move(plus));
}

Mat kernel_basis(const LinearOp& op, const RankPolicy& policy) {
    int n = op.domain.dim();
    if (n == 0) return Mat::Zero(0, 0);
    if (op.codomain.dim() == 0 || op.mat.isZero(0.0))
        return op.domain.from_ortho(Mat::Identity(n, n));
    Mat m = ortho_mat(op);
    auto svd = full_svd(m);
    const auto& sv = svd.singularValues();
    double cut = policy.cutoff(sv.size() ? sv(0) : 0.0);
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > cut) ++rank;
    Mat null_cols = svd.matrixV().rightCols(n - rank);
    return op.domain.from_ortho(null_cols);
}

LinearOp projector_from_basis(const InnerProductSpace& space, const Mat& basis) {
    if (basis.rows() != space.dim()) throw ShapeMismatch("basis height mismatch");
    Mat p = basis * basis.adjoint() * space.gram();
    return LinearOp(space, space, std::move(p));
}

} // namespace qcx
