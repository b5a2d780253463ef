#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qcx/errors.hpp"

namespace qcx {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Numerical rank cutoff: singular values at or below rel * max(1, sigma_max)
// count as zero.
struct RankPolicy {
    double rel = 1e-10;
    double cutoff(double sigma_max) const { return rel * std::max(1.0, sigma_max); }
};

/* A finite-dimensional complex vector space with a Hermitian positive
 * definite gram matrix. The Cholesky factor C (gram = C^H C) is computed
 * once at construction; x -> C x maps into orthonormal coordinates.
 * dim 0 is legal everywhere. Instances are immutable. */
class InnerProductSpace {
public:
    explicit InnerProductSpace(int dim);
    InnerProductSpace(int dim, Mat gram);

    int dim() const { return dim_; }
    const Mat& gram() const { return gram_; }
    // True exactly when the gram is bitwise the identity; all coordinate
    // changes are then skipped, so integer data passes through unchanged.
    bool orthonormal() const { return orthonormal_; }

    // Cholesky data; only populated when !orthonormal().
    const Mat& chol() const { return chol_; }         // upper C, gram = C^H C
    const Mat& chol_inv() const { return chol_inv_; } // C^{-1}

    // <u, v>: conjugate-linear in u, linear in v.
    cxd inner(const Vec& u, const Vec& v) const;
    double norm(const Vec& u) const;

    Mat to_ortho(const Mat& columns) const;   // C * columns
    Mat from_ortho(const Mat& columns) const; // C^{-1} * columns

private:
    int dim_ = 0;
    Mat gram_;
    bool orthonormal_ = true;
    Mat chol_;
    Mat chol_inv_;
};

// A linear map between inner product spaces; mat is codomain.dim x domain.dim.
struct LinearOp {
    InnerProductSpace domain;
    InnerProductSpace codomain;
    Mat mat;

    LinearOp(InnerProductSpace dom, InnerProductSpace cod, Mat m);
};

struct RankProfile {
    int rank = 0;
    std::vector<double> singular_values; // descending, metric-aware
    double rank_tol = 0.0;               // absolute cutoff that was applied
};

LinearOp identity_op(const InnerProductSpace& space);
LinearOp zero_op(const InnerProductSpace& domain, const InnerProductSpace& codomain);

// b after a; shapes must chain.
LinearOp compose(const LinearOp& b, const LinearOp& a);
LinearOp add(const LinearOp& a, const LinearOp& b);
LinearOp scale(cxd factor, const LinearOp& a);

// Matrix of the operator between orthonormalized coordinates:
// C_cod * mat * C_dom^{-1}.
Mat ortho_mat(const LinearOp& op);

// Unique op with <op u, v>_cod = <u, adjoint(op) v>_dom for all u, v;
// concretely gram_dom^{-1} mat^H gram_cod.
LinearOp adjoint(const LinearOp& op);

double op_norm(const LinearOp& op);

RankProfile rank_profile(const LinearOp& op, const RankPolicy& policy = {});

// Metric-aware Moore-Penrose pseudo-inverse. Singular values under the
// rank cutoff are dropped, so near-kernel directions map to zero.
LinearOp pinv(const LinearOp& op, const RankPolicy& policy = {});

// Columns form a metric-orthonormal basis of the numerical kernel.
Mat kernel_basis(const LinearOp& op, const RankPolicy& policy = {});

// Metric-orthogonal projector onto the span of metric-orthonormal columns.
LinearOp projector_from_basis(const InnerProductSpace& space, const Mat& basis);

} // namespace qcx
