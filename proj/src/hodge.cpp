#include "qcx/hodge.hpp"

#include <algorithm>

#include "qcx/errors.hpp"

namespace qcx {

namespace {

struct SpectralSplit {
    LinearOp harmonic;
    LinearOp green;
    double tau = 0.0; // largest eigenvalue folded into the kernel side
    int kernel_dim = 0;
};

/* Eigen-split of a metric self-adjoint PSD operator. With gap_aware set,
 * a cluster of eigenvalues that sits below kGapCeiling * top and is
 * separated from the rest by a relative jump of at least kGapRatio is
 * folded into the kernel side; otherwise (and always on clean spectra)
 * the rank policy alone decides. */
SpectralSplit spectral_split(const LinearOp& lap, const RankPolicy& policy, bool gap_aware) {
    const InnerProductSpace& space = lap.domain;
    const int n = space.dim();
    if (n == 0) {
        SpectralSplit out{LinearOp(space, space, Mat::Zero(0, 0)),
                          LinearOp(space, space, Mat::Zero(0, 0)), 0.0, 0};
        return out;
    }
    Mat m = ortho_mat(lap);
    m = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
    const Mat& q = es.eigenvectors();
    const double lmax = w(n - 1);
    const double cut = policy.cutoff(lmax);
    int kdim = 0;
    while (kdim < n && w(kdim) <= cut) ++kdim;
    if (gap_aware && lmax > 0.0) {
        const double ceiling = kGapCeiling * lmax;
        double best_ratio = 0.0;
        int best = -1;
        for (int i = 0; i + 1 < n; ++i) {
            if (w(i) > ceiling) break;
            const double lo = std::max(w(i), 1e-300);
            const double ratio = w(i + 1) / lo;
            if (ratio >= best_ratio) {
                best_ratio = ratio;
                best = i;
            }
        }
        if (best >= 0 && best_ratio >= kGapRatio && best + 1 > kdim) kdim = best + 1;
    }
    Mat h_ortho = Mat::Zero(n, n);
    if (kdim > 0) h_ortho = q.leftCols(kdim) * q.leftCols(kdim).adjoint();
    Vec winv = Vec::Zero(n);
    for (int i = kdim; i < n; ++i) winv(i) = 1.0 / w(i);
    Mat g_ortho = q * winv.asDiagonal() * q.adjoint();
    if (!space.orthonormal()) {
        h_ortho = space.chol_inv() * h_ortho * space.chol();
        g_ortho = space.chol_inv() * g_ortho * space.chol();
    }
    SpectralSplit out{LinearOp(space, space, std::move(h_ortho)),
                      LinearOp(space, space, std::move(g_ortho)),
                      kdim > 0 ? w(kdim - 1) : 0.0, kdim};
    return out;
}

HodgeData decompose_with(const QuasiComplex& qc, int i, const RankPolicy& policy,
                         bool gap_aware) {
    if (i < 0 || i >= qc.steps())
        throw StepOutOfRange("no decomposition at step " + std::to_string(i));
    LinearOp lap = laplacian(qc, i);
    SpectralSplit split = spectral_split(lap, policy, gap_aware);
    const InnerProductSpace& space = qc.space(i);
    LinearOp id = identity_op(space);
    LinearOp complement = add(id, scale(-1.0, split.harmonic));

    HodgeData data{i,
                   lap,
                   split.harmonic,
                   split.green,
                   compose(adjoint(qc.diff_or_zero(i - 1)), split.green),
                   0.0,
                   0.0,
                   0.0,
                   0.0};
    const LinearOp& h = data.harmonic_projector;
    const LinearOp& g = data.green;
    data.idempotence_defect = op_norm(add(compose(h, h), scale(-1.0, h)));
    data.self_adjoint_defect = op_norm(add(adjoint(h), scale(-1.0, h)));
    data.green_identity_defect =
        std::max(op_norm(add(compose(g, lap), scale(-1.0, complement))),
                 op_norm(add(compose(lap, g), scale(-1.0, complement))));
    data.green_harmonic_defect = std::max(op_norm(compose(h, g)), op_norm(compose(g, h)));
    return data;
}

} // namespace

HodgeData hodge_decompose(const QuasiComplex& qc, int i, const RankPolicy& policy) {
    return decompose_with(qc, i, policy, false);
}

HodgeSplit hodge_identity(const QuasiComplex& qc, int i, const RankPolicy& policy) {
    HodgeData here = hodge_decompose(qc, i, policy);
    const InnerProductSpace& space = qc.space(i);
    LinearOp image_part = compose(qc.diff_or_zero(i - 1), here.parametrix);
    LinearOp coimage_part = (i < qc.length())
                                ? compose(hodge_decompose(qc, i + 1, policy).parametrix, qc.diff(i))
                                : zero_op(space, space);
    LinearOp sum = add(add(here.harmonic_projector, image_part), coimage_part);
    double pairwise = 0.0;
    const LinearOp* parts[3] = {&here.harmonic_projector, &image_part, &coimage_part};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            if (a == b) continue;
            pairwise = std::max(pairwise, op_norm(compose(*parts[a], *parts[b])));
        }
    HodgeSplit out{here.harmonic_projector, image_part, coimage_part,
                   op_norm(add(sum, scale(-1.0, identity_op(space)))), pairwise};
    return out;
}

ParametrixResult parametrix(const QuasiComplex& qc, const RankPolicy& policy) {
    const int n = qc.length();
    std::vector<SpectralSplit> splits;
    splits.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) splits.push_back(spectral_split(laplacian(qc, i), policy, true));

    ParametrixResult out;
    for (int i = 0; i <= n; ++i) {
        // P^i needs the Green operator one step down; P^0 lands in the
        // trivial space below the chain.
        const LinearOp down = qc.diff_or_zero(i - 1);
        LinearOp p = (i > 0) ? compose(splits[static_cast<std::size_t>(i - 1)].green, adjoint(down))
                             : zero_op(qc.space(0), down.domain);
        out.ops.push_back(std::move(p));
        out.green_norms.push_back(op_norm(splits[static_cast<std::size_t>(i)].green));
        out.near_kernel_cuts.push_back(splits[static_cast<std::size_t>(i)].tau);
    }
    for (int i = 0; i <= n; ++i) {
        const InnerProductSpace& space = qc.space(i);
        LinearOp t = zero_op(space, space);
        if (i < n) {
            LinearOp up_p = compose(splits[static_cast<std::size_t>(i)].green, adjoint(qc.diff(i)));
            t = add(t, compose(up_p, qc.diff(i)));
        }
        if (i > 0) t = add(t, compose(qc.diff(i - 1), out.ops[static_cast<std::size_t>(i)]));
        LinearOp complement =
            add(identity_op(space), scale(-1.0, splits[static_cast<std::size_t>(i)].harmonic));
        out.defects.push_back(op_norm(add(t, scale(-1.0, complement))));
    }
    for (int i = 0; i < n; ++i) {
        LinearOp lhs = compose(qc.diff(i), splits[static_cast<std::size_t>(i)].green);
        LinearOp rhs = compose(splits[static_cast<std::size_t>(i + 1)].green, qc.diff(i));
        out.commutation_defects.push_back(op_norm(add(lhs, scale(-1.0, rhs))));
    }
    CurvatureReport curv = validate(qc);
    out.max_curvature = curv.max_absolute();
    const double denom = std::max(out.max_curvature, 1e-300);
    for (double d : out.defects) out.kappa = std::max(out.kappa, d / denom);
    for (double c : out.commutation_defects) out.kappa_prime = std::max(out.kappa_prime, c / denom);
    return out;
}

} // namespace qcx
