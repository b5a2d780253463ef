#include "qcx/reduction.hpp"

#include <algorithm>

#include "qcx/errors.hpp"

namespace qcx {

namespace {

double spectral_norm(const Mat& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

/* Symmetrize a near-projector given in orthonormal coordinates, then snap
 * its spectrum to {0,1} by splitting at 1/2. In exact arithmetic both steps
 * are identities for the operators this file feeds in. */
Mat snap_projector(const Mat& p, double* presym_defect, double* idem_defect) {
    Mat sym = (p + p.adjoint()) / 2.0;
    *presym_defect = spectral_norm(p - sym);
    Eigen::SelfAdjointEigenSolver<Mat> es(sym);
    const int n = static_cast<int>(sym.rows());
    Mat snapped = Mat::Zero(n, n);
    int upper = 0;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 0.5) ++upper;
    if (upper > 0) {
        Mat q = es.eigenvectors().rightCols(upper);
        snapped = q * q.adjoint();
    }
    *idem_defect = spectral_norm(snapped * snapped - snapped);
    return snapped;
}

Mat from_ortho_conjugate(const InnerProductSpace& space, const Mat& m) {
    if (space.orthonormal()) return m;
    return space.chol_inv() * m * space.chol();
}

} // namespace

LinearOp kernel_projector(const LinearOp& d, const RankPolicy& policy) {
    const InnerProductSpace& dom = d.domain;
    LinearOp codomain_lap = compose(d, adjoint(d));
    LinearOp g = pinv(codomain_lap, policy);
    LinearOp raw = add(identity_op(dom),
                       scale(-1.0, compose(adjoint(d), compose(g, d))));
    double presym = 0.0, idem = 0.0;
    Mat snapped = snap_projector(ortho_mat(raw), &presym, &idem);
    return LinearOp(dom, dom, from_ortho_conjugate(dom, snapped));
}

ReductionResult reduce(const QuasiComplex& qc, const RankPolicy& policy, double reduction_tol) {
    const int n = qc.length();
    if (n < 1) throw InvalidInput("reduction needs at least one differential");

    CurvatureReport input_curv = validate(qc);
    const double max_curv = input_curv.max_absolute();
    const double max_curv_rel = input_curv.max_relative();

    std::vector<Mat> d_mats;
    d_mats.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d_mats.push_back(qc.diff(i).mat);

    std::vector<double> kappas(static_cast<std::size_t>(n), 0.0);
    std::vector<SweepStepLog> logs;

    // Walk Laplacian stations j = N .. 2; station j trusts D^{j-1}, D^j and
    // fixes D^{j-2} := (projector onto ker D^{j-1}) A^{j-2}.
    for (int j = n; j >= 2; --j) {
        const InnerProductSpace& mid = qc.space(j - 1);
        LinearOp d_above(mid, qc.space(j), d_mats[static_cast<std::size_t>(j - 1)]);

        Mat m_ortho = ortho_mat(d_above);
        Eigen::JacobiSVD<Mat> svd(m_ortho, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double smax = sv.size() > 0 ? sv(0) : 0.0;
        const double cut = policy.cutoff(smax);
        int rank = 0;
        while (rank < sv.size() && sv(rank) > cut) ++rank;
        const int kern_dim = mid.dim() - rank;
        const double p_norm = rank > 0 ? 1.0 / sv(rank - 1) : 0.0;

        Mat proj_ortho = Mat::Identity(mid.dim(), mid.dim());
        if (rank > 0) {
            Mat keep = svd.matrixV().leftCols(rank);
            proj_ortho -= keep * keep.adjoint();
        }
        SweepStepLog log;
        log.laplacian_step = j;
        log.parametrix_norm = p_norm;
        log.kernel_dim = kern_dim;
        // block Green norm of the station Laplacian: the trusted upper
        // differential contributes its own kept singular values
        double upper_min_kept = 0.0;
        if (j < n) {
            LinearOp d_up(qc.space(j), qc.space(j + 1), d_mats[static_cast<std::size_t>(j)]);
            RankProfile prof = rank_profile(d_up, policy);
            if (prof.rank > 0)
                upper_min_kept = prof.singular_values[static_cast<std::size_t>(prof.rank - 1)];
        }
        double green = 0.0;
        if (p_norm > 0.0) green = p_norm * p_norm;
        if (upper_min_kept > 0.0) green = std::max(green, 1.0 / (upper_min_kept * upper_min_kept));
        log.green_norm = green;

        Mat proj = snap_projector(proj_ortho, &log.projector_presym_defect,
                                  &log.projector_idem_defect);
        proj = from_ortho_conjugate(mid, proj);

        const Mat& a_below = qc.diff(j - 2).mat;
        Mat composite = d_mats[static_cast<std::size_t>(j - 1)] * a_below;
        if (composite.isZero(0.0)) {
            // the chain is already exact here; keep the input bitwise
            d_mats[static_cast<std::size_t>(j - 2)] = a_below;
        } else {
            d_mats[static_cast<std::size_t>(j - 2)] = proj * a_below;
        }

        const double a_norm = op_norm(qc.diff(j - 2));
        kappas[static_cast<std::size_t>(j - 2)] =
            p_norm * (1.0 + kappas[static_cast<std::size_t>(j - 1)] * a_norm);
        log.kappa = kappas[static_cast<std::size_t>(j - 2)];
        logs.push_back(log);
    }

    QuasiComplex reduced(qc.spaces(), d_mats, qc.orders());

    std::vector<double> diff_norms, curv_after, curv_after_rel;
    for (int i = 0; i < n; ++i) {
        diff_norms.push_back(op_norm(LinearOp(
            qc.space(i), qc.space(i + 1), reduced.diff(i).mat - qc.diff(i).mat)));
    }
    bool clean = true;
    for (int i = 0; i + 1 < n; ++i) {
        const double c = op_norm(compose(reduced.diff(i + 1), reduced.diff(i)));
        const double rel =
            c / (op_norm(reduced.diff(i + 1)) * op_norm(reduced.diff(i)) + 1.0);
        curv_after.push_back(c);
        curv_after_rel.push_back(rel);
        if (rel > reduction_tol) clean = false;
    }

    ReductionResult res{std::move(reduced),
                        std::move(diff_norms),
                        std::move(curv_after),
                        std::move(curv_after_rel),
                        std::move(logs),
                        std::move(kappas),
                        max_curv,
                        max_curv_rel,
                        reduction_tol,
                        clean && max_curv_rel <= 0.1};
    return res;
}

} // namespace qcx
