#pragma once

#include <vector>

#include "qcx/quasicomplex.hpp"

namespace qcx {

/* Kernel/Green split of one Laplacian. `harmonic_projector` projects onto
 * ker(laplacian) under the rank policy; `green` inverts off that kernel and
 * vanishes on it; `parametrix` is adjoint(A^{i-1}) composed with green, a
 * map spaces[i] -> spaces[i-1]. Residuals record how well the defining
 * identities hold in floating point. */
struct HodgeData {
    int step = 0;
    LinearOp laplacian;
    LinearOp harmonic_projector;
    LinearOp green;
    LinearOp parametrix;
    double idempotence_defect = 0.0;    // ||H^2 - H||
    double self_adjoint_defect = 0.0;   // ||H - H*||
    double green_identity_defect = 0.0; // max ||G Lap - (Id - H)||, ||Lap G - (Id - H)||
    double green_harmonic_defect = 0.0; // max ||H G||, ||G H||
};

HodgeData hodge_decompose(const QuasiComplex& qc, int i, const RankPolicy& policy = {});

/* The three summands of the identity at step i: the harmonic projector,
 * A^{i-1} P^i (image part) and P^{i+1} A^i (coimage part). On an exact
 * complex they are pairwise annihilating projectors summing to Id. */
struct HodgeSplit {
    LinearOp harmonic;
    LinearOp image_part;
    LinearOp coimage_part;
    double sum_defect = 0.0;       // ||harmonic + image + coimage - Id||
    double pairwise_defect = 0.0;  // max norm over the six cross products
};

HodgeSplit hodge_identity(const QuasiComplex& qc, int i, const RankPolicy& policy = {});

/* Chain homotopy P^0..P^N with P^i = green(step i-1) after adjoint(A^{i-1}),
 * with the Green operators of a quasicomplex taking the near-kernel (the
 * eigenvalue cluster separated from the rest of the spectrum by the largest
 * relative gap, when one exists below kGapCeiling of the top) into the
 * harmonic side. On an exact complex this is the plain rank-policy split,
 * and the defects reduce to the identity residuals. */
struct ParametrixResult {
    std::vector<LinearOp> ops;                // P^0..P^N
    std::vector<double> defects;              // ||P^{i+1}A^i + A^{i-1}P^i - (Id - H^i)||
    std::vector<double> green_norms;          // ||G^i||
    std::vector<double> near_kernel_cuts;     // spectral threshold used at step i
    std::vector<double> commutation_defects;  // ||A^i G^i - G^{i+1} A^i||
    double max_curvature = 0.0;               // max ||A^{i+1}A^i||
    double kappa = 0.0;                       // max defect / max curvature (measured)
    double kappa_prime = 0.0;                 // max commutation / max curvature (measured)
};

inline constexpr double kGapRatio = 1e3;   // smallest eigenvalue jump that counts as a gap
inline constexpr double kGapCeiling = 1e-2; // near-kernel candidates live below this * top

ParametrixResult parametrix(const QuasiComplex& qc, const RankPolicy& policy = {});

} // namespace qcx
