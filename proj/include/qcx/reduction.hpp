#pragma once

#include <vector>

#include "qcx/quasicomplex.hpp"

namespace qcx {

/* One backward-sweep station, recorded at the Laplacian index it serves.
 * green_norm / parametrix_norm are the block Green norms actually steering
 * the correction; kappa is the accumulated factor bounding the distance of
 * the differential fixed at this station from its input. */
struct SweepStepLog {
    int laplacian_step = 0;
    double green_norm = 0.0;
    double parametrix_norm = 0.0;
    double projector_presym_defect = 0.0; // before symmetrization
    double projector_idem_defect = 0.0;   // after the spectral re-idempotization
    int kernel_dim = 0;
    double kappa = 0.0;
};

struct ReductionResult {
    QuasiComplex reduced;
    std::vector<double> diff_norms;          // ||D^i - A^i||
    std::vector<double> curvature_after;     // ||D^{i+1} D^i||
    std::vector<double> curvature_after_rel; // above / (||D^{i+1}|| ||D^i|| + 1)
    std::vector<SweepStepLog> sweep_log;
    std::vector<double> kappas;              // diff_norms[i] <= kappas[i] * max_input_curvature
    double max_input_curvature = 0.0;
    double max_input_curvature_rel = 0.0;
    double reduction_tol = 0.0;
    bool certified = false;
};

/* Backward sweep: the top differential is kept, and walking down the chain
 * each lower differential is replaced by its composition with the projector
 * onto the kernel of the differential above, so consecutive composites
 * vanish. Inputs whose relative curvature exceeds 0.1 still reduce but come
 * back uncertified, as the proximity bound is then vacuous. */
ReductionResult reduce(const QuasiComplex& qc, const RankPolicy& policy = {},
                       double reduction_tol = 1e-10);

// Metric-orthogonal projector onto ker d, built by the Green-operator route
// Id - d* G d with G the pseudoinverse of d d*, then symmetrized and
// re-idempotized through its spectral split at 1/2.
LinearOp kernel_projector(const LinearOp& d, const RankPolicy& policy = {});

} // namespace qcx
