#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcx/linop.hpp"

namespace qcx {

/* One pointwise symbol sequence sigma_i : fiber_i -> fiber_{i+1} attached to
 * an (opaque) base point and covector length. Samples must chain in shape
 * and compose to zero within kSampleCurvatureTol relative. */
struct SymbolComplexSample {
    std::string point_id;
    double xi_norm = 1.0;
    std::vector<Mat> mats;
    std::vector<double> orders;
    std::vector<int> fiber_dims; // length mats.size() + 1
};

inline constexpr double kSampleCurvatureTol = 1e-10;

// Throws ShapeMismatch / InvalidInput when the sample invariants fail.
void validate_sample(const SymbolComplexSample& sample);

struct ExactnessVerdict {
    std::vector<bool> exact_at; // steps 0..N
    std::vector<int> kernel_dims;
    std::vector<int> ranks; // rank of sigma_i, i = 0..N-1
    bool exact = true;
};

// Exact at step i iff dim ker sigma_i equals rank sigma_{i-1}, with the
// out-of-range maps taken as zero. Throws ZeroCovector when xi_norm <= 0.
ExactnessVerdict symbol_exact(const SymbolComplexSample& sample, const RankPolicy& policy = {});

struct LaplacianVerdict {
    std::vector<double> min_singular; // per step 0..N
    std::vector<bool> invertible;
    bool all_invertible = true;
};

// Invertibility of every sigma_{i-1} sigma_{i-1}^* + sigma_i^* sigma_i;
// agrees with symbol_exact step by step on valid samples.
LaplacianVerdict symbol_laplacian_check(const SymbolComplexSample& sample,
                                        const RankPolicy& policy = {});

/* Scaling exponents s_0 = s, s_{i+1} = s_i - m_i used to conjugate a sample
 * to uniform order zero. Stored values are the exact recurrence outputs. */
struct OrderReductionPlan {
    double s = 0.0;
    std::vector<double> s_list;

    static OrderReductionPlan make(double s, const std::vector<double>& orders);
    bool matches(const std::vector<double>& orders) const;
};

// sigma_i -> xi_norm^(s_{i+1} - s_i) * sigma_i; output orders are all zero.
// Rank-based verdicts are unchanged by construction.
SymbolComplexSample conjugate_orders(const SymbolComplexSample& sample,
                                     const OrderReductionPlan& plan);

// Pure per (seed, index): repeated calls with equal arguments must return
// bitwise-identical samples.
using SampleGenerator = std::function<SymbolComplexSample(std::uint64_t seed, int index)>;

struct SweepVerdict {
    int n_samples = 0;
    std::uint64_t seed = 0;
    bool all_exact = true;
    bool vacuous = false; // n_samples == 0: conjunction holds with a warning
    std::vector<bool> per_sample;
    std::vector<std::string> failing_points;
};

SweepVerdict sample_sweep(const SampleGenerator& gen, int n_samples, std::uint64_t seed,
                          const RankPolicy& policy = {});

} // namespace qcx
