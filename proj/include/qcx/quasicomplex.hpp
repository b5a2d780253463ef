#pragma once

#include <optional>
#include <vector>

#include "qcx/linop.hpp"

namespace qcx {

// Exactness test for a chain of operators: the step curvature
// ||A^{i+1} A^i|| counts as zero when it is at most
// max(abs_floor, rel * ||A^{i+1}|| ||A^i||).
struct ExactnessPolicy {
    double rel = 1e-10;
    double abs_floor = 1e-12;
    bool step_exact(double curv_abs, double norm_product) const {
        return curv_abs <= std::max(abs_floor, rel * norm_product);
    }
};

struct CurvatureReport {
    std::vector<double> absolute;      // ||A^{i+1} A^i||, i = 0..N-2
    std::vector<double> relative;      // absolute / max(abs_floor, norm product)
    std::vector<double> norm_products; // ||A^{i+1}|| * ||A^i||
    bool is_exact = true;
    ExactnessPolicy policy;

    double max_absolute() const;
    double max_relative() const;
};

/* A chain of spaces V^0 -> V^1 -> ... -> V^N with differentials that need
 * not compose to zero. Orders tag each differential (default 0) and ride
 * along untouched by the algebra. Immutable after construction. */
class QuasiComplex {
public:
    QuasiComplex(std::vector<InnerProductSpace> spaces, std::vector<Mat> diff_mats,
                 std::optional<std::vector<double>> orders = std::nullopt);

    int length() const { return static_cast<int>(diffs_.size()); } // N
    int steps() const { return length() + 1; }                     // N + 1 spaces

    const std::vector<InnerProductSpace>& spaces() const { return spaces_; }
    const InnerProductSpace& space(int i) const;
    const std::vector<LinearOp>& diffs() const { return diffs_; }
    const LinearOp& diff(int i) const;
    const std::vector<double>& orders() const { return orders_; }

    // Out-of-range differentials are zero maps through a dim-0 space, so
    // every formula below works uniformly at the ends of the chain.
    LinearOp diff_or_zero(int i) const;

private:
    std::vector<InnerProductSpace> spaces_;
    std::vector<LinearOp> diffs_;
    std::vector<double> orders_;
};

CurvatureReport validate(const QuasiComplex& qc, const ExactnessPolicy& policy = {});

// Spaces reversed, differentials replaced by their metric adjoints:
// diffs'[i] = adjoint(diffs[N-1-i]). Curvature profile reverses.
QuasiComplex adjoint_sequence(const QuasiComplex& qc);

// Laplacians A^{i-1} A^{i-1}* + A^i* A^i for i = 0..N; each is metric
// self-adjoint and positive semidefinite.
std::vector<LinearOp> laplacians(const QuasiComplex& qc);
LinearOp laplacian(const QuasiComplex& qc, int i);

} // namespace qcx
