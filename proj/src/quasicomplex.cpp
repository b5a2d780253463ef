#include "qcx/quasicomplex.hpp"

#include <algorithm>

#include "qcx/errors.hpp"

namespace qcx {

double CurvatureReport::max_absolute() const {
    double m = 0.0;
    for (double v : absolute) m = std::max(m, v);
    return m;
}

double CurvatureReport::max_relative() const {
    double m = 0.0;
    for (double v : relative) m = std::max(m, v);
    return m;
}

QuasiComplex::QuasiComplex(std::vector<InnerProductSpace> spaces, std::vector<Mat> diff_mats,
                           std::optional<std::vector<double>> orders)
    : spaces_(std::move(spaces)) {
    if (spaces_.empty()) throw InvalidInput("a chain needs at least one space");
    if (diff_mats.size() + 1 != spaces_.size())
        throw ShapeMismatch("expected one differential per adjacent pair of spaces");
    diffs_.reserve(diff_mats.size());
    for (std::size_t i = 0; i < diff_mats.size(); ++i) {
        // LinearOp's constructor enforces the shape contract.
        diffs_.emplace_back(spaces_[i], spaces_[i + 1], std::move(diff_mats[i]));
    }
    if (orders) {
        if (orders->size() != diffs_.size())
            throw ShapeMismatch("expected one order per differential");
        orders_ = std::move(*orders);
    } else {
        orders_.assign(diffs_.size(), 0.0);
    }
}

const InnerProductSpace& QuasiComplex::space(int i) const {
    if (i < 0 || i >= steps()) throw StepOutOfRange("no space at step " + std::to_string(i));
    return spaces_[static_cast<std::size_t>(i)];
}

const LinearOp& QuasiComplex::diff(int i) const {
    if (i < 0 || i >= length())
        throw StepOutOfRange("no differential at step " + std::to_string(i));
    return diffs_[static_cast<std::size_t>(i)];
}

LinearOp QuasiComplex::diff_or_zero(int i) const {
    if (i >= 0 && i < length()) return diffs_[static_cast<std::size_t>(i)];
    InnerProductSpace trivial(0);
    if (i < 0) return zero_op(trivial, spaces_.front());
    return zero_op(spaces_.back(), trivial);
}

CurvatureReport validate(const QuasiComplex& qc, const ExactnessPolicy& policy) {
    CurvatureReport rep;
    rep.policy = policy;
    const int n = qc.length();
    for (int i = 0; i + 1 < n; ++i) {
        const double curv = op_norm(compose(qc.diff(i + 1), qc.diff(i)));
        const double prod = op_norm(qc.diff(i + 1)) * op_norm(qc.diff(i));
        rep.absolute.push_back(curv);
        rep.norm_products.push_back(prod);
        rep.relative.push_back(curv / std::max(policy.abs_floor, prod));
        if (!policy.step_exact(curv, prod)) rep.is_exact = false;
    }
    return rep;
}

QuasiComplex adjoint_sequence(const QuasiComplex& qc) {
    std::vector<InnerProductSpace> spaces(qc.spaces().rbegin(), qc.spaces().rend());
    std::vector<Mat> mats;
    mats.reserve(static_cast<std::size_t>(qc.length()));
    for (int i = qc.length() - 1; i >= 0; --i) mats.push_back(adjoint(qc.diff(i)).mat);
    std::vector<double> orders(qc.orders().rbegin(), qc.orders().rend());
    return QuasiComplex(std::move(spaces), std::move(mats), std::move(orders));
}

LinearOp laplacian(const QuasiComplex& qc, int i) {
    if (i < 0 || i >= qc.steps())
        throw StepOutOfRange("no Laplacian at step " + std::to_string(i));
    const LinearOp down = qc.diff_or_zero(i - 1); // V^{i-1} -> V^i
    const LinearOp up = qc.diff_or_zero(i);       // V^i -> V^{i+1}
    LinearOp lap = add(compose(down, adjoint(down)), compose(adjoint(up), up));
    return lap;
}

std::vector<LinearOp> laplacians(const QuasiComplex& qc) {
    std::vector<LinearOp> out;
    out.reserve(static_cast<std::size_t>(qc.steps()));
    for (int i = 0; i < qc.steps(); ++i) out.push_back(laplacian(qc, i));
    return out;
}

} // namespace qcx
