#include "qcx/symbolcx.hpp"

#include <cmath>

#include "qcx/errors.hpp"
#include "qcx/quasicomplex.hpp"

namespace qcx {

namespace {

QuasiComplex sample_chain(const SymbolComplexSample& sample) {
    std::vector<InnerProductSpace> spaces;
    spaces.reserve(sample.fiber_dims.size());
    for (int d : sample.fiber_dims) spaces.emplace_back(d);
    return QuasiComplex(std::move(spaces), sample.mats, sample.orders);
}

void require_nonzero_covector(const SymbolComplexSample& sample) {
    if (!(sample.xi_norm > 0.0))
        throw ZeroCovector("sample '" + sample.point_id + "' sits on the zero section");
}

} // namespace

void validate_sample(const SymbolComplexSample& sample) {
    if (sample.fiber_dims.size() != sample.mats.size() + 1)
        throw ShapeMismatch("expected one fiber dimension per chain slot");
    if (sample.orders.size() != sample.mats.size())
        throw ShapeMismatch("expected one order per symbol matrix");
    for (std::size_t i = 0; i < sample.mats.size(); ++i) {
        if (sample.mats[i].rows() != sample.fiber_dims[i + 1] ||
            sample.mats[i].cols() != sample.fiber_dims[i])
            throw ShapeMismatch("symbol matrix " + std::to_string(i) +
                                " does not match its fiber dimensions");
    }
    // Symbol sequences are genuine complexes; reject curved input.
    QuasiComplex chain = sample_chain(sample);
    ExactnessPolicy policy{kSampleCurvatureTol, 1e-14};
    CurvatureReport rep = validate(chain, policy);
    if (!rep.is_exact)
        throw InvalidInput("sample '" + sample.point_id + "' is not a complex (relative curvature " +
                           std::to_string(rep.max_relative()) + ")");
}

ExactnessVerdict symbol_exact(const SymbolComplexSample& sample, const RankPolicy& policy) {
    validate_sample(sample);
    require_nonzero_covector(sample);
    QuasiComplex chain = sample_chain(sample);
    const int n = chain.length();
    std::vector<int> ranks(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) ranks[static_cast<std::size_t>(i)] = rank_profile(chain.diff(i), policy).rank;
    ExactnessVerdict v;
    v.ranks = ranks;
    for (int i = 0; i <= n; ++i) {
        const int rank_in = (i > 0) ? ranks[static_cast<std::size_t>(i - 1)] : 0;
        const int rank_out = (i < n) ? ranks[static_cast<std::size_t>(i)] : 0;
        const int ker = chain.space(i).dim() - rank_out;
        v.kernel_dims.push_back(ker);
        const bool ok = (ker == rank_in);
        v.exact_at.push_back(ok);
        if (!ok) v.exact = false;
    }
    return v;
}

LaplacianVerdict symbol_laplacian_check(const SymbolComplexSample& sample,
                                        const RankPolicy& policy) {
    validate_sample(sample);
    require_nonzero_covector(sample);
    QuasiComplex chain = sample_chain(sample);
    LaplacianVerdict v;
    for (int i = 0; i <= chain.length(); ++i) {
        LinearOp lap = laplacian(chain, i);
        RankProfile prof = rank_profile(lap, policy);
        const double smin =
            prof.singular_values.empty() ? 0.0 : prof.singular_values.back();
        const double smax =
            prof.singular_values.empty() ? 0.0 : prof.singular_values.front();
        // dim-0 fibers have nothing to invert and count as invertible
        const bool ok = lap.mat.rows() == 0 || smin > policy.cutoff(smax);
        v.min_singular.push_back(smin);
        v.invertible.push_back(ok);
        if (!ok) v.all_invertible = false;
    }
    return v;
}

OrderReductionPlan OrderReductionPlan::make(double s, const std::vector<double>& orders) {
    OrderReductionPlan plan;
    plan.s = s;
    plan.s_list.push_back(s);
    for (double m : orders) plan.s_list.push_back(plan.s_list.back() - m);
    return plan;
}

bool OrderReductionPlan::matches(const std::vector<double>& orders) const {
    if (s_list.size() != orders.size() + 1) return false;
    if (s_list.empty() || s_list.front() != s) return false;
    for (std::size_t i = 0; i < orders.size(); ++i)
        if (s_list[i + 1] != s_list[i] - orders[i]) return false;
    return true;
}

SymbolComplexSample conjugate_orders(const SymbolComplexSample& sample,
                                     const OrderReductionPlan& plan) {
    validate_sample(sample);
    require_nonzero_covector(sample);
    if (!plan.matches(sample.orders))
        throw InvalidInput("order-reduction plan does not match the sample's orders");
    SymbolComplexSample out = sample;
    for (std::size_t i = 0; i < out.mats.size(); ++i) {
        const double expo = plan.s_list[i + 1] - plan.s_list[i]; // = -orders[i]
        out.mats[i] *= std::pow(sample.xi_norm, expo);
        out.orders[i] = 0.0;
    }
    return out;
}

SweepVerdict sample_sweep(const SampleGenerator& gen, int n_samples, std::uint64_t seed,
                          const RankPolicy& policy) {
    if (n_samples < 0) throw InvalidInput("sample count must be non-negative");
    SweepVerdict v;
    v.n_samples = n_samples;
    v.seed = seed;
    v.vacuous = (n_samples == 0);
    for (int k = 0; k < n_samples; ++k) {
        SymbolComplexSample sample = gen(seed, k);
        ExactnessVerdict e = symbol_exact(sample, policy);
        v.per_sample.push_back(e.exact);
        if (!e.exact) {
            v.all_exact = false;
            v.failing_points.push_back(sample.point_id);
        }
    }
    return v;
}

} // namespace qcx
