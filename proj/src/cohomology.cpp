#include "qcx/cohomology.hpp"

#include <algorithm>

#include "qcx/builders.hpp"
#include "qcx/errors.hpp"
#include "qcx/hodge.hpp"

namespace qcx {

namespace {

void require_exact(const QuasiComplex& qc, const ExactnessPolicy& exactness) {
    CurvatureReport rep = validate(qc, exactness);
    if (!rep.is_exact)
        throw NotAComplex("relative curvature " + std::to_string(rep.max_relative()) +
                          " exceeds the exactness tolerance; reduce first");
}

} // namespace

BettiReport betti(const QuasiComplex& qc, BettiRoute route, const RankPolicy& policy,
                  const ExactnessPolicy& exactness) {
    require_exact(qc, exactness);
    BettiReport rep;
    rep.route = route;
    const int n = qc.length();
    if (route == BettiRoute::rank_nullity) {
        std::vector<int> ranks(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i)
            ranks[static_cast<std::size_t>(i)] = rank_profile(qc.diff(i), policy).rank;
        for (int i = 0; i <= n; ++i) {
            const int rank_out = (i < n) ? ranks[static_cast<std::size_t>(i)] : 0;
            const int rank_in = (i > 0) ? ranks[static_cast<std::size_t>(i - 1)] : 0;
            rep.betti.push_back(qc.space(i).dim() - rank_out - rank_in);
        }
    } else {
        for (int i = 0; i <= n; ++i)
            rep.betti.push_back(static_cast<int>(kernel_basis(laplacian(qc, i), policy).cols()));
    }
    long long chi = 0;
    for (int i = 0; i <= n; ++i) chi += (i % 2 == 0 ? 1 : -1) * static_cast<long long>(rep.betti[static_cast<std::size_t>(i)]);
    rep.chi = chi;
    return rep;
}

EulerReport euler_quasi(const QuasiComplex& qc, int trials, std::uint64_t seed,
                        const RankPolicy& policy, double reduction_tol) {
    EulerReport rep;
    rep.seed = seed;
    rep.trials = trials;
    auto chi_of = [&](const QuasiComplex& input) {
        ReductionResult red = reduce(input, policy, reduction_tol);
        if (!red.certified) rep.certified = false;
        return betti(red.reduced, BettiRoute::rank_nullity, policy).chi;
    };
    rep.trial_chis.push_back(chi_of(qc));
    if (trials > 1) {
        for (int t = 0; t < trials; ++t) {
            PerturbationSpec spec;
            spec.eps = 1e-6;
            spec.seed = seed + static_cast<std::uint64_t>(t);
            rep.trial_chis.push_back(chi_of(perturb(qc, spec)));
        }
    }
    rep.chi = rep.trial_chis.front();
    for (long long c : rep.trial_chis)
        if (c != rep.chi) rep.consistent = false;
    return rep;
}

Endomorphism make_endomorphism(const QuasiComplex& qc, std::vector<Mat> maps) {
    if (static_cast<int>(maps.size()) != qc.steps())
        throw ShapeMismatch("expected one self-map per space");
    Endomorphism endo;
    for (int i = 0; i <= qc.length(); ++i) {
        const InnerProductSpace& space = qc.space(i);
        if (maps[static_cast<std::size_t>(i)].rows() != space.dim() ||
            maps[static_cast<std::size_t>(i)].cols() != space.dim())
            throw ShapeMismatch("self-map " + std::to_string(i) + " is not square on its space");
        endo.maps.emplace_back(space, space, std::move(maps[static_cast<std::size_t>(i)]));
    }
    for (int i = 0; i < qc.length(); ++i) {
        const LinearOp& a = qc.diff(i);
        const LinearOp& e_lo = endo.maps[static_cast<std::size_t>(i)];
        const LinearOp& e_hi = endo.maps[static_cast<std::size_t>(i + 1)];
        const double defect = op_norm(add(compose(e_hi, a), scale(-1.0, compose(a, e_lo))));
        const double scale_norm = op_norm(a) * (op_norm(e_lo) + op_norm(e_hi));
        endo.commute_defect.push_back(defect);
        endo.commute_defect_rel.push_back(defect / std::max(1e-12, scale_norm));
    }
    return endo;
}

cxd lefschetz(const QuasiComplex& qc, const Endomorphism& endo, const RankPolicy& policy,
              const ExactnessPolicy& exactness, double commute_tol) {
    require_exact(qc, exactness);
    if (static_cast<int>(endo.maps.size()) != qc.steps())
        throw ShapeMismatch("endomorphism does not match the chain length");
    for (std::size_t i = 0; i < endo.commute_defect_rel.size(); ++i)
        if (endo.commute_defect_rel[i] > commute_tol)
            throw NotAnEndomorphism("self-maps fail to commute with the differentials at step " +
                                    std::to_string(i) + " (relative defect " +
                                    std::to_string(endo.commute_defect_rel[i]) + ")");
    cxd total = 0.0;
    for (int i = 0; i <= qc.length(); ++i) {
        HodgeData hd = hodge_decompose(qc, i, policy);
        const Mat& h = hd.harmonic_projector.mat;
        const cxd tr = (h * endo.maps[static_cast<std::size_t>(i)].mat * h).trace();
        total += (i % 2 == 0) ? tr : -tr;
    }
    return total;
}

} // namespace qcx
