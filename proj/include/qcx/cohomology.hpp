#pragma once

#include <cstdint>
#include <vector>

#include "qcx/quasicomplex.hpp"
#include "qcx/reduction.hpp"

namespace qcx {

enum class BettiRoute { rank_nullity, harmonic };

struct BettiReport {
    std::vector<int> betti;
    BettiRoute route = BettiRoute::rank_nullity;
    long long chi = 0;
};

// b^i = dim ker A^i - rank A^{i-1} (rank_nullity) or dim ker Laplacian^i
// (harmonic). Refuses curved input: reduce first.
BettiReport betti(const QuasiComplex& qc, BettiRoute route = BettiRoute::rank_nullity,
                  const RankPolicy& policy = {}, const ExactnessPolicy& exactness = {});

struct EulerReport {
    long long chi = 0;
    bool consistent = true;           // every trial agreed on chi
    bool certified = true;            // every reduction certificate held
    std::vector<long long> trial_chis; // base run first
    std::uint64_t seed = 0;
    int trials = 0;
};

/* chi of a quasicomplex: reduce, then count. When trials > 1, the input is
 * additionally re-perturbed `trials` times (size 1e-6, seeds seed, seed+1,
 * ...) and reduced again; all runs must agree for `consistent` to hold. */
EulerReport euler_quasi(const QuasiComplex& qc, int trials = 0, std::uint64_t seed = 0,
                        const RankPolicy& policy = {}, double reduction_tol = 1e-10);

/* Chain self-maps E^i with their measured commutation defects
 * ||E^{i+1} A^i - A^i E^i||, both absolute and relative to
 * ||A^i|| (||E^i|| + ||E^{i+1}||). */
struct Endomorphism {
    std::vector<LinearOp> maps;
    std::vector<double> commute_defect;
    std::vector<double> commute_defect_rel;
};

Endomorphism make_endomorphism(const QuasiComplex& qc, std::vector<Mat> maps);

// Alternating sum of traces of H^i E^i H^i over the harmonic projectors.
// Throws NotAComplex on curved input and NotAnEndomorphism when a relative
// commutation defect exceeds commute_tol.
cxd lefschetz(const QuasiComplex& qc, const Endomorphism& endo,
              const RankPolicy& policy = {}, const ExactnessPolicy& exactness = {},
              double commute_tol = 1e-10);

} // namespace qcx
