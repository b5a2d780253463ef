#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "qcx/linop.hpp"

namespace qcx {

/* Deterministic random stream: std::mt19937_64 with a fixed Box-Muller
 * transform on top. Uniforms take the top 53 bits of each draw, so the
 * double sequence for a given seed is identical on every platform; the
 * stream name below goes into reports so runs can be replayed. */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    static constexpr const char* kStreamName = "mt19937-64/box-muller";

    std::uint64_t seed() const { return seed_; }

    // Uniform on [0, 1): (x >> 11) * 2^-53.
    double uniform();

    // Standard normal; draws two uniforms per pair, caches the second value.
    double normal();

    // Matrix with independent standard-normal real and imaginary parts,
    // filled row-major (re then im per entry).
    Mat gaussian_matrix(int rows, int cols);

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace qcx
