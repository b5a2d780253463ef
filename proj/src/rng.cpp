#include "qcx/rng.hpp"

#include <cmath>
#include <numbers>

namespace qcx {

double Rng::uniform() {
    const std::uint64_t x = engine_();
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // Box-Muller; u1 is nudged away from 0 so the log stays finite.
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

Mat Rng::gaussian_matrix(int rows, int cols) {
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const double re = normal();
            const double im = normal();
            m(r, c) = cxd(re, im);
        }
    return m;
}

} // namespace qcx
