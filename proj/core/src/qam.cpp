#include "ddisac/qam.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddisac {

namespace {

unsigned binary_to_gray(unsigned b) { return b ^ (b >> 1); }

unsigned gray_to_binary(unsigned g) {
    unsigned b = 0;
    for (; g; g >>= 1) b ^= g;
    return b;
}

// Amplitude for position a in 0..L-1: +(L-1), +(L-3), ..., -(L-1).
double level(int a, int L) { return static_cast<double>(L - 1 - 2 * a); }

}  // namespace

QamAlphabet QamAlphabet::make(int order) {
    if (order != 4 && order != 16 && order != 64)
        throw std::invalid_argument("QamAlphabet: order must be 4, 16 or 64");

    QamAlphabet a;
    a.order_ = order;
    a.bits_per_symbol_ = 0;
    for (int q = order; q > 1; q >>= 1) ++a.bits_per_symbol_;
    a.side_ = 1 << (a.bits_per_symbol_ / 2);

    // mean square amplitude of one axis: (L^2 - 1)/3
    const double axis_power = (static_cast<double>(a.side_) * a.side_ - 1.0) / 3.0;
    a.scale_ = 1.0 / std::sqrt(2.0 * axis_power);

    const int half_bits = a.bits_per_symbol_ / 2;
    a.points_.resize(order);
    for (unsigned pattern = 0; pattern < static_cast<unsigned>(order); ++pattern) {
        const unsigned gi = pattern >> half_bits;
        const unsigned gq = pattern & ((1u << half_bits) - 1u);
        const int ai = static_cast<int>(gray_to_binary(gi));
        const int aq = static_cast<int>(gray_to_binary(gq));
        a.points_[pattern] = a.scale_ * cplx(level(ai, a.side_), level(aq, a.side_));
    }
    return a;
}

unsigned QamAlphabet::decide(cplx z) const {
    // Per-axis slicing: amplitudes are equispaced, so the nearest point
    // factors into independent I/Q decisions.
    const int half_bits = bits_per_symbol_ / 2;
    auto slice = [&](double v) {
        const int a = static_cast<int>(std::lround((side_ - 1 - v / scale_) / 2.0));
        const int clamped = a < 0 ? 0 : (a >= side_ ? side_ - 1 : a);
        return binary_to_gray(static_cast<unsigned>(clamped));
    };
    return (slice(z.real()) << half_bits) | slice(z.imag());
}

void QamAlphabet::pattern_to_bits(unsigned pattern, std::uint8_t* out) const {
    for (int b = bits_per_symbol_ - 1; b >= 0; --b)
        *out++ = static_cast<std::uint8_t>((pattern >> b) & 1u);
}

unsigned QamAlphabet::bits_to_pattern(const std::uint8_t* bits) const {
    unsigned p = 0;
    for (int b = 0; b < bits_per_symbol_; ++b) p = (p << 1) | (bits[b] & 1u);
    return p;
}

}  // namespace ddisac
