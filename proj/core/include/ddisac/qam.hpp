#pragma once

#include <cstdint>
#include <vector>

#include "ddisac/common.hpp"

namespace ddisac {

using BitVec = std::vector<std::uint8_t>;  // one bit per element, values 0/1

/**
 * Square Gray-coded QAM alphabet with unit average energy, so that the data
 * power sigma_d^2 enters purely as a multiplicative scale at mapping time.
 *
 * Bit convention per symbol: the first log2(Q)/2 bits select the I amplitude,
 * the rest the Q amplitude, each through a binary-reflected Gray code with
 * the all-zeros pattern at the largest positive amplitude. For 4-QAM this
 * puts bits 00 at (1+j)/sqrt(2) and 11 at (-1-j)/sqrt(2).
 */
class QamAlphabet {
public:
    static QamAlphabet make(int order);  // order in {4, 16, 64}

    int order() const { return order_; }
    int bits_per_symbol() const { return bits_per_symbol_; }
    const cvec& points() const { return points_; }

    // Constellation point for a bit pattern packed MSB-first (I bits then Q bits).
    cplx point(unsigned pattern) const { return points_[pattern]; }

    // Nearest constellation point index under Euclidean distance.
    unsigned decide(cplx z) const;

    void pattern_to_bits(unsigned pattern, std::uint8_t* out) const;
    unsigned bits_to_pattern(const std::uint8_t* bits) const;

private:
    QamAlphabet() = default;

    int order_ = 0;
    int bits_per_symbol_ = 0;
    int side_ = 0;          // sqrt(order)
    double scale_ = 1.0;    // amplitude normalization
    cvec points_;           // indexed by bit pattern
};

}  // namespace ddisac
