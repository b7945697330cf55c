#pragma once

#include <stdexcept>

#include "ddisac/common.hpp"

namespace ddisac {

// Which domain an M x N grid lives in. DATA is the pre-spreading symbol grid,
// DD the delay-Doppler grid, TF the time-frequency grid.
enum class Domain { Data, DelayDoppler, TimeFreq, Time };

/**
 * M x N complex grid, column-major (element (l, k) at index l + k*M), tagged
 * with the domain it lives in. vec()/unvec() are the identity on the storage:
 * stacking columns is exactly the flat layout.
 */
class Grid {
public:
    Grid(int M, int N, Domain d) : M_(M), N_(N), domain_(d), v_(static_cast<std::size_t>(M) * N) {
        if (M < 1 || N < 1) throw std::invalid_argument("Grid: dimensions must be positive");
    }

    Grid(int M, int N, Domain d, cvec values) : M_(M), N_(N), domain_(d), v_(std::move(values)) {
        if (v_.size() != static_cast<std::size_t>(M) * N)
            throw std::invalid_argument("Grid: value count does not match dimensions");
    }

    int rows() const { return M_; }
    int cols() const { return N_; }
    Domain domain() const { return domain_; }

    cplx& at(int l, int k) { return v_[static_cast<std::size_t>(l) + static_cast<std::size_t>(k) * M_]; }
    const cplx& at(int l, int k) const {
        return v_[static_cast<std::size_t>(l) + static_cast<std::size_t>(k) * M_];
    }

    cvec& values() { return v_; }
    const cvec& values() const { return v_; }

    void require(Domain d, const char* op) const {
        if (domain_ != d) throw std::invalid_argument(std::string(op) + ": grid is in the wrong domain");
    }
    void require_shape(int M, int N, const char* op) const {
        if (M_ != M || N_ != N) throw std::invalid_argument(std::string(op) + ": grid shape mismatch");
    }

    // Same values, different tag. Domain transitions outside the transform
    // operations are deliberate and rare; make them loud.
    Grid retagged(Domain d) const { return Grid(M_, N_, d, v_); }

private:
    int M_;
    int N_;
    Domain domain_;
    cvec v_;
};

}  // namespace ddisac
