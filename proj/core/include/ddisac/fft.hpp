#pragma once

#include "ddisac/common.hpp"

namespace ddisac::fft {

// Unnormalized in-place transforms (FFTW convention: forward e^{-j2pi...},
// backward e^{+j2pi...} without the 1/n factor). Callers apply scaling.
//
// Plans are cached per thread and created with FFTW_ESTIMATE so results are
// bit-reproducible run to run. All entry points are thread-safe.

// count transforms of length n, transform t at data + t*dist, elements spaced by stride
void transform_many(cplx* data, int n, int count, int stride, int dist, bool forward);

inline void forward(cvec& v) {
    transform_many(v.data(), static_cast<int>(v.size()), 1, 1, 0, true);
}
inline void backward(cvec& v) {
    transform_many(v.data(), static_cast<int>(v.size()), 1, 1, 0, false);
}

// column-major M x N matrix stored flat: element (l, k) at data[l + k*M]

// M-point transform down each of the N columns
inline void columns(cplx* data, int M, int N, bool fwd) {
    transform_many(data, M, N, 1, M, fwd);
}

// N-point transform along each of the M rows
inline void rows(cplx* data, int M, int N, bool fwd) {
    transform_many(data, N, M, M, 1, fwd);
}

inline void scale(cplx* data, std::size_t n, double s) {
    for (std::size_t i = 0; i < n; ++i) data[i] *= s;
}
inline void scale(cvec& v, double s) { scale(v.data(), v.size(), s); }

}  // namespace ddisac::fft
