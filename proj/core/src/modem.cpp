#include "ddisac/modem.hpp"

#include <cmath>
#include <stdexcept>

#include "ddisac/fft.hpp"

namespace ddisac {

Grid isfft(const Grid& x_dd) {
    x_dd.require(Domain::DelayDoppler, "isfft");
    const int M = x_dd.rows(), N = x_dd.cols();
    Grid out(M, N, Domain::TimeFreq, x_dd.values());
    fft::columns(out.values().data(), M, N, true);
    fft::rows(out.values().data(), M, N, false);
    fft::scale(out.values(), 1.0 / std::sqrt(static_cast<double>(M) * N));
    return out;
}

Grid sfft(const Grid& y_tf) {
    y_tf.require(Domain::TimeFreq, "sfft");
    const int M = y_tf.rows(), N = y_tf.cols();
    Grid out(M, N, Domain::DelayDoppler, y_tf.values());
    fft::columns(out.values().data(), M, N, false);
    fft::rows(out.values().data(), M, N, true);
    fft::scale(out.values(), 1.0 / std::sqrt(static_cast<double>(M) * N));
    return out;
}

cvec heisenberg(const Grid& x_tf) {
    x_tf.require(Domain::TimeFreq, "heisenberg");
    cvec s = x_tf.values();
    fft::columns(s.data(), x_tf.rows(), x_tf.cols(), false);
    fft::scale(s, 1.0 / std::sqrt(static_cast<double>(x_tf.rows())));
    return s;
}

Grid wigner(const cvec& r, const FrameParams& fp) {
    if (r.size() != static_cast<std::size_t>(fp.frame_len()))
        throw std::length_error("wigner: expected M*N samples (CP removed)");
    Grid out(fp.M, fp.N, Domain::TimeFreq, r);
    fft::columns(out.values().data(), fp.M, fp.N, true);
    fft::scale(out.values(), 1.0 / std::sqrt(static_cast<double>(fp.M)));
    return out;
}

cvec add_cp(const cvec& s, const FrameParams& fp) {
    if (s.size() != static_cast<std::size_t>(fp.frame_len()))
        throw std::length_error("add_cp: expected M*N samples");
    cvec out(s.size() + fp.cp_len);
    for (int i = 0; i < fp.cp_len; ++i) out[i] = s[s.size() - fp.cp_len + i];
    std::copy(s.begin(), s.end(), out.begin() + fp.cp_len);
    return out;
}

cvec remove_cp(const cvec& s_cp, const FrameParams& fp) {
    if (s_cp.size() != static_cast<std::size_t>(fp.frame_len() + fp.cp_len))
        throw std::length_error("remove_cp: expected M*N + cp_len samples");
    return cvec(s_cp.begin() + fp.cp_len, s_cp.end());
}

cvec dirichlet_interpolate(const cvec& block, int L) {
    if (L < 1) throw std::invalid_argument("dirichlet_interpolate: L must be >= 1");
    if (L == 1) return block;
    const std::size_t K = block.size();
    cvec spectrum = block;
    fft::forward(spectrum);
    cvec padded(K * L, cplx(0.0, 0.0));
    std::copy(spectrum.begin(), spectrum.end(), padded.begin());
    fft::backward(padded);
    fft::scale(padded, 1.0 / static_cast<double>(K));
    return padded;
}

cvec oversample(const cvec& s, const FrameParams& fp, int L) {
    if (L < 1) throw std::invalid_argument("oversample: L must be >= 1");
    if (s.size() != static_cast<std::size_t>(fp.frame_len()))
        throw std::length_error("oversample: expected M*N samples");
    if (L == 1) return s;

    const int M = fp.M;
    cvec out(static_cast<std::size_t>(L) * s.size());
    cvec column(M);
    for (int n = 0; n < fp.N; ++n) {
        std::copy(s.begin() + static_cast<std::size_t>(n) * M,
                  s.begin() + static_cast<std::size_t>(n + 1) * M, column.begin());
        cvec up = dirichlet_interpolate(column, L);
        std::copy(up.begin(), up.end(), out.begin() + static_cast<std::size_t>(n) * M * L);
    }
    return out;
}

}  // namespace ddisac
