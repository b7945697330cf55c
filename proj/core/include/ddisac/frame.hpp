#pragma once

#include <stdexcept>
#include <string>

namespace ddisac {

/**
 * Frame numerology.
 *
 * M delay bins / subcarriers, N Doppler bins / symbols, subcarrier spacing
 * delta_f. The symbol duration is always T = 1/delta_f (derived, never stored)
 * so T*delta_f = 1 holds exactly. cp_len counts samples of period T/M.
 */
struct FrameParams {
    int M = 64;                // delay bins / subcarriers (>= 2)
    int N = 16;                // Doppler bins / symbols (>= 2)
    double delta_f = 1.92e6;   // subcarrier spacing, Hz
    int cp_len = 16;           // cyclic prefix length in samples of T/M
    double f_c = 0.3e12;       // carrier frequency, Hz
    int oversampling = 4;      // L, for PAPR-style studies (>= 1)

    double T() const { return 1.0 / delta_f; }
    double frame_duration() const { return N * T(); }        // T_s
    double bandwidth() const { return M * delta_f; }         // B
    double sample_period() const { return T() / M; }
    double delay_resolution() const { return 1.0 / (M * delta_f); }
    double doppler_resolution() const { return 1.0 / (N * T()); }
    int frame_len() const { return M * N; }

    void validate() const {
        if (M < 2) throw std::invalid_argument("FrameParams: M must be >= 2");
        if (N < 2) throw std::invalid_argument("FrameParams: N must be >= 2");
        if (!(delta_f > 0.0)) throw std::invalid_argument("FrameParams: delta_f must be > 0");
        if (cp_len < 0 || cp_len >= M * N)
            throw std::invalid_argument("FrameParams: cp_len must be in [0, M*N)");
        if (!(f_c > 0.0)) throw std::invalid_argument("FrameParams: f_c must be > 0");
        if (oversampling < 1)
            throw std::invalid_argument("FrameParams: oversampling factor must be >= 1");
    }
};

inline FrameParams make_frame(int M, int N, double delta_f, int cp_len, double f_c,
                              int oversampling = 4) {
    FrameParams fp{M, N, delta_f, cp_len, f_c, oversampling};
    fp.validate();
    return fp;
}

}  // namespace ddisac
