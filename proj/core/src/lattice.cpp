#include "ddisac/lattice.hpp"

#include <cmath>
#include <stdexcept>

#include "ddisac/fft.hpp"

namespace ddisac {

Grid qam_map(const BitVec& bits, const QamAlphabet& alphabet, double sigma_d2,
             const FrameParams& fp) {
    const int bps = alphabet.bits_per_symbol();
    const std::size_t expected = static_cast<std::size_t>(fp.M) * fp.N * bps;
    if (bits.size() != expected)
        throw std::length_error("qam_map: bit count must be M*N*log2(Q)");

    const double amp = std::sqrt(sigma_d2);
    Grid g(fp.M, fp.N, Domain::Data);
    auto& v = g.values();
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = amp * alphabet.point(alphabet.bits_to_pattern(&bits[i * bps]));
    return g;
}

BitVec qam_demap(const Grid& symbols, const QamAlphabet& alphabet, double sigma_d2) {
    const int bps = alphabet.bits_per_symbol();
    const double inv_amp = 1.0 / std::sqrt(sigma_d2);
    const auto& v = symbols.values();
    BitVec bits(v.size() * bps);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const unsigned pattern = alphabet.decide(v[i] * inv_amp);
        alphabet.pattern_to_bits(pattern, &bits[i * bps]);
    }
    return bits;
}

Grid qam_decide(const Grid& symbols, const QamAlphabet& alphabet, double sigma_d2) {
    const double amp = std::sqrt(sigma_d2);
    Grid out(symbols.rows(), symbols.cols(), Domain::Data);
    const auto& in = symbols.values();
    auto& v = out.values();
    for (std::size_t i = 0; i < in.size(); ++i)
        v[i] = amp * alphabet.point(alphabet.decide(in[i] / amp));
    return out;
}

Grid dft_spread(const Grid& data) {
    data.require(Domain::Data, "dft_spread");
    Grid out(data.rows(), data.cols(), Domain::DelayDoppler, data.values());
    fft::rows(out.values().data(), out.rows(), out.cols(), true);
    fft::scale(out.values(), 1.0 / std::sqrt(static_cast<double>(out.cols())));
    return out;
}

Grid dft_despread(const Grid& dd) {
    dd.require(Domain::DelayDoppler, "dft_despread");
    Grid out(dd.rows(), dd.cols(), Domain::Data, dd.values());
    fft::rows(out.values().data(), out.rows(), out.cols(), false);
    fft::scale(out.values(), 1.0 / std::sqrt(static_cast<double>(out.cols())));
    return out;
}

Grid build_pilot_grid(const FrameParams& fp, const PilotConfig& pilot) {
    if (pilot.l_p < 0 || pilot.l_p >= fp.M || pilot.k_p < 0 || pilot.k_p >= fp.N)
        throw std::out_of_range("build_pilot_grid: pilot location outside the grid");
    if (pilot.sigma_p2 < 0.0 || pilot.sigma_p2 >= 1.0)
        throw std::invalid_argument("build_pilot_grid: sigma_p2 must be in [0, 1)");

    Grid g(fp.M, fp.N, Domain::DelayDoppler);
    if (pilot.sigma_p2 > 0.0)
        g.at(pilot.l_p, pilot.k_p) = std::sqrt(static_cast<double>(fp.M) * fp.N * pilot.sigma_p2);
    return g;
}

Grid superimpose(const Grid& x_dd, const Grid& x_p) {
    x_dd.require(Domain::DelayDoppler, "superimpose");
    x_p.require(Domain::DelayDoppler, "superimpose");
    if (x_dd.rows() != x_p.rows() || x_dd.cols() != x_p.cols())
        throw std::invalid_argument("superimpose: dimension mismatch");

    Grid out(x_dd.rows(), x_dd.cols(), Domain::DelayDoppler, x_dd.values());
    auto& v = out.values();
    const auto& p = x_p.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += p[i];
    return out;
}

}  // namespace ddisac
