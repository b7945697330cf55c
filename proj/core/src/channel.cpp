#include "ddisac/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ddisac/fft.hpp"

namespace ddisac {

namespace {

// Fill out[i] = exp(j * step * i) for i in [0, n). Incremental rotation with a
// periodic exact refresh keeps the unit-modulus drift below ~1e-13.
void phase_ramp(double step, std::size_t n, cvec& out) {
    out.resize(n);
    cplx w(1.0, 0.0);
    const cplx rot = std::polar(1.0, step);
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & 0xffu) == 0) w = std::polar(1.0, step * static_cast<double>(i));
        out[i] = w;
        w *= rot;
    }
}

void check_frame_length(const FrameParams& fp, const cvec& v, const char* op) {
    if (v.size() != static_cast<std::size_t>(fp.frame_len()))
        throw std::length_error(std::string(op) + ": expected M*N samples");
}

// Cyclic delay by l over the flat frame: out[p] = in[(p - l) mod MN].
void cyclic_delay(const cvec& in, int l, cvec& out) {
    const int n = static_cast<int>(in.size());
    out.resize(in.size());
    const int shift = ((l % n) + n) % n;
    for (int p = 0; p < n; ++p) {
        const int q = p - shift >= 0 ? p - shift : p - shift + n;
        out[p] = in[q];
    }
}

// Per-symbol fractional-delay stage (I_N (x) F_M^H B_tau F_M), in place.
void fractional_delay_columns(const FrameParams& fp, double tau, int l_i, cvec& v,
                              bool conjugate_phase) {
    const int M = fp.M, N = fp.N;
    fft::columns(v.data(), M, N, true);
    const double step = kTwoPi * (static_cast<double>(l_i) / M - tau / fp.T());
    cvec b;
    phase_ramp(conjugate_phase ? -step : step, static_cast<std::size_t>(M), b);
    for (int n = 0; n < N; ++n) {
        cplx* col = v.data() + static_cast<std::size_t>(n) * M;
        for (int m = 0; m < M; ++m) col[m] *= b[m];
    }
    fft::columns(v.data(), M, N, false);
    fft::scale(v, 1.0 / static_cast<double>(M));
}

void doppler_diagonal(const FrameParams& fp, double nu, cvec& v, bool conjugate) {
    const double step = kTwoPi * nu * fp.sample_period();
    cvec d;
    phase_ramp(conjugate ? -step : step, v.size(), d);
    for (std::size_t p = 0; p < v.size(); ++p) v[p] *= d[p];
}

}  // namespace

int delay_bin_ceil(double tau, const FrameParams& fp) {
    return static_cast<int>(std::ceil(tau * fp.M * fp.delta_f - 1e-9));
}

PathParams geometry_to_path(double range_m, double velocity_mps, const FrameParams& fp,
                            Mode mode, cplx alpha) {
    const double factor = (mode == Mode::Active) ? 2.0 : 1.0;
    const double tau = factor * range_m / kSpeedOfLight;
    const double nu = factor * fp.f_c * velocity_mps / kSpeedOfLight;

    const double tau_max = 1.0 / fp.delta_f;
    const double nu_lim = 0.5 / fp.T();
    if (tau < 0.0 || tau >= tau_max)
        throw std::domain_error("geometry_to_path: delay " + std::to_string(tau) +
                                " s outside the unambiguous range [0, " +
                                std::to_string(tau_max) + ")");
    if (nu < -nu_lim || nu >= nu_lim)
        throw std::domain_error("geometry_to_path: Doppler " + std::to_string(nu) +
                                " Hz outside the unambiguous range [-" +
                                std::to_string(nu_lim) + ", " + std::to_string(nu_lim) + ")");
    return PathParams{alpha, tau, nu};
}

bool pairwise_resolvable(const FrameParams& fp, const std::vector<PathParams>& paths) {
    const double dtau = fp.delay_resolution();
    const double dnu = fp.doppler_resolution();
    for (std::size_t i = 0; i < paths.size(); ++i)
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            const bool ok = std::abs(paths[i].tau - paths[j].tau) >= dtau ||
                            std::abs(paths[i].nu - paths[j].nu) >= dnu;
            if (!ok) return false;
        }
    return true;
}

void apply_theta(const FrameParams& fp, double tau, double nu, const cvec& in, cvec& out) {
    check_frame_length(fp, in, "apply_theta");
    const int l_i = delay_bin_ceil(tau, fp);

    cvec work = in;
    fractional_delay_columns(fp, tau, l_i, work, false);
    cyclic_delay(work, l_i, out);
    doppler_diagonal(fp, nu, out, false);
}

cvec apply_theta(const FrameParams& fp, double tau, double nu, const cvec& in) {
    cvec out;
    apply_theta(fp, tau, nu, in, out);
    return out;
}

void apply_theta_adjoint(const FrameParams& fp, double tau, double nu, const cvec& in, cvec& out) {
    check_frame_length(fp, in, "apply_theta_adjoint");
    const int l_i = delay_bin_ceil(tau, fp);

    cvec work = in;
    doppler_diagonal(fp, nu, work, true);
    cyclic_delay(work, -l_i, out);
    fractional_delay_columns(fp, tau, l_i, out, true);
}

void apply_gamma(const FrameParams& fp, double tau, double nu, const cvec& in, cvec& out) {
    check_frame_length(fp, in, "apply_gamma");
    const double root_n = std::sqrt(static_cast<double>(fp.N));

    cvec work = in;
    fft::rows(work.data(), fp.M, fp.N, false);  // X F_N^H
    fft::scale(work, 1.0 / root_n);
    apply_theta(fp, tau, nu, work, out);
    fft::rows(out.data(), fp.M, fp.N, true);    // R F_N
    fft::scale(out, 1.0 / root_n);
}

cvec apply_gamma(const FrameParams& fp, double tau, double nu, const cvec& in) {
    cvec out;
    apply_gamma(fp, tau, nu, in, out);
    return out;
}

void apply_gamma_adjoint(const FrameParams& fp, double tau, double nu, const cvec& in, cvec& out) {
    check_frame_length(fp, in, "apply_gamma_adjoint");
    const double root_n = std::sqrt(static_cast<double>(fp.N));

    cvec work = in;
    fft::rows(work.data(), fp.M, fp.N, false);
    fft::scale(work, 1.0 / root_n);
    apply_theta_adjoint(fp, tau, nu, work, out);
    fft::rows(out.data(), fp.M, fp.N, true);
    fft::scale(out, 1.0 / root_n);
}

CddsOperator::CddsOperator(const FrameParams& fp, ChannelSpec spec)
    : fp_(fp), spec_(std::move(spec)) {
    fp_.validate();
    // Estimates refined inside a two-bin search region can overshoot the
    // principal ranges by up to one bin at the grid edges; admit that slack.
    const double tau_slack = fp_.delay_resolution();
    const double nu_slack = fp_.doppler_resolution();
    const double tau_max = 1.0 / fp_.delta_f + tau_slack;
    const double nu_lim = 0.5 / fp_.T() + nu_slack;
    for (const auto& p : spec_.paths) {
        if (p.tau < -tau_slack || p.tau >= tau_max)
            throw std::domain_error("CddsOperator: path delay outside [0, 1/delta_f)");
        if (p.nu < -nu_lim || p.nu >= nu_lim)
            throw std::domain_error("CddsOperator: path Doppler outside [-1/(2T), 1/(2T))");
    }
}

cvec CddsOperator::apply(const cvec& s) const {
    check_frame_length(fp_, s, "CddsOperator::apply");
    cvec acc(s.size(), cplx(0.0, 0.0));
    cvec term;
    for (const auto& p : spec_.paths) {
        apply_theta(fp_, p.tau, p.nu, s, term);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += p.alpha * term[i];
    }
    return acc;
}

cvec CddsOperator::apply_adjoint(const cvec& r) const {
    check_frame_length(fp_, r, "CddsOperator::apply_adjoint");
    cvec acc(r.size(), cplx(0.0, 0.0));
    cvec term;
    for (const auto& p : spec_.paths) {
        apply_theta_adjoint(fp_, p.tau, p.nu, r, term);
        const cplx a = std::conj(p.alpha);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a * term[i];
    }
    return acc;
}

cvec CddsOperator::apply_dd(const cvec& x) const {
    check_frame_length(fp_, x, "CddsOperator::apply_dd");
    cvec acc(x.size(), cplx(0.0, 0.0));
    cvec term;
    for (const auto& p : spec_.paths) {
        apply_gamma(fp_, p.tau, p.nu, x, term);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += p.alpha * term[i];
    }
    return acc;
}

cvec CddsOperator::apply_dd_adjoint(const cvec& y) const {
    check_frame_length(fp_, y, "CddsOperator::apply_dd_adjoint");
    cvec acc(y.size(), cplx(0.0, 0.0));
    cvec term;
    for (const auto& p : spec_.paths) {
        apply_gamma_adjoint(fp_, p.tau, p.nu, y, term);
        const cplx a = std::conj(p.alpha);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a * term[i];
    }
    return acc;
}

cvec add_awgn(const cvec& s, double sigma_w2, Rng& rng) {
    if (sigma_w2 < 0.0) throw std::invalid_argument("add_awgn: negative noise variance");
    cvec out = s;
    if (sigma_w2 == 0.0) return out;
    for (auto& x : out) x += rng.cnormal(sigma_w2);
    return out;
}

Grid dd_circular_shift_model(const Grid& x, int l_i, int k_i) {
    x.require(Domain::DelayDoppler, "dd_circular_shift_model");
    const int M = x.rows(), N = x.cols();
    const int km = ((k_i % N) + N) % N;

    Grid out(M, N, Domain::DelayDoppler);
    for (int k = 0; k < N; ++k) {
        const int ks = (k - km + N) % N;
        const cplx beta_wrap = (static_cast<double>(N - 1) / N) *
                               std::polar(1.0, -kTwoPi * static_cast<double>(ks) / N);
        for (int l = 0; l < M; ++l) {
            const int ls = (l - l_i % M + M) % M;
            const cplx phase =
                std::polar(1.0, kTwoPi * (static_cast<double>(l - l_i) / M) *
                                    (static_cast<double>(k_i) / N));
            const cplx beta = (l >= l_i) ? cplx(1.0, 0.0) : beta_wrap;
            out.at(l, k) = phase * beta * x.at(ls, k);
        }
    }
    return out;
}

std::vector<cvec> integer_reference_channel(const FrameParams& fp, int l, int k) {
    const int n = fp.frame_len();
    if (n > 64)
        throw std::invalid_argument("integer_reference_channel: dense build limited to M*N <= 64");

    // Delta^k Pi^l: column q has a single entry at row (q + l) mod MN with
    // phase exp(j 2 pi k (q+l) / MN).
    std::vector<cvec> cols(n, cvec(n, cplx(0.0, 0.0)));
    for (int q = 0; q < n; ++q) {
        const int p = ((q + l) % n + n) % n;
        cols[q][p] = std::polar(1.0, kTwoPi * static_cast<double>(k) * p / n);
    }
    return cols;
}

ChannelSpec random_channel(const FrameParams& fp, int P, double sigma_h2, double tau_max,
                           GainModel gains, Rng& rng, Mode mode, double nu_max) {
    if (P < 1) throw std::invalid_argument("random_channel: P must be >= 1");
    double nu_lim = 0.5 / fp.T();
    if (nu_max > 0.0 && nu_max < nu_lim) nu_lim = nu_max;
    const double per_path = sigma_h2 / P;

    ChannelSpec spec;
    spec.sigma_h2 = sigma_h2;
    spec.mode = mode;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        spec.paths.clear();
        for (int i = 0; i < P; ++i) {
            PathParams p;
            p.tau = rng.uniform(0.0, tau_max);
            p.nu = rng.uniform(-nu_lim, nu_lim);
            p.alpha = (gains == GainModel::Rayleigh)
                          ? rng.cnormal(per_path)
                          : std::polar(std::sqrt(per_path), rng.uniform(0.0, kTwoPi));
            spec.paths.push_back(p);
        }
        if (pairwise_resolvable(fp, spec.paths)) return spec;
    }
    throw std::runtime_error("random_channel: could not draw a resolvable path set");
}

ChannelSpec targets_channel(const FrameParams& fp,
                            const std::vector<std::pair<double, double>>& range_velocity,
                            Mode mode, double sigma_h2, GainModel gains, Rng& rng) {
    const int P = static_cast<int>(range_velocity.size());
    const double per_path = sigma_h2 / P;

    ChannelSpec spec;
    spec.sigma_h2 = sigma_h2;
    spec.mode = mode;
    for (const auto& [r, v] : range_velocity) {
        const cplx alpha = (gains == GainModel::Rayleigh)
                               ? rng.cnormal(per_path)
                               : std::polar(std::sqrt(per_path), rng.uniform(0.0, kTwoPi));
        spec.paths.push_back(geometry_to_path(r, v, fp, mode, alpha));
    }
    return spec;
}

}  // namespace ddisac
