#include "ddisac/detect.hpp"

#include <cmath>
#include <stdexcept>

#include "ddisac/fft.hpp"
#include "ddisac/modem.hpp"

namespace ddisac {

CgResult cg_solve(const LinOp& apply, const LinOp& apply_adjoint, const cvec& r,
                  const CgConfig& cfg) {
    if (cfg.lambda < 0.0) throw std::invalid_argument("cg_solve: lambda must be >= 0");
    if (cfg.max_iters < 1) throw std::invalid_argument("cg_solve: max_iters must be >= 1");

    const std::size_t n = r.size();
    CgResult result;
    result.s_hat.assign(n, cplx(0.0, 0.0));

    cvec resid = r;  // r_t = r - A s_t
    cvec x, q;
    apply_adjoint(resid, x);  // gradient residual of the normal equations
    cvec p = x;
    double gamma = energy(x);
    const double gamma0 = gamma;
    if (gamma0 == 0.0) {
        result.converged = true;
        return result;
    }

    for (int t = 0; t < cfg.max_iters; ++t) {
        apply(p, q);
        const double denom = energy(q) + cfg.lambda * energy(p);
        if (denom == 0.0) break;
        const double beta = gamma / denom;

        for (std::size_t i = 0; i < n; ++i) {
            result.s_hat[i] += beta * p[i];
            resid[i] -= beta * q[i];
        }

        apply_adjoint(resid, x);
        for (std::size_t i = 0; i < n; ++i) x[i] -= cfg.lambda * result.s_hat[i];

        const double gamma_next = energy(x);
        result.iterations = t + 1;
        if (std::sqrt(gamma_next) / std::sqrt(gamma0) < cfg.tol) {
            result.converged = true;
            break;
        }
        const double ratio = gamma_next / gamma;
        for (std::size_t i = 0; i < n; ++i) p[i] = x[i] + ratio * p[i];
        gamma = gamma_next;
    }
    return result;
}

CgResult cg_equalize(const CddsOperator& H, const cvec& r, const CgConfig& cfg) {
    return cg_solve([&H](const cvec& in, cvec& out) { out = H.apply(in); },
                    [&H](const cvec& in, cvec& out) { out = H.apply_adjoint(in); }, r, cfg);
}

EstimationResult coarse_ce(const FrameParams& fp, const cvec& y, const Grid& x_p, int P,
                           const TpeConfig& cfg) {
    x_p.require(Domain::DelayDoppler, "coarse_ce");
    if (energy(x_p.values()) <= 0.0)
        throw std::invalid_argument("coarse_ce: pilot grid carries no energy (sigma_p2 = 0?)");
    return tpe_estimate(fp, y, x_p, P, cfg);
}

SymbolRecovery recover_symbols(const FrameParams& fp, const cvec& s_hat, const Grid& x_p,
                               const QamAlphabet& alphabet, double sigma_d2) {
    if (s_hat.size() != static_cast<std::size_t>(fp.frame_len()))
        throw std::length_error("recover_symbols: expected M*N samples");
    const double root_n = std::sqrt(static_cast<double>(fp.N));

    // X' = (unvec(s) F_N - X_p) F_N^H
    cvec v = s_hat;
    fft::rows(v.data(), fp.M, fp.N, true);
    fft::scale(v, 1.0 / root_n);
    const auto& p = x_p.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= p[i];
    fft::rows(v.data(), fp.M, fp.N, false);
    fft::scale(v, 1.0 / root_n);

    SymbolRecovery rec{Grid(fp.M, fp.N, Domain::Data, std::move(v)), Grid(fp.M, fp.N, Domain::Data)};
    rec.hard = qam_decide(rec.soft, alphabet, sigma_d2);
    return rec;
}

Grid rebuild_x(const Grid& xd_hat, const Grid& x_p) {
    return superimpose(dft_spread(xd_hat), x_p);
}

DetectorResult iterative_ce_dd(const FrameParams& fp, const cvec& r, const Grid& x_p, int P,
                               const QamAlphabet& alphabet, double sigma_d2,
                               const DetectorConfig& cfg, const EstimationResult* initial) {
    if (cfg.max_outer < 1) throw std::invalid_argument("iterative_ce_dd: max_outer must be >= 1");

    // y and r are unitary images of each other; derive the DD view once.
    const cvec y = sfft(wigner(r, fp)).values();

    EstimationResult est = initial ? *initial : coarse_ce(fp, y, x_p, P, cfg.tpe);

    DetectorResult out{Grid(fp.M, fp.N, Domain::Data), {}, 0, false};
    Grid prev_hard(fp.M, fp.N, Domain::Data);
    bool have_prev = false;

    for (int t = 1; t <= cfg.max_outer; ++t) {
        ChannelSpec spec;
        spec.mode = Mode::Passive;
        for (const auto& tgt : est.targets) spec.paths.push_back({tgt.alpha, tgt.tau, tgt.nu});

        const CddsOperator H(fp, spec);
        const CgResult cg = cg_equalize(H, r, cfg.cg);
        SymbolRecovery rec = recover_symbols(fp, cg.s_hat, x_p, alphabet, sigma_d2);

        out.iterations = t;
        if (have_prev && rec.hard.values() == prev_hard.values()) {
            out.xd_hat = std::move(rec.hard);
            out.converged = true;
            break;
        }
        prev_hard = rec.hard;
        have_prev = true;
        out.xd_hat = std::move(rec.hard);

        const Grid x_hat = rebuild_x(out.xd_hat, x_p);
        est = tpe_estimate(fp, y, x_hat, P, cfg.tpe);
    }

    out.channel = std::move(est);
    return out;
}

}  // namespace ddisac
