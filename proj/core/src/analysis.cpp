#include "ddisac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ddisac/fft.hpp"

namespace ddisac {

void SinrModel::validate() const {
    if (sigma_h2 < 0.0 || sigma_w2 < 0.0 || sigma_d2 < 0.0 || sigma_p2 < 0.0)
        throw std::invalid_argument("SinrModel: powers must be nonnegative");
    if (std::abs(sigma_p2 + sigma_d2 - 1.0) > 1e-9)
        throw std::invalid_argument("SinrModel: sigma_p2 + sigma_d2 must equal 1");
    if (P < 1 || M < 2 || N < 2) throw std::invalid_argument("SinrModel: bad dimensions");
}

SinrBreakdown sinr_components(const SinrModel& m) {
    m.validate();
    if (m.sigma_p2 <= 0.0) throw std::domain_error("sinr_components: no pilot (sigma_p2 = 0)");

    const double mn = static_cast<double>(m.M) * m.N;
    const double sigma_0sq = m.P * (m.sigma_h2 * m.sigma_d2 + m.sigma_w2) / (mn * m.sigma_p2);

    const double mmse_term =
        (m.sigma_h2 - sigma_0sq) / (sigma_0sq * (m.sigma_d2 + m.sigma_p2) + m.sigma_w2);
    const double xe_denom = 1.0 / m.sigma_d2 + mmse_term;
    if (xe_denom <= 0.0)
        throw std::domain_error("sinr_components: model breakdown (nonpositive MMSE denominator)");
    const double sigma_xe2 = m.P / xe_denom;

    if (sigma_xe2 >= m.sigma_p2 + m.sigma_d2)
        throw std::domain_error(
            "sinr_components: model breakdown (sigma_xe2 >= sigma_p2 + sigma_d2)");
    const double sigma_e2 =
        m.P * (m.sigma_h2 * sigma_xe2 + m.sigma_w2) / (mn * (m.sigma_p2 + m.sigma_d2 - sigma_xe2));

    const double sinr = m.sigma_d2 * (m.sigma_h2 - sigma_e2) /
                        ((m.sigma_d2 + m.sigma_p2) * sigma_e2 + m.sigma_w2);
    return SinrBreakdown{sigma_0sq, sigma_xe2, sigma_e2, sinr};
}

double sinr_closed_form(const SinrModel& m) { return sinr_components(m).sinr; }

PilotPowerResult optimize_pilot_power(double sigma_h2, double sigma_w2, int P, int M, int N) {
    if (sigma_h2 <= 0.0 || sigma_w2 <= 0.0)
        throw std::invalid_argument("optimize_pilot_power: powers must be positive");

    auto objective = [&](double sp2) -> double {
        SinrModel m{sigma_h2, sigma_w2, 1.0 - sp2, sp2, P, M, N};
        try {
            return sinr_closed_form(m);
        } catch (const std::domain_error&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    // Bracket the maximum on a coarse grid, then refine by golden section.
    constexpr int kScan = 4096;
    constexpr double kEps = 1e-9;
    double best = -std::numeric_limits<double>::infinity();
    double worst = std::numeric_limits<double>::infinity();
    int best_i = kScan / 2;
    for (int i = 0; i < kScan; ++i) {
        const double sp2 = kEps + (1.0 - 2.0 * kEps) * (i + 0.5) / kScan;
        const double v = objective(sp2);
        if (v > best) {
            best = v;
            best_i = i;
        }
        if (v < worst) worst = v;
    }
    if (!(best > worst)) {
        // Flat (or entirely invalid) objective.
        return PilotPowerResult{0.5, objective(0.5), true};
    }

    auto grid_point = [&](int i) { return kEps + (1.0 - 2.0 * kEps) * (i + 0.5) / kScan; };
    double lo = grid_point(std::max(0, best_i - 1));
    double hi = grid_point(std::min(kScan - 1, best_i + 1));

    constexpr double kEta = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kEta * (b - a), x2 = a + kEta * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    while (b - a > 1e-8) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kEta * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kEta * (b - a);
            f1 = objective(x1);
        }
    }
    const double sp2 = 0.5 * (a + b);
    return PilotPowerResult{sp2, objective(sp2), false};
}

double papr_linear(const cvec& s) {
    if (s.empty()) throw std::invalid_argument("papr: empty signal");
    double peak = 0.0, mean = 0.0;
    for (const auto& x : s) {
        const double p = std::norm(x);
        peak = std::max(peak, p);
        mean += p;
    }
    mean /= static_cast<double>(s.size());
    if (mean == 0.0) throw std::domain_error("papr: zero signal");
    return peak / mean;
}

double papr_db(const cvec& s) { return db10(papr_linear(s)); }

CcdfTable papr_ccdf(const std::vector<double>& papr_db_samples,
                    const std::vector<double>& thresholds_db) {
    if (papr_db_samples.empty()) throw std::invalid_argument("papr_ccdf: no samples");
    CcdfTable table;
    table.low_confidence = papr_db_samples.size() < 10000;
    for (double thr : thresholds_db) {
        std::size_t count = 0;
        for (double v : papr_db_samples)
            if (v > thr) ++count;
        table.points.push_back({thr, static_cast<double>(count) / papr_db_samples.size()});
    }
    return table;
}

double papr_at_ccdf(std::vector<double> papr_db_samples, double p) {
    if (papr_db_samples.empty()) throw std::invalid_argument("papr_at_ccdf: no samples");
    std::sort(papr_db_samples.begin(), papr_db_samples.end());
    const double rank = (1.0 - p) * static_cast<double>(papr_db_samples.size() - 1);
    const std::size_t i = static_cast<std::size_t>(rank);
    if (i + 1 >= papr_db_samples.size()) return papr_db_samples.back();
    const double frac = rank - static_cast<double>(i);
    return papr_db_samples[i] * (1.0 - frac) + papr_db_samples[i + 1] * frac;
}

double pa_efficiency(double papr_db_value, const PaModel& model) {
    if (model.G <= 0.0 || model.G > 100.0 || model.g <= 0.0)
        throw std::invalid_argument("pa_efficiency: invalid PA model");
    return model.G * std::exp(-model.g * papr_db_value);
}

std::vector<double> welch_psd_db(const cvec& stream, int nfft) {
    if (nfft < 2 || stream.size() < static_cast<std::size_t>(nfft))
        throw std::invalid_argument("welch_psd_db: stream shorter than one segment");
    const int hop = nfft / 2;
    const std::size_t nseg = (stream.size() - nfft) / hop + 1;

    std::vector<double> acc(nfft, 0.0);
    cvec seg(nfft);
    for (std::size_t s = 0; s < nseg; ++s) {
        std::copy(stream.begin() + s * hop, stream.begin() + s * hop + nfft, seg.begin());
        fft::forward(seg);
        for (int i = 0; i < nfft; ++i) acc[i] += std::norm(seg[i]);
    }

    const double peak = *std::max_element(acc.begin(), acc.end());
    std::vector<double> psd(nfft);
    for (int i = 0; i < nfft; ++i)
        psd[i] = db10(std::max(acc[i] / peak, 1e-300));
    return psd;
}

double band_edge_shoulder_db(const std::vector<double>& psd_db, int oversampling,
                             double lo, double hi) {
    if (oversampling < 2)
        throw std::invalid_argument("band_edge_shoulder_db: need an oversampled spectrum");
    const int nfft = static_cast<int>(psd_db.size());
    const int band = nfft / oversampling;  // occupied bins [0, band)

    double acc = 0.0;
    int count = 0;
    auto take = [&](int bin) {
        acc += from_db10(psd_db[(bin % nfft + nfft) % nfft]);
        ++count;
    };
    const int off_lo = static_cast<int>(std::ceil(lo * band));
    const int off_hi = static_cast<int>(std::floor(hi * band));
    for (int off = off_lo; off <= off_hi; ++off) {
        take(band - 1 + off);  // upper edge
        take(-off);            // lower edge (wraps to the top bins)
    }
    if (count == 0) throw std::invalid_argument("band_edge_shoulder_db: empty shoulder window");
    return db10(acc / count);
}

namespace {

double matched_mean_sq(const std::vector<double>& truth, const std::vector<double>& est) {
    if (truth.size() != est.size())
        throw std::length_error("rmse_matched: truth/estimate length mismatch");
    const std::size_t P = truth.size();
    std::vector<bool> used_t(P, false), used_e(P, false);

    // Greedy global nearest assignment: repeatedly match the closest
    // remaining (truth, estimate) pair. Deterministic and order-insensitive.
    double acc = 0.0;
    for (std::size_t step = 0; step < P; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < P; ++i) {
            if (used_t[i]) continue;
            for (std::size_t j = 0; j < P; ++j) {
                if (used_e[j]) continue;
                const double d = std::abs(truth[i] - est[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        used_t[bi] = used_e[bj] = true;
        acc += (truth[bi] - est[bj]) * (truth[bi] - est[bj]);
    }
    return acc / static_cast<double>(P);
}

}  // namespace

double rmse_matched(const std::vector<std::vector<double>>& truths,
                    const std::vector<std::vector<double>>& estimates) {
    if (truths.size() != estimates.size() || truths.empty())
        throw std::length_error("rmse_matched: trial count mismatch");
    double acc = 0.0;
    for (std::size_t t = 0; t < truths.size(); ++t)
        acc += matched_mean_sq(truths[t], estimates[t]);
    return std::sqrt(acc / static_cast<double>(truths.size()));
}

double passive_target_range(double r_los, double r_nlos, double theta_rad) {
    const double denom = 2.0 * r_nlos - 2.0 * r_los * std::cos(theta_rad);
    if (std::abs(denom) < 1e-12)
        throw std::domain_error("passive_target_range: degenerate geometry (zero denominator)");
    return (r_nlos * r_nlos - r_los * r_los) / denom;
}

double ber(const std::vector<std::uint8_t>& tx_bits, const std::vector<std::uint8_t>& rx_bits) {
    if (tx_bits.size() != rx_bits.size())
        throw std::length_error("ber: bit stream length mismatch");
    if (tx_bits.empty()) throw std::invalid_argument("ber: empty streams");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < tx_bits.size(); ++i)
        if ((tx_bits[i] ^ rx_bits[i]) & 1u) ++errors;
    return static_cast<double>(errors) / static_cast<double>(tx_bits.size());
}

}  // namespace ddisac
