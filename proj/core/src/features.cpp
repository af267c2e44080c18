#include "crossframe/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "crossframe/errors.hpp"
#include "crossframe/framing.hpp"

namespace crossframe {

namespace {

constexpr double kLogEps = 1e-12;
constexpr double kSplReference = 2e-5;  // dimensionless stand-in for 20 uPa
constexpr double kVoicingThreshold = 0.3;

double mean(std::span<const double> v) {
    if (v.empty()) {
        return 0.0;
    }
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double frame_energy(std::span<const double> frame) {
    double e = 0.0;
    for (double s : frame) {
        e += s * s;
    }
    return e;
}

double frame_zcr(std::span<const double> frame) {
    std::size_t changes = 0;
    for (std::size_t t = 1; t < frame.size(); ++t) {
        if (frame[t - 1] * frame[t] < 0.0) {
            ++changes;
        }
    }
    return static_cast<double>(changes) / static_cast<double>(frame.size() - 1);
}

struct PitchEstimate {
    bool voiced = false;
    double period_seconds = 0.0;
    double peak_amplitude = 0.0;
};

// Normalized autocorrelation peak over lags for 60..500 Hz.
PitchEstimate estimate_pitch(std::span<const double> frame, std::uint32_t sr) {
    PitchEstimate est;
    const double r0 = frame_energy(frame);
    if (r0 == 0.0) {
        return est;
    }
    const auto lag_lo = static_cast<std::size_t>(std::ceil(sr / 500.0));
    const auto lag_hi = static_cast<std::size_t>(std::floor(sr / 60.0));
    const std::size_t lo = std::max<std::size_t>(1, lag_lo);
    const std::size_t hi = std::min(frame.size() - 1, lag_hi);
    if (lo > hi) {
        return est;
    }

    double best = -1.0;
    std::size_t best_lag = 0;
    for (std::size_t lag = lo; lag <= hi; ++lag) {
        double r = 0.0;
        for (std::size_t t = 0; t + lag < frame.size(); ++t) {
            r += frame[t] * frame[t + lag];
        }
        r /= r0;
        if (r > best) {
            best = r;
            best_lag = lag;
        }
    }
    if (best < kVoicingThreshold) {
        return est;
    }
    est.voiced = true;
    est.period_seconds = static_cast<double>(best_lag) / sr;
    for (double s : frame) {
        est.peak_amplitude = std::max(est.peak_amplitude, std::abs(s));
    }
    return est;
}

double mean_abs_diff(std::span<const double> v) {
    if (v.size() < 2) {
        return 0.0;
    }
    double total = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        total += std::abs(v[i] - v[i - 1]);
    }
    return total / static_cast<double>(v.size() - 1);
}

}  // namespace

std::span<const std::string_view> feature_names() {
    static constexpr std::string_view names[kImfFeatureCount] = {
        "log_energy_mean",  "log_energy_delta_mean",  "log_energy_delta2_mean",
        "ste_mean",         "ste_delta_mean",         "ste_delta2_mean",
        "spl_mean",         "spl_delta_mean",         "spl_delta2_mean",
        "zcr_mean",         "jitter_abs_s",           "jitter_rel",
        "shimmer_abs",      "shimmer_rel",
    };
    return names;
}

ImfFeatureVector extract_imf_features(std::span<const double> imf, std::uint32_t sample_rate_hz,
                                      std::size_t frame_len, std::size_t hop_len) {
    if (frame_len < 2 || hop_len < 1) {
        throw InvalidConfig(Stage::features, "frame_len must be >= 2 and hop_len >= 1");
    }
    if (imf.size() < frame_len) {
        throw TooShort(Stage::features, "IMF shorter than one frame");
    }

    const auto frames = frame_signal(imf, frame_len, hop_len);
    const std::size_t nf = frames.size();

    std::vector<double> log_energy(nf), ste(nf), spl(nf), zcr(nf);
    std::vector<double> periods, amplitudes;
    periods.reserve(nf);
    amplitudes.reserve(nf);

    for (std::size_t k = 0; k < nf; ++k) {
        const double energy = frame_energy(frames[k]);
        log_energy[k] = std::log(energy + kLogEps);
        ste[k] = energy / static_cast<double>(frame_len);
        const double rms = std::sqrt(energy / static_cast<double>(frame_len));
        spl[k] = 20.0 * std::log10(rms / kSplReference + kLogEps);
        zcr[k] = frame_zcr(frames[k]);

        const PitchEstimate pitch = estimate_pitch(frames[k], sample_rate_hz);
        if (pitch.voiced) {
            periods.push_back(pitch.period_seconds);
            amplitudes.push_back(pitch.peak_amplitude);
        }
    }

    ImfFeatureVector f;
    const std::vector<double> d_log = delta(log_energy);
    const std::vector<double> d_ste = delta(ste);
    const std::vector<double> d_spl = delta(spl);
    f[0] = mean(log_energy);
    f[1] = mean(d_log);
    f[2] = mean(delta(d_log));
    f[3] = mean(ste);
    f[4] = mean(d_ste);
    f[5] = mean(delta(d_ste));
    f[6] = mean(spl);
    f[7] = mean(d_spl);
    f[8] = mean(delta(d_spl));
    f[9] = mean(zcr);

    if (periods.size() >= 2) {
        const double mean_period = mean(periods);
        const double mean_amplitude = mean(amplitudes);
        f[10] = mean_abs_diff(periods);
        f[11] = mean_period > 0.0 ? f[10] / mean_period : 0.0;
        f[12] = mean_abs_diff(amplitudes);
        f[13] = mean_amplitude > 0.0 ? f[12] / mean_amplitude : 0.0;
    }
    return f;
}

}  // namespace crossframe
