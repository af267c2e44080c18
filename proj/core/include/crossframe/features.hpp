#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace crossframe {

inline constexpr std::size_t kImfFeatureCount = 14;

// Fixed-order per-IMF aggregate of frame-level acoustic descriptors.
//
// Index  Feature
//   0    mean log-energy            ln(sum(x^2) + 1e-12)
//   1    mean delta log-energy
//   2    mean delta-delta log-energy
//   3    mean short-time energy     sum(x^2) / frame_len
//   4    mean delta STE
//   5    mean delta-delta STE
//   6    mean sound-pressure level  20*log10(RMS/2e-5 + 1e-12)
//   7    mean delta SPL
//   8    mean delta-delta SPL
//   9    mean zero-crossing rate    sign changes / (frame_len - 1)
//  10    absolute jitter, seconds
//  11    relative jitter
//  12    absolute shimmer, amplitude units
//  13    relative shimmer
struct ImfFeatureVector {
    std::array<double, kImfFeatureCount> values{};

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

// Column names in vector order, for CSV headers.
std::span<const std::string_view> feature_names();

// Frame the IMF, compute the per-frame series above, and aggregate by time
// mean. Pitch periods come from the normalized autocorrelation peak in the
// lag window [sr/500, sr/60]; a frame is voiced when that peak is >= 0.3.
// Jitter/shimmer are mean absolute differences across consecutive voiced
// frames (period track / frame-peak amplitude track); 0 when fewer than two
// voiced frames exist.
//
// Throws TooShort when the IMF is shorter than one frame.
ImfFeatureVector extract_imf_features(std::span<const double> imf, std::uint32_t sample_rate_hz,
                                      std::size_t frame_len, std::size_t hop_len);

}  // namespace crossframe
