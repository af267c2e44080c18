#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace crossframe {

struct FrameGrid {
    std::size_t frame_len = 0;
    std::size_t hop_len = 0;
    std::size_t n_frames = 0;
};

// n_frames = floor((len - frame_len)/hop) + 1 when len >= frame_len, else 0.
FrameGrid make_frame_grid(std::size_t n_samples, std::size_t frame_len, std::size_t hop_len);

// Frame k covers [k*hop, k*hop + frame_len). Trailing samples that do not
// fill a frame are discarded. Views into `x`; no copies.
std::vector<std::span<const double>> frame_signal(std::span<const double> x,
                                                  std::size_t frame_len,
                                                  std::size_t hop_len);

// First difference with d[0] = 0. Apply twice for the second-order difference.
std::vector<double> delta(std::span<const double> series);

}  // namespace crossframe
