#include "crossframe/framing.hpp"

namespace crossframe {

FrameGrid make_frame_grid(std::size_t n_samples, std::size_t frame_len, std::size_t hop_len) {
    FrameGrid grid{frame_len, hop_len, 0};
    if (frame_len >= 1 && hop_len >= 1 && n_samples >= frame_len) {
        grid.n_frames = (n_samples - frame_len) / hop_len + 1;
    }
    return grid;
}

std::vector<std::span<const double>> frame_signal(std::span<const double> x,
                                                  std::size_t frame_len, std::size_t hop_len) {
    const FrameGrid grid = make_frame_grid(x.size(), frame_len, hop_len);
    std::vector<std::span<const double>> frames;
    frames.reserve(grid.n_frames);
    for (std::size_t k = 0; k < grid.n_frames; ++k) {
        frames.push_back(x.subspan(k * hop_len, frame_len));
    }
    return frames;
}

std::vector<double> delta(std::span<const double> series) {
    std::vector<double> d(series.size(), 0.0);
    for (std::size_t t = 1; t < series.size(); ++t) {
        d[t] = series[t] - series[t - 1];
    }
    return d;
}

}  // namespace crossframe
