#include "crossframe/melspec.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "crossframe/errors.hpp"
#include "crossframe/fft.hpp"
#include "crossframe/framing.hpp"

namespace crossframe {

double hz_to_mel(double hz) {
    return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double mel_to_hz(double mel) {
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

void MelConfig::validate() const {
    if (sample_rate_hz == 0) {
        throw InvalidConfig(Stage::melspec, "sample_rate_hz must be positive");
    }
    if (!is_power_of_two(frame_len)) {
        throw InvalidConfig(Stage::melspec, "frame_len must be a power of two");
    }
    if (hop_len < 1) {
        throw InvalidConfig(Stage::melspec, "hop_len must be >= 1");
    }
    if (n_mel_filters < 2) {
        throw InvalidConfig(Stage::melspec, "need at least 2 mel filters");
    }
    const double fmax = fmax_or_nyquist();
    if (fmin_hz < 0.0 || fmin_hz >= fmax || fmax > sample_rate_hz / 2.0) {
        throw InvalidConfig(Stage::melspec, "need 0 <= fmin < fmax <= sample_rate/2");
    }
}

MelFilterbank mel_filterbank(const MelConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.n_mel_filters;
    const std::size_t n_bins = cfg.frame_len / 2 + 1;
    const double bin_hz = static_cast<double>(cfg.sample_rate_hz) / cfg.frame_len;

    // N+2 points uniform in mel, snapped to FFT bins. Point i+1 is filter
    // i's center; points i and i+2 are its edges.
    const double mel_lo = hz_to_mel(cfg.fmin_hz);
    const double mel_hi = hz_to_mel(cfg.fmax_or_nyquist());
    std::vector<std::size_t> bins(n + 2);
    for (std::size_t i = 0; i < n + 2; ++i) {
        const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                        static_cast<double>(n + 1);
        const double hz = mel_to_hz(mel);
        bins[i] = std::min(static_cast<std::size_t>(std::llround(hz / bin_hz)), n_bins - 1);
    }
    for (std::size_t i = 1; i < n + 2; ++i) {
        if (bins[i] <= bins[i - 1]) {
            throw InvalidConfig(Stage::melspec,
                                "mel points collapse onto the same FFT bin; "
                                "reduce n_mel_filters or increase frame_len");
        }
    }

    MelFilterbank fb;
    fb.n_filters = n;
    fb.n_bins = n_bins;
    fb.weights.assign(n * n_bins, 0.0);
    fb.center_bin.resize(n);
    fb.center_hz.resize(n);
    for (std::size_t f = 0; f < n; ++f) {
        const std::size_t left = bins[f];
        const std::size_t center = bins[f + 1];
        const std::size_t right = bins[f + 2];
        fb.center_bin[f] = center;
        fb.center_hz[f] = static_cast<double>(center) * bin_hz;
        for (std::size_t k = left + 1; k <= center; ++k) {
            fb.weights[f * n_bins + k] =
                static_cast<double>(k - left) / static_cast<double>(center - left);
        }
        for (std::size_t k = center + 1; k < right; ++k) {
            fb.weights[f * n_bins + k] =
                static_cast<double>(right - k) / static_cast<double>(right - center);
        }
    }
    return fb;
}

MelMatrix mel_spectrogram(std::span<const double> x, const MelConfig& cfg) {
    const MelFilterbank fb = mel_filterbank(cfg);
    if (x.size() < cfg.frame_len) {
        throw TooShort(Stage::melspec, "signal shorter than one frame");
    }

    std::vector<double> window(cfg.frame_len);
    for (std::size_t i = 0; i < cfg.frame_len; ++i) {
        window[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                           static_cast<double>(cfg.frame_len - 1));
    }

    const auto frames = frame_signal(x, cfg.frame_len, cfg.hop_len);
    MelMatrix m;
    m.rows = fb.n_filters;
    m.cols = frames.size();
    m.values.assign(m.rows * m.cols, 0.0);
    m.col_hop_seconds = static_cast<double>(cfg.hop_len) / cfg.sample_rate_hz;
    m.filter_center_hz = fb.center_hz;

    std::vector<std::complex<double>> buf(cfg.frame_len);
    for (std::size_t j = 0; j < frames.size(); ++j) {
        for (std::size_t i = 0; i < cfg.frame_len; ++i) {
            buf[i] = frames[j][i] * window[i];
        }
        fft_inplace(buf);
        for (std::size_t f = 0; f < fb.n_filters; ++f) {
            double acc = 0.0;
            const double* w = fb.weights.data() + f * fb.n_bins;
            for (std::size_t k = 0; k < fb.n_bins; ++k) {
                if (w[k] != 0.0) {
                    acc += w[k] * std::norm(buf[k]);
                }
            }
            m.at(f, j) = acc;
        }
    }
    return m;
}

double to_db(double m) {
    return -20.0 * std::log10(m + 1e-12);
}

namespace {

void put_u32le(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                          static_cast<unsigned char>((v >> 8) & 0xFF),
                          static_cast<unsigned char>((v >> 16) & 0xFF),
                          static_cast<unsigned char>((v >> 24) & 0xFF)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32le(std::ifstream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_melm(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
                std::span<const double> values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(Stage::melspec, "cannot write " + path.string());
    }
    out.write("MELM", 4);
    put_u32le(out, static_cast<std::uint32_t>(rows));
    put_u32le(out, static_cast<std::uint32_t>(cols));
    for (double v : values) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) {
            b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
        }
        out.write(reinterpret_cast<const char*>(b), 8);
    }
}

void write_melm(const std::filesystem::path& path, const MelMatrix& m) {
    write_melm(path, m.rows, m.cols, m.values);
}

MelmData read_melm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Stage::melspec, "cannot open " + path.string());
    }
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "MELM", 4) != 0) {
        throw Error(Stage::melspec, "bad MELM magic in " + path.string());
    }
    MelmData data;
    data.rows = get_u32le(in);
    data.cols = get_u32le(in);
    data.values.resize(data.rows * data.cols);
    for (double& v : data.values) {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) {
            bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        }
        std::memcpy(&v, &bits, sizeof(v));
    }
    if (!in) {
        throw Error(Stage::melspec, "truncated MELM file " + path.string());
    }
    return data;
}

}  // namespace crossframe
