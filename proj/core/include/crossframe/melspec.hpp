#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace crossframe {

double hz_to_mel(double hz);
double mel_to_hz(double mel);

struct MelConfig {
    std::uint32_t sample_rate_hz = 44100;
    std::size_t frame_len = 512;   // also the Hamming window length
    std::size_t hop_len = 512;     // non-overlapping by default
    std::size_t n_mel_filters = 26;
    double fmin_hz = 0.0;
    double fmax_hz = 0.0;          // 0 means sample_rate/2

    double fmax_or_nyquist() const {
        return fmax_hz > 0.0 ? fmax_hz : sample_rate_hz / 2.0;
    }
    void validate() const;
};

// N x J matrix of non-negative mel power values, row-major.
struct MelMatrix {
    std::size_t rows = 0;  // mel filters
    std::size_t cols = 0;  // frames
    std::vector<double> values;
    double col_hop_seconds = 0.0;
    std::vector<double> filter_center_hz;

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

// Triangular mel filterbank, N rows x (frame_len/2 + 1) columns.
//
// Filter edges are N+2 points uniform on the mel scale between fmin and
// fmax, snapped to FFT bin indices; triangles are linear in bin index with
// peak 1.0 exactly at each filter's center bin and zero at the adjacent
// centers. Between interior centers any bin therefore sees exactly two
// filters summing to 1. Snapped bins must be strictly increasing, which
// every sane (sample_rate, frame_len, N) satisfies; otherwise InvalidConfig.
struct MelFilterbank {
    std::size_t n_filters = 0;
    std::size_t n_bins = 0;
    std::vector<double> weights;          // row-major n_filters x n_bins
    std::vector<std::size_t> center_bin;  // per filter
    std::vector<double> center_hz;

    double at(std::size_t f, std::size_t b) const { return weights[f * n_bins + b]; }
};

MelFilterbank mel_filterbank(const MelConfig& cfg);

// Hamming window, real FFT, power |X|^2, filterbank multiply, per frame.
// Throws TooShort when x is shorter than one frame.
MelMatrix mel_spectrogram(std::span<const double> x, const MelConfig& cfg);

// -20*log10(m + 1e-12); m = 0 maps to 240.
double to_db(double m);

// "MELM" binary matrix container: magic 'M','E','L','M', u32le rows,
// u32le cols, then rows*cols f64le values in row-major order.
void write_melm(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
                std::span<const double> values);
void write_melm(const std::filesystem::path& path, const MelMatrix& m);

struct MelmData {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
};

MelmData read_melm(const std::filesystem::path& path);

}  // namespace crossframe
