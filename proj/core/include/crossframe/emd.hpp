#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "crossframe/audio.hpp"

namespace crossframe {

struct EmdConfig {
    // Cauchy stop for one mode's sifting: sum((h_prev - h)^2) / sum(h_prev^2).
    double sift_stop_threshold = 1e-8;
    // Layer bound: decomposition stops after this many modes.
    std::size_t max_imfs = 12;
    // Safety cap so pathological signals cannot sift forever.
    std::size_t max_sift_iterations = 500;

    void validate() const;
};

// Ordered intrinsic mode functions (highest frequency first) plus residual.
// sum(imfs) + residual reconstructs the source elementwise.
struct ImfSet {
    std::vector<std::vector<double>> imfs;
    std::vector<double> residual;

    // Per-mode diagnostics recorded at emission time. For a converged mode,
    // mean_envelope_abs <= mean_envelope_bound where the bound is
    // 10 * sift_stop_threshold * RMS(imf).
    std::vector<double> final_sift_sd;        // Cauchy value at the last sift step
    std::vector<std::size_t> sift_iterations;
    std::vector<bool> converged;              // false only when the iteration cap hit
    std::vector<double> mean_envelope_abs;    // |interior mean of (upper+lower)/2|
    std::vector<double> mean_envelope_bound;

    std::size_t depth() const { return imfs.size(); }
};

struct Extrema {
    std::vector<std::size_t> maxima;
    std::vector<std::size_t> minima;
};

// Strict local extrema; a plateau counts once, at its midpoint index.
// Runs touching either signal edge are not extrema.
Extrema find_extrema(std::span<const double> x);

// Natural cubic spline through the given extrema, with the two outermost
// extrema mirrored about each signal edge before fitting. Evaluated on the
// integer grid [0, n). Requires at least two extrema.
std::vector<double> envelope(std::span<const double> x, std::span<const std::size_t> extrema_idx);

// Empirical mode decomposition by envelope sifting.
//
// Repeatedly extracts modes from the running residual:
//   1. h <- residual
//   2. sift: h <- h - (upper_envelope + lower_envelope)/2 until the Cauchy
//      criterion sum((h_prev - h)^2)/sum(h_prev^2) drops below
//      sift_stop_threshold AND the candidate's interior envelope mean is
//      within 10 * sift_stop_threshold * RMS(h) of zero (mode validity), or
//      the iteration cap hits
//   3. emit h as the next IMF, subtract it from the residual
// The outer loop stops when the residual has fewer than two maxima or two
// minima (monotonic trend) or max_imfs modes were emitted.
//
// Throws TooShort (len < 8) and NonFinite (NaN/Inf input).
ImfSet decompose(const AudioSequence& x, const EmdConfig& cfg = {});
ImfSet decompose(std::span<const double> samples, const EmdConfig& cfg = {});

// a.b / (|a||b|); 0 when either norm is 0. Throws LengthMismatch.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct DepthSelection {
    std::size_t selected = 0;
    std::vector<std::size_t> depths;   // l_min..l_max
    std::vector<double> similarity;    // mean pairwise cosine similarity per depth
};

// Decomposes at every depth L in [l_min, l_max] and computes the mean
// pairwise cosine similarity over all IMF pairs (0 when fewer than two
// modes). Selects the smallest L whose similarity all deeper depths stay
// within stabilization_tol of; falls back to l_max when none stabilizes.
DepthSelection select_depth(const AudioSequence& x, std::size_t l_min, std::size_t l_max,
                            double stabilization_tol, const EmdConfig& base = {});

}  // namespace crossframe
