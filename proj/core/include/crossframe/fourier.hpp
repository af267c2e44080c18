#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace crossframe {

struct Harmonic {
    std::size_t n = 1;       // harmonic index (multiple of the fundamental)
    double amplitude = 0.0;
    double phase = 0.0;      // radians

    // Amplitude variables of the cosine/sine split:
    // a*cos(nwt + p) = eta*cos(nwt) + lambda*sin(nwt), and the complex
    // series coefficient is M_n = (eta - i*lambda)/2.
    double eta() const;
    double lambda() const;
    std::complex<double> coefficient() const;
};

// f(t) = dc + sum_n amplitude_n * cos(n w t + phase_n), w = 2 pi / period.
struct FourierSeriesSpec {
    double period = 1.0;
    double dc = 0.0;
    std::vector<Harmonic> harmonics;

    std::vector<double> synthesize(std::size_t n_samples) const;
};

// Complex series coefficients M_n = (1/T) integral f(t) e^{-i n w t} dt,
// n = 0..n_max, by the rectangle rule on a uniform one-period grid (exact
// for band-limited signals sampled above Nyquist). For a cosine harmonic of
// amplitude a, |M_n| = a/2. Throws TooFewSamples when samples < 4*n_max.
std::vector<std::complex<double>> fourier_coefficients(std::span<const double> samples,
                                                       std::size_t n_max);

struct HarmonicCheck {
    std::size_t n = 0;
    bool declared = false;
    double expected_magnitude = 0.0;  // amplitude/2 for declared, 0 otherwise
    double measured_magnitude = 0.0;
    double error = 0.0;
    double amplitude_db = 0.0;  // -20*log10(|M_n|), declared harmonics only
    bool pass = false;
};

struct AmplitudeReport {
    std::vector<HarmonicCheck> checks;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Synthesizes the spec, recovers coefficients, and checks the half-amplitude
// identity for every declared harmonic plus silence of the undeclared ones
// up to the largest declared index. Failures land in the report, never throw.
AmplitudeReport verify_amplitude_identity(const FourierSeriesSpec& spec, std::size_t n_samples,
                                          double tol);

}  // namespace crossframe
