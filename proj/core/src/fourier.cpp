#include "crossframe/fourier.hpp"

#include <cmath>
#include <numbers>

#include "crossframe/errors.hpp"

namespace crossframe {

double Harmonic::eta() const {
    return amplitude * std::cos(phase);
}

double Harmonic::lambda() const {
    return -amplitude * std::sin(phase);
}

std::complex<double> Harmonic::coefficient() const {
    return {eta() / 2.0, -lambda() / 2.0};
}

std::vector<double> FourierSeriesSpec::synthesize(std::size_t n_samples) const {
    std::vector<double> out(n_samples, dc);
    const double omega = 2.0 * std::numbers::pi / period;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double t = period * static_cast<double>(k) / static_cast<double>(n_samples);
        for (const Harmonic& h : harmonics) {
            out[k] += h.amplitude * std::cos(static_cast<double>(h.n) * omega * t + h.phase);
        }
    }
    return out;
}

std::vector<std::complex<double>> fourier_coefficients(std::span<const double> samples,
                                                       std::size_t n_max) {
    if (samples.size() < 4 * n_max || samples.empty()) {
        throw TooFewSamples("need at least 4*n_max samples, got " +
                            std::to_string(samples.size()));
    }
    const std::size_t n_samples = samples.size();
    std::vector<std::complex<double>> coeffs(n_max + 1);
    // Rectangle rule over one period: T cancels, leaving a plain average of
    // f(t_k) e^{-i 2 pi n k / N}.
    for (std::size_t n = 0; n <= n_max; ++n) {
        std::complex<double> acc(0.0, 0.0);
        const double step = -2.0 * std::numbers::pi * static_cast<double>(n) /
                            static_cast<double>(n_samples);
        for (std::size_t k = 0; k < n_samples; ++k) {
            const double angle = step * static_cast<double>(k);
            acc += samples[k] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        coeffs[n] = acc / static_cast<double>(n_samples);
    }
    return coeffs;
}

AmplitudeReport verify_amplitude_identity(const FourierSeriesSpec& spec, std::size_t n_samples,
                                          double tol) {
    std::size_t n_max = 0;
    for (const Harmonic& h : spec.harmonics) {
        n_max = std::max(n_max, h.n);
    }

    const std::vector<double> signal = spec.synthesize(n_samples);
    const auto coeffs = fourier_coefficients(signal, n_max);

    AmplitudeReport report;
    report.tolerance = tol;
    report.pass = true;

    for (std::size_t n = 0; n <= n_max; ++n) {
        HarmonicCheck check;
        check.n = n;
        check.measured_magnitude = std::abs(coeffs[n]);
        if (n == 0) {
            check.declared = true;
            check.expected_magnitude = std::abs(spec.dc);
        } else {
            // |M_n| = a_n / 2; same-index harmonics combine as phasors
            std::complex<double> expected(0.0, 0.0);
            for (const Harmonic& h : spec.harmonics) {
                if (h.n == n) {
                    check.declared = true;
                    expected += 0.5 * h.amplitude *
                                std::complex<double>(std::cos(h.phase), std::sin(h.phase));
                }
            }
            check.expected_magnitude = std::abs(expected);
        }
        check.error = std::abs(check.measured_magnitude - check.expected_magnitude);
        check.pass = check.error < tol;
        if (check.declared) {
            check.amplitude_db = -20.0 * std::log10(check.measured_magnitude + 1e-12);
        }
        report.max_error = std::max(report.max_error, check.error);
        report.pass = report.pass && check.pass;
        report.checks.push_back(check);
    }
    return report;
}

}  // namespace crossframe
