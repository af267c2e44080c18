#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <crossframe/emd.hpp>
#include <crossframe/errors.hpp>
#include <crossframe/fourier.hpp>

#include "support/test_support.hpp"

using namespace crossframe;
namespace ts = testsupport;

namespace {

// Dense-grid oracle: the same integral evaluated at 16x the sampling rate,
// entirely apart from fourier_coefficients.
std::complex<double> dense_coefficient(const FourierSeriesSpec& spec, std::size_t n,
                                       std::size_t base_samples) {
    const std::size_t dense = base_samples * 16;
    std::complex<double> acc(0.0, 0.0);
    const double omega = 2.0 * std::numbers::pi / spec.period;
    for (std::size_t k = 0; k < dense; ++k) {
        const double t = spec.period * static_cast<double>(k) / static_cast<double>(dense);
        double f = spec.dc;
        for (const Harmonic& h : spec.harmonics) {
            f += h.amplitude * std::cos(static_cast<double>(h.n) * omega * t + h.phase);
        }
        const double angle = -static_cast<double>(n) * omega * t;
        acc += f * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return acc / static_cast<double>(dense);
}

}  // namespace

TEST_CASE("constant signal concentrates in the DC coefficient") {
    FourierSeriesSpec spec;
    spec.period = 1.0;
    spec.dc = 2.75;
    const auto samples = spec.synthesize(256);
    const auto coeffs = fourier_coefficients(samples, 8);
    CHECK(std::abs(coeffs[0] - std::complex<double>(2.75, 0.0)) < 1e-9);
    for (std::size_t n = 1; n <= 8; ++n) {
        CHECK(std::abs(coeffs[n]) < 1e-9);
    }
}

TEST_CASE("a 3cos(2pi 5t) tone carries half its amplitude in its harmonic") {
    // over a 1 s window the 5 Hz tone is harmonic 5
    FourierSeriesSpec one_second;
    one_second.period = 1.0;
    one_second.harmonics.push_back({5, 3.0, 0.0});
    const auto samples = one_second.synthesize(4096);
    const auto coeffs = fourier_coefficients(samples, 8);
    CHECK(std::abs(std::abs(coeffs[5]) - 1.5) < 1e-6);

    // over one 0.2 s period of the same tone it is harmonic 1
    FourierSeriesSpec one_period;
    one_period.period = 0.2;
    one_period.harmonics.push_back({1, 3.0, 0.0});
    const auto short_samples = one_period.synthesize(1024);
    const auto short_coeffs = fourier_coefficients(short_samples, 4);
    CHECK(std::abs(std::abs(short_coeffs[1]) - 1.5) < 1e-6);
}

TEST_CASE("two-harmonic signal matches the dense-grid oracle") {
    FourierSeriesSpec spec;
    spec.period = 0.5;
    spec.harmonics.push_back({1, 2.0, 0.7});
    spec.harmonics.push_back({3, 0.5, -1.1});
    const std::size_t n_samples = 2048;
    const auto samples = spec.synthesize(n_samples);
    const auto coeffs = fourier_coefficients(samples, 4);
    for (std::size_t n = 0; n <= 4; ++n) {
        const auto oracle = dense_coefficient(spec, n, n_samples);
        CHECK(std::abs(coeffs[n] - oracle) < 1e-6);
    }
}

TEST_CASE("fourier_coefficients rejects undersampled requests") {
    const std::vector<double> samples(16, 1.0);
    CHECK_THROWS_AS(fourier_coefficients(samples, 5), TooFewSamples);
}

TEST_CASE("eta/lambda split reproduces the complex coefficient") {
    ts::Rng rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        Harmonic h;
        h.n = 1 + rng.index(6);
        h.amplitude = rng.uniform(0.1, 2.0);
        h.phase = rng.uniform(-3.1, 3.1);

        CHECK(h.eta() == doctest::Approx(h.amplitude * std::cos(h.phase)).epsilon(1e-12));
        CHECK(h.lambda() == doctest::Approx(-h.amplitude * std::sin(h.phase)).epsilon(1e-12));
        CHECK(std::abs(h.coefficient()) == doctest::Approx(h.amplitude / 2.0).epsilon(1e-12));

        FourierSeriesSpec spec;
        spec.period = 1.0;
        spec.harmonics.push_back(h);
        const auto coeffs = fourier_coefficients(spec.synthesize(1024), h.n);
        CHECK(std::abs(coeffs[h.n] - h.coefficient()) < 1e-9);
    }
}

TEST_CASE("amplitude identity holds for a single harmonic at any phase") {
    for (double phase : {0.0, 0.4, 1.1, 2.0, 3.0, -0.8, -2.2, 0.25}) {
        FourierSeriesSpec spec;
        spec.period = 1.0;
        spec.harmonics.push_back({3, 1.0, phase});
        const auto report = verify_amplitude_identity(spec, 4096, 1e-6);
        CHECK(report.pass);
        CHECK(report.max_error < 1e-6);
    }
}

TEST_CASE("|M_n| is independent of phase") {
    std::vector<double> magnitudes;
    for (int i = 0; i < 8; ++i) {
        FourierSeriesSpec spec;
        spec.period = 1.0;
        spec.harmonics.push_back({4, 1.7, i * std::numbers::pi / 4.0});
        const auto samples = spec.synthesize(4096);
        magnitudes.push_back(std::abs(fourier_coefficients(samples, 4)[4]));
    }
    const auto [lo, hi] = std::minmax_element(magnitudes.begin(), magnitudes.end());
    CHECK(*hi - *lo < 1e-8);
}

TEST_CASE("an empty spec passes trivially") {
    FourierSeriesSpec spec;
    spec.period = 1.0;
    const auto report = verify_amplitude_identity(spec, 64, 1e-6);
    CHECK(report.pass);
    CHECK(report.checks.size() == 1);  // DC only
    CHECK(report.max_error < 1e-6);
}

TEST_CASE("coefficients are linear in the signal") {
    ts::Rng rng(88);
    FourierSeriesSpec f, g;
    f.period = g.period = 1.0;
    f.harmonics.push_back({2, rng.uniform(0.1, 2.0), rng.uniform(-3.0, 3.0)});
    f.harmonics.push_back({5, rng.uniform(0.1, 2.0), rng.uniform(-3.0, 3.0)});
    g.harmonics.push_back({3, rng.uniform(0.1, 2.0), rng.uniform(-3.0, 3.0)});
    g.dc = 0.3;

    const auto fs = f.synthesize(2048);
    const auto gs = g.synthesize(2048);
    std::vector<double> sum(2048);
    for (std::size_t i = 0; i < 2048; ++i) {
        sum[i] = fs[i] + gs[i];
    }
    const auto cf = fourier_coefficients(fs, 6);
    const auto cg = fourier_coefficients(gs, 6);
    const auto cs = fourier_coefficients(sum, 6);
    for (std::size_t n = 0; n <= 6; ++n) {
        CHECK(std::abs(cs[n] - (cf[n] + cg[n])) < 1e-9);
    }
}

TEST_CASE("random multi-harmonic specs verify within tolerance") {
    ts::Rng rng(1234);
    for (int trial = 0; trial < 25; ++trial) {
        FourierSeriesSpec spec;
        spec.period = rng.uniform(0.1, 2.0);
        const std::size_t count = 1 + rng.index(5);
        std::set<std::size_t> used;
        for (std::size_t i = 0; i < count; ++i) {
            Harmonic h;
            do {
                h.n = 1 + rng.index(12);
            } while (!used.insert(h.n).second);
            h.amplitude = rng.uniform(0.1, 3.0);
            h.phase = rng.uniform(-3.1, 3.1);
            spec.harmonics.push_back(h);
        }
        const auto report = verify_amplitude_identity(spec, 4096, 1e-6);
        CHECK(report.pass);

        // the report's worst error tracks the dense oracle's within 10x
        double oracle_err = 0.0;
        for (const auto& check : report.checks) {
            const auto dense = dense_coefficient(spec, check.n, 4096);
            oracle_err = std::max(oracle_err,
                                  std::abs(std::abs(dense) - check.expected_magnitude));
        }
        CHECK(report.max_error <= std::max(oracle_err * 10.0, 1e-9));
    }
}

TEST_CASE("per-mode amplitudes survive decomposition of a two-tone signal") {
    // tones 4x apart; each recovered mode should carry its tone's amplitude
    const double sr = 1000.0, seconds = 2.0;
    const double f_lo = 5.0, f_hi = 20.0, a_lo = 1.0, a_hi = 0.7;
    std::vector<double> x(static_cast<std::size_t>(sr * seconds));
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double tt = static_cast<double>(t) / sr;
        x[t] = a_lo * std::cos(2.0 * std::numbers::pi * f_lo * tt) +
               a_hi * std::cos(2.0 * std::numbers::pi * f_hi * tt);
    }
    const ImfSet set = decompose(std::span<const double>(x), EmdConfig{});
    REQUIRE(set.depth() >= 2);

    // 2 s window: the 20 Hz tone is harmonic 40, the 5 Hz tone harmonic 10
    const auto hi_coeffs = fourier_coefficients(set.imfs[0], 40);
    const auto lo_coeffs = fourier_coefficients(set.imfs[1], 40);
    const double rec_hi = 2.0 * std::abs(hi_coeffs[40]);
    const double rec_lo = 2.0 * std::abs(lo_coeffs[10]);
    CHECK(std::abs(rec_hi - a_hi) / a_hi < 0.05);
    CHECK(std::abs(rec_lo - a_lo) / a_lo < 0.05);
}
