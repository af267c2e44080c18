#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <crossframe/emd.hpp>
#include <crossframe/errors.hpp>

#include "support/test_support.hpp"

using namespace crossframe;
namespace ts = testsupport;

namespace {

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

double energy(std::span<const double> v) {
    double e = 0.0;
    for (double x : v) {
        e += x * x;
    }
    return e;
}

double rms(std::span<const double> v) {
    return std::sqrt(energy(v) / static_cast<double>(v.size()));
}

AudioSequence as_audio(std::vector<double> samples, std::uint32_t sr) {
    return AudioSequence{std::move(samples), sr};
}

// Test-side reimplementation of the depth-selection rule, from its
// definition: decompose at every depth, mean pairwise cosine similarity,
// smallest depth the tail stays within tol of.
struct OracleDepth {
    std::size_t selected;
    std::vector<double> table;
};

OracleDepth oracle_select_depth(const AudioSequence& x, std::size_t l_min, std::size_t l_max,
                                double tol) {
    OracleDepth out{l_max, {}};
    for (std::size_t depth = l_min; depth <= l_max; ++depth) {
        EmdConfig cfg;
        cfg.max_imfs = depth;
        const ImfSet set = decompose(x, cfg);
        double cs = 0.0;
        if (set.depth() >= 2) {
            double total = 0.0;
            std::size_t pairs = 0;
            for (std::size_t i = 0; i < set.depth(); ++i) {
                for (std::size_t j = i + 1; j < set.depth(); ++j) {
                    double dot = 0, na = 0, nb = 0;
                    for (std::size_t t = 0; t < set.imfs[i].size(); ++t) {
                        dot += set.imfs[i][t] * set.imfs[j][t];
                        na += set.imfs[i][t] * set.imfs[i][t];
                        nb += set.imfs[j][t] * set.imfs[j][t];
                    }
                    total += (na == 0 || nb == 0) ? 0.0 : dot / (std::sqrt(na) * std::sqrt(nb));
                    ++pairs;
                }
            }
            cs = total / static_cast<double>(pairs);
        }
        out.table.push_back(cs);
    }
    for (std::size_t i = 0; i < out.table.size(); ++i) {
        bool stable = true;
        for (std::size_t j = i + 1; j < out.table.size(); ++j) {
            if (std::abs(out.table[j] - out.table[i]) >= tol) {
                stable = false;
                break;
            }
        }
        if (stable) {
            out.selected = l_min + i;
            break;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("find_extrema identifies strict extrema and plateau midpoints") {
    const std::vector<double> simple = {0, 1, 0, -1, 0, 1, 0};
    const Extrema ex = find_extrema(simple);
    CHECK(ex.maxima == std::vector<std::size_t>{1, 5});
    CHECK(ex.minima == std::vector<std::size_t>{3});

    const std::vector<double> plateau = {0, 1, 1, 0, -2, -2, -2, 0};
    const Extrema px = find_extrema(plateau);
    CHECK(px.maxima == std::vector<std::size_t>{1});   // midpoint of run [1,2]
    CHECK(px.minima == std::vector<std::size_t>{5});   // midpoint of run [4,6]

    const std::vector<double> edges = {2, 1, 1, 2};
    const Extrema ee = find_extrema(edges);
    CHECK(ee.maxima.empty());  // the high runs touch the edges
    CHECK(ee.minima == std::vector<std::size_t>{1});
}

TEST_CASE("envelope interpolates the extrema it was fitted through") {
    const auto x = ts::sine(5.0, 1000.0, 1.0);
    const Extrema ex = find_extrema(x);
    REQUIRE(ex.maxima.size() >= 2);
    const auto upper = envelope(x, ex.maxima);
    REQUIRE(upper.size() == x.size());
    for (std::size_t idx : ex.maxima) {
        CHECK(upper[idx] == doctest::Approx(x[idx]).epsilon(1e-12));
    }
    // interior of the upper envelope of a unit sine hugs 1
    for (std::size_t t = ex.maxima.front(); t <= ex.maxima.back(); ++t) {
        CHECK(upper[t] == doctest::Approx(1.0).epsilon(0.02));
    }
    CHECK_THROWS_AS(envelope(x, std::vector<std::size_t>{1}), LengthMismatch);
}

TEST_CASE("decompose input validation") {
    CHECK_THROWS_AS(decompose(as_audio({1, 2, 3}, 100)), TooShort);
    std::vector<double> bad(100, 0.0);
    bad[50] = std::nan("");
    CHECK_THROWS_AS(decompose(as_audio(bad, 100)), NonFinite);
}

TEST_CASE("all-zero signal decomposes to zero modes") {
    const ImfSet set = decompose(as_audio(std::vector<double>(100, 0.0), 100));
    CHECK(set.depth() == 0);
    CHECK(max_abs(set.residual) == 0.0);
}

TEST_CASE("a pure tone is its own dominant mode") {
    const auto x = ts::sine(5.0, 1000.0, 2.0);
    const ImfSet set = decompose(as_audio(x, 1000));
    REQUIRE(set.depth() >= 1);
    CHECK(cosine_similarity(set.imfs[0], x) > 0.99);

    double tail = energy(set.residual);
    for (std::size_t i = 1; i < set.depth(); ++i) {
        tail += energy(set.imfs[i]);
    }
    CHECK(tail < 0.01 * energy(x));
}

TEST_CASE("two tones separate into modes with the right spectral peaks") {
    auto x = ts::sine(50.0, 1000.0, 2.0);
    ts::add_inplace(x, ts::sine(5.0, 1000.0, 2.0));
    const ImfSet set = decompose(as_audio(x, 1000));
    REQUIRE(set.depth() >= 2);

    // oracle: dense DFT scan peak-pick, independent of the library FFT
    const double peak1 = ts::dft_peak_frequency(set.imfs[0], 1000.0, 1.0, 100.0, 0.1);
    const double peak2 = ts::dft_peak_frequency(set.imfs[1], 1000.0, 1.0, 100.0, 0.1);
    CHECK(peak1 >= 49.0);
    CHECK(peak1 <= 51.0);
    CHECK(peak2 >= 4.5);
    CHECK(peak2 <= 5.5);
}

TEST_CASE("reconstruction holds to 1e-8 of the signal peak") {
    ts::Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = ts::random_signal(rng, 2000);
        const ImfSet set = decompose(as_audio(x, 8000));
        std::vector<double> sum = set.residual;
        for (const auto& imf : set.imfs) {
            for (std::size_t t = 0; t < sum.size(); ++t) {
                sum[t] += imf[t];
            }
        }
        double err = 0.0;
        for (std::size_t t = 0; t < sum.size(); ++t) {
            err = std::max(err, std::abs(sum[t] - x[t]));
        }
        CHECK(err < 1e-8 * max_abs(x));
    }
}

TEST_CASE("IMF validity: extrema and zero-crossing counts differ by at most one") {
    auto x = ts::sine(40.0, 1000.0, 2.0);
    ts::add_inplace(x, ts::sine(8.0, 1000.0, 2.0, 0.8));
    const ImfSet set = decompose(as_audio(x, 1000));
    REQUIRE(set.depth() >= 2);
    for (const auto& imf : set.imfs) {
        if (rms(imf) < 1e-6 * rms(x)) {
            continue;  // numerically negligible tail mode
        }
        const Extrema ex = find_extrema(imf);
        const auto n_extrema = ex.maxima.size() + ex.minima.size();
        const auto n_cross = ts::count_zero_crossings(imf);
        const auto diff = n_extrema > n_cross ? n_extrema - n_cross : n_cross - n_extrema;
        CHECK(diff <= 1);
    }
}

TEST_CASE("mode ordering: zero-crossing rate decreases with mode index") {
    auto x = ts::sine(64.0, 1024.0, 2.0);
    ts::add_inplace(x, ts::sine(16.0, 1024.0, 2.0, 0.9));
    ts::add_inplace(x, ts::sine(4.0, 1024.0, 2.0, 1.1));
    const ImfSet set = decompose(as_audio(x, 1024));
    REQUIRE(set.depth() >= 3);
    std::vector<double> zcr;
    for (std::size_t i = 0; i < 3; ++i) {
        zcr.push_back(static_cast<double>(ts::count_zero_crossings(set.imfs[i])) /
                      static_cast<double>(set.imfs[i].size()));
    }
    CHECK(zcr[0] > zcr[1]);
    CHECK(zcr[1] > zcr[2]);
}

TEST_CASE("converged modes have symmetric envelopes") {
    auto x = ts::sine(40.0, 1000.0, 2.0);
    ts::add_inplace(x, ts::sine(8.0, 1000.0, 2.0, 0.8));
    const EmdConfig cfg;
    const ImfSet set = decompose(as_audio(x, 1000), cfg);
    REQUIRE(set.depth() >= 1);
    std::size_t checked = 0;
    for (std::size_t i = 0; i < set.depth(); ++i) {
        if (!set.converged[i]) {
            continue;  // hit the iteration cap instead of converging
        }
        CHECK(set.mean_envelope_abs[i] <= set.mean_envelope_bound[i]);

        // recompute from scratch on the emitted mode
        const auto& imf = set.imfs[i];
        const Extrema ex = find_extrema(imf);
        if (ex.maxima.size() < 2 || ex.minima.size() < 2) {
            continue;
        }
        const auto upper = envelope(imf, ex.maxima);
        const auto lower = envelope(imf, ex.minima);
        const std::size_t lo = std::max(ex.maxima.front(), ex.minima.front());
        const std::size_t hi = std::min(ex.maxima.back(), ex.minima.back());
        double mean = 0.0;
        for (std::size_t t = lo; t <= hi; ++t) {
            mean += 0.5 * (upper[t] + lower[t]);
        }
        mean /= static_cast<double>(hi - lo + 1);
        CHECK(std::abs(mean) <= 10.0 * cfg.sift_stop_threshold * rms(imf));
        ++checked;
    }
    CHECK(checked >= 2);  // the two real tones must be covered
}

TEST_CASE("cosine_similarity basics") {
    const std::vector<double> v = {1, -2, 3};
    CHECK(cosine_similarity(v, v) == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<double> e1 = {1, 0};
    const std::vector<double> e2 = {0, 1};
    CHECK(cosine_similarity(e1, e2) == 0.0);

    const std::vector<double> a = {1, 2};
    const std::vector<double> b = {2, 4};
    CHECK(cosine_similarity(a, b) == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<double> zero = {0, 0};
    CHECK(cosine_similarity(zero, e1) == 0.0);

    CHECK_THROWS_AS(cosine_similarity(e1, v), LengthMismatch);
}

TEST_CASE("cosine_similarity symmetry and scale invariance") {
    ts::Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const auto a = ts::random_signal(rng, 32);
        const auto b = ts::random_signal(rng, 32);
        const double c = rng.uniform(0.1, 50.0);
        CHECK(cosine_similarity(a, b) == doctest::Approx(cosine_similarity(b, a)).epsilon(1e-12));
        std::vector<double> scaled = a;
        for (double& v : scaled) {
            v *= c;
        }
        CHECK(cosine_similarity(scaled, b) ==
              doctest::Approx(cosine_similarity(a, b)).epsilon(1e-9));
    }
}

TEST_CASE("select_depth returns l_min once the table saturates") {
    // decomposition depth saturates, so the similarity table is constant
    auto x = ts::sine(50.0, 1000.0, 2.0);
    ts::add_inplace(x, ts::sine(5.0, 1000.0, 2.0));
    const AudioSequence audio = as_audio(x, 1000);

    const std::size_t natural_depth = decompose(audio).depth();
    const std::size_t l_min = natural_depth;  // at or past saturation
    const DepthSelection sel = select_depth(audio, l_min, l_min + 4, 1e-9);
    for (std::size_t i = 1; i < sel.similarity.size(); ++i) {
        CHECK(sel.similarity[i] == doctest::Approx(sel.similarity[0]).epsilon(1e-12));
    }
    CHECK(sel.selected == l_min);
}

TEST_CASE("select_depth agrees with the from-scratch oracle on a 4-tone signal") {
    auto x = ts::sine(128.0, 2048.0, 1.0);
    ts::add_inplace(x, ts::sine(32.0, 2048.0, 1.0, 0.8));
    ts::add_inplace(x, ts::sine(8.0, 2048.0, 1.0, 1.2));
    ts::add_inplace(x, ts::sine(2.0, 2048.0, 1.0, 0.6));
    const AudioSequence audio = as_audio(x, 2048);

    const double tol = 1e-3;
    const DepthSelection sel = select_depth(audio, 2, 8, tol);
    const OracleDepth oracle = oracle_select_depth(audio, 2, 8, tol);

    CHECK(sel.selected == oracle.selected);
    REQUIRE(sel.similarity.size() == oracle.table.size());
    for (std::size_t i = 0; i < oracle.table.size(); ++i) {
        CHECK(sel.similarity[i] == doctest::Approx(oracle.table[i]).epsilon(1e-9));
    }
}

TEST_CASE("select_depth validates its range") {
    const auto x = ts::sine(5.0, 1000.0, 1.0);
    CHECK_THROWS_AS(select_depth(as_audio(x, 1000), 3, 3, 1e-3), InvalidConfig);
}
