#include "crossframe/emd.hpp"

#include <cmath>
#include <limits>

#include "crossframe/errors.hpp"
#include "crossframe/spline.hpp"

namespace crossframe {

void EmdConfig::validate() const {
    if (sift_stop_threshold <= 0.0) {
        throw InvalidConfig(Stage::emd, "sift_stop_threshold must be > 0");
    }
    if (max_imfs < 1) {
        throw InvalidConfig(Stage::emd, "max_imfs must be >= 1");
    }
    if (max_sift_iterations < 1) {
        throw InvalidConfig(Stage::emd, "max_sift_iterations must be >= 1");
    }
}

namespace {

void find_extrema_into(std::span<const double> x, Extrema& out) {
    out.maxima.clear();
    out.minima.clear();
    const std::size_t n = x.size();
    if (n < 3) {
        return;
    }
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[j + 1] == x[i]) {
            ++j;
        }
        if (i > 0 && j < n - 1) {
            if (x[i - 1] < x[i] && x[j + 1] < x[i]) {
                out.maxima.push_back((i + j) / 2);
            } else if (x[i - 1] > x[i] && x[j + 1] > x[i]) {
                out.minima.push_back((i + j) / 2);
            }
        }
        i = j + 1;
    }
}

// Reusable buffers for the sift inner loop; sized once per decompose call.
struct SiftWorkspace {
    Extrema ex;
    std::vector<double> knot_x, knot_y;
    std::vector<double> upper, lower, mean_env;
    CubicSpline spline;
};

void envelope_into(std::span<const double> x, const std::vector<std::size_t>& idx,
                   SiftWorkspace& ws, std::vector<double>& out) {
    const std::size_t n = x.size();
    const std::size_t m = idx.size();

    // Mirror the two outermost extrema about each signal edge. Extrema are
    // interior indices, so the mirrored knots stay strictly outside [0, n-1]
    // and the knot sequence stays strictly increasing.
    ws.knot_x.clear();
    ws.knot_y.clear();
    ws.knot_x.reserve(m + 4);
    ws.knot_y.reserve(m + 4);
    ws.knot_x.push_back(-static_cast<double>(idx[1]));
    ws.knot_y.push_back(x[idx[1]]);
    ws.knot_x.push_back(-static_cast<double>(idx[0]));
    ws.knot_y.push_back(x[idx[0]]);
    for (std::size_t k = 0; k < m; ++k) {
        ws.knot_x.push_back(static_cast<double>(idx[k]));
        ws.knot_y.push_back(x[idx[k]]);
    }
    const double edge = 2.0 * static_cast<double>(n - 1);
    ws.knot_x.push_back(edge - static_cast<double>(idx[m - 1]));
    ws.knot_y.push_back(x[idx[m - 1]]);
    ws.knot_x.push_back(edge - static_cast<double>(idx[m - 2]));
    ws.knot_y.push_back(x[idx[m - 2]]);

    ws.spline.fit(ws.knot_x, ws.knot_y);
    out.resize(n);
    ws.spline.evaluate_grid(0.0, out);
}

}  // namespace

Extrema find_extrema(std::span<const double> x) {
    Extrema out;
    find_extrema_into(x, out);
    return out;
}

std::vector<double> envelope(std::span<const double> x, std::span<const std::size_t> extrema_idx) {
    if (extrema_idx.size() < 2) {
        throw LengthMismatch(Stage::emd, "envelope needs at least two extrema");
    }
    SiftWorkspace ws;
    std::vector<double> env;
    envelope_into(x, std::vector<std::size_t>(extrema_idx.begin(), extrema_idx.end()), ws, env);
    return env;
}

ImfSet decompose(const AudioSequence& x, const EmdConfig& cfg) {
    return decompose(std::span<const double>(x.samples), cfg);
}

ImfSet decompose(std::span<const double> samples, const EmdConfig& cfg) {
    cfg.validate();
    if (samples.size() < 8) {
        throw TooShort(Stage::emd, "need at least 8 samples, got " +
                                       std::to_string(samples.size()));
    }
    for (double v : samples) {
        if (!std::isfinite(v)) {
            throw NonFinite("input contains NaN or Inf");
        }
    }

    ImfSet out;
    out.residual.assign(samples.begin(), samples.end());
    const std::size_t n = out.residual.size();

    SiftWorkspace ws;
    std::vector<double> h(n);

    while (out.imfs.size() < cfg.max_imfs) {
        find_extrema_into(out.residual, ws.ex);
        if (ws.ex.maxima.size() < 2 || ws.ex.minima.size() < 2) {
            break;  // residual is a monotonic trend
        }

        h = out.residual;
        double sd = std::numeric_limits<double>::infinity();
        double env_mean_abs = 0.0;
        double env_mean_bound = 0.0;
        std::size_t iters = 0;
        bool converged = false;
        bool first_pass = true;
        while (true) {
            if (!first_pass) {
                find_extrema_into(h, ws.ex);
                if (ws.ex.maxima.size() < 2 || ws.ex.minima.size() < 2) {
                    converged = true;  // nothing left to sift
                    env_mean_abs = 0.0;
                    env_mean_bound = 0.0;
                    break;
                }
            }
            first_pass = false;
            envelope_into(h, ws.ex.maxima, ws, ws.upper);
            envelope_into(h, ws.ex.minima, ws, ws.lower);

            // interior = span where both envelope fits are anchored by real
            // extrema rather than mirrored ones
            const std::size_t lo = std::max(ws.ex.maxima.front(), ws.ex.minima.front());
            const std::size_t hi = std::min(ws.ex.maxima.back(), ws.ex.minima.back());
            ws.mean_env.resize(n);
            double interior_sum = 0.0;
            double num = 0.0;
            double hsq = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double m = 0.5 * (ws.upper[i] + ws.lower[i]);
                ws.mean_env[i] = m;
                num += m * m;
                hsq += h[i] * h[i];
            }
            for (std::size_t i = lo; i <= hi; ++i) {
                interior_sum += ws.mean_env[i];
            }
            env_mean_abs = std::abs(interior_sum / static_cast<double>(hi - lo + 1));
            env_mean_bound = 10.0 * cfg.sift_stop_threshold *
                             std::sqrt(hsq / static_cast<double>(n));

            // stop once the previous step's Cauchy criterion has converged
            // and the current candidate's envelopes are symmetric; h is then
            // emitted exactly as validated
            if (sd < cfg.sift_stop_threshold && env_mean_abs <= env_mean_bound) {
                converged = true;
                break;
            }
            if (iters >= cfg.max_sift_iterations) {
                break;
            }

            for (std::size_t i = 0; i < n; ++i) {
                h[i] -= ws.mean_env[i];
            }
            ++iters;
            if (hsq == 0.0) {
                converged = true;
                sd = 0.0;
                break;
            }
            sd = num / hsq;
        }

        out.imfs.push_back(h);
        out.final_sift_sd.push_back(sd);
        out.sift_iterations.push_back(iters);
        out.converged.push_back(converged);
        out.mean_envelope_abs.push_back(env_mean_abs);
        out.mean_envelope_bound.push_back(env_mean_bound);
        for (std::size_t i = 0; i < n; ++i) {
            out.residual[i] -= h[i];
        }
    }
    return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) {
        throw LengthMismatch(Stage::emd, "cosine_similarity needs equal nonzero lengths");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

double mean_pairwise_similarity(const ImfSet& set) {
    const std::size_t d = set.depth();
    if (d < 2) {
        return 0.0;
    }
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            total += cosine_similarity(set.imfs[i], set.imfs[j]);
            ++pairs;
        }
    }
    return total / static_cast<double>(pairs);
}

}  // namespace

DepthSelection select_depth(const AudioSequence& x, std::size_t l_min, std::size_t l_max,
                            double stabilization_tol, const EmdConfig& base) {
    if (l_min < 1 || l_min >= l_max) {
        throw InvalidConfig(Stage::emd, "need 1 <= l_min < l_max");
    }
    DepthSelection sel;
    for (std::size_t depth = l_min; depth <= l_max; ++depth) {
        EmdConfig cfg = base;
        cfg.max_imfs = depth;
        sel.depths.push_back(depth);
        sel.similarity.push_back(mean_pairwise_similarity(decompose(x, cfg)));
    }

    sel.selected = l_max;
    for (std::size_t i = 0; i < sel.similarity.size(); ++i) {
        bool stable = true;
        for (std::size_t j = i + 1; j < sel.similarity.size(); ++j) {
            if (std::abs(sel.similarity[j] - sel.similarity[i]) >= stabilization_tol) {
                stable = false;
                break;
            }
        }
        if (stable) {
            sel.selected = sel.depths[i];
            break;
        }
    }
    return sel;
}

}  // namespace crossframe
