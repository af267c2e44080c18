#include "crossframe/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "crossframe/errors.hpp"

namespace crossframe {

namespace {

constexpr std::size_t kMaxLloydIterations = 300;
constexpr std::size_t kZcrDimension = 9;

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::size_t index(std::size_t n) {
        return std::min(static_cast<std::size_t>(uniform01() * static_cast<double>(n)), n - 1);
    }
};

using Point = std::array<double, kImfFeatureCount>;

double sq_distance(const Point& a, const Point& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < kImfFeatureCount; ++i) {
        const double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

// Per-dimension z-score; zero-variance dimensions pass through unscaled.
std::vector<Point> zscore(const std::vector<ImfFeatureVector>& points) {
    const std::size_t n = points.size();
    Point mu{}, sigma{};
    for (const auto& p : points) {
        for (std::size_t d = 0; d < kImfFeatureCount; ++d) {
            mu[d] += p[d];
        }
    }
    for (double& m : mu) {
        m /= static_cast<double>(n);
    }
    for (const auto& p : points) {
        for (std::size_t d = 0; d < kImfFeatureCount; ++d) {
            const double diff = p[d] - mu[d];
            sigma[d] += diff * diff;
        }
    }
    for (double& s : sigma) {
        s = std::sqrt(s / static_cast<double>(n));
    }

    std::vector<Point> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < kImfFeatureCount; ++d) {
            out[i][d] = sigma[d] > 0.0 ? (points[i][d] - mu[d]) / sigma[d] : points[i][d] - mu[d];
        }
    }
    return out;
}

std::vector<Point> seed_kmeanspp(const std::vector<Point>& pts, std::size_t k, SplitMix64& rng) {
    const std::size_t n = pts.size();
    std::vector<Point> centers;
    centers.reserve(k);
    std::vector<bool> chosen(n, false);

    const std::size_t first = rng.index(n);
    centers.push_back(pts[first]);
    chosen[first] = true;

    std::vector<double> d2(n, 0.0);
    while (centers.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) {
                best = std::min(best, sq_distance(pts[i], c));
            }
            d2[i] = best;
            total += best;
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double r = rng.uniform01() * total;
            double cum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cum += d2[i];
                if (cum > r) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {
                pick = n - 1;
            }
        } else {
            // all points coincide with a center; fall back to a fresh index
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {
                pick = rng.index(n);
            }
        }
        centers.push_back(pts[pick]);
        chosen[pick] = true;
    }
    return centers;
}

}  // namespace

namespace {

struct LloydRun {
    std::vector<std::size_t> assign;
    std::vector<Point> centroids;
    double inertia = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    std::vector<double> inertia_trace;
};

LloydRun lloyd_once(const std::vector<Point>& pts, std::size_t k, SplitMix64& rng) {
    const std::size_t n = pts.size();
    LloydRun run;
    run.centroids = seed_kmeanspp(pts, k, rng);
    run.assign.assign(n, 0);
    std::vector<std::size_t> prev_assign(n, k);  // k is never a valid id

    while (run.iterations < kMaxLloydIterations) {
        ++run.iterations;

        // assignment step; ties go to the lowest cluster id
        double step_inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_c = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double d = sq_distance(pts[i], run.centroids[c]);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            run.assign[i] = best_c;
            step_inertia += best;
        }
        run.inertia_trace.push_back(step_inertia);
        if (run.assign == prev_assign) {
            break;
        }
        prev_assign = run.assign;

        // update step
        std::vector<Point> sums(k, Point{});
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < kImfFeatureCount; ++d) {
                sums[run.assign[i]][d] += pts[i][d];
            }
            ++counts[run.assign[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                continue;
            }
            for (std::size_t d = 0; d < kImfFeatureCount; ++d) {
                run.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
            }
        }

        // re-seed each empty cluster with the point farthest from its centroid
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] != 0) {
                continue;
            }
            double worst = -1.0;
            std::size_t worst_i = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[run.assign[i]] <= 1) {
                    continue;  // do not strand another cluster
                }
                const double d = sq_distance(pts[i], run.centroids[run.assign[i]]);
                if (d > worst) {
                    worst = d;
                    worst_i = i;
                }
            }
            if (worst >= 0.0) {
                --counts[run.assign[worst_i]];
                run.centroids[c] = pts[worst_i];
                run.assign[worst_i] = c;
                counts[c] = 1;
            }
        }
    }
    run.inertia = run.inertia_trace.empty() ? 0.0 : run.inertia_trace.back();
    return run;
}

// Lloyd is only locally optimal; restarts with fresh k-means++ draws are the
// standard fix and keep the result deterministic for a fixed seed. The point
// sets here are tiny (one per IMF), so a generous restart budget is cheap.
constexpr std::size_t kRestarts = 64;

}  // namespace

ClusterResult kmeans(const std::vector<ImfFeatureVector>& points, std::size_t k,
                     std::uint64_t seed) {
    if (points.empty()) {
        throw EmptyInput("kmeans needs at least one point");
    }
    if (k < 1 || k > points.size()) {
        throw KTooLarge("k=" + std::to_string(k) + " for " + std::to_string(points.size()) +
                        " points");
    }

    const std::vector<Point> pts = zscore(points);
    const std::size_t n = pts.size();

    SplitMix64 rng(seed);
    LloydRun best = lloyd_once(pts, k, rng);
    for (std::size_t restart = 1; restart < kRestarts; ++restart) {
        LloydRun candidate = lloyd_once(pts, k, rng);
        if (candidate.inertia < best.inertia) {
            best = std::move(candidate);
        }
    }
    std::vector<Point>& centroids = best.centroids;
    std::vector<std::size_t>& assign = best.assign;
    const std::size_t iterations = best.iterations;

    // relabel clusters by descending mean of the ZCR dimension so the
    // highest-frequency group is cluster 0 on every run
    std::vector<double> zcr_mean(k, -std::numeric_limits<double>::infinity());
    std::vector<std::size_t> first_member(k, n);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++counts[assign[i]];
        first_member[assign[i]] = std::min(first_member[assign[i]], i);
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
            continue;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (assign[i] == c) {
                total += points[i][kZcrDimension];
            }
        }
        zcr_mean[c] = total / static_cast<double>(counts[c]);
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (zcr_mean[a] != zcr_mean[b]) {
            return zcr_mean[a] > zcr_mean[b];
        }
        return first_member[a] < first_member[b];
    });
    std::vector<std::size_t> relabel(k);
    for (std::size_t new_id = 0; new_id < k; ++new_id) {
        relabel[order[new_id]] = new_id;
    }

    ClusterResult result;
    result.iterations = iterations;
    result.inertia_trace = std::move(best.inertia_trace);
    result.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.assignments[i] = relabel[assign[i]];
    }
    result.centroids.assign(k, std::vector<double>(kImfFeatureCount, 0.0));
    for (std::size_t c = 0; c < k; ++c) {
        const Point& src = centroids[order[c]];
        result.centroids[c].assign(src.begin(), src.end());
    }
    result.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Point centroid{};
        std::copy(result.centroids[result.assignments[i]].begin(),
                  result.centroids[result.assignments[i]].end(), centroid.begin());
        result.inertia += sq_distance(pts[i], centroid);
    }
    return result;
}

std::vector<std::vector<double>> reconstruct_clusters(const ImfSet& imfs,
                                                      const ClusterResult& result) {
    if (result.assignments.size() != imfs.imfs.size()) {
        throw LengthMismatch(Stage::cluster,
                             "assignments do not cover the IMF set: " +
                                 std::to_string(result.assignments.size()) + " vs " +
                                 std::to_string(imfs.imfs.size()));
    }
    const std::size_t k = result.centroids.size();
    const std::size_t len = imfs.residual.size();
    std::vector<std::vector<double>> out(k, std::vector<double>(len, 0.0));
    for (std::size_t i = 0; i < imfs.imfs.size(); ++i) {
        if (imfs.imfs[i].size() != len) {
            throw LengthMismatch(Stage::cluster, "IMF length differs from signal length");
        }
        auto& target = out[result.assignments[i]];
        const auto& imf = imfs.imfs[i];
        for (std::size_t t = 0; t < len; ++t) {
            target[t] += imf[t];
        }
    }
    return out;
}

std::vector<std::vector<double>> group_by_band(const ImfSet& imfs) {
    const std::size_t n = imfs.imfs.size();
    if (n < 3) {
        throw TooFewImfs("grouping needs at least 3 IMFs, got " + std::to_string(n));
    }
    const std::size_t len = imfs.residual.size();
    const std::size_t group = (n + 2) / 3;  // ceil(n/3)
    std::vector<std::vector<double>> out(3, std::vector<double>(len, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t band = std::min<std::size_t>(i / group, 2);
        for (std::size_t t = 0; t < len; ++t) {
            out[band][t] += imfs.imfs[i][t];
        }
    }
    return out;
}

}  // namespace crossframe
