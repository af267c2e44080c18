#pragma once

#include <cstdint>
#include <vector>

#include "crossframe/emd.hpp"
#include "crossframe/features.hpp"

namespace crossframe {

struct ClusterResult {
    std::vector<std::size_t> assignments;            // cluster id per point
    std::vector<std::vector<double>> centroids;      // k vectors, z-scored space
    double inertia = 0.0;                            // sum of squared distances, z-scored space
    std::size_t iterations = 0;
    std::vector<double> inertia_trace;               // after each assignment step
};

// Deterministic Lloyd k-means with k-means++ seeding.
//
// Points are z-score normalized per dimension before any distance is
// computed (zero-variance dimensions pass through); centroids and inertia
// live in that normalized space. Seeding draws from a splitmix64 stream so
// identical (points, k, seed) give bit-identical results on any platform.
// Empty clusters are re-seeded with the point farthest from its assigned
// centroid. On return, clusters are relabeled by descending mean of
// dimension 9 (the ZCR slot of ImfFeatureVector) so cluster 0 is the
// highest-frequency group.
//
// Throws EmptyInput and KTooLarge.
ClusterResult kmeans(const std::vector<ImfFeatureVector>& points, std::size_t k,
                     std::uint64_t seed);

// output[c] = elementwise sum of the IMFs assigned to cluster c; an empty
// cluster yields a zero vector. The residual is not a point and is excluded.
// Throws LengthMismatch when assignments do not cover the IMFs.
std::vector<std::vector<double>> reconstruct_clusters(const ImfSet& imfs,
                                                      const ClusterResult& result);

// Fixed index grouping into high/mid/low bands: the first ceil(n/3) IMFs,
// the next ceil(n/3), and the remainder. Kept only as the comparison
// baseline for the clustering route. Throws TooFewImfs for fewer than 3 IMFs.
std::vector<std::vector<double>> group_by_band(const ImfSet& imfs);

}  // namespace crossframe
