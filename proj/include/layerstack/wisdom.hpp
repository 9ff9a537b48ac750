#pragma once

#include <span>

namespace layerstack {

struct CrowdPrediction {
    std::span<const double> individuals;
    double truth = 0.0;
};

struct CrowdDecomposition {
    double crowd_mean = 0.0;
    double crowd_sq_error = 0.0;          // (C - P)^2
    double avg_individual_sq_error = 0.0; // mean (x_i - P)^2
    double diversity = 0.0;               // mean (x_i - C)^2
};

// Diversity prediction identity: crowd error = average error - diversity,
// with C the arithmetic mean of the individuals.
CrowdDecomposition crowd_decomposition(const CrowdPrediction& pred);

// Cluster-level best correlations as the crowd, the global best as the truth.
CrowdDecomposition aggregate_round_quality(std::span<const double> per_cluster_scores,
                                           double global_score);

} // namespace layerstack
