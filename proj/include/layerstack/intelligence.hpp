#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "layerstack/corpus.hpp"
#include "layerstack/knowledge.hpp"

namespace layerstack {

struct DocVector {
    std::string doc_id;
    std::vector<double> components;
    // L2 norm of the raw proportion vector before normalization.
    double norm = 0.0;
};

/// Proportion vector over `vocabulary_order`, L2-normalized. Throws
/// "orthogonal document" when the document shares no term with the vocabulary.
DocVector doc_vector(const Document& doc, const std::vector<std::string>& vocabulary_order);

std::vector<DocVector> doc_vectors(const Corpus& corpus);

struct Clustering {
    std::size_t k = 0;
    std::vector<std::string> doc_ids;        // same order as the input vectors
    std::vector<std::size_t> assignments;    // cluster index per input vector
    std::vector<std::vector<double>> centroids;
    double inertia = 0.0;
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
    // Inertia after every assignment step, first entry from the seeding.
    std::vector<double> inertia_history;

    std::vector<std::vector<std::string>> members() const;
};

inline constexpr std::size_t kMaxKmeansIterations = 100;

/// Lloyd's algorithm with k-means++ seeding from a mt19937_64 seeded by `seed`.
/// Stops when no assignment changes or after 100 iterations. An empty
/// cluster's centroid is moved to the point farthest from its old position.
Clustering kmeans(const std::vector<DocVector>& vectors, std::size_t k, std::uint64_t seed);

struct EntropicState {
    TermCounts macrostate;
    double reservoir_strength = 1.0;
};

/// T * (S(macrostate + candidate) - S(macrostate)), entropies in bits.
double entropic_gain(const EntropicState& state, const Document& candidate);

struct ClusterSelection {
    std::size_t cluster = 0;
    std::vector<std::string> members;
    // Intra-cluster ranking (leave-one-out within the cluster), truncated.
    std::vector<CorrelationResult> selected;
};

struct RepresentativeSelection {
    std::vector<std::string> doc_ids;
    std::vector<ClusterSelection> clusters;
    std::vector<std::string> warnings;
};

RepresentativeSelection select_representatives(const Clustering& clustering, const Corpus& corpus,
                                               std::size_t per_cluster);

struct AggregationRound {
    Clustering clustering;
    RepresentativeSelection selection;
};

struct AggregationResult {
    std::vector<AggregationRound> rounds;
    // Global ranking of the surviving documents, untruncated.
    Ranking ranking;
    std::vector<std::string> survivors;
    std::vector<std::string> warnings;
};

/// Cluster -> select representatives -> shrink the corpus, `rounds` times,
/// then rank the survivors globally. Round r uses seed + r.
AggregationResult iterate_aggregation(const Corpus& corpus, std::size_t k, std::size_t rounds,
                                      std::size_t per_cluster, std::uint64_t seed);

} // namespace layerstack
