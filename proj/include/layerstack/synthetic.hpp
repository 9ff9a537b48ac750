#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "layerstack/corpus.hpp"

namespace layerstack {

// Seeded generator of topic-mixture corpora for exercising the ranking and
// aggregation layers. Each document draws from its topic's Zipf-weighted
// word list, a shared Zipf-weighted common list, and a little cross-topic
// noise. Topic sizes follow `topic_shares` (largest remainder rounding).
struct SyntheticSpec {
    std::size_t documents = 36;
    std::vector<double> topic_shares = {0.6, 0.2, 0.2};
    std::size_t common_terms = 40;
    std::size_t topic_terms = 40;
    std::size_t min_length = 400;
    std::size_t max_length = 1200;
    double topic_weight = 0.5;
    double noise_weight = 0.05;
    std::uint64_t seed = 7;
};

struct SyntheticCorpus {
    Corpus corpus;
    std::map<std::string, std::size_t> topic_of; // doc id -> topic index
    std::size_t majority_topic = 0;
};

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec);

// Writes one <id>.txt per document (tokens space-separated, lexicographic)
// and a topics.tsv with the ground-truth topic of each document.
void write_synthetic_corpus(const SyntheticCorpus& synthetic, const std::filesystem::path& dir);

} // namespace layerstack
