#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>

#include "layerstack/corpus.hpp"

namespace layerstack {

inline constexpr double kDistributionTolerance = 1e-9;

struct MessageEnsemble {
    std::uint64_t message_count = 0;
};

// Probability mass over named outcomes. Zero-mass outcomes are dropped on
// construction; the remaining masses must sum to 1 within tolerance.
class TokenDistribution {
public:
    explicit TokenDistribution(std::map<std::string, double> probabilities);

    static TokenDistribution from_counts(const TermCounts& counts);
    static TokenDistribution uniform(std::size_t n);

    const std::map<std::string, double>& probabilities() const { return probabilities_; }
    std::size_t support_size() const { return probabilities_.size(); }

private:
    std::map<std::string, double> probabilities_;
};

// Joint mass over (transmitter, receiver) outcome pairs.
class JointDistribution {
public:
    using Key = std::pair<std::string, std::string>;

    explicit JointDistribution(std::map<Key, double> probabilities);

    const std::map<Key, double>& probabilities() const { return probabilities_; }
    TokenDistribution transmitter_marginal() const;
    TokenDistribution receiver_marginal() const;

private:
    std::map<Key, double> probabilities_;
};

/// log2(M). Throws "empty ensemble" for M = 0.
double hartley_entropy(MessageEnsemble ensemble);

/// Sum of p log2(1/p), in bits.
double shannon_entropy(const TokenDistribution& dist);

double joint_entropy(const JointDistribution& joint);

/// H(T,R) - H(T): joint entropy minus the transmitter marginal's entropy.
/// This is the receiver's conditional entropy given the transmitter.
double residual_entropy(const JointDistribution& joint);

/// Entropy of the empirical byte-value distribution, bits per byte.
double bitstream_entropy(std::span<const std::uint8_t> bytes);

// Shannon entropy of the term proportions in a count table (bits).
double count_entropy(const TermCounts& counts);

} // namespace layerstack
