#include "layerstack/infotheory.hpp"

#include <array>
#include <cmath>

#include "layerstack/error.hpp"

namespace layerstack {

namespace {

template <typename Map>
void validate_masses(Map& probabilities, const char* what) {
    double sum = 0.0;
    for (auto it = probabilities.begin(); it != probabilities.end();) {
        const double p = it->second;
        if (!std::isfinite(p) || p < 0.0 || p > 1.0 + kDistributionTolerance)
            throw Error(std::string("invalid ") + what + ": probability out of [0,1]");
        sum += p;
        it = p == 0.0 ? probabilities.erase(it) : std::next(it);
    }
    if (probabilities.empty() || std::abs(sum - 1.0) > kDistributionTolerance)
        throw Error(std::string("invalid ") + what + ": probabilities sum to " +
                    std::to_string(sum));
}

// p log2(1/p) summed over a range of masses.
template <typename Map>
double entropy_bits(const Map& probabilities) {
    double h = 0.0;
    for (const auto& [key, p] : probabilities)
        h -= p * std::log2(p);
    return h;
}

} // namespace

TokenDistribution::TokenDistribution(std::map<std::string, double> probabilities)
    : probabilities_(std::move(probabilities)) {
    validate_masses(probabilities_, "distribution");
}

TokenDistribution TokenDistribution::from_counts(const TermCounts& counts) {
    const auto total = static_cast<double>(total_count(counts));
    if (total == 0)
        throw Error("invalid distribution: no counts");
    std::map<std::string, double> probs;
    for (const auto& [term, n] : counts)
        if (n > 0)
            probs.emplace(term, static_cast<double>(n) / total);
    return TokenDistribution(std::move(probs));
}

TokenDistribution TokenDistribution::uniform(std::size_t n) {
    if (n == 0)
        throw Error("invalid distribution: no outcomes");
    std::map<std::string, double> probs;
    const double p = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        probs.emplace(std::to_string(i), p);
    return TokenDistribution(std::move(probs));
}

JointDistribution::JointDistribution(std::map<Key, double> probabilities)
    : probabilities_(std::move(probabilities)) {
    validate_masses(probabilities_, "joint distribution");
}

TokenDistribution JointDistribution::transmitter_marginal() const {
    std::map<std::string, double> m;
    for (const auto& [key, p] : probabilities_)
        m[key.first] += p;
    return TokenDistribution(std::move(m));
}

TokenDistribution JointDistribution::receiver_marginal() const {
    std::map<std::string, double> m;
    for (const auto& [key, p] : probabilities_)
        m[key.second] += p;
    return TokenDistribution(std::move(m));
}

double hartley_entropy(MessageEnsemble ensemble) {
    if (ensemble.message_count == 0)
        throw Error("empty ensemble");
    return std::log2(static_cast<double>(ensemble.message_count));
}

double shannon_entropy(const TokenDistribution& dist) { return entropy_bits(dist.probabilities()); }

double joint_entropy(const JointDistribution& joint) { return entropy_bits(joint.probabilities()); }

double residual_entropy(const JointDistribution& joint) {
    return joint_entropy(joint) - shannon_entropy(joint.transmitter_marginal());
}

double bitstream_entropy(std::span<const std::uint8_t> bytes) {
    if (bytes.empty())
        throw Error("bitstream entropy of empty input");
    std::array<std::uint64_t, 256> hist{};
    for (auto b : bytes)
        ++hist[b];
    const auto n = static_cast<double>(bytes.size());
    double h = 0.0;
    for (auto c : hist) {
        if (c == 0)
            continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

double count_entropy(const TermCounts& counts) {
    return shannon_entropy(TokenDistribution::from_counts(counts));
}

} // namespace layerstack
