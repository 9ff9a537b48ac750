#include "layerstack/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "layerstack/error.hpp"

namespace layerstack {

namespace {

constexpr std::array<const char*, 10> kTopicNames = {
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
};

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(n)));
}

std::string word(const char* stem, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%02zu", stem, i);
    return buf;
}

class ZipfSampler {
public:
    explicit ZipfSampler(std::size_t n) : cumulative_(n) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += 1.0 / static_cast<double>(i + 1);
            cumulative_[i] = acc;
        }
    }
    std::size_t operator()(std::mt19937_64& rng) const {
        const double target = unit_draw(rng) * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        return std::min(cumulative_.size() - 1, static_cast<std::size_t>(it - cumulative_.begin()));
    }

private:
    std::vector<double> cumulative_;
};

std::vector<std::size_t> topic_sizes(const std::vector<double>& shares, std::size_t n) {
    const double total = std::accumulate(shares.begin(), shares.end(), 0.0);
    std::vector<std::size_t> sizes(shares.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t t = 0; t < shares.size(); ++t) {
        const double exact = shares[t] / total * static_cast<double>(n);
        sizes[t] = static_cast<std::size_t>(std::floor(exact));
        assigned += sizes[t];
        remainders.emplace_back(exact - std::floor(exact), t);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned)
        ++sizes[remainders[i % remainders.size()].second];
    return sizes;
}

} // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec) {
    const std::size_t topics = spec.topic_shares.size();
    if (topics == 0 || topics > kTopicNames.size())
        throw Error("synthetic corpus needs between 1 and 10 topics");
    if (spec.documents == 0 || spec.common_terms == 0 || spec.topic_terms == 0)
        throw Error("synthetic corpus sizes must be positive");
    if (spec.min_length == 0 || spec.min_length > spec.max_length)
        throw Error("synthetic corpus lengths must satisfy 0 < min <= max");
    if (spec.topic_weight < 0 || spec.noise_weight < 0 || spec.topic_weight + spec.noise_weight > 1)
        throw Error("synthetic corpus weights must be non-negative and sum to at most 1");
    for (double s : spec.topic_shares)
        if (!(s >= 0))
            throw Error("topic shares must be non-negative");

    std::mt19937_64 rng(spec.seed);
    const auto sizes = topic_sizes(spec.topic_shares, spec.documents);

    std::vector<std::size_t> topic_sequence;
    for (std::size_t t = 0; t < topics; ++t)
        topic_sequence.insert(topic_sequence.end(), sizes[t], t);
    // Fisher-Yates so ids carry no topic information.
    for (std::size_t i = topic_sequence.size(); i > 1; --i)
        std::swap(topic_sequence[i - 1], topic_sequence[draw_index(rng, i)]);

    const ZipfSampler common(spec.common_terms);
    const ZipfSampler topical(spec.topic_terms);

    SyntheticCorpus out;
    out.majority_topic = static_cast<std::size_t>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

    std::vector<Document> docs;
    for (std::size_t d = 0; d < spec.documents; ++d) {
        const std::size_t topic = topic_sequence[d];
        const std::size_t length =
            spec.min_length + draw_index(rng, spec.max_length - spec.min_length + 1);
        TermCounts counts;
        for (std::size_t i = 0; i < length; ++i) {
            const double u = unit_draw(rng);
            if (u < spec.topic_weight) {
                ++counts[word(kTopicNames[topic], topical(rng))];
            } else if (u < spec.topic_weight + spec.noise_weight && topics > 1) {
                std::size_t other = draw_index(rng, topics - 1);
                if (other >= topic)
                    ++other;
                ++counts[word(kTopicNames[other], topical(rng))];
            } else {
                ++counts[word("common", common(rng))];
            }
        }
        char id[32];
        std::snprintf(id, sizeof id, "doc%03zu", d);
        char title[64];
        std::snprintf(title, sizeof title, "Synthetic %s paper %zu", kTopicNames[topic], d);
        out.topic_of[id] = topic;
        docs.push_back(Document::from_counts(id, title, std::move(counts)));
    }
    out.corpus = Corpus(std::move(docs), default_stop_words());
    return out;
}

void write_synthetic_corpus(const SyntheticCorpus& synthetic, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error("cannot create directory " + dir.string() + ": " + ec.message());
    for (const auto& doc : synthetic.corpus.documents()) {
        std::ofstream f(dir / (doc.id + ".txt"), std::ios::binary);
        if (!f)
            throw Error("cannot write " + (dir / (doc.id + ".txt")).string());
        std::size_t column = 0;
        for (const auto& [term, n] : doc.token_counts) {
            for (std::uint64_t i = 0; i < n; ++i) {
                f << term << (++column % 16 == 0 ? '\n' : ' ');
            }
        }
        f << '\n';
    }
    std::ofstream topics(dir / "topics.tsv", std::ios::binary);
    if (!topics)
        throw Error("cannot write " + (dir / "topics.tsv").string());
    topics << "doc_id\ttopic\n";
    for (const auto& [id, topic] : synthetic.topic_of)
        topics << id << '\t' << kTopicNames[topic] << '\n';
}

} // namespace layerstack
