#include "layerstack/intelligence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "layerstack/error.hpp"
#include "layerstack/infotheory.hpp"

namespace layerstack {

namespace {

// Uniform double in [0, 1) built from the top 53 bits, so the stream is the
// same on every standard library (uniform_real_distribution is not).
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

std::size_t nearest(const std::vector<double>& point, const std::vector<std::vector<double>>& centroids,
                    double* distance) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = squared_distance(point, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (distance)
        *distance = best_d;
    return best;
}

double assign_all(const std::vector<DocVector>& vectors, const std::vector<std::vector<double>>& centroids,
                  std::vector<std::size_t>& assignments) {
    double inertia = 0.0;
    assignments.resize(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        double d = 0.0;
        assignments[i] = nearest(vectors[i].components, centroids, &d);
        inertia += d;
    }
    return inertia;
}

std::vector<std::vector<double>> seed_plus_plus(const std::vector<DocVector>& vectors, std::size_t k,
                                                std::mt19937_64& rng) {
    const std::size_t n = vectors.size();
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    std::size_t first = std::min(n - 1, static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(n)));
    centroids.push_back(vectors[first].components);

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i)
        d2[i] = squared_distance(vectors[i].components, centroids[0]);

    while (centroids.size() < k) {
        double total = 0.0;
        for (double d : d2)
            total += d;
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = unit_draw(rng) * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (d2[i] > 0.0 && target < acc) {
                    pick = i;
                    break;
                }
            }
            // Guard against rounding landing on a zero-weight tail.
            while (d2[pick] == 0.0 && pick > 0)
                --pick;
        } else {
            // Every point coincides with a centroid; keep drawing for the stream.
            pick = std::min(n - 1, static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(n)));
        }
        centroids.push_back(vectors[pick].components);
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], squared_distance(vectors[i].components, centroids.back()));
    }
    return centroids;
}

} // namespace

DocVector doc_vector(const Document& doc, const std::vector<std::string>& vocabulary_order) {
    if (vocabulary_order.empty())
        throw Error("empty vocabulary");
    DocVector v;
    v.doc_id = doc.id;
    v.components.assign(vocabulary_order.size(), 0.0);
    const auto total = static_cast<double>(doc.total_tokens);
    double sq = 0.0;
    for (std::size_t i = 0; i < vocabulary_order.size(); ++i) {
        auto it = doc.token_counts.find(vocabulary_order[i]);
        if (it == doc.token_counts.end() || it->second == 0)
            continue;
        const double p = static_cast<double>(it->second) / total;
        v.components[i] = p;
        sq += p * p;
    }
    if (sq == 0.0)
        throw Error("orthogonal document: " + doc.id);
    v.norm = std::sqrt(sq);
    for (double& c : v.components)
        c /= v.norm;
    return v;
}

std::vector<DocVector> doc_vectors(const Corpus& corpus) {
    const std::vector<std::string> vocab(corpus.vocabulary().begin(), corpus.vocabulary().end());
    std::vector<DocVector> out;
    out.reserve(corpus.size());
    for (const auto& doc : corpus.documents())
        out.push_back(doc_vector(doc, vocab));
    return out;
}

std::vector<std::vector<std::string>> Clustering::members() const {
    std::vector<std::vector<std::string>> out(k);
    for (std::size_t i = 0; i < assignments.size(); ++i)
        out[assignments[i]].push_back(doc_ids[i]);
    return out;
}

Clustering kmeans(const std::vector<DocVector>& vectors, std::size_t k, std::uint64_t seed) {
    if (k == 0)
        throw Error("k must be at least 1");
    if (vectors.size() < k)
        throw Error("kmeans: " + std::to_string(vectors.size()) + " vectors for k = " +
                    std::to_string(k));
    const std::size_t dim = vectors.front().components.size();
    for (const auto& v : vectors)
        if (v.components.size() != dim)
            throw Error("kmeans: vectors have different dimensions");

    std::mt19937_64 rng(seed);
    Clustering result;
    result.k = k;
    result.seed = seed;
    for (const auto& v : vectors)
        result.doc_ids.push_back(v.doc_id);

    result.centroids = seed_plus_plus(vectors, k, rng);
    std::vector<std::size_t> assignments;
    result.inertia_history.push_back(assign_all(vectors, result.centroids, assignments));

    std::vector<std::size_t> next;
    for (std::size_t iter = 1; iter <= kMaxKmeansIterations; ++iter) {
        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            auto& s = sums[assignments[i]];
            for (std::size_t d = 0; d < dim; ++d)
                s[d] += vectors[i].components[d];
            ++sizes[assignments[i]];
        }
        std::vector<bool> taken(vectors.size(), false);
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] > 0) {
                for (std::size_t d = 0; d < dim; ++d)
                    sums[c][d] /= static_cast<double>(sizes[c]);
                result.centroids[c] = std::move(sums[c]);
                continue;
            }
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < vectors.size(); ++i) {
                if (taken[i])
                    continue;
                const double d = squared_distance(vectors[i].components, result.centroids[c]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            taken[far] = true;
            result.centroids[c] = vectors[far].components;
        }

        const double inertia = assign_all(vectors, result.centroids, next);
        result.inertia_history.push_back(inertia);
        result.iterations = iter;
        const bool changed = next != assignments;
        assignments.swap(next);
        if (!changed)
            break;
    }
    result.assignments = std::move(assignments);
    result.inertia = result.inertia_history.back();
    return result;
}

double entropic_gain(const EntropicState& state, const Document& candidate) {
    if (!(state.reservoir_strength > 0.0))
        throw Error("reservoir strength must be positive");
    if (candidate.total_tokens == 0)
        throw Error("empty candidate: " + candidate.id);
    if (state.macrostate.empty())
        throw Error("empty macrostate");
    TermCounts merged = state.macrostate;
    for (const auto& [term, n] : candidate.token_counts)
        merged[term] += n;
    return state.reservoir_strength * (count_entropy(merged) - count_entropy(state.macrostate));
}

RepresentativeSelection select_representatives(const Clustering& clustering, const Corpus& corpus,
                                               std::size_t per_cluster) {
    if (per_cluster == 0)
        throw Error("per_cluster must be at least 1");
    if (clustering.doc_ids.size() != corpus.size())
        throw Error("clustering does not cover the corpus");

    RepresentativeSelection out;
    const auto groups = clustering.members();
    for (std::size_t c = 0; c < groups.size(); ++c) {
        ClusterSelection sel;
        sel.cluster = c;
        sel.members = groups[c];
        std::sort(sel.members.begin(), sel.members.end());
        if (sel.members.size() < 2) {
            if (!sel.members.empty())
                out.warnings.push_back("cluster " + std::to_string(c) +
                                       " has a single member; nothing selected");
            out.clusters.push_back(std::move(sel));
            continue;
        }
        Ranking ranking = rank_documents(corpus.subset(sel.members), per_cluster);
        for (auto& w : ranking.warnings)
            out.warnings.push_back("cluster " + std::to_string(c) + ": " + w);
        sel.selected = std::move(ranking.rows);
        for (const auto& row : sel.selected)
            out.doc_ids.push_back(row.doc_id);
        out.clusters.push_back(std::move(sel));
    }
    return out;
}

AggregationResult iterate_aggregation(const Corpus& corpus, std::size_t k, std::size_t rounds,
                                      std::size_t per_cluster, std::uint64_t seed) {
    if (k == 0)
        throw Error("k must be at least 1");
    if (rounds > 0 && corpus.size() < k)
        throw Error("corpus has " + std::to_string(corpus.size()) + " documents, fewer than k = " +
                    std::to_string(k));

    AggregationResult result;
    std::vector<std::string> current;
    for (const auto& doc : corpus.documents()) {
        if (doc.total_tokens == 0)
            result.warnings.push_back("document " + doc.id + " has no terms; excluded from clustering");
        else
            current.push_back(doc.id);
    }
    Corpus working = corpus.subset(current);

    for (std::size_t round = 0; round < rounds; ++round) {
        std::size_t round_k = k;
        if (working.size() < k) {
            round_k = working.size();
            result.warnings.push_back("round " + std::to_string(round) + ": only " +
                                      std::to_string(working.size()) + " documents, k reduced to " +
                                      std::to_string(round_k));
        }
        AggregationRound r;
        r.clustering = kmeans(doc_vectors(working), round_k, seed + round);
        r.selection = select_representatives(r.clustering, working, per_cluster);
        for (const auto& w : r.selection.warnings)
            result.warnings.push_back("round " + std::to_string(round) + ": " + w);
        const std::size_t survivors = r.selection.doc_ids.size();
        result.rounds.push_back(std::move(r));
        if (survivors < 2) {
            result.warnings.push_back("round " + std::to_string(round) + " left " +
                                      std::to_string(survivors) +
                                      " documents; stopping with the previous set");
            break;
        }
        std::vector<std::string> ids = result.rounds.back().selection.doc_ids;
        std::sort(ids.begin(), ids.end());
        working = working.subset(ids);
    }

    for (const auto& doc : working.documents())
        result.survivors.push_back(doc.id);
    result.ranking = rank_documents(working, working.size());
    return result;
}

} // namespace layerstack
