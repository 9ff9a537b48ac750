#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "layerstack/corpus.hpp"

namespace layerstack {

struct CorrelationResult {
    std::string doc_id;
    std::string title;
    double r = 0.0;
    double p_value = 1.0;
    std::size_t n = 0; // shared terms used
};

struct Ranking {
    std::vector<CorrelationResult> rows;
    // One entry per document that could not be correlated.
    std::vector<std::string> warnings;
};

/// Sample Pearson correlation. Needs equal lengths >= 3 and non-constant inputs.
double pearson_r(std::span<const double> xs, std::span<const double> ys);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided P(|T| >= |t|) for Student's t with `dof` degrees of freedom.
double student_t_two_sided(double t, double dof);

/// Two-sided p-value of r under H0: rho = 0 using t = r sqrt((n-2)/(1-r^2)).
double correlation_p_value(double r, std::size_t n);

/// Pearson r of log10 term proportions over the terms shared by `doc` and
/// `reference`, in lexicographic term order.
CorrelationResult correlate_profiles(const Document& doc, const TermCounts& reference);

/// correlate_profiles against the leave-one-out aggregate of the corpus.
CorrelationResult correlate_document(const Corpus& corpus, std::size_t index);
CorrelationResult correlate_document(const Document& doc, const Corpus& corpus);

/// Correlates every document, sorts by r descending (ties: ascending id) and
/// keeps the first top_k rows. Documents that cannot be correlated are
/// excluded and reported in warnings.
Ranking rank_documents(const Corpus& corpus, std::size_t top_k);

// Outcomes are indices into `weights`; subsets are bitmasks over them.
using OutcomeSet = std::uint64_t;

struct EventSpace {
    std::vector<double> weights;
    OutcomeSet belief = 0;
    std::vector<OutcomeSet> testimonies;

    double probability(OutcomeSet event) const;
};

/// p(B ∩ t1 ∩ ... ∩ tk) / (p(t1) * p(t1 | t2..tk)), with the conditional
/// taken as p(t1) when k = 1.
double justification_score(const EventSpace& space);

} // namespace layerstack
