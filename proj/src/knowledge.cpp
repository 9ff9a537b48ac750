#include "layerstack/knowledge.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "layerstack/error.hpp"

namespace layerstack {

double pearson_r(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw Error("pearson_r: length mismatch");
    if (xs.size() < 3)
        throw Error("pearson_r: need at least 3 observations");
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0))
        throw Error("zero variance");
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny)
        d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps)
            return h;
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw Error("incomplete beta: shape parameters must be positive");
    if (!(x >= 0.0 && x <= 1.0))
        throw Error("incomplete beta: x outside [0,1]");
    if (x == 0.0 || x == 1.0)
        return x;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double dof) {
    if (!(dof > 0.0))
        throw Error("student t: degrees of freedom must be positive");
    if (std::isinf(t))
        return 0.0;
    const double x = dof / (dof + t * t);
    return std::clamp(regularized_incomplete_beta(dof / 2.0, 0.5, x), 0.0, 1.0);
}

double correlation_p_value(double r, std::size_t n) {
    if (n < 3)
        throw Error("correlation_p_value: need n >= 3");
    if (!(std::abs(r) <= 1.0))
        throw Error("correlation_p_value: |r| > 1");
    if (std::abs(r) == 1.0)
        return 0.0;
    const double dof = static_cast<double>(n - 2);
    const double t = r * std::sqrt(dof / (1.0 - r * r));
    return student_t_two_sided(t, dof);
}

CorrelationResult correlate_profiles(const Document& doc, const TermCounts& reference) {
    const auto doc_total = static_cast<double>(doc.total_tokens);
    const auto ref_total = static_cast<double>(total_count(reference));
    std::vector<double> xs, ys;
    if (doc_total > 0 && ref_total > 0) {
        for (const auto& [term, n] : doc.token_counts) {
            auto it = reference.find(term);
            if (it == reference.end() || it->second == 0)
                continue;
            xs.push_back(std::log10(static_cast<double>(n) / doc_total));
            ys.push_back(std::log10(static_cast<double>(it->second) / ref_total));
        }
    }
    if (xs.size() < 3)
        throw Error("insufficient overlap for document " + doc.id + " (" +
                    std::to_string(xs.size()) + " shared terms)");
    CorrelationResult res;
    res.doc_id = doc.id;
    res.title = doc.title;
    try {
        res.r = pearson_r(xs, ys);
    } catch (const Error& e) {
        throw Error(std::string(e.what()) + " for document " + doc.id);
    }
    res.n = xs.size();
    res.p_value = correlation_p_value(res.r, res.n);
    return res;
}

CorrelationResult correlate_document(const Corpus& corpus, std::size_t index) {
    if (index >= corpus.size())
        throw Error("document index out of range");
    return correlate_profiles(corpus.documents()[index], corpus.leave_one_out(index));
}

CorrelationResult correlate_document(const Document& doc, const Corpus& corpus) {
    return correlate_document(corpus, corpus.index_of(doc.id));
}

Ranking rank_documents(const Corpus& corpus, std::size_t top_k) {
    if (top_k == 0)
        throw Error("top_k must be at least 1");
    if (corpus.size() < 2)
        throw Error("ranking needs at least 2 documents");

    // Accumulate the corpus total once; each leave-one-out profile is the
    // total minus one document.
    const TermCounts total = corpus.aggregate_counts();
    Ranking ranking;
    for (const auto& doc : corpus.documents()) {
        TermCounts reference = total;
        for (const auto& [term, n] : doc.token_counts) {
            auto it = reference.find(term);
            it->second -= n;
            if (it->second == 0)
                reference.erase(it);
        }
        try {
            ranking.rows.push_back(correlate_profiles(doc, reference));
        } catch (const Error& e) {
            ranking.warnings.push_back(e.what());
        }
    }
    std::sort(ranking.rows.begin(), ranking.rows.end(),
              [](const CorrelationResult& a, const CorrelationResult& b) {
                  return a.r != b.r ? a.r > b.r : a.doc_id < b.doc_id;
              });
    if (ranking.rows.size() > top_k)
        ranking.rows.resize(top_k);
    return ranking;
}

double EventSpace::probability(OutcomeSet event) const {
    double p = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (event & (OutcomeSet{1} << i))
            p += weights[i];
    return p;
}

double justification_score(const EventSpace& space) {
    const std::size_t n = space.weights.size();
    if (n == 0 || n > 64)
        throw Error("event space must have between 1 and 64 outcomes");
    double sum = 0.0;
    for (double w : space.weights) {
        if (!(w >= 0.0))
            throw Error("event space weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error("event space weights must sum to 1");
    const OutcomeSet universe = n == 64 ? ~OutcomeSet{0} : (OutcomeSet{1} << n) - 1;
    auto check = [&](OutcomeSet s) {
        if (s & ~universe)
            throw Error("event references an outcome outside the space");
    };
    check(space.belief);
    if (space.testimonies.empty())
        throw Error("justification needs at least one testimony");
    for (auto t : space.testimonies)
        check(t);

    const OutcomeSet t1 = space.testimonies.front();
    OutcomeSet rest = universe;
    for (std::size_t i = 1; i < space.testimonies.size(); ++i)
        rest &= space.testimonies[i];

    const double p_t1 = space.probability(t1);
    double conditional = p_t1;
    if (space.testimonies.size() > 1) {
        const double p_rest = space.probability(rest);
        conditional = p_rest > 0.0 ? space.probability(t1 & rest) / p_rest : 0.0;
    }
    const double denominator = p_t1 * conditional;
    if (!(denominator > 0.0))
        throw Error("untestable testimony");
    return space.probability(space.belief & t1 & rest) / denominator;
}

} // namespace layerstack
