#include "layerstack/wisdom.hpp"

#include <cmath>

#include "layerstack/error.hpp"

namespace layerstack {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace

CrowdDecomposition crowd_decomposition(const CrowdPrediction& pred) {
    if (pred.individuals.empty())
        throw Error("crowd has no predictions");
    if (!std::isfinite(pred.truth))
        throw Error("crowd truth is not finite");
    const auto n = static_cast<double>(pred.individuals.size());

    CompensatedSum total;
    for (double x : pred.individuals) {
        if (!std::isfinite(x))
            throw Error("crowd prediction is not finite");
        total.add(x);
    }
    const double mean = total.value() / n;

    CompensatedSum to_truth;
    CompensatedSum to_mean;
    for (double x : pred.individuals) {
        const double e = x - pred.truth;
        const double d = x - mean;
        to_truth.add(e * e);
        to_mean.add(d * d);
    }

    CrowdDecomposition out;
    out.crowd_mean = mean;
    const double bias = mean - pred.truth;
    out.crowd_sq_error = bias * bias;
    out.avg_individual_sq_error = to_truth.value() / n;
    out.diversity = to_mean.value() / n;
    return out;
}

CrowdDecomposition aggregate_round_quality(std::span<const double> per_cluster_scores,
                                           double global_score) {
    return crowd_decomposition({per_cluster_scores, global_score});
}

} // namespace layerstack
