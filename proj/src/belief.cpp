#include "layerstack/belief.hpp"

#include <cmath>
#include <set>

#include "layerstack/error.hpp"

namespace layerstack {

Frame::Frame(std::vector<std::string> elements) : elements_(std::move(elements)) {
    if (elements_.empty())
        throw Error("frame must have at least one element");
    if (elements_.size() > kMaxFrameSize)
        throw Error("frame has " + std::to_string(elements_.size()) + " elements; at most " +
                    std::to_string(kMaxFrameSize) + " are supported");
    std::set<std::string_view> seen;
    for (const auto& e : elements_) {
        if (e.empty() || e.find(',') != std::string::npos)
            throw Error("invalid frame element name: '" + e + "'");
        if (!seen.insert(e).second)
            throw Error("duplicate frame element: " + e);
    }
    universe_ = (FocalSet{1} << elements_.size()) - 1;
}

std::size_t Frame::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
        if (elements_[i] == name)
            return i;
    throw Error("element not in frame: " + std::string(name));
}

FocalSet Frame::parse(std::string_view names) const {
    FocalSet s = 0;
    while (!names.empty()) {
        const auto comma = names.find(',');
        std::string_view item = names.substr(0, comma);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
            item.remove_suffix(1);
        if (!item.empty())
            s |= singleton(item);
        if (comma == std::string_view::npos)
            break;
        names.remove_prefix(comma + 1);
    }
    return s;
}

std::string Frame::format(FocalSet s) const {
    std::string out;
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (!(s & (FocalSet{1} << i)))
            continue;
        if (!out.empty())
            out += ',';
        out += elements_[i];
    }
    return out;
}

MassFunction::MassFunction(Frame frame, std::map<FocalSet, double> masses)
    : frame_(std::move(frame)), masses_(std::move(masses)) {
    double sum = 0.0;
    for (const auto& [s, m] : masses_) {
        if (s == 0)
            throw Error("mass assigned to the empty set");
        if (!frame_.contains(s))
            throw Error("focal element outside the frame");
        if (!(m > 0.0) || m > 1.0 + 1e-9)
            throw Error("focal mass must lie in (0, 1]");
        sum += m;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error("masses sum to " + std::to_string(sum) + ", not 1");
}

MassFunction MassFunction::vacuous(Frame frame) {
    const FocalSet all = frame.universe();
    return MassFunction(std::move(frame), {{all, 1.0}});
}

double MassFunction::mass(FocalSet s) const {
    auto it = masses_.find(s);
    return it == masses_.end() ? 0.0 : it->second;
}

MassFunction make_mass(const Frame& frame, const std::vector<std::pair<FocalSet, double>>& assignments) {
    std::map<FocalSet, double> merged;
    for (const auto& [s, m] : assignments) {
        if (!frame.contains(s))
            throw Error("subset outside the frame");
        if (s == 0)
            throw Error("mass assigned to the empty set");
        if (!(m > 0.0) || !std::isfinite(m))
            throw Error("masses must be positive");
        merged[s] += m;
    }
    return MassFunction(frame, std::move(merged));
}

MassFunction make_mass(const Frame& frame, const std::map<std::string, double>& assignments) {
    std::vector<std::pair<FocalSet, double>> parsed;
    parsed.reserve(assignments.size());
    for (const auto& [names, m] : assignments)
        parsed.emplace_back(frame.parse(names), m);
    return make_mass(frame, parsed);
}

double belief(const MassFunction& m, FocalSet a) {
    if (!m.frame().contains(a))
        throw Error("hypothesis outside the frame");
    double bel = 0.0;
    for (const auto& [b, mass] : m.masses())
        if ((b & ~a) == 0)
            bel += mass;
    return bel;
}

double plausibility(const MassFunction& m, FocalSet a) {
    if (!m.frame().contains(a))
        throw Error("hypothesis outside the frame");
    double pl = 0.0;
    for (const auto& [b, mass] : m.masses())
        if (b & a)
            pl += mass;
    return pl;
}

double conflict(const MassFunction& m1, const MassFunction& m2) {
    if (!(m1.frame() == m2.frame()))
        throw Error("mass functions are on different frames");
    double k = 0.0;
    for (const auto& [b, x] : m1.masses())
        for (const auto& [c, y] : m2.masses())
            if ((b & c) == 0)
                k += x * y;
    return k;
}

MassFunction combine(const MassFunction& m1, const MassFunction& m2) {
    if (!(m1.frame() == m2.frame()))
        throw Error("mass functions are on different frames");
    std::map<FocalSet, double> joint;
    double k = 0.0;
    for (const auto& [b, x] : m1.masses()) {
        for (const auto& [c, y] : m2.masses()) {
            const FocalSet a = b & c;
            if (a == 0)
                k += x * y;
            else
                joint[a] += x * y;
        }
    }
    if (joint.empty() || k >= 1.0)
        throw Error("irreconcilable evidence");
    if (k > 0.0) {
        const double scale = 1.0 - k;
        for (auto& [a, v] : joint)
            v /= scale;
    }
    return MassFunction(m1.frame(), std::move(joint));
}

MassFunction keyword_belief_update(const MassFunction& prior,
                                   const std::map<std::string, double>& round_evidence) {
    const Frame& frame = prior.frame();
    MassFunction posterior = prior;
    for (const auto& [keyword, score] : round_evidence) {
        if (!(score >= 0.0 && score <= 1.0))
            throw Error("evidence score for '" + keyword + "' outside [0, 1]");
        const FocalSet kw = frame.singleton(keyword);
        if (score == 0.0)
            continue;
        std::map<FocalSet, double> support{{kw, score}};
        if (score < 1.0 && kw != frame.universe())
            support[frame.universe()] = 1.0 - score;
        else if (kw == frame.universe())
            support[kw] = 1.0;
        posterior = combine(posterior, MassFunction(frame, std::move(support)));
    }
    return posterior;
}

} // namespace layerstack
