#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace layerstack {

// A subset of a frame as a bitmask over element indices.
using FocalSet = std::uint32_t;

inline constexpr std::size_t kMaxFrameSize = 20;

// Frame of discernment: ordered, unique, mutually exclusive element names.
class Frame {
public:
    explicit Frame(std::vector<std::string> elements);

    const std::vector<std::string>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    FocalSet universe() const { return universe_; }
    bool contains(FocalSet s) const { return (s & ~universe_) == 0; }
    FocalSet complement(FocalSet s) const { return universe_ & ~s; }

    std::size_t index_of(std::string_view name) const;
    FocalSet singleton(std::string_view name) const { return FocalSet{1} << index_of(name); }
    // "a,b" -> mask; the empty string is the empty set.
    FocalSet parse(std::string_view names) const;
    std::string format(FocalSet s) const;

    bool operator==(const Frame& other) const { return elements_ == other.elements_; }

private:
    std::vector<std::string> elements_;
    FocalSet universe_ = 0;
};

class MassFunction {
public:
    MassFunction(Frame frame, std::map<FocalSet, double> masses);

    static MassFunction vacuous(Frame frame);

    const Frame& frame() const { return frame_; }
    // Focal elements in ascending mask order; every mass is in (0, 1].
    const std::map<FocalSet, double>& masses() const { return masses_; }
    double mass(FocalSet s) const;

private:
    Frame frame_;
    std::map<FocalSet, double> masses_;
};

/// Validates and merges duplicate subsets by summation. Rejects mass on the
/// empty set, non-positive masses and totals off 1 by more than 1e-9.
MassFunction make_mass(const Frame& frame, const std::vector<std::pair<FocalSet, double>>& assignments);
/// Same, keyed by comma-joined element names.
MassFunction make_mass(const Frame& frame, const std::map<std::string, double>& assignments);

double belief(const MassFunction& m, FocalSet a);
double plausibility(const MassFunction& m, FocalSet a);

/// Dempster's rule; throws "irreconcilable evidence" when the conflict is 1.
MassFunction combine(const MassFunction& m1, const MassFunction& m2);

/// Conflict mass K between two mass functions on the same frame.
double conflict(const MassFunction& m1, const MassFunction& m2);

/// Each keyword score s becomes the simple support {kw: s, frame: 1 - s};
/// these are combined into the prior in lexicographic keyword order.
/// Scores of 0 are vacuous and skipped.
MassFunction keyword_belief_update(const MassFunction& prior,
                                   const std::map<std::string, double>& round_evidence);

} // namespace layerstack
