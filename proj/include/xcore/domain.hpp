#pragma once

#include <cstdint>
#include <vector>

namespace xcore {

using Val = std::int64_t;
using VarId = int;

// Closed integer interval [lo, hi].
struct Interval {
    Val lo = 0;
    Val hi = 0;

    bool operator==(const Interval&) const = default;
};

// Finite integer domain stored as an ordered list of disjoint,
// non-adjacent closed intervals. Always non-empty once constructed;
// the empty domain only exists transiently inside the solver's store.
class Domain {
public:
    Domain() = default;
    explicit Domain(Val single) : ranges_{{single, single}} {}
    Domain(Val lo, Val hi);

    static Domain from_values(std::vector<Val> values);
    static Domain from_intervals(std::vector<Interval> intervals);

    const std::vector<Interval>& ranges() const { return ranges_; }

    Val size() const;
    Val min() const { return ranges_.front().lo; }
    Val max() const { return ranges_.back().hi; }
    bool contains(Val v) const;

    // Ascending value list. Intended for small domains; callers guard size.
    std::vector<Val> values() const;

    bool operator==(const Domain&) const = default;

private:
    std::vector<Interval> ranges_;
};

// Sorts, merges overlapping or adjacent intervals (gap < 2), drops nothing.
// Idempotent: normalize(normalize(xs)) == normalize(xs).
std::vector<Interval> normalize_intervals(std::vector<Interval> intervals);

}  // namespace xcore
