#include "xcore/domain.hpp"

#include <algorithm>
#include <stdexcept>

namespace xcore {

std::vector<Interval> normalize_intervals(std::vector<Interval> intervals) {
    for (const auto& r : intervals) {
        if (r.lo > r.hi) throw std::invalid_argument("interval with lo > hi");
    }
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& r : intervals) {
        if (!out.empty() && r.lo <= out.back().hi + 1) {
            out.back().hi = std::max(out.back().hi, r.hi);
        } else {
            out.push_back(r);
        }
    }
    return out;
}

Domain::Domain(Val lo, Val hi) {
    if (lo > hi) throw std::invalid_argument("empty domain");
    ranges_ = {{lo, hi}};
}

Domain Domain::from_values(std::vector<Val> values) {
    if (values.empty()) throw std::invalid_argument("empty domain");
    std::vector<Interval> intervals;
    intervals.reserve(values.size());
    for (Val v : values) intervals.push_back({v, v});
    return from_intervals(std::move(intervals));
}

Domain Domain::from_intervals(std::vector<Interval> intervals) {
    if (intervals.empty()) throw std::invalid_argument("empty domain");
    Domain d;
    d.ranges_ = normalize_intervals(std::move(intervals));
    return d;
}

Val Domain::size() const {
    Val n = 0;
    for (const auto& r : ranges_) n += r.hi - r.lo + 1;
    return n;
}

bool Domain::contains(Val v) const {
    auto it = std::upper_bound(ranges_.begin(), ranges_.end(), v,
                               [](Val x, const Interval& r) { return x < r.lo; });
    if (it == ranges_.begin()) return false;
    --it;
    return v <= it->hi;
}

std::vector<Val> Domain::values() const {
    std::vector<Val> out;
    out.reserve(static_cast<size_t>(size()));
    for (const auto& r : ranges_)
        for (Val v = r.lo; v <= r.hi; ++v) out.push_back(v);
    return out;
}

}  // namespace xcore
