#include "xcore/domain_store.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace xcore {

namespace {

constexpr Val kNarrowSpan = 1024;

}  // namespace

DomainStore::DomainStore(const std::vector<Variable>& vars) {
    doms_.resize(vars.size());
    saved_serial_.assign(vars.size(), 0);
    changed_flag_.assign(vars.size(), 0);
    for (const auto& v : vars) {
        VarDom& d = doms_[static_cast<size_t>(v.id)];
        Val span = v.domain.max() - v.domain.min() + 1;
        if (span <= kNarrowSpan) {
            d.narrow = true;
            d.bits.base = v.domain.min();
            d.bits.words.assign(static_cast<size_t>((span + 63) / 64), 0);
            for (const auto& r : v.domain.ranges())
                for (Val x = r.lo; x <= r.hi; ++x) {
                    Val off = x - d.bits.base;
                    d.bits.words[static_cast<size_t>(off / 64)] |=
                        uint64_t{1} << (off % 64);
                }
            d.bits.count = v.domain.size();
        } else {
            d.narrow = false;
            d.ranges = v.domain.ranges();
            d.count = v.domain.size();
        }
    }
}

Val DomainStore::dom_size(const VarDom& d) const {
    return d.narrow ? d.bits.count : d.count;
}

bool DomainStore::contains(VarId v, Val x) const {
    const VarDom& d = doms_[static_cast<size_t>(v)];
    if (d.narrow) {
        Val off = x - d.bits.base;
        if (off < 0 || off >= static_cast<Val>(d.bits.words.size()) * 64) return false;
        return (d.bits.words[static_cast<size_t>(off / 64)] >> (off % 64)) & 1;
    }
    for (const auto& r : d.ranges)
        if (r.lo <= x && x <= r.hi) return true;
    return false;
}

Val DomainStore::min(VarId v) const {
    const VarDom& d = doms_[static_cast<size_t>(v)];
    if (!d.narrow) return d.ranges.front().lo;
    for (size_t w = 0; w < d.bits.words.size(); ++w)
        if (d.bits.words[w])
            return d.bits.base + static_cast<Val>(w) * 64 +
                   std::countr_zero(d.bits.words[w]);
    throw std::logic_error("min of empty domain");
}

Val DomainStore::max(VarId v) const {
    const VarDom& d = doms_[static_cast<size_t>(v)];
    if (!d.narrow) return d.ranges.back().hi;
    for (size_t w = d.bits.words.size(); w-- > 0;)
        if (d.bits.words[w])
            return d.bits.base + static_cast<Val>(w) * 64 + 63 -
                   std::countl_zero(d.bits.words[w]);
    throw std::logic_error("max of empty domain");
}

Val DomainStore::size(VarId v) const { return dom_size(doms_[static_cast<size_t>(v)]); }

std::vector<Val> DomainStore::values(VarId v) const {
    const VarDom& d = doms_[static_cast<size_t>(v)];
    std::vector<Val> out;
    if (d.narrow) {
        for (size_t w = 0; w < d.bits.words.size(); ++w) {
            uint64_t word = d.bits.words[w];
            while (word) {
                int bit = std::countr_zero(word);
                out.push_back(d.bits.base + static_cast<Val>(w) * 64 + bit);
                word &= word - 1;
            }
        }
    } else {
        for (const auto& r : d.ranges)
            for (Val x = r.lo; x <= r.hi; ++x) out.push_back(x);
    }
    return out;
}

Val DomainStore::next_value(VarId v, Val from) const {
    const VarDom& d = doms_[static_cast<size_t>(v)];
    if (!d.narrow) {
        for (const auto& r : d.ranges)
            if (r.hi >= from) return std::max(r.lo, from);
        throw std::logic_error("next_value past domain max");
    }
    Val off = from - d.bits.base;
    if (off < 0) off = 0;
    size_t w = static_cast<size_t>(off / 64);
    if (w < d.bits.words.size()) {
        uint64_t word = d.bits.words[w] & ~((uint64_t{1} << (off % 64)) - 1);
        for (;;) {
            if (word)
                return d.bits.base + static_cast<Val>(w) * 64 + std::countr_zero(word);
            if (++w == d.bits.words.size()) break;
            word = d.bits.words[w];
        }
    }
    throw std::logic_error("next_value past domain max");
}

void DomainStore::note_change(VarId v) {
    if (!changed_flag_[static_cast<size_t>(v)]) {
        changed_flag_[static_cast<size_t>(v)] = 1;
        changed_.push_back(v);
    }
}

void DomainStore::save(VarId v) {
    if (marks_.empty()) return;  // root-level mutations are permanent
    uint64_t serial = open_serial_.back();
    if (saved_serial_[static_cast<size_t>(v)] == serial) return;
    saved_serial_[static_cast<size_t>(v)] = serial;
    trail_.push_back({v, doms_[static_cast<size_t>(v)]});
}

bool DomainStore::remove(VarId v, Val x) {
    if (!contains(v, x)) return dom_size(doms_[static_cast<size_t>(v)]) > 0;
    save(v);
    VarDom& d = doms_[static_cast<size_t>(v)];
    if (d.narrow) {
        Val off = x - d.bits.base;
        d.bits.words[static_cast<size_t>(off / 64)] &= ~(uint64_t{1} << (off % 64));
        --d.bits.count;
    } else {
        for (size_t i = 0; i < d.ranges.size(); ++i) {
            Interval& r = d.ranges[i];
            if (x < r.lo || x > r.hi) continue;
            if (r.lo == r.hi) {
                d.ranges.erase(d.ranges.begin() + static_cast<std::ptrdiff_t>(i));
            } else if (x == r.lo) {
                ++r.lo;
            } else if (x == r.hi) {
                --r.hi;
            } else {
                Interval right{x + 1, r.hi};
                r.hi = x - 1;
                d.ranges.insert(d.ranges.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                right);
            }
            break;
        }
        --d.count;
    }
    note_change(v);
    return dom_size(d) > 0;
}

bool DomainStore::remove_below(VarId v, Val bound) {
    VarDom& d = doms_[static_cast<size_t>(v)];
    if (dom_size(d) == 0) return false;
    if (min(v) >= bound) return true;
    save(v);
    VarDom& dd = doms_[static_cast<size_t>(v)];
    if (dd.narrow) {
        Val off = bound - dd.bits.base;  // clear all bits < off
        for (size_t w = 0; w < dd.bits.words.size(); ++w) {
            Val word_lo = static_cast<Val>(w) * 64;
            if (word_lo + 64 <= off) {
                dd.bits.words[w] = 0;
            } else if (word_lo < off) {
                dd.bits.words[w] &= ~((uint64_t{1} << (off - word_lo)) - 1);
            }
        }
        dd.bits.count = 0;
        for (uint64_t word : dd.bits.words) dd.bits.count += std::popcount(word);
    } else {
        while (!dd.ranges.empty() && dd.ranges.front().hi < bound)
            dd.ranges.erase(dd.ranges.begin());
        if (!dd.ranges.empty() && dd.ranges.front().lo < bound)
            dd.ranges.front().lo = bound;
        dd.count = 0;
        for (const auto& r : dd.ranges) dd.count += r.hi - r.lo + 1;
    }
    note_change(v);
    return dom_size(dd) > 0;
}

bool DomainStore::remove_above(VarId v, Val bound) {
    VarDom& d = doms_[static_cast<size_t>(v)];
    if (dom_size(d) == 0) return false;
    if (max(v) <= bound) return true;
    save(v);
    VarDom& dd = doms_[static_cast<size_t>(v)];
    if (dd.narrow) {
        Val off = bound - dd.bits.base;  // clear all bits > off
        for (size_t w = 0; w < dd.bits.words.size(); ++w) {
            Val word_lo = static_cast<Val>(w) * 64;
            if (word_lo > off) {
                dd.bits.words[w] = 0;
            } else if (word_lo + 63 > off) {
                Val keep = off - word_lo + 1;  // in [1, 63]
                dd.bits.words[w] &= (uint64_t{1} << keep) - 1;
            }
        }
        dd.bits.count = 0;
        for (uint64_t word : dd.bits.words) dd.bits.count += std::popcount(word);
    } else {
        while (!dd.ranges.empty() && dd.ranges.back().lo > bound)
            dd.ranges.pop_back();
        if (!dd.ranges.empty() && dd.ranges.back().hi > bound)
            dd.ranges.back().hi = bound;
        dd.count = 0;
        for (const auto& r : dd.ranges) dd.count += r.hi - r.lo + 1;
    }
    note_change(v);
    return dom_size(dd) > 0;
}

bool DomainStore::assign(VarId v, Val x) {
    if (!contains(v, x)) {
        // Empty the domain so the caller sees a normal wipeout.
        save(v);
        VarDom& d = doms_[static_cast<size_t>(v)];
        if (d.narrow) {
            std::fill(d.bits.words.begin(), d.bits.words.end(), 0);
            d.bits.count = 0;
        } else {
            d.ranges.clear();
            d.count = 0;
        }
        note_change(v);
        return false;
    }
    if (fixed(v)) return true;
    save(v);
    VarDom& d = doms_[static_cast<size_t>(v)];
    if (d.narrow) {
        std::fill(d.bits.words.begin(), d.bits.words.end(), 0);
        Val off = x - d.bits.base;
        d.bits.words[static_cast<size_t>(off / 64)] |= uint64_t{1} << (off % 64);
        d.bits.count = 1;
    } else {
        d.ranges = {{x, x}};
        d.count = 1;
    }
    note_change(v);
    return true;
}

int DomainStore::push_level() {
    marks_.push_back(trail_.size());
    open_serial_.push_back(++level_serial_);
    return level();
}

void DomainStore::pop_level() {
    size_t mark = marks_.back();
    while (trail_.size() > mark) {
        TrailEntry& e = trail_.back();
        doms_[static_cast<size_t>(e.var)] = std::move(e.saved);
        trail_.pop_back();
    }
    marks_.pop_back();
    open_serial_.pop_back();
}

void DomainStore::pop_to(int target_level) {
    while (level() > target_level) pop_level();
}

std::vector<VarId> DomainStore::drain_changes() {
    std::vector<VarId> out = std::move(changed_);
    changed_.clear();
    for (VarId v : out) changed_flag_[static_cast<size_t>(v)] = 0;
    return out;
}

bool DomainStore::all_fixed() const {
    for (size_t v = 0; v < doms_.size(); ++v)
        if (dom_size(doms_[v]) != 1) return false;
    return true;
}

}  // namespace xcore
