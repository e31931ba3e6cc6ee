#pragma once

#include <cstdint>
#include <vector>

#include "xcore/instance.hpp"

namespace xcore {

// Current domains for every variable plus a trail that restores them on
// backtracking. Narrow domains (span <= 1024) live in bit sets, wide ones in
// interval lists. A domain only ever loses values between two trail marks.
class DomainStore {
public:
    explicit DomainStore(const std::vector<Variable>& vars);

    int num_vars() const { return static_cast<int>(doms_.size()); }

    bool contains(VarId v, Val x) const;
    Val min(VarId v) const;
    Val max(VarId v) const;
    Val size(VarId v) const;
    bool empty(VarId v) const { return size(v) == 0; }
    bool fixed(VarId v) const { return size(v) == 1; }
    Val value(VarId v) const { return min(v); }  // meaningful when fixed
    std::vector<Val> values(VarId v) const;      // ascending; callers guard size

    // Smallest domain value >= from. Callers must ensure one exists (i.e.
    // from <= max(v)); enables allocation-free ascending iteration.
    Val next_value(VarId v, Val from) const;

    // Mutations return false when the domain becomes empty. A false return
    // leaves the emptied domain in place; the caller must backtrack.
    bool remove(VarId v, Val x);
    bool remove_below(VarId v, Val bound);  // keep values >= bound
    bool remove_above(VarId v, Val bound);  // keep values <= bound
    bool assign(VarId v, Val x);

    // Decision levels. Level 0 is the root; root mutations are permanent.
    int push_level();
    void pop_level();         // undo the innermost level
    void pop_to(int level);   // undo until this many levels remain open
    int level() const { return static_cast<int>(marks_.size()); }

    // Variables changed since the last drain, in first-change order.
    std::vector<VarId> drain_changes();
    bool all_fixed() const;

    // Shared scratch assignment for propagators that evaluate expressions or
    // checkers over their own scope. Callers must write every position they
    // later read; values at other positions are stale.
    Assignment& scratch() {
        if (scratch_.size() < doms_.size()) scratch_.resize(doms_.size(), 0);
        return scratch_;
    }

private:
    struct BitDom {
        Val base = 0;                  // value of bit 0
        std::vector<uint64_t> words;
        Val count = 0;
    };
    struct VarDom {
        bool narrow = true;
        BitDom bits;                    // when narrow
        std::vector<Interval> ranges;   // when wide
        Val count = 0;                  // wide-path cache (narrow uses bits.count)
    };
    struct TrailEntry {
        VarId var;
        VarDom saved;
    };

    Val dom_size(const VarDom& d) const;
    void note_change(VarId v);
    void save(VarId v);

    std::vector<VarDom> doms_;
    std::vector<TrailEntry> trail_;
    std::vector<size_t> marks_;          // trail length when each level opened
    std::vector<uint64_t> saved_serial_; // per var: level serial of last save
    uint64_t level_serial_ = 0;          // increases on every push, never reused
    std::vector<uint64_t> open_serial_;  // serial of each open level
    std::vector<VarId> changed_;
    std::vector<char> changed_flag_;
    Assignment scratch_;
};

}  // namespace xcore
