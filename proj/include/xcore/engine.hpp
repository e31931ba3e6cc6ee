#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "xcore/checker.hpp"
#include "xcore/domain_store.hpp"
#include "xcore/instance.hpp"

namespace xcore {

enum class Strength { Gac, Bounds, Fc, CheckOnly };

// A filtering algorithm attached to one constraint. propagate() removes
// values that cannot appear in any solution of the constraint given the
// other current domains (never a value that can), and returns false when
// it proves the constraint unsatisfiable under the current domains.
class Propagator {
public:
    Propagator(int ctid, std::vector<VarId> watched, Strength strength)
        : ctid_(ctid), watched_(std::move(watched)), strength_(strength) {}
    virtual ~Propagator() = default;

    int ctid() const { return ctid_; }
    const std::vector<VarId>& watched() const { return watched_; }
    Strength strength() const { return strength_; }

    virtual bool propagate(DomainStore& ds) = 0;

private:
    int ctid_;
    std::vector<VarId> watched_;
    Strength strength_;
};

// Rewrite of one constraint into primitive constraints (and fresh 0/1 or
// small-range helper variables) with exactly the same solutions once the
// helpers are projected away. Parts keep the owner's constraint id.
struct Decomposition {
    std::vector<Variable> helper_vars;
    std::vector<ConstraintKind> parts;
};

// first_helper_id names fresh variables; inst supplies the domains that the
// rewrite needs (e.g. the candidate bins of a packing constraint).
Decomposition decompose(const ConstraintKind& kind, const Instance& inst,
                        int first_helper_id);

// True for kinds compile_model() rewrites via decompose().
bool is_decomposed_kind(const ConstraintKind& kind);

// An instance compiled for search: helper variables appended after the
// original ones, and a propagator list with per-variable wake-up lists.
struct CompiledModel {
    Instance inst;  // variables extended by helpers; constraints as given
    int original_vars = 0;
    std::vector<std::unique_ptr<Propagator>> propagators;
    std::vector<std::vector<int>> watchers;  // var -> indices into propagators
};

CompiledModel compile_model(const Instance& inst);

struct PropagationResult {
    bool consistent = true;
    int failed_constraint = -1;  // valid when !consistent
};

// Runs the queue to a fixpoint. Seeds every propagator when seed_all, else
// only those watching variables changed since the last drain; always_run
// propagators (by index) are seeded unconditionally. propagation_count, when
// given, accumulates the number of propagate() calls.
PropagationResult propagate_to_fixpoint(CompiledModel& model, DomainStore& ds,
                                        bool seed_all,
                                        const std::vector<int>& always_run = {},
                                        int64_t* propagation_count = nullptr);

struct Decision {
    VarId var;
    Val value;
};

// Smallest current domain, ties to the smallest id; value = domain minimum.
// Empty when every variable is fixed.
std::optional<Decision> pick_branch(const DomainStore& ds);

struct Budget {
    int64_t max_nodes = -1;    // -1 = unlimited
    int64_t max_wall_ms = -1;  // -1 = unlimited
};

struct SolveOptions {
    Budget budget;
    uint64_t seed = 1;
    bool restarts = false;  // Luby-scheduled full restarts
};

enum class SolveStatus { Sat, Unsat, Unknown };

struct SolveStats {
    int64_t nodes = 0;         // binary decisions applied
    int64_t failures = 0;
    int64_t propagations = 0;  // propagator invocations
    double wall_ms = 0.0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Unknown;
    std::optional<Assignment> solution;  // present iff status == Sat
    SolveStats stats;
};

struct CopIncumbent {
    Assignment assignment;
    Val bound = 0;
};

struct CopResult {
    SolveStatus status = SolveStatus::Unknown;
    std::optional<CopIncumbent> best;
    bool proved_optimal = false;  // implies best
    SolveStats stats;
};

// Depth-first search with binary branching (x = v) / (x != v). Sat results
// are re-verified through check() before being returned. Unsat means the
// search space was exhausted; Unknown means a budget ran out first.
SolveResult solve_csp(const Instance& inst, const SolveOptions& opts = {});

// Branch and bound: each accepted incumbent tightens the objective by one
// (minimize: obj <= best - 1; maximize mirrored). proved_optimal iff the
// strengthened search space was exhausted.
CopResult solve_cop(const Instance& inst, const SolveOptions& opts = {});

}  // namespace xcore
