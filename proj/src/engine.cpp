#include <chrono>

#include "engine_detail.hpp"
#include "xcore/checker.hpp"

namespace xcore {

namespace {

using Clock = std::chrono::steady_clock;

enum class Walk { Exhausted, Found, Stopped, Restart };

class Searcher {
public:
    Searcher(const Instance& inst, const SolveOptions& opts, bool cop)
        : orig_(&inst),
          opts_(opts),
          cop_(cop),
          model_(compile_model(inst)),
          ds_(model_.inst.variables) {
        if (cop_ && orig_->objective) {
            minimize_ = orig_->objective->sense == ObjectiveSense::Minimize;
            auto p = std::make_unique<detail::ObjectiveProp>(
                -2, *orig_->objective, model_.inst.num_vars());
            int index = static_cast<int>(model_.propagators.size());
            for (VarId v : p->watched())
                model_.watchers[static_cast<size_t>(v)].push_back(index);
            obj_prop_ = p.get();
            model_.propagators.push_back(std::move(p));
            // The bound tightens without any variable changing, so the
            // objective propagator joins every fixpoint run.
            always_run_.push_back(index);
        }
    }

    Walk run() {
        started_ = Clock::now();
        PropagationResult pr = propagate_to_fixpoint(model_, ds_, true, always_run_,
                                                     &stats_.propagations);
        if (!pr.consistent) {
            ++stats_.failures;
            return Walk::Exhausted;
        }
        Walk w;
        if (!opts_.restarts) {
            w = search();
        } else {
            int64_t restart_no = 0;
            for (;;) {
                cutoff_ = 64 * detail::luby(++restart_no);
                since_restart_ = 0;
                w = search();
                if (w != Walk::Restart) break;
                ds_.pop_to(0);
                PropagationResult again = propagate_to_fixpoint(
                    model_, ds_, true, always_run_, &stats_.propagations);
                if (!again.consistent) {
                    w = Walk::Exhausted;
                    break;
                }
            }
        }
        stats_.wall_ms = elapsed_ms();
        return w;
    }

    const SolveStats& stats() const { return stats_; }
    std::optional<Assignment>& solution() { return solution_; }
    std::optional<CopIncumbent>& best() { return best_; }

private:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(Clock::now() - started_)
            .count();
    }

    // Counts one decision against the budgets; wall time is sampled every
    // 4096 nodes.
    std::optional<Walk> tick() {
        if (opts_.budget.max_nodes >= 0 && stats_.nodes >= opts_.budget.max_nodes)
            return Walk::Stopped;
        if (cutoff_ > 0 && since_restart_ >= cutoff_) return Walk::Restart;
        ++stats_.nodes;
        ++since_restart_;
        if (opts_.budget.max_wall_ms >= 0 && (stats_.nodes & 4095) == 0 &&
            elapsed_ms() >= static_cast<double>(opts_.budget.max_wall_ms))
            return Walk::Stopped;
        return std::nullopt;
    }

    bool propagate_ok() {
        return propagate_to_fixpoint(model_, ds_, false, always_run_,
                                     &stats_.propagations)
            .consistent;
    }

    Walk search() {
        std::optional<Decision> d = pick_branch(ds_);
        if (!d) return leaf();

        if (auto stop = tick()) return *stop;
        ds_.push_level();
        bool ok = ds_.assign(d->var, d->value) && propagate_ok();
        Walk w = Walk::Exhausted;
        if (ok)
            w = search();
        else
            ++stats_.failures;
        ds_.pop_level();
        if (w != Walk::Exhausted) return w;

        if (auto stop = tick()) return *stop;
        ds_.push_level();
        ok = ds_.remove(d->var, d->value) && propagate_ok();
        w = Walk::Exhausted;
        if (ok)
            w = search();
        else
            ++stats_.failures;
        ds_.pop_level();
        return w;
    }

    // Every variable is fixed: re-verify against the untouched instance, and
    // for optimization record the incumbent and tighten the bound.
    Walk leaf() {
        Assignment full = detail::fixed_assignment(ds_);
        Assignment a(full.begin(), full.begin() + model_.original_vars);
        if (!check(*orig_, a).satisfied) {
            ++stats_.failures;
            return Walk::Exhausted;
        }
        if (!cop_) {
            solution_ = std::move(a);
            return Walk::Found;
        }
        Val bound;
        try {
            bound = objective_value(*orig_, a);
        } catch (const EvalError&) {
            return Walk::Exhausted;
        }
        bool better =
            !best_ || (minimize_ ? bound < best_->bound : bound > best_->bound);
        if (better) {
            best_ = CopIncumbent{std::move(a), bound};
            Val limit;
            bool overflow = minimize_ ? __builtin_sub_overflow(bound, Val{1}, &limit)
                                      : __builtin_add_overflow(bound, Val{1}, &limit);
            if (!overflow && obj_prop_) obj_prop_->set_limit(limit);
        }
        return Walk::Exhausted;
    }

    const Instance* orig_;
    SolveOptions opts_;
    bool cop_;
    bool minimize_ = true;
    CompiledModel model_;
    DomainStore ds_;
    detail::ObjectiveProp* obj_prop_ = nullptr;
    std::vector<int> always_run_;
    SolveStats stats_;
    std::optional<Assignment> solution_;
    std::optional<CopIncumbent> best_;
    Clock::time_point started_;
    int64_t cutoff_ = -1;  // restart cutoff in nodes; <= 0 disables
    int64_t since_restart_ = 0;
};

}  // namespace

SolveResult solve_csp(const Instance& inst, const SolveOptions& opts) {
    Searcher s(inst, opts, false);
    Walk w = s.run();
    SolveResult r;
    r.stats = s.stats();
    switch (w) {
        case Walk::Found:
            r.status = SolveStatus::Sat;
            r.solution = std::move(s.solution());
            break;
        case Walk::Exhausted:
            r.status = SolveStatus::Unsat;
            break;
        default:
            r.status = SolveStatus::Unknown;
            break;
    }
    return r;
}

CopResult solve_cop(const Instance& inst, const SolveOptions& opts) {
    Searcher s(inst, opts, true);
    Walk w = s.run();
    CopResult r;
    r.stats = s.stats();
    r.best = std::move(s.best());
    if (w == Walk::Exhausted) {
        r.status = r.best ? SolveStatus::Sat : SolveStatus::Unsat;
        r.proved_optimal = r.best.has_value();
    } else {
        r.status = r.best ? SolveStatus::Sat : SolveStatus::Unknown;
    }
    return r;
}

}  // namespace xcore
