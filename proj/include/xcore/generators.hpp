#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xcore/instance.hpp"

namespace xcore {

// A named family of instances plus the integer parameters selecting one
// member. Parameters are an ordered (name, value) list so that families
// taking a variable-length series (bin packing weights) fit the same shape.
// The seed is carried for interface stability; every family here is a
// deterministic function of its parameters.
struct ProblemSpec {
    std::string name;
    std::vector<std::pair<std::string, Val>> params;
    std::optional<uint64_t> seed;

    // First value bound to `key`; throws InvalidParams when absent.
    Val param(const std::string& key) const;
    // Every value bound to `key`, in order (used for weight series).
    std::vector<Val> param_series(const std::string& key) const;
    bool has_param(const std::string& key) const;
};

// A parameter tuple violates a family's rules (missing, out of range,
// or structurally impossible for the model). what() names the rule.
class InvalidParams : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised by the enumeration oracle when the exhaustive walk would exceed
// its node budget.
class SpaceTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// All accepted family names, in a fixed order.
const std::vector<std::string>& problem_names();

// Ordered parameter names a family expects. A trailing name flagged
// repeatable (bin packing "w") absorbs any remaining positional values.
struct ParamShape {
    std::vector<std::string> names;
    bool last_repeats = false;
};
ParamShape param_shape(const std::string& problem);

// Turns a positional value list (CLI "--params 20,10,3,5") into a spec.
ProblemSpec make_spec(const std::string& problem, const std::vector<Val>& values,
                      std::optional<uint64_t> seed = std::nullopt);

// Builds the instance for a spec. Postconditions: validate_instance reports
// no errors, constraint tags carry the model's markers ("symmetry-breaking",
// "redundant"), and equal specs produce byte-identical emitted documents.
Instance generate(const ProblemSpec& spec);

// Competition-scale parameter tuples shipped with each family.
struct Preset {
    std::string label;                 // e.g. "20,10,3,5"
    std::vector<Val> values;           // positional, same order as param_shape
};
const std::vector<Preset>& presets(const std::string& problem);

// Exhaustive enumeration result: number of satisfying assignments, plus the
// best objective value over them for optimization instances (absent when
// none satisfies).
struct OracleResult {
    long long count = 0;
    std::optional<Val> optimum;
};

// Walks every assignment in variable-id order, rejecting a branch as soon
// as some constraint with a fully assigned scope is violated. Uses only the
// checker's semantics (constraint_holds / objective_value); never the search
// engine. Throws SpaceTooLarge once more than max_nodes values have been
// tried.
OracleResult enumerate_exact(const Instance& inst,
                             long long max_nodes = 10'000'000);

// enumerate_exact over generate(spec).
OracleResult reference_oracle(const ProblemSpec& spec,
                              long long max_nodes = 10'000'000);

}  // namespace xcore
