#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "xcore/instance.hpp"

namespace xcore {

// Which slice of the instance format a reader accepts. Mini allows only
// intension, extension, allDifferent, sum, element, and instantiation
// elements; Main allows the full catalogue. Mini-accepted documents are
// always Main-accepted.
struct FormatProfile {
    enum class Track { Main, Mini };
    Track track = Track::Main;

    static FormatProfile main() { return {Track::Main}; }
    static FormatProfile mini() { return {Track::Mini}; }

    // Element-level filter, keyed by constraint element name.
    bool allows(const std::string& element_name) const;
};

struct ParseDiagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::size_t offset = 0;  // byte offset into the document
    std::string path;        // element path, e.g. /instance/constraints/sum
    std::string message;
};

struct ParseResult {
    std::optional<Instance> instance;  // absent when any error was diagnosed
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const { return instance.has_value(); }
};

// Reads one UTF-8 document into an Instance. All structural problems are
// reported as diagnostics; any Error diagnostic leaves `instance` empty.
ParseResult parse_instance(const std::string& bytes,
                           FormatProfile profile = FormatProfile::main());

// Writes a validated Instance as a document that re-parses to an equal
// Instance. Variables and constraints appear in id order.
std::string emit_instance(const Instance& inst);

// Maps an identifier to a variable id; returns -1 for unknown names.
using NameResolver = std::function<VarId(const std::string&)>;

// Parses prefix functional syntax, e.g. "eq(add(x,y),z)". Integers become
// constants, identifiers resolve through the resolver. Throws
// std::invalid_argument on syntax, arity, or resolution failure.
Expr parse_intension(const std::string& text, const NameResolver& resolve);
Expr parse_intension(const std::string& text, const Instance& inst);

// Parses "(op,operand)" where operand is an integer, identifier, range
// `lo..hi`, or set `{a,b,...}`. Throws std::invalid_argument.
Condition parse_condition(const std::string& text, const NameResolver& resolve);

// Functional rendering of an expression, inverse of parse_intension.
std::string expr_to_text(const Expr& expr,
                         const std::function<std::string(VarId)>& var_name);
std::string expr_to_text(const Expr& expr, const Instance& inst);

}  // namespace xcore
