// nielsen.hpp -- prefix rewriting of quadratic word equations: one-step
// successors, the finite proof graph, satisfiability, solution checking.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weq/terms.hpp"

namespace weq {

enum class RuleKind : std::uint8_t { EmptyPrefix, P1, P2, P3, P4 };
enum class EqSide : std::uint8_t { Left, Right };

struct RewriteStep {
    RuleKind rule;
    EqSide side{EqSide::Left};     // EmptyPrefix: side whose head variable is erased
    std::optional<Symbol> var;     // EmptyPrefix: erased; P2/P3: the variable; P4: extended
    std::optional<Symbol> other;   // P2/P3: the constant; P4: the prefix variable
    Equation source;
    Equation target;

    /// Edge label, e.g. "x:=ε", "P1", "x:=ax", "y:=xy".
    std::string rule_tag(const SymbolTable& syms) const;
};

/// All one-step rewrites of a quadratic equation. Constant-vs-constant
/// mismatches and empty-vs-constant heads yield an empty list (dead ends).
/// Throws std::invalid_argument on non-quadratic input.
std::vector<RewriteStep> successors(const Equation& eq);

struct ProofEdge {
    std::uint32_t from;
    std::uint32_t to;
    RewriteStep step;
};

struct ProofGraph {
    std::vector<Equation> nodes;  // deduplicated; index is the node id
    std::vector<ProofEdge> edges;
    std::uint32_t root{0};
    std::optional<std::uint32_t> eps_node;
    bool budget_exceeded{false};

    std::optional<std::uint32_t> find(const Equation& eq) const;
};

/// Closure of the root under successors, breadth first, with a node budget.
/// On overflow the partial graph is returned with budget_exceeded set.
ProofGraph proof_graph(const Equation& root, std::size_t node_budget = 1000000);

enum class Sat3 : std::uint8_t { Sat, Unsat, Unknown };

struct Satisfiability {
    Sat3 status{Sat3::Unknown};
    bool budget_exceeded{false};
};

/// Solvability via reachability of epsilon = epsilon. Unknown only when the
/// node budget was exhausted before the trivial equation was found.
Satisfiability is_satisfiable(const Equation& root,
                              std::size_t node_budget = 1000000);

/// Variable id -> constant word.
using Substitution = std::map<std::uint32_t, std::string>;

/// True iff the homomorphic images of both sides coincide. The substitution
/// must cover every variable of the equation.
bool check_solution(const Equation& eq, const Substitution& sigma,
                    const SymbolTable& syms);

std::string apply_substitution(const Word& w, const Substitution& sigma,
                               const SymbolTable& syms);

/// DOT rendering (node label = equation text, edge label = rule tag).
std::string to_dot(const ProofGraph& g, const SymbolTable& syms);

}  // namespace weq
