// regnielsen.hpp -- rewriting over pairs (E, f) of an equation and a
// per-variable assignment of realizable characteristic matrices.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "weq/automata.hpp"
#include "weq/nielsen.hpp"
#include "weq/terms.hpp"

namespace weq {

/// Partial map from variable ids to monoid element ids (indices into a
/// MonoidClosure; id 0 is the identity).
struct MonoidMap {
    std::map<std::uint32_t, std::uint32_t> assign;

    friend bool operator==(const MonoidMap&, const MonoidMap&) = default;
    friend auto operator<=>(const MonoidMap&, const MonoidMap&) = default;
};

struct RegConfig {
    Equation eq;
    MonoidMap f;  // domain = variables occurring in eq

    friend bool operator==(const RegConfig&, const RegConfig&) = default;
};

struct RegConfigHash {
    std::size_t operator()(const RegConfig& c) const {
        std::size_t h = EquationHash{}(c.eq);
        for (const auto& [v, m] : c.f.assign) {
            h ^= (static_cast<std::size_t>(v) << 17) ^ m;
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// Constraint machinery shared by all (E, f) explorations of one problem:
/// the union automaton over the problem alphabet, the realizable monoid, and
/// the per-variable consistency data.
struct RegSystem {
    UnionAutomaton ua;
    MonoidClosure closure;
    std::vector<std::uint32_t> letter_elem;  // closure id of each letter matrix
    std::vector<char> const_chars;           // constant symbol id -> letter

    struct VarConstraint {
        std::uint32_t var;
        std::uint32_t initial;               // union-indexed
        std::vector<std::uint32_t> finals;   // union-indexed
    };
    std::vector<VarConstraint> constraints;

    bool capped() const { return closure.capped; }
    /// Monoid element ids consistent with every constraint on var
    /// (all realizable elements when the variable is unconstrained).
    std::vector<std::uint32_t> candidates(std::uint32_t var) const;
    bool matrix_consistent_for(std::uint32_t var, std::uint32_t elem) const;
    bool is_consistent(const MonoidMap& f) const;
};

RegSystem build_reg_system(const Problem& p, std::size_t monoid_cap = 4096);

/// All one-step rewrites of (E, f): erasure branches require f(alpha) to be
/// the identity and drop alpha; P2-P4 branches enumerate the monoid elements
/// M with f(beta) = phi(alpha) * M (resp. f(alpha) * M) and update f.
std::vector<std::pair<RewriteStep, RegConfig>> successors_reg(
    const RegConfig& cfg, const RegSystem& rs);

/// Every total assignment of candidate elements to the given variables that
/// is consistent with the constraints, in deterministic order.
std::vector<MonoidMap> consistent_assignments(const RegSystem& rs,
                                              const std::vector<Symbol>& vars);

/// Solvability with regular constraints: some consistent f reaches
/// (epsilon = epsilon, {}). Unknown on monoid-cap or node-budget overflow.
Satisfiability is_satisfiable_reg(const Problem& p,
                                  std::size_t node_budget = 1000000,
                                  std::size_t monoid_cap = 4096);

}  // namespace weq
