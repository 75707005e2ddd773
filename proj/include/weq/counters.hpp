// counters.hpp -- counter systems compiled from proof graphs: guards
// ID/ZERO/DEC/SUB, concrete semantics, exhaustive reachability.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weq/nielsen.hpp"
#include "weq/regnielsen.hpp"
#include "weq/terms.hpp"

namespace weq {

struct Guard {
    enum class Kind : std::uint8_t { Id, Zero, Dec, Sub };
    Kind kind{Kind::Id};
    std::uint32_t y{0};  // Zero/Dec/Sub: the affected counter
    std::uint32_t z{0};  // Sub: the subtracted counter (distinct from y)

    static Guard id() { return {Kind::Id, 0, 0}; }
    static Guard zero(std::uint32_t y) { return {Kind::Zero, y, 0}; }
    static Guard dec(std::uint32_t y) { return {Kind::Dec, y, 0}; }
    static Guard sub(std::uint32_t y, std::uint32_t z);

    std::string label(const std::vector<std::string>& counters) const;
    friend bool operator==(const Guard&, const Guard&) = default;
};

struct CsTransition {
    std::uint32_t from;
    std::uint32_t to;
    Guard guard;
};

struct CounterSystem {
    std::vector<std::string> counters;      // display names, one per counter
    std::vector<std::string> state_labels;  // display names, one per state
    std::vector<CsTransition> transitions;
    std::vector<std::vector<std::uint32_t>> out;  // transition ids per state

    std::uint32_t num_states() const {
        return static_cast<std::uint32_t>(state_labels.size());
    }
    void add_transition(std::uint32_t from, std::uint32_t to, Guard g);
};

struct Config {
    std::uint32_t state{0};
    std::vector<std::int64_t> values;  // componentwise >= 0

    friend bool operator==(const Config&, const Config&) = default;
};

/// One concrete step under guard semantics (ZERO: y = 0, values unchanged;
/// ID: unchanged; DEC: y > 0, y' = y - 1; SUB: 0 < z <= y, y' = y - z).
std::vector<Config> step(const CounterSystem& cs, const Config& c);

/// Exhaustive search for a target state; terminates because values never
/// increase and states are finite.
bool reach_state(const CounterSystem& cs, const Config& c0, std::uint32_t target);

/// Counter system of a plain equation: states are the proof-graph nodes,
/// guards follow the rewriting rule of each edge.
struct CaBuild {
    CounterSystem cs;
    std::vector<Equation> state_equations;
    std::uint32_t root{0};
    std::optional<std::uint32_t> eps_state;
    bool budget_exceeded{false};
};

CaBuild build_ca(const Equation& root, const std::vector<Symbol>& counters,
                 const SymbolTable& syms, std::size_t node_budget = 1000000);

Guard guard_of_step(const RewriteStep& step, const std::vector<Symbol>& counters);

/// Counter system over (E, f) configurations, explored from every consistent
/// assignment, together with the initial length sets per counter that
/// constrain initial values.
struct CaRegBuild {
    CounterSystem cs;
    std::vector<RegConfig> state_configs;
    struct Initial {
        MonoidMap f;             // over the equation's variables
        std::uint32_t state;
        std::vector<ProgressionSet> init_sets;  // one per counter
    };
    std::vector<Initial> initials;
    std::optional<std::uint32_t> eps_state;  // (epsilon = epsilon, {})
    bool budget_exceeded{false};
    bool monoid_capped{false};
};

CaRegBuild build_ca_reg(const Problem& p, const RegSystem& rs,
                        std::size_t node_budget = 1000000);

bool reach_eps(const CaBuild& ca, const Config& c0);
bool reach_eps(const CaRegBuild& ca, const Config& c0);

std::string to_dot(const CounterSystem& cs);
nlohmann::json to_json(const CounterSystem& cs);

}  // namespace weq
