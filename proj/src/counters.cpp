#include "weq/counters.hpp"

#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace weq {

Guard Guard::sub(std::uint32_t y, std::uint32_t z) {
    if (y == z) throw std::invalid_argument("SUB requires distinct counters");
    return {Kind::Sub, y, z};
}

std::string Guard::label(const std::vector<std::string>& counters) const {
    switch (kind) {
        case Kind::Id:
            return "ID";
        case Kind::Zero:
            return "ZERO(" + counters.at(y) + ")";
        case Kind::Dec:
            return "DEC(" + counters.at(y) + ")";
        case Kind::Sub:
            return "SUB(" + counters.at(y) + "," + counters.at(z) + ")";
    }
    return "?";
}

void CounterSystem::add_transition(std::uint32_t from, std::uint32_t to, Guard g) {
    std::uint32_t id = static_cast<std::uint32_t>(transitions.size());
    transitions.push_back({from, to, g});
    if (out.size() < state_labels.size()) out.resize(state_labels.size());
    out[from].push_back(id);
}

namespace {

bool apply_guard(const Guard& g, const std::vector<std::int64_t>& in,
                 std::vector<std::int64_t>& outv) {
    switch (g.kind) {
        case Guard::Kind::Id:
            outv = in;
            return true;
        case Guard::Kind::Zero:
            if (in[g.y] != 0) return false;
            outv = in;
            return true;
        case Guard::Kind::Dec:
            if (in[g.y] <= 0) return false;
            outv = in;
            --outv[g.y];
            return true;
        case Guard::Kind::Sub:
            if (in[g.z] <= 0 || in[g.z] > in[g.y]) return false;
            outv = in;
            outv[g.y] -= in[g.z];
            return true;
    }
    return false;
}

struct ConfigHash {
    std::size_t operator()(const Config& c) const {
        std::size_t h = c.state * 1099511628211ull;
        for (auto v : c.values) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

}  // namespace

std::vector<Config> step(const CounterSystem& cs, const Config& c) {
    if (c.state >= cs.num_states())
        throw std::invalid_argument("step: state outside the system");
    std::vector<Config> out;
    std::vector<std::int64_t> values;
    for (auto tid : cs.out[c.state]) {
        const CsTransition& t = cs.transitions[tid];
        if (apply_guard(t.guard, c.values, values))
            out.push_back({t.to, values});
    }
    return out;
}

bool reach_state(const CounterSystem& cs, const Config& c0, std::uint32_t target) {
    std::unordered_set<Config, ConfigHash> visited{c0};
    std::deque<Config> frontier{c0};
    while (!frontier.empty()) {
        Config c = frontier.front();
        frontier.pop_front();
        if (c.state == target) return true;
        for (Config& next : step(cs, c))
            if (visited.insert(next).second) frontier.push_back(std::move(next));
    }
    return false;
}

Guard guard_of_step(const RewriteStep& step, const std::vector<Symbol>& counters) {
    auto counter_of = [&](Symbol v) -> std::uint32_t {
        for (std::uint32_t i = 0; i < counters.size(); ++i)
            if (counters[i] == v) return i;
        throw std::invalid_argument("guard_of_step: variable outside counter set");
    };
    switch (step.rule) {
        case RuleKind::EmptyPrefix:
            return Guard::zero(counter_of(*step.var));
        case RuleKind::P1:
            return Guard::id();
        case RuleKind::P2:
        case RuleKind::P3:
            return Guard::dec(counter_of(*step.var));
        case RuleKind::P4:
            return Guard::sub(counter_of(*step.var), counter_of(*step.other));
    }
    return Guard::id();
}

CaBuild build_ca(const Equation& root, const std::vector<Symbol>& counters,
                 const SymbolTable& syms, std::size_t node_budget) {
    ProofGraph pg = proof_graph(root, node_budget);

    CaBuild ca;
    ca.budget_exceeded = pg.budget_exceeded;
    ca.root = pg.root;
    ca.eps_state = pg.eps_node;
    ca.state_equations = pg.nodes;
    for (const Symbol& v : counters) ca.cs.counters.push_back(syms.name(v));
    for (const Equation& eq : pg.nodes)
        ca.cs.state_labels.push_back(render_equation(eq, syms));
    ca.cs.out.resize(pg.nodes.size());
    for (const ProofEdge& e : pg.edges)
        ca.cs.add_transition(e.from, e.to, guard_of_step(e.step, counters));
    return ca;
}

CaRegBuild build_ca_reg(const Problem& p, const RegSystem& rs,
                        std::size_t node_budget) {
    CaRegBuild ca;
    ca.monoid_capped = rs.capped();
    if (ca.monoid_capped) return ca;

    std::vector<Symbol> vars = p.vars();
    for (const Symbol& v : vars) ca.cs.counters.push_back(p.syms.name(v));

    std::set<std::uint32_t> live;
    for (const Symbol& s : p.equation.lhs)
        if (s.is_var()) live.insert(s.id);
    for (const Symbol& s : p.equation.rhs)
        if (s.is_var()) live.insert(s.id);
    std::vector<Symbol> live_vars;
    for (const Symbol& v : vars)
        if (live.count(v.id)) live_vars.push_back(v);

    // Interning of (E, f) states.
    std::unordered_map<RegConfig, std::uint32_t, RegConfigHash> index;
    std::deque<std::uint32_t> frontier;
    auto intern = [&](RegConfig cfg) -> std::optional<std::uint32_t> {
        auto it = index.find(cfg);
        if (it != index.end()) return it->second;
        if (ca.state_configs.size() >= node_budget) {
            ca.budget_exceeded = true;
            return std::nullopt;
        }
        std::uint32_t id = static_cast<std::uint32_t>(ca.state_configs.size());
        std::string label = render_equation(cfg.eq, p.syms);
        if (!cfg.f.assign.empty()) {
            label += " ;";
            for (const auto& [v, m] : cfg.f.assign)
                label += " f(" + p.syms.name({SymKind::Variable, v}) +
                         ")=" + rs.closure.elements[m].render_rows();
        }
        if (cfg.eq.trivial() && cfg.f.assign.empty()) ca.eps_state = id;
        index.emplace(cfg, id);
        ca.state_configs.push_back(std::move(cfg));
        ca.cs.state_labels.push_back(std::move(label));
        ca.cs.out.emplace_back();
        frontier.push_back(id);
        return id;
    };

    // Length sets of the inverse languages, memoized per monoid element.
    std::map<std::uint32_t, ProgressionSet> lenset_cache;
    auto lenset_of = [&](std::uint32_t elem) -> const ProgressionSet& {
        auto it = lenset_cache.find(elem);
        if (it == lenset_cache.end())
            it = lenset_cache
                     .emplace(elem, matrix_language_length_set(
                                        rs.ua, rs.closure,
                                        rs.closure.elements[elem]))
                     .first;
        return it->second;
    };

    // Initial sets of counters not occurring in the equation do not depend on
    // the choice of f: take the union over all candidate elements.
    std::map<std::uint32_t, ProgressionSet> nonlive_sets;
    for (const Symbol& v : vars) {
        if (live.count(v.id)) continue;
        bool constrained = false;
        for (const auto& vc : rs.constraints)
            if (vc.var == v.id) constrained = true;
        if (!constrained) {
            nonlive_sets.emplace(v.id, ProgressionSet::all_naturals());
            continue;
        }
        ProgressionSet u;
        for (auto elem : rs.candidates(v.id)) {
            const ProgressionSet& ls = lenset_of(elem);
            u.progressions.insert(u.progressions.end(), ls.progressions.begin(),
                                  ls.progressions.end());
        }
        u.normalize();
        nonlive_sets.emplace(v.id, std::move(u));
    }

    for (MonoidMap& f : consistent_assignments(rs, live_vars)) {
        auto id = intern(RegConfig{p.equation, f});
        if (!id) break;
        CaRegBuild::Initial init;
        init.state = *id;
        init.f = f;
        for (const Symbol& v : vars) {
            if (live.count(v.id))
                init.init_sets.push_back(lenset_of(f.assign.at(v.id)));
            else
                init.init_sets.push_back(nonlive_sets.at(v.id));
        }
        ca.initials.push_back(std::move(init));
    }

    while (!frontier.empty()) {
        std::uint32_t id = frontier.front();
        frontier.pop_front();
        RegConfig cfg = ca.state_configs[id];
        for (auto& [step, next] : successors_reg(cfg, rs)) {
            auto to = intern(std::move(next));
            if (!to) continue;
            ca.cs.add_transition(id, *to, guard_of_step(step, vars));
        }
    }
    return ca;
}

bool reach_eps(const CaBuild& ca, const Config& c0) {
    if (!ca.eps_state) return false;
    return reach_state(ca.cs, c0, *ca.eps_state);
}

bool reach_eps(const CaRegBuild& ca, const Config& c0) {
    if (!ca.eps_state) return false;
    return reach_state(ca.cs, c0, *ca.eps_state);
}

std::string to_dot(const CounterSystem& cs) {
    std::ostringstream os;
    os << "digraph counters {\n  rankdir=TB;\n";
    for (std::uint32_t i = 0; i < cs.num_states(); ++i)
        os << "  n" << i << " [label=\"" << cs.state_labels[i] << "\"];\n";
    for (const CsTransition& t : cs.transitions)
        os << "  n" << t.from << " -> n" << t.to << " [label=\""
           << t.guard.label(cs.counters) << "\"];\n";
    os << "}\n";
    return os.str();
}

nlohmann::json to_json(const CounterSystem& cs) {
    nlohmann::json j;
    j["counters"] = cs.counters;
    j["states"] = cs.state_labels;
    auto& ts = j["transitions"] = nlohmann::json::array();
    for (const CsTransition& t : cs.transitions)
        ts.push_back({t.from, t.guard.label(cs.counters), t.to});
    return j;
}

}  // namespace weq
