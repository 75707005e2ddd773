#include "weq/regnielsen.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace weq {

RegSystem build_reg_system(const Problem& p, std::size_t monoid_cap) {
    RegSystem rs;
    std::vector<Nfa> nfas;
    for (const auto& rc : p.regular_constraints) nfas.push_back(rc.nfa);
    rs.ua = build_union(nfas, p.syms.alphabet());
    rs.closure = realizable_matrices(rs.ua, monoid_cap);
    for (std::size_t a = 0; a < rs.ua.alphabet.size(); ++a) {
        auto id = rs.closure.find(rs.ua.letter_matrix[a]);
        rs.letter_elem.push_back(id.value_or(UINT32_MAX));
    }
    for (std::uint32_t i = 0; i < p.syms.num_constants(); ++i)
        rs.const_chars.push_back(p.syms.constant_char({SymKind::Constant, i}));
    for (std::size_t i = 0; i < p.regular_constraints.size(); ++i) {
        const auto& rc = p.regular_constraints[i];
        RegSystem::VarConstraint vc;
        vc.var = rc.var.id;
        vc.initial = rs.ua.offsets[i] + rc.nfa.initial;
        for (auto f : rc.nfa.finals) vc.finals.push_back(rs.ua.offsets[i] + f);
        rs.constraints.push_back(std::move(vc));
    }
    return rs;
}

bool RegSystem::matrix_consistent_for(std::uint32_t var,
                                      std::uint32_t elem) const {
    for (const auto& vc : constraints) {
        if (vc.var != var) continue;
        const BoolMatrix& m = closure.elements[elem];
        bool hit = false;
        for (auto f : vc.finals)
            if (m.get(vc.initial, f)) {
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    return true;
}

std::vector<std::uint32_t> RegSystem::candidates(std::uint32_t var) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t e = 0; e < closure.elements.size(); ++e)
        if (matrix_consistent_for(var, e)) out.push_back(e);
    return out;
}

bool RegSystem::is_consistent(const MonoidMap& f) const {
    for (const auto& vc : constraints) {
        auto it = f.assign.find(vc.var);
        if (it == f.assign.end())
            throw std::invalid_argument(
                "consistency: f undefined on a constrained variable");
        if (!matrix_consistent_for(vc.var, it->second)) return false;
    }
    return true;
}

namespace {

std::set<std::uint32_t> equation_vars(const Equation& eq) {
    std::set<std::uint32_t> vars;
    for (const Symbol& s : eq.lhs)
        if (s.is_var()) vars.insert(s.id);
    for (const Symbol& s : eq.rhs)
        if (s.is_var()) vars.insert(s.id);
    return vars;
}

MonoidMap restrict_to(const MonoidMap& f, const std::set<std::uint32_t>& vars) {
    MonoidMap out;
    for (const auto& [v, m] : f.assign)
        if (vars.count(v)) out.assign.emplace(v, m);
    return out;
}

}  // namespace

std::vector<std::pair<RewriteStep, RegConfig>> successors_reg(
    const RegConfig& cfg, const RegSystem& rs) {
    std::vector<std::pair<RewriteStep, RegConfig>> out;
    constexpr std::uint32_t kIdentity = 0;

    for (RewriteStep& step : successors(cfg.eq)) {
        std::set<std::uint32_t> target_vars = equation_vars(step.target);
        switch (step.rule) {
            case RuleKind::EmptyPrefix: {
                // Requires phi(epsilon) = f(alpha), i.e. the identity.
                auto it = cfg.f.assign.find(step.var->id);
                if (it == cfg.f.assign.end())
                    throw std::invalid_argument("successors_reg: f misses a live variable");
                if (it->second != kIdentity) break;
                RegConfig next{step.target, restrict_to(cfg.f, target_vars)};
                out.emplace_back(std::move(step), std::move(next));
                break;
            }
            case RuleKind::P1: {
                RegConfig next{step.target, restrict_to(cfg.f, target_vars)};
                out.emplace_back(std::move(step), std::move(next));
                break;
            }
            case RuleKind::P2:
            case RuleKind::P3:
            case RuleKind::P4: {
                // beta := prefix beta. Guess M with f(beta) = phi(prefix) * M
                // (constant prefix) or f(beta) = f(prefix) * M (variable).
                std::uint32_t beta = step.var->id;
                auto fb = cfg.f.assign.find(beta);
                if (fb == cfg.f.assign.end())
                    throw std::invalid_argument("successors_reg: f misses a live variable");
                const BoolMatrix& beta_m = rs.closure.elements[fb->second];

                const BoolMatrix* prefix_m = nullptr;
                if (step.other->is_const()) {
                    auto li = rs.ua.letter_index(rs.const_chars.at(step.other->id));
                    if (!li)
                        throw std::logic_error("successors_reg: constant outside the union alphabet");
                    prefix_m = &rs.ua.letter_matrix[*li];
                } else {
                    auto fa = cfg.f.assign.find(step.other->id);
                    if (fa == cfg.f.assign.end())
                        throw std::invalid_argument(
                            "successors_reg: f misses a live variable");
                    prefix_m = &rs.closure.elements[fa->second];
                }

                for (std::uint32_t m = 0; m < rs.closure.elements.size(); ++m) {
                    if (!(*prefix_m * rs.closure.elements[m] == beta_m)) continue;
                    MonoidMap f2 = cfg.f;
                    f2.assign[beta] = m;
                    RegConfig next{step.target, restrict_to(f2, target_vars)};
                    out.emplace_back(step, std::move(next));
                }
                break;
            }
        }
    }
    return out;
}

std::vector<MonoidMap> consistent_assignments(const RegSystem& rs,
                                              const std::vector<Symbol>& vars) {
    std::vector<std::vector<std::uint32_t>> cands;
    for (const Symbol& v : vars) cands.push_back(rs.candidates(v.id));

    std::vector<MonoidMap> out;
    MonoidMap current;
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == vars.size()) {
            out.push_back(current);
            return;
        }
        for (auto elem : cands[i]) {
            current.assign[vars[i].id] = elem;
            self(self, i + 1);
        }
        current.assign.erase(vars[i].id);
    };
    rec(rec, 0);
    return out;
}

Satisfiability is_satisfiable_reg(const Problem& p, std::size_t node_budget,
                                  std::size_t monoid_cap) {
    RegSystem rs = build_reg_system(p, monoid_cap);
    Satisfiability result;
    if (rs.capped()) {
        result.status = Sat3::Unknown;
        result.budget_exceeded = true;
        return result;
    }

    std::set<std::uint32_t> live = equation_vars(p.equation);
    std::vector<Symbol> live_vars;
    for (const Symbol& v : p.vars())
        if (live.count(v.id)) live_vars.push_back(v);

    std::unordered_set<RegConfig, RegConfigHash> visited;
    std::deque<RegConfig> frontier;
    for (MonoidMap& f : consistent_assignments(rs, live_vars)) {
        RegConfig cfg{p.equation, std::move(f)};
        if (visited.insert(cfg).second) frontier.push_back(std::move(cfg));
    }

    while (!frontier.empty()) {
        RegConfig cfg = frontier.front();
        frontier.pop_front();
        if (cfg.eq.trivial()) {
            result.status = Sat3::Sat;
            return result;
        }
        if (visited.size() >= node_budget) {
            result.status = Sat3::Unknown;
            result.budget_exceeded = true;
            return result;
        }
        for (auto& [step, next] : successors_reg(cfg, rs))
            if (visited.insert(next).second) frontier.push_back(next);
    }
    result.status = Sat3::Unsat;
    return result;
}

}  // namespace weq
