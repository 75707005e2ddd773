#include "weq/nielsen.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace weq {

namespace {

Word substitute(const Word& w, Symbol var, const Word& replacement) {
    Word out;
    out.reserve(w.size() + replacement.size());
    for (const Symbol& s : w) {
        if (s == var)
            out.insert(out.end(), replacement.begin(), replacement.end());
        else
            out.push_back(s);
    }
    return out;
}

Equation substitute(const Equation& eq, Symbol var, const Word& replacement) {
    return {substitute(eq.lhs, var, replacement),
            substitute(eq.rhs, var, replacement)};
}

Word tail(const Word& w) { return Word(w.begin() + 1, w.end()); }

}  // namespace

std::string RewriteStep::rule_tag(const SymbolTable& syms) const {
    switch (rule) {
        case RuleKind::EmptyPrefix:
            return syms.name(*var) + ":=ε";
        case RuleKind::P1:
            return "P1";
        case RuleKind::P2:
        case RuleKind::P3:
        case RuleKind::P4:
            return syms.name(*var) + ":=" + syms.name(*other) + syms.name(*var);
    }
    return "?";
}

std::vector<RewriteStep> successors(const Equation& eq) {
    Classification c = classify(eq);
    if (!c.quadratic)
        throw std::invalid_argument("successors: equation is not quadratic");

    std::vector<RewriteStep> out;
    auto push = [&](RewriteStep step) {
        for (const RewriteStep& s : out)
            if (s.rule == step.rule && s.var == step.var && s.other == step.other &&
                s.target == step.target)
                return;
        out.push_back(std::move(step));
    };

    const Word& L = eq.lhs;
    const Word& R = eq.rhs;
    if (L.empty() && R.empty()) return out;

    // Erasing an empty prefix variable (either side).
    if (!L.empty() && L.front().is_var()) {
        Symbol a = L.front();
        RewriteStep s{RuleKind::EmptyPrefix, EqSide::Left, a, std::nullopt, eq,
                      substitute(eq, a, {})};
        push(std::move(s));
    }
    if (!R.empty() && R.front().is_var()) {
        Symbol b = R.front();
        RewriteStep s{RuleKind::EmptyPrefix, EqSide::Right, b, std::nullopt, eq,
                      substitute(eq, b, {})};
        push(std::move(s));
    }

    if (L.empty() || R.empty()) return out;  // only erasure applies

    Symbol alpha = L.front();
    Symbol beta = R.front();
    Word w1 = tail(L);
    Word w2 = tail(R);

    if (alpha == beta) {  // (P1)
        RewriteStep s{RuleKind::P1, EqSide::Left, std::nullopt, std::nullopt,
                      eq, Equation{w1, w2}};
        push(std::move(s));
    } else if (alpha.is_const() && beta.is_var()) {  // (P2): beta := alpha beta
        Word repl{alpha, beta};
        Equation target{substitute(w1, beta, repl), {}};
        Word rhs{beta};
        Word w2s = substitute(w2, beta, repl);
        rhs.insert(rhs.end(), w2s.begin(), w2s.end());
        target.rhs = std::move(rhs);
        push({RuleKind::P2, EqSide::Left, beta, alpha, eq, std::move(target)});
    } else if (alpha.is_var() && beta.is_const()) {  // (P3): alpha := beta alpha
        Word repl{beta, alpha};
        Word lhs{alpha};
        Word w1s = substitute(w1, alpha, repl);
        lhs.insert(lhs.end(), w1s.begin(), w1s.end());
        Equation target{std::move(lhs), substitute(w2, alpha, repl)};
        push({RuleKind::P3, EqSide::Left, alpha, beta, eq, std::move(target)});
    } else if (alpha.is_var() && beta.is_var()) {  // (P4): both guesses
        {
            // alpha is a prefix of beta: beta := alpha beta
            Word repl{alpha, beta};
            Equation target{substitute(w1, beta, repl), {}};
            Word rhs{beta};
            Word w2s = substitute(w2, beta, repl);
            rhs.insert(rhs.end(), w2s.begin(), w2s.end());
            target.rhs = std::move(rhs);
            push({RuleKind::P4, EqSide::Left, beta, alpha, eq, std::move(target)});
        }
        {
            // beta is a prefix of alpha: alpha := beta alpha
            Word repl{beta, alpha};
            Word lhs{alpha};
            Word w1s = substitute(w1, alpha, repl);
            lhs.insert(lhs.end(), w1s.begin(), w1s.end());
            Equation target{std::move(lhs), substitute(w2, alpha, repl)};
            push({RuleKind::P4, EqSide::Right, alpha, beta, eq, std::move(target)});
        }
    }
    // Distinct constant heads: no rule applies.
    return out;
}

ProofGraph proof_graph(const Equation& root, std::size_t node_budget) {
    ProofGraph g;
    std::unordered_map<Equation, std::uint32_t, EquationHash> index;
    std::deque<std::uint32_t> frontier;

    auto intern = [&](const Equation& eq) -> std::optional<std::uint32_t> {
        auto it = index.find(eq);
        if (it != index.end()) return it->second;
        if (g.nodes.size() >= node_budget) {
            g.budget_exceeded = true;
            return std::nullopt;
        }
        std::uint32_t id = static_cast<std::uint32_t>(g.nodes.size());
        index.emplace(eq, id);
        g.nodes.push_back(eq);
        if (eq.trivial()) g.eps_node = id;
        frontier.push_back(id);
        return id;
    };

    g.root = *intern(root);
    while (!frontier.empty()) {
        std::uint32_t id = frontier.front();
        frontier.pop_front();
        Equation eq = g.nodes[id];
        for (RewriteStep& step : successors(eq)) {
            auto to = intern(step.target);
            if (!to) continue;
            g.edges.push_back({id, *to, std::move(step)});
        }
    }
    return g;
}

std::optional<std::uint32_t> ProofGraph::find(const Equation& eq) const {
    for (std::uint32_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == eq) return i;
    return std::nullopt;
}

Satisfiability is_satisfiable(const Equation& root, std::size_t node_budget) {
    ProofGraph g = proof_graph(root, node_budget);
    Satisfiability s;
    s.budget_exceeded = g.budget_exceeded;
    if (g.eps_node) {
        s.status = Sat3::Sat;
    } else {
        s.status = g.budget_exceeded ? Sat3::Unknown : Sat3::Unsat;
    }
    return s;
}

std::string apply_substitution(const Word& w, const Substitution& sigma,
                               const SymbolTable& syms) {
    std::string out;
    for (const Symbol& s : w) {
        if (s.is_const()) {
            out += syms.constant_char(s);
        } else {
            auto it = sigma.find(s.id);
            if (it == sigma.end())
                throw std::invalid_argument("substitution misses variable " +
                                            syms.name(s));
            out += it->second;
        }
    }
    return out;
}

bool check_solution(const Equation& eq, const Substitution& sigma,
                    const SymbolTable& syms) {
    return apply_substitution(eq.lhs, sigma, syms) ==
           apply_substitution(eq.rhs, sigma, syms);
}

std::string to_dot(const ProofGraph& g, const SymbolTable& syms) {
    std::ostringstream os;
    os << "digraph proof {\n  rankdir=TB;\n";
    for (std::uint32_t i = 0; i < g.nodes.size(); ++i) {
        os << "  n" << i << " [label=\"" << render_equation(g.nodes[i], syms)
           << "\"";
        if (i == g.root) os << ", shape=box";
        if (g.eps_node && *g.eps_node == i) os << ", peripheries=2";
        os << "];\n";
    }
    for (const ProofEdge& e : g.edges)
        os << "  n" << e.from << " -> n" << e.to << " [label=\""
           << e.step.rule_tag(syms) << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace weq
