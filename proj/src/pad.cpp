#include "weq/pad.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace weq {

LinTerm LinTerm::var(std::string name, std::int64_t coeff) {
    LinTerm t;
    if (coeff != 0) t.coeffs[std::move(name)] = coeff;
    return t;
}

LinTerm LinTerm::operator+(const LinTerm& o) const {
    LinTerm r = *this;
    r.constant += o.constant;
    for (const auto& [v, c] : o.coeffs) {
        auto it = r.coeffs.find(v);
        if (it == r.coeffs.end()) {
            r.coeffs.emplace(v, c);
        } else {
            it->second += c;
            if (it->second == 0) r.coeffs.erase(it);
        }
    }
    return r;
}

LinTerm LinTerm::operator-(const LinTerm& o) const { return *this + o * -1; }

LinTerm LinTerm::operator*(std::int64_t k) const {
    LinTerm r;
    if (k == 0) return r;
    r.constant = constant * k;
    for (const auto& [v, c] : coeffs) r.coeffs[v] = c * k;
    return r;
}

std::int64_t LinTerm::eval(const Assignment& mu) const {
    std::int64_t acc = constant;
    for (const auto& [v, c] : coeffs) acc += c * mu.at(v);
    return acc;
}

std::string LinTerm::str() const {
    std::ostringstream os;
    bool first = true;
    if (constant != 0 || coeffs.empty()) {
        os << constant;
        first = false;
    }
    for (const auto& [v, c] : coeffs) {
        if (c < 0) {
            os << (first ? "-" : " - ");
        } else if (!first) {
            os << " + ";
        }
        std::int64_t a = c < 0 ? -c : c;
        if (a != 1) os << a << "*";
        os << v;
        first = false;
    }
    return os.str();
}

PadFormula PadFormula::truth(bool value) {
    auto n = std::make_shared<Node>();
    n->kind = value ? Kind::True : Kind::False;
    return PadFormula(std::move(n));
}

PadFormula PadFormula::le(LinTerm lhs, LinTerm rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Le;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return PadFormula(std::move(n));
}

PadFormula PadFormula::eq(LinTerm lhs, LinTerm rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Eq;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return PadFormula(std::move(n));
}

PadFormula PadFormula::div(LinTerm lhs, LinTerm rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Div;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return PadFormula(std::move(n));
}

PadFormula PadFormula::conj(std::vector<PadFormula> parts) {
    if (parts.empty()) return truth(true);
    if (parts.size() == 1) return parts.front();
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->children = std::move(parts);
    return PadFormula(std::move(n));
}

PadFormula PadFormula::disj(std::vector<PadFormula> parts) {
    if (parts.empty()) return truth(false);
    if (parts.size() == 1) return parts.front();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    n->children = std::move(parts);
    return PadFormula(std::move(n));
}

PadFormula PadFormula::exists(std::string var, PadFormula body) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Exists;
    n->var = std::move(var);
    n->children.push_back(std::move(body));
    return PadFormula(std::move(n));
}

namespace {

void collect_free(const PadFormula& f, std::set<std::string>& bound,
                  std::set<std::string>& out) {
    switch (f.kind()) {
        case PadFormula::Kind::True:
        case PadFormula::Kind::False:
            return;
        case PadFormula::Kind::Le:
        case PadFormula::Kind::Eq:
        case PadFormula::Kind::Div:
            for (const auto& [v, c] : f.lhs().coeffs)
                if (!bound.count(v)) out.insert(v);
            for (const auto& [v, c] : f.rhs().coeffs)
                if (!bound.count(v)) out.insert(v);
            return;
        case PadFormula::Kind::And:
        case PadFormula::Kind::Or:
            for (const auto& k : f.children()) collect_free(k, bound, out);
            return;
        case PadFormula::Kind::Exists: {
            bool fresh = bound.insert(f.bound_var()).second;
            collect_free(f.body(), bound, out);
            if (fresh) bound.erase(f.bound_var());
            return;
        }
    }
}

}  // namespace

std::set<std::string> PadFormula::free_vars() const {
    std::set<std::string> bound, out;
    collect_free(*this, bound, out);
    return out;
}

std::string PadFormula::str() const {
    std::ostringstream os;
    switch (kind()) {
        case Kind::True:
            os << "true";
            break;
        case Kind::False:
            os << "false";
            break;
        case Kind::Le:
            os << lhs().str() << " <= " << rhs().str();
            break;
        case Kind::Eq:
            os << lhs().str() << " = " << rhs().str();
            break;
        case Kind::Div:
            os << lhs().str() << " | " << rhs().str();
            break;
        case Kind::And:
        case Kind::Or: {
            const char* sep = kind() == Kind::And ? " && " : " || ";
            os << "(";
            for (std::size_t i = 0; i < children().size(); ++i) {
                if (i) os << sep;
                os << children()[i].str();
            }
            os << ")";
            break;
        }
        case Kind::Exists:
            os << "(exists " << bound_var() << ". " << body().str() << ")";
            break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation

static bool divides(std::int64_t f, std::int64_t g) {
    if (f == 0) return g == 0;
    return g % f == 0;
}

EvalResult eval(const PadFormula& phi, const Assignment& mu,
                std::int64_t witness_bound) {
    switch (phi.kind()) {
        case PadFormula::Kind::True:
            return {true, true};
        case PadFormula::Kind::False:
            return {false, true};
        case PadFormula::Kind::Le:
            return {phi.lhs().eval(mu) <= phi.rhs().eval(mu), true};
        case PadFormula::Kind::Eq:
            return {phi.lhs().eval(mu) == phi.rhs().eval(mu), true};
        case PadFormula::Kind::Div:
            return {divides(phi.lhs().eval(mu), phi.rhs().eval(mu)), true};
        case PadFormula::Kind::And: {
            bool uncertain = false;
            for (const auto& k : phi.children()) {
                EvalResult r = eval(k, mu, witness_bound);
                if (!r.value && r.certain) return {false, true};
                if (!r.value) uncertain = true;
            }
            return {!uncertain, !uncertain};
        }
        case PadFormula::Kind::Or: {
            bool uncertain = false;
            for (const auto& k : phi.children()) {
                EvalResult r = eval(k, mu, witness_bound);
                if (r.value) return {true, true};
                if (!r.certain) uncertain = true;
            }
            return {false, !uncertain};
        }
        case PadFormula::Kind::Exists: {
            Assignment inner = mu;
            for (std::int64_t w = 0; w <= witness_bound; ++w) {
                inner[phi.bound_var()] = w;
                EvalResult r = eval(phi.body(), inner, witness_bound);
                if (r.value) return {true, true};
            }
            return {false, false};
        }
    }
    return {false, false};
}

// ---------------------------------------------------------------------------
// Bounded satisfiability
//
// The formula is compiled into an arena with all existentials renamed apart,
// then solved by interval propagation with branching on disjunctions and on
// remaining variable values. The first model in deterministic order is
// returned.

namespace {

struct NormTerm {
    std::int64_t constant{0};
    std::vector<std::pair<std::uint32_t, std::int64_t>> parts;  // (var, coeff)
};

struct SNode {
    PadFormula::Kind kind;
    NormTerm lhs, rhs;
    std::vector<std::uint32_t> kids;
};

struct Compiled {
    std::vector<SNode> nodes;
    std::vector<std::string> var_names;
    std::map<std::string, std::uint32_t> var_ids;
    std::uint32_t root{0};
    std::uint32_t fresh{0};

    std::uint32_t var_of(const std::string& name,
                         const std::map<std::string, std::uint32_t>& scope) {
        auto s = scope.find(name);
        if (s != scope.end()) return s->second;
        auto it = var_ids.find(name);
        if (it != var_ids.end()) return it->second;
        std::uint32_t id = static_cast<std::uint32_t>(var_names.size());
        var_names.push_back(name);
        var_ids.emplace(name, id);
        return id;
    }

    NormTerm norm(const LinTerm& t,
                  const std::map<std::string, std::uint32_t>& scope) {
        NormTerm n;
        n.constant = t.constant;
        for (const auto& [v, c] : t.coeffs) n.parts.emplace_back(var_of(v, scope), c);
        return n;
    }

    std::uint32_t compile(const PadFormula& f,
                          std::map<std::string, std::uint32_t>& scope) {
        SNode node;
        node.kind = f.kind();
        switch (f.kind()) {
            case PadFormula::Kind::True:
            case PadFormula::Kind::False:
                break;
            case PadFormula::Kind::Le:
            case PadFormula::Kind::Eq:
            case PadFormula::Kind::Div:
                node.lhs = norm(f.lhs(), scope);
                node.rhs = norm(f.rhs(), scope);
                break;
            case PadFormula::Kind::And:
            case PadFormula::Kind::Or:
                for (const auto& k : f.children()) node.kids.push_back(compile(k, scope));
                break;
            case PadFormula::Kind::Exists: {
                std::string fresh_name =
                    f.bound_var() + "!" + std::to_string(fresh++);
                std::uint32_t id = static_cast<std::uint32_t>(var_names.size());
                var_names.push_back(fresh_name);
                auto prev = scope.find(f.bound_var());
                std::optional<std::uint32_t> saved;
                if (prev != scope.end()) saved = prev->second;
                scope[f.bound_var()] = id;
                std::uint32_t body = compile(f.body(), scope);
                if (saved)
                    scope[f.bound_var()] = *saved;
                else
                    scope.erase(f.bound_var());
                // Existential nodes reduce to their body once renamed apart.
                nodes.push_back(SNode{});  // placeholder keeps indices stable
                nodes.back().kind = PadFormula::Kind::And;
                nodes.back().kids = {body};
                return static_cast<std::uint32_t>(nodes.size() - 1);
            }
        }
        nodes.push_back(std::move(node));
        return static_cast<std::uint32_t>(nodes.size() - 1);
    }
};

enum class Tri { False, Unknown, True };

struct Domain {
    std::int64_t lo, hi;
    bool fixed() const { return lo == hi; }
};

std::int64_t div_floor(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

std::int64_t div_ceil(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    if (r != 0 && ((r < 0) == (b < 0))) ++q;
    return q;
}

class Solver {
  public:
    Solver(Compiled c, std::int64_t bound)
        : c_(std::move(c)), bound_(bound) {}

    std::optional<std::vector<std::int64_t>> run() {
        std::vector<Domain> dom(c_.var_names.size(), Domain{0, bound_});
        std::vector<std::int8_t> choice(c_.nodes.size(), -1);
        return search(dom, choice);
    }

  private:
    Compiled c_;
    std::int64_t bound_;

    struct TermRange {
        std::int64_t lo, hi;
    };

    TermRange range(const NormTerm& t, const std::vector<Domain>& dom) const {
        TermRange r{t.constant, t.constant};
        for (const auto& [v, coef] : t.parts) {
            if (coef >= 0) {
                r.lo += coef * dom[v].lo;
                r.hi += coef * dom[v].hi;
            } else {
                r.lo += coef * dom[v].hi;
                r.hi += coef * dom[v].lo;
            }
        }
        return r;
    }

    Tri eval3(std::uint32_t id, const std::vector<Domain>& dom,
              const std::vector<std::int8_t>& choice) const {
        const SNode& n = c_.nodes[id];
        switch (n.kind) {
            case PadFormula::Kind::True:
                return Tri::True;
            case PadFormula::Kind::False:
                return Tri::False;
            case PadFormula::Kind::Le: {
                // lhs - rhs <= 0
                TermRange l = range(n.lhs, dom), r = range(n.rhs, dom);
                if (l.hi <= r.lo) return Tri::True;
                if (l.lo > r.hi) return Tri::False;
                return Tri::Unknown;
            }
            case PadFormula::Kind::Eq: {
                TermRange l = range(n.lhs, dom), r = range(n.rhs, dom);
                if (l.lo == l.hi && r.lo == r.hi)
                    return l.lo == r.lo ? Tri::True : Tri::False;
                if (l.hi < r.lo || r.hi < l.lo) return Tri::False;
                return Tri::Unknown;
            }
            case PadFormula::Kind::Div: {
                TermRange f = range(n.lhs, dom), g = range(n.rhs, dom);
                if (f.lo == f.hi && g.lo == g.hi)
                    return divides(f.lo, g.lo) ? Tri::True : Tri::False;
                if (g.lo == 0 && g.hi == 0) return Tri::True;
                if (f.lo == f.hi) {
                    if (f.lo == 0) {
                        if (g.lo > 0 || g.hi < 0) return Tri::False;
                        return Tri::Unknown;
                    }
                    std::int64_t a = f.lo < 0 ? -f.lo : f.lo;
                    if (div_floor(g.hi, a) < div_ceil(g.lo, a)) return Tri::False;
                }
                return Tri::Unknown;
            }
            case PadFormula::Kind::And: {
                Tri acc = Tri::True;
                for (auto k : n.kids) {
                    Tri t = eval3(k, dom, choice);
                    if (t == Tri::False) return Tri::False;
                    if (t == Tri::Unknown) acc = Tri::Unknown;
                }
                return acc;
            }
            case PadFormula::Kind::Or: {
                if (choice[id] >= 0) return eval3(n.kids[choice[id]], dom, choice);
                Tri acc = Tri::False;
                for (auto k : n.kids) {
                    Tri t = eval3(k, dom, choice);
                    if (t == Tri::True) return Tri::True;
                    if (t == Tri::Unknown) acc = Tri::Unknown;
                }
                return acc;
            }
            default:
                return Tri::Unknown;
        }
    }

    // Collects atoms that must hold and the first branchable disjunction.
    bool collect(std::uint32_t id, const std::vector<Domain>& dom,
                 std::vector<std::int8_t>& choice,
                 std::vector<std::uint32_t>& atoms,
                 std::optional<std::uint32_t>& branch_or) const {
        const SNode& n = c_.nodes[id];
        switch (n.kind) {
            case PadFormula::Kind::True:
                return true;
            case PadFormula::Kind::False:
                return false;
            case PadFormula::Kind::Le:
            case PadFormula::Kind::Eq:
            case PadFormula::Kind::Div:
                atoms.push_back(id);
                return true;
            case PadFormula::Kind::And:
                for (auto k : n.kids)
                    if (!collect(k, dom, choice, atoms, branch_or)) return false;
                return true;
            case PadFormula::Kind::Or: {
                if (choice[id] >= 0)
                    return collect(n.kids[choice[id]], dom, choice, atoms, branch_or);
                Tri t = eval3(id, dom, choice);
                if (t == Tri::True) return true;  // already settled
                if (t == Tri::False) return false;
                int live = -1, count = 0;
                for (std::size_t i = 0; i < n.kids.size(); ++i) {
                    if (eval3(n.kids[i], dom, choice) != Tri::False) {
                        if (live < 0) live = static_cast<int>(i);
                        ++count;
                    }
                }
                if (count == 1) {
                    choice[id] = static_cast<std::int8_t>(live);
                    return collect(n.kids[live], dom, choice, atoms, branch_or);
                }
                if (!branch_or) branch_or = id;
                return true;
            }
            default:
                return true;
        }
    }

    // Tightens domains from one must-hold atom; returns false on conflict.
    bool tighten(std::uint32_t id, std::vector<Domain>& dom, bool& changed) const {
        const SNode& n = c_.nodes[id];
        // Normalized as lhs - rhs (= 0 | <= 0) for Eq/Le.
        auto diff = [&](const NormTerm& a, const NormTerm& b) {
            NormTerm d = a;
            d.constant -= b.constant;
            for (const auto& [v, coef] : b.parts) d.parts.emplace_back(v, -coef);
            return d;
        };
        auto shrink = [&](std::uint32_t v, std::int64_t lo, std::int64_t hi) {
            Domain& d = dom[v];
            if (lo > d.lo) {
                d.lo = lo;
                changed = true;
            }
            if (hi < d.hi) {
                d.hi = hi;
                changed = true;
            }
            return d.lo <= d.hi;
        };
        switch (n.kind) {
            case PadFormula::Kind::Eq: {
                NormTerm t = diff(n.lhs, n.rhs);
                for (std::size_t j = 0; j < t.parts.size(); ++j) {
                    auto [v, coef] = t.parts[j];
                    if (coef == 0) continue;
                    std::int64_t rl = t.constant, rh = t.constant;
                    for (std::size_t i = 0; i < t.parts.size(); ++i) {
                        if (i == j) continue;
                        auto [u, cu] = t.parts[i];
                        if (cu >= 0) {
                            rl += cu * dom[u].lo;
                            rh += cu * dom[u].hi;
                        } else {
                            rl += cu * dom[u].hi;
                            rh += cu * dom[u].lo;
                        }
                    }
                    // coef * v = -rest, rest in [rl, rh]
                    std::int64_t lo, hi;
                    if (coef > 0) {
                        lo = div_ceil(-rh, coef);
                        hi = div_floor(-rl, coef);
                    } else {
                        lo = div_ceil(-rl, coef);
                        hi = div_floor(-rh, coef);
                    }
                    if (!shrink(v, lo, hi)) return false;
                }
                return true;
            }
            case PadFormula::Kind::Le: {
                NormTerm t = diff(n.lhs, n.rhs);
                for (std::size_t j = 0; j < t.parts.size(); ++j) {
                    auto [v, coef] = t.parts[j];
                    if (coef == 0) continue;
                    std::int64_t rl = t.constant;
                    for (std::size_t i = 0; i < t.parts.size(); ++i) {
                        if (i == j) continue;
                        auto [u, cu] = t.parts[i];
                        rl += cu >= 0 ? cu * dom[u].lo : cu * dom[u].hi;
                    }
                    // coef * v <= -rl
                    if (coef > 0) {
                        if (!shrink(v, dom[v].lo, div_floor(-rl, coef))) return false;
                    } else {
                        if (!shrink(v, div_ceil(-rl, coef), dom[v].hi)) return false;
                    }
                }
                return true;
            }
            case PadFormula::Kind::Div: {
                TermRange f = range(n.lhs, dom);
                if (f.lo != f.hi) return true;
                if (f.lo == 0) {
                    // 0 | g forces g = 0.
                    return tighten_eq_zero(n.rhs, dom, changed);
                }
                std::int64_t a = f.lo < 0 ? -f.lo : f.lo;
                // Single-variable dividend with unit coefficient: snap the
                // variable range to values making the dividend a multiple.
                if (n.rhs.parts.size() == 1) {
                    auto [v, coef] = n.rhs.parts[0];
                    if (coef == 1 || coef == -1) {
                        Domain d = dom[v];
                        auto value_ok = [&](std::int64_t x) {
                            return (n.rhs.constant + coef * x) % a == 0;
                        };
                        while (d.lo <= d.hi && !value_ok(d.lo)) ++d.lo;
                        while (d.hi >= d.lo && !value_ok(d.hi)) --d.hi;
                        if (!shrink(v, d.lo, d.hi)) return false;
                    }
                }
                TermRange g = range(n.rhs, dom);
                if (div_floor(g.hi, a) < div_ceil(g.lo, a)) return false;
                return true;
            }
            default:
                return true;
        }
    }

    bool tighten_eq_zero(const NormTerm& t, std::vector<Domain>& dom,
                         bool& changed) const {
        for (std::size_t j = 0; j < t.parts.size(); ++j) {
            auto [v, coef] = t.parts[j];
            if (coef == 0) continue;
            std::int64_t rl = t.constant, rh = t.constant;
            for (std::size_t i = 0; i < t.parts.size(); ++i) {
                if (i == j) continue;
                auto [u, cu] = t.parts[i];
                if (cu >= 0) {
                    rl += cu * dom[u].lo;
                    rh += cu * dom[u].hi;
                } else {
                    rl += cu * dom[u].hi;
                    rh += cu * dom[u].lo;
                }
            }
            std::int64_t lo, hi;
            if (coef > 0) {
                lo = div_ceil(-rh, coef);
                hi = div_floor(-rl, coef);
            } else {
                lo = div_ceil(-rl, coef);
                hi = div_floor(-rh, coef);
            }
            Domain& d = dom[v];
            if (lo > d.lo) {
                d.lo = lo;
                changed = true;
            }
            if (hi < d.hi) {
                d.hi = hi;
                changed = true;
            }
            if (d.lo > d.hi) return false;
        }
        return true;
    }

    std::optional<std::vector<std::int64_t>> search(
        std::vector<Domain> dom, std::vector<std::int8_t> choice) const {
        // Propagate to fixpoint, re-deriving must atoms as ORs resolve.
        for (;;) {
            Tri t = eval3(c_.root, dom, choice);
            if (t == Tri::False) return std::nullopt;
            if (t == Tri::True) return finish(dom, choice);

            std::vector<std::uint32_t> atoms;
            std::optional<std::uint32_t> branch_or;
            if (!collect(c_.root, dom, choice, atoms, branch_or))
                return std::nullopt;

            bool changed = false;
            for (auto a : atoms)
                if (!tighten(a, dom, changed)) return std::nullopt;
            if (changed) continue;

            if (branch_or) {
                const SNode& n = c_.nodes[*branch_or];
                for (std::size_t i = 0; i < n.kids.size(); ++i) {
                    if (eval3(n.kids[i], dom, choice) == Tri::False) continue;
                    auto ch = choice;
                    ch[*branch_or] = static_cast<std::int8_t>(i);
                    if (auto m = search(dom, std::move(ch))) return m;
                }
                return std::nullopt;
            }

            // Branch on the unfixed variable with the smallest domain.
            std::uint32_t best = 0;
            std::int64_t best_size = std::numeric_limits<std::int64_t>::max();
            for (std::uint32_t v = 0; v < dom.size(); ++v) {
                if (dom[v].fixed()) continue;
                std::int64_t size = dom[v].hi - dom[v].lo;
                if (size < best_size) {
                    best_size = size;
                    best = v;
                }
            }
            if (best_size == std::numeric_limits<std::int64_t>::max())
                return finish(dom, choice);
            for (std::int64_t val = dom[best].lo; val <= dom[best].hi; ++val) {
                auto d = dom;
                d[best].lo = d[best].hi = val;
                if (auto m = search(std::move(d), choice)) return m;
            }
            return std::nullopt;
        }
    }

    std::optional<std::vector<std::int64_t>> finish(
        const std::vector<Domain>& dom,
        const std::vector<std::int8_t>& choice) const {
        std::vector<Domain> fixed = dom;
        for (auto& d : fixed) d.hi = d.lo;
        if (eval3(c_.root, fixed, choice) != Tri::True) return std::nullopt;
        std::vector<std::int64_t> model(fixed.size());
        for (std::size_t i = 0; i < fixed.size(); ++i) model[i] = fixed[i].lo;
        return model;
    }
};

}  // namespace

BoundedSatResult bounded_sat(const PadFormula& phi, std::int64_t bound) {
    BoundedSatResult res;
    res.bound = bound;
    if (bound < 0) return res;

    std::set<std::string> free = phi.free_vars();
    Compiled c;
    for (const auto& v : free) {
        std::uint32_t id = static_cast<std::uint32_t>(c.var_names.size());
        c.var_names.push_back(v);
        c.var_ids.emplace(v, id);
    }
    std::map<std::string, std::uint32_t> scope;
    c.root = c.compile(phi, scope);

    Solver solver(std::move(c), bound);
    auto values = solver.run();
    if (!values) return res;

    // Free variables occupy the first slots, in sorted order.

    Assignment model;
    std::size_t i = 0;
    for (const auto& v : free) model[v] = (*values)[i++];
    res.model = std::move(model);
    return res;
}

// ---------------------------------------------------------------------------
// SMT-LIB

namespace {

bool plain_symbol(std::string_view s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    const std::string_view extra = "~!@$%^&*_-+=<>.?/";
    for (char ch : s) {
        if (std::isalnum(static_cast<unsigned char>(ch))) continue;
        if (extra.find(ch) == std::string_view::npos) return false;
    }
    return true;
}

std::string smt_symbol(const std::string& name) {
    if (plain_symbol(name)) return name;
    return "|" + name + "|";
}

std::string smt_term(const LinTerm& t) {
    std::vector<std::string> parts;
    if (t.constant != 0 || t.coeffs.empty()) {
        if (t.constant < 0)
            parts.push_back("(- " + std::to_string(-t.constant) + ")");
        else
            parts.push_back(std::to_string(t.constant));
    }
    for (const auto& [v, c] : t.coeffs) {
        std::string sym = smt_symbol(v);
        if (c == 1) {
            parts.push_back(sym);
        } else if (c < 0) {
            parts.push_back("(* (- " + std::to_string(-c) + ") " + sym + ")");
        } else {
            parts.push_back("(* " + std::to_string(c) + " " + sym + ")");
        }
    }
    if (parts.size() == 1) return parts[0];
    std::string out = "(+";
    for (const auto& p : parts) out += " " + p;
    return out + ")";
}

std::string smt_formula(const PadFormula& f, int& next_mult) {
    switch (f.kind()) {
        case PadFormula::Kind::True:
            return "true";
        case PadFormula::Kind::False:
            return "false";
        case PadFormula::Kind::Le:
            return "(<= " + smt_term(f.lhs()) + " " + smt_term(f.rhs()) + ")";
        case PadFormula::Kind::Eq:
            return "(= " + smt_term(f.lhs()) + " " + smt_term(f.rhs()) + ")";
        case PadFormula::Kind::Div: {
            std::string k = "k!" + std::to_string(next_mult++);
            return "(exists ((" + k + " Int)) (= " + smt_term(f.rhs()) +
                   " (* " + k + " " + smt_term(f.lhs()) + ")))";
        }
        case PadFormula::Kind::And:
        case PadFormula::Kind::Or: {
            std::string out = f.kind() == PadFormula::Kind::And ? "(and" : "(or";
            for (const auto& c : f.children()) out += " " + smt_formula(c, next_mult);
            return out + ")";
        }
        case PadFormula::Kind::Exists: {
            std::string v = smt_symbol(f.bound_var());
            return "(exists ((" + v + " Int)) (and (>= " + v + " 0) " +
                   smt_formula(f.body(), next_mult) + "))";
        }
    }
    return "false";
}

}  // namespace

std::string export_smtlib(const PadFormula& phi) {
    std::ostringstream os;
    os << "(set-logic NIA)\n";
    for (const auto& v : phi.free_vars()) {
        std::string sym = smt_symbol(v);
        os << "(declare-const " << sym << " Int)\n";
        os << "(assert (>= " << sym << " 0))\n";
    }
    int next_mult = 0;
    os << "(assert " << smt_formula(phi, next_mult) << ")\n";
    os << "(check-sat)\n";
    os << "(get-model)\n";
    return os.str();
}

Assignment parse_smtlib_model(std::string_view text) {
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < text.size();) {
        char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
        } else if (ch == '(' || ch == ')') {
            tokens.emplace_back(1, ch);
            ++i;
        } else if (ch == '|') {
            std::size_t j = text.find('|', i + 1);
            if (j == std::string_view::npos)
                throw std::runtime_error("model parse: unterminated |symbol|");
            tokens.emplace_back(text.substr(i + 1, j - i - 1));
            i = j + 1;
        } else if (ch == ';') {
            while (i < text.size() && text[i] != '\n') ++i;
        } else {
            std::size_t j = i;
            while (j < text.size() &&
                   !std::isspace(static_cast<unsigned char>(text[j])) &&
                   text[j] != '(' && text[j] != ')')
                ++j;
            tokens.emplace_back(text.substr(i, j - i));
            i = j;
        }
    }

    Assignment model;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i] != "define-fun") continue;
        // shape: ( define-fun NAME ( ) Int VALUE )
        if (i + 5 >= tokens.size()) throw std::runtime_error("model parse: truncated define-fun");
        const std::string& name = tokens[i + 1];
        if (tokens[i + 2] != "(" || tokens[i + 3] != ")")
            throw std::runtime_error("model parse: expected nullary define-fun for " + name);
        if (tokens[i + 4] != "Int")
            throw std::runtime_error("model parse: expected Int sort for " + name);
        std::int64_t value = 0;
        if (tokens[i + 5] == "(") {
            if (i + 8 >= tokens.size() || tokens[i + 6] != "-" ||
                tokens[i + 8] != ")")
                throw std::runtime_error("model parse: bad negative literal for " + name);
            value = -std::stoll(tokens[i + 7]);
        } else {
            value = std::stoll(tokens[i + 5]);
        }
        model[name] = value;
    }
    return model;
}

}  // namespace weq
