#include "weq/terms.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace weq {

Symbol SymbolTable::intern_constant(char c) {
    std::string name(1, c);
    for (std::uint32_t i = 0; i < constants_.size(); ++i)
        if (constants_[i] == name) return {SymKind::Constant, i};
    constants_.push_back(std::move(name));
    return {SymKind::Constant, static_cast<std::uint32_t>(constants_.size() - 1)};
}

Symbol SymbolTable::intern_variable(std::string name) {
    for (std::uint32_t i = 0; i < variables_.size(); ++i)
        if (variables_[i] == name) return {SymKind::Variable, i};
    variables_.push_back(std::move(name));
    return {SymKind::Variable, static_cast<std::uint32_t>(variables_.size() - 1)};
}

std::optional<Symbol> SymbolTable::find_variable(std::string_view name) const {
    for (std::uint32_t i = 0; i < variables_.size(); ++i)
        if (variables_[i] == name) return Symbol{SymKind::Variable, i};
    return std::nullopt;
}

std::optional<Symbol> SymbolTable::find_constant(char c) const {
    for (std::uint32_t i = 0; i < constants_.size(); ++i)
        if (constants_[i][0] == c) return Symbol{SymKind::Constant, i};
    return std::nullopt;
}

const std::string& SymbolTable::name(Symbol s) const {
    return s.is_var() ? variables_.at(s.id) : constants_.at(s.id);
}

char SymbolTable::constant_char(Symbol s) const {
    return constants_.at(s.id)[0];
}

std::vector<Symbol> SymbolTable::variables() const {
    std::vector<Symbol> out;
    for (std::uint32_t i = 0; i < variables_.size(); ++i)
        out.push_back({SymKind::Variable, i});
    return out;
}

std::string SymbolTable::alphabet() const {
    std::string out;
    for (const auto& c : constants_) out += c;
    std::sort(out.begin(), out.end());
    return out;
}

Classification classify(const Equation& eq) {
    Classification c;
    std::map<std::uint32_t, int> total, left, right;
    for (const Symbol& s : eq.lhs)
        if (s.is_var()) {
            ++total[s.id];
            ++left[s.id];
        }
    for (const Symbol& s : eq.rhs)
        if (s.is_var()) {
            ++total[s.id];
            ++right[s.id];
        }

    c.quadratic = std::all_of(total.begin(), total.end(),
                              [](const auto& kv) { return kv.second <= 2; });
    c.regular = std::all_of(left.begin(), left.end(),
                            [](const auto& kv) { return kv.second <= 1; }) &&
                std::all_of(right.begin(), right.end(),
                            [](const auto& kv) { return kv.second <= 1; });

    // Precedence digraph: an edge u -> v for every ordered occurrence pair on
    // either side. Orientedness is acyclicity (a repeated variable on one
    // side yields a self-loop).
    std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
    bool self_loop = false;
    auto add_side = [&](const Word& w) {
        std::vector<std::uint32_t> vars;
        for (const Symbol& s : w)
            if (s.is_var()) vars.push_back(s.id);
        for (std::size_t i = 0; i < vars.size(); ++i)
            for (std::size_t j = i + 1; j < vars.size(); ++j) {
                if (vars[i] == vars[j]) self_loop = true;
                edges.emplace(vars[i], vars[j]);
            }
    };
    add_side(eq.lhs);
    add_side(eq.rhs);

    if (self_loop) {
        c.oriented = false;
        return c;
    }
    std::map<std::uint32_t, std::vector<std::uint32_t>> adj;
    std::set<std::uint32_t> nodes;
    for (const auto& [u, v] : edges) {
        adj[u].push_back(v);
        nodes.insert(u);
        nodes.insert(v);
    }
    std::map<std::uint32_t, int> state;  // 0 new, 1 active, 2 done
    bool cyclic = false;
    auto dfs = [&](auto&& self, std::uint32_t u) -> void {
        state[u] = 1;
        for (auto v : adj[u]) {
            if (state[v] == 1) {
                cyclic = true;
                return;
            }
            if (state[v] == 0) self(self, v);
            if (cyclic) return;
        }
        state[u] = 2;
    };
    for (auto u : nodes) {
        if (state[u] == 0) dfs(dfs, u);
        if (cyclic) break;
    }
    c.oriented = !cyclic;
    return c;
}

std::string render_word(const Word& w, const SymbolTable& syms) {
    if (w.empty()) return "ε";
    bool compact = std::all_of(w.begin(), w.end(), [&](const Symbol& s) {
        return syms.name(s).size() == 1;
    });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!compact && i) out += ' ';
        out += syms.name(w[i]);
    }
    return out;
}

std::string render_equation(const Equation& eq, const SymbolTable& syms) {
    return render_word(eq.lhs, syms) + " = " + render_word(eq.rhs, syms);
}

// ---------------------------------------------------------------------------
// Problem source parsing

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos{0};
    int line{1};
    int col{1};

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char advance() {
        char ch = text[pos++];
        if (ch == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return ch;
    }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek())))
            advance();
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " (line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ")",
                         line, col);
    }
};

std::string read_token(Cursor& c) {
    std::string tok;
    while (!c.eof() && !std::isspace(static_cast<unsigned char>(c.peek())) &&
           c.peek() != ';' && c.peek() != ':')
        tok += c.advance();
    return tok;
}

// Length-constraint grammar: disjunctions of conjunctions of atoms
// `term (= | <= | >= | < | >) term`, terms built from integer literals and
// `|x|` with + - and an optional `*` coefficient.
class LenParser {
  public:
    LenParser(Cursor& c, const SymbolTable& syms) : c_(c), syms_(syms) {}

    PadFormula parse() {
        PadFormula f = disjunction();
        c_.skip_ws();
        return f;
    }

  private:
    Cursor& c_;
    const SymbolTable& syms_;

    PadFormula disjunction() {
        std::vector<PadFormula> parts{conjunction()};
        for (;;) {
            c_.skip_ws();
            if (c_.text.substr(c_.pos, 2) == "||") {
                c_.advance();
                c_.advance();
                parts.push_back(conjunction());
            } else {
                break;
            }
        }
        return PadFormula::disj(std::move(parts));
    }

    PadFormula conjunction() {
        std::vector<PadFormula> parts{atom()};
        for (;;) {
            c_.skip_ws();
            if (c_.text.substr(c_.pos, 2) == "&&") {
                c_.advance();
                c_.advance();
                parts.push_back(atom());
            } else {
                break;
            }
        }
        return PadFormula::conj(std::move(parts));
    }

    PadFormula atom() {
        c_.skip_ws();
        if (!c_.eof() && c_.peek() == '(') {
            c_.advance();
            PadFormula f = disjunction();
            c_.skip_ws();
            if (c_.eof() || c_.peek() != ')') c_.fail("expected ')'");
            c_.advance();
            return f;
        }
        LinTerm lhs = term();
        c_.skip_ws();
        std::string op;
        while (!c_.eof() && (c_.peek() == '<' || c_.peek() == '>' || c_.peek() == '='))
            op += c_.advance();
        LinTerm rhs = term();
        if (op == "=" || op == "==") return PadFormula::eq(lhs, rhs);
        if (op == "<=") return PadFormula::le(lhs, rhs);
        if (op == ">=") return PadFormula::le(rhs, lhs);
        if (op == "<") return PadFormula::le(lhs + LinTerm(1), rhs);
        if (op == ">") return PadFormula::le(rhs + LinTerm(1), lhs);
        c_.fail("expected comparison operator");
    }

    LinTerm term() {
        LinTerm acc = summand();
        for (;;) {
            c_.skip_ws();
            if (!c_.eof() && c_.peek() == '+') {
                c_.advance();
                acc = acc + summand();
            } else if (!c_.eof() && c_.peek() == '-') {
                c_.advance();
                acc = acc - summand();
            } else {
                break;
            }
        }
        return acc;
    }

    LinTerm summand() {
        c_.skip_ws();
        bool negate = false;
        if (!c_.eof() && c_.peek() == '-') {
            negate = true;
            c_.advance();
            c_.skip_ws();
        }
        LinTerm t;
        if (!c_.eof() && std::isdigit(static_cast<unsigned char>(c_.peek()))) {
            std::int64_t n = 0;
            while (!c_.eof() && std::isdigit(static_cast<unsigned char>(c_.peek())))
                n = n * 10 + (c_.advance() - '0');
            c_.skip_ws();
            if (!c_.eof() && c_.peek() == '*') {
                c_.advance();
                c_.skip_ws();
                t = length_var() * n;
            } else {
                t = LinTerm(n);
            }
        } else {
            t = length_var();
        }
        return negate ? t * -1 : t;
    }

    LinTerm length_var() {
        c_.skip_ws();
        if (c_.eof() || c_.peek() != '|') c_.fail("expected |var| or literal");
        c_.advance();
        std::string name;
        while (!c_.eof() && c_.peek() != '|') name += c_.advance();
        if (c_.eof()) c_.fail("unterminated |var|");
        c_.advance();
        if (!syms_.find_variable(name))
            c_.fail("length constraint on undeclared variable '" + name + "'");
        return LinTerm::var(name);
    }
};

}  // namespace

Problem parse_problem(std::string_view text) {
    Problem p;
    Cursor c{text};
    bool saw_eq = false;
    std::vector<std::pair<std::string, std::string>> pending_re;  // var, regex
    std::optional<std::string> pending_len;

    // First pass: split into clauses, declare variables, stash the rest.
    std::vector<std::string> eq_lhs_tokens, eq_rhs_tokens;
    while (true) {
        c.skip_ws();
        if (c.eof()) break;
        std::string keyword = read_token(c);
        c.skip_ws();
        if (c.eof() || c.peek() != ':') c.fail("expected ':' after '" + keyword + "'");
        c.advance();

        if (keyword == "vars") {
            for (;;) {
                c.skip_ws();
                if (c.eof()) c.fail("unterminated vars clause");
                if (c.peek() == ';') {
                    c.advance();
                    break;
                }
                std::string tok = read_token(c);
                if (tok.empty()) c.fail("bad token in vars clause");
                p.syms.intern_variable(tok);
            }
        } else if (keyword == "eq") {
            if (saw_eq) c.fail("duplicate eq clause");
            saw_eq = true;
            bool left = true;
            for (;;) {
                c.skip_ws();
                if (c.eof()) c.fail("unterminated eq clause");
                if (c.peek() == ';') {
                    c.advance();
                    break;
                }
                if (c.peek() == '=') {
                    if (!left) c.fail("duplicate '=' in eq clause");
                    left = false;
                    c.advance();
                    continue;
                }
                std::string tok = read_token(c);
                if (tok.empty()) c.fail("bad token in eq clause");
                (left ? eq_lhs_tokens : eq_rhs_tokens).push_back(tok);
            }
            if (left) c.fail("eq clause without '='");
        } else if (keyword == "re") {
            c.skip_ws();
            std::string var = read_token(c);
            c.skip_ws();
            std::string kw = read_token(c);
            if (kw != "in") c.fail("expected 'in' in re clause");
            c.skip_ws();
            if (c.eof() || c.peek() != '/') c.fail("expected /regex/");
            c.advance();
            std::string pattern;
            while (!c.eof() && c.peek() != '/') pattern += c.advance();
            if (c.eof()) c.fail("unterminated regex");
            c.advance();
            c.skip_ws();
            if (c.eof() || c.peek() != ';') c.fail("expected ';' after re clause");
            c.advance();
            pending_re.emplace_back(std::move(var), std::move(pattern));
        } else if (keyword == "len") {
            std::string body;
            while (!c.eof() && c.peek() != ';') body += c.advance();
            if (c.eof()) c.fail("unterminated len clause");
            c.advance();
            if (pending_len) c.fail("duplicate len clause");
            pending_len = std::move(body);
        } else {
            c.fail("unknown clause '" + keyword + "'");
        }
    }
    if (!saw_eq) {
        Cursor end{text};
        end.fail("missing eq clause");
    }

    auto to_word = [&](const std::vector<std::string>& tokens) {
        Word w;
        for (const auto& tok : tokens) {
            if (auto v = p.syms.find_variable(tok)) {
                w.push_back(*v);
            } else if (tok.size() == 1) {
                w.push_back(p.syms.intern_constant(tok[0]));
            } else {
                Cursor err{text};
                err.fail("undeclared symbol '" + tok + "' (constants are single characters)");
            }
        }
        return w;
    };
    p.equation.lhs = to_word(eq_lhs_tokens);
    p.equation.rhs = to_word(eq_rhs_tokens);

    for (auto& [var, pattern] : pending_re) {
        auto v = p.syms.find_variable(var);
        if (!v) {
            Cursor err{text};
            err.fail("regular constraint on undeclared variable '" + var + "'");
        }
        Nfa nfa;
        try {
            nfa = parse_regex(pattern);
        } catch (const std::runtime_error& e) {
            Cursor err{text};
            err.fail(std::string("bad regex /") + pattern + "/: " + e.what());
        }
        for (char letter : nfa.alphabet) p.syms.intern_constant(letter);
        p.regular_constraints.push_back({*v, std::move(nfa), pattern});
    }

    if (pending_len) {
        Cursor lc{*pending_len};
        LenParser lp(lc, p.syms);
        p.length_constraint = lp.parse();
        lc.skip_ws();
        if (!lc.eof()) lc.fail("trailing input in len clause");
    }

    // Length abstractions are taken over a nonempty alphabet.
    if (p.syms.num_constants() == 0) p.syms.intern_constant('a');
    return p;
}

}  // namespace weq
