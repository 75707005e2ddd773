// terms.hpp -- alphabets, variables, words, equations, problems, input format.
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "weq/automata.hpp"
#include "weq/pad.hpp"

namespace weq {

enum class SymKind : std::uint8_t { Constant, Variable };

/// A constant or a variable, identified by an index into the owning
/// SymbolTable. Constant and variable namespaces are disjoint.
struct Symbol {
    SymKind kind{SymKind::Constant};
    std::uint32_t id{0};

    bool is_var() const { return kind == SymKind::Variable; }
    bool is_const() const { return kind == SymKind::Constant; }
    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

using Word = std::vector<Symbol>;

struct Equation {
    Word lhs, rhs;

    std::size_t size() const { return lhs.size() + rhs.size(); }
    /// The terminal equation epsilon = epsilon.
    bool trivial() const { return lhs.empty() && rhs.empty(); }
    friend bool operator==(const Equation&, const Equation&) = default;
};

struct EquationHash {
    std::size_t operator()(const Equation& e) const {
        std::size_t h = 14695981039346656037ull;
        auto mix = [&h](const Word& w) {
            for (const Symbol& s : w) {
                h ^= (static_cast<std::size_t>(s.id) << 1) |
                     static_cast<std::size_t>(s.kind);
                h *= 1099511628211ull;
            }
            h ^= 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        };
        mix(e.lhs);
        mix(e.rhs);
        return h;
    }
};

/// Interned names. Constants are single characters; variables are arbitrary
/// tokens. Declaration order of variables fixes the order of length tuples.
class SymbolTable {
  public:
    Symbol intern_constant(char c);
    Symbol intern_variable(std::string name);

    std::optional<Symbol> find_variable(std::string_view name) const;
    std::optional<Symbol> find_constant(char c) const;

    const std::string& name(Symbol s) const;
    char constant_char(Symbol s) const;

    std::size_t num_constants() const { return constants_.size(); }
    std::size_t num_variables() const { return variables_.size(); }
    std::vector<Symbol> variables() const;
    /// Sorted string of constant characters.
    std::string alphabet() const;

  private:
    std::vector<std::string> constants_;
    std::vector<std::string> variables_;
};

struct RegConstraint {
    Symbol var;
    Nfa nfa;
    std::string pattern;  // source regex, for reporting
};

struct Problem {
    SymbolTable syms;
    Equation equation;
    std::vector<RegConstraint> regular_constraints;
    std::optional<PadFormula> length_constraint;

    std::vector<Symbol> vars() const { return syms.variables(); }
};

struct Classification {
    bool quadratic{false};
    bool regular{false};
    bool oriented{false};
};

/// quadratic: every variable occurs at most twice in total; regular: at most
/// once per side; oriented: some total variable order is preserved by the
/// occurrence order on both sides (decided via the precedence digraph).
Classification classify(const Equation& eq);

class ParseError : public std::runtime_error {
  public:
    ParseError(std::string msg, int line, int col)
        : std::runtime_error(std::move(msg)), line(line), col(col) {}
    int line;
    int col;
};

/// Parses the `;`-terminated clause format: `vars:`, `eq:`, `re:`, `len:`.
/// The constant alphabet is collected from the equation and the regular
/// constraints; when empty, a single default letter 'a' is added so that
/// length abstractions are taken over a nonempty alphabet.
Problem parse_problem(std::string_view text);

std::string render_word(const Word& w, const SymbolTable& syms);
std::string render_equation(const Equation& eq, const SymbolTable& syms);

}  // namespace weq
