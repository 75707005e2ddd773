// automata.hpp -- NFAs over the constant alphabet, characteristic boolean
// matrices and their monoid closure, and semilinear length sets.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace weq {

/// Epsilon-free NFA with a single initial state. Letters are single
/// characters (the constant alphabet of a problem).
struct Nfa {
    std::uint32_t states{0};
    std::string alphabet;  // sorted, unique
    struct Transition {
        std::uint32_t from;
        char letter;
        std::uint32_t to;
    };
    std::vector<Transition> transitions;
    std::uint32_t initial{0};
    std::vector<std::uint32_t> finals;  // sorted, unique

    bool accepts(std::string_view word) const;
    nlohmann::json to_json() const;
};

/// Parses a regex over single-character constants with `|`, `*`, `+`, `?`,
/// parentheses and concatenation (Glushkov construction, no epsilon moves).
/// Throws std::runtime_error with a position on syntax errors.
Nfa parse_regex(std::string_view pattern);

/// Square boolean matrix with bit-packed rows.
class BoolMatrix {
  public:
    BoolMatrix() = default;
    explicit BoolMatrix(std::uint32_t dim);
    static BoolMatrix identity(std::uint32_t dim);

    std::uint32_t dim() const { return dim_; }
    bool get(std::uint32_t i, std::uint32_t j) const;
    void set(std::uint32_t i, std::uint32_t j, bool value = true);

    BoolMatrix operator*(const BoolMatrix& o) const;
    bool operator==(const BoolMatrix& o) const = default;

    std::size_t hash() const;
    /// Rows as 0/1 strings joined by '|' (for labels and debugging).
    std::string render_rows() const;

  private:
    std::uint32_t dim_{0};
    std::uint32_t row_words_{0};
    std::vector<std::uint64_t> bits_;
};

struct BoolMatrixHash {
    std::size_t operator()(const BoolMatrix& m) const { return m.hash(); }
};

/// Disjoint union of constraint automata; rows and columns of characteristic
/// matrices are indexed by the union state space.
struct UnionAutomaton {
    std::uint32_t states{0};
    std::string alphabet;                   // problem alphabet, sorted
    std::vector<BoolMatrix> letter_matrix;  // one per alphabet position
    std::vector<std::uint32_t> offsets;     // state offset per component

    std::optional<std::size_t> letter_index(char c) const;
};

UnionAutomaton build_union(std::span<const Nfa> nfas, std::string alphabet);

/// Characteristic matrix of w: entry (i, j) is set iff w labels a path from i
/// to j. Homomorphic: the matrix of uv is the product of the matrices.
/// Throws std::invalid_argument on a letter outside the alphabet.
BoolMatrix char_matrix(const UnionAutomaton& ua, std::string_view word);

/// Submonoid of realizable characteristic matrices, generated from the
/// identity by the letter matrices. Element 0 is the identity; every element
/// stores a realizing word.
struct MonoidClosure {
    std::vector<BoolMatrix> elements;
    std::vector<std::string> witness;
    std::vector<std::vector<std::uint32_t>> letter_succ;  // [elem][letter]
    std::unordered_map<BoolMatrix, std::uint32_t, BoolMatrixHash> index;
    bool capped{false};

    std::optional<std::uint32_t> find(const BoolMatrix& m) const;
};

MonoidClosure realizable_matrices(const UnionAutomaton& ua, std::size_t cap);

/// Union of arithmetic progressions offset + period * N (period 0 denotes a
/// singleton).
struct Progression {
    std::uint64_t offset{0};
    std::uint64_t period{0};
    auto operator<=>(const Progression&) const = default;
};

struct ProgressionSet {
    std::vector<Progression> progressions;  // sorted, deduplicated

    static ProgressionSet all_naturals();
    bool contains(std::uint64_t n) const;
    bool empty() const { return progressions.empty(); }
    void normalize();
};

/// Length set {|w| : w in L(nfa)} as a progression set: lengths up to 2r^2
/// are enumerated exactly; each state on a cycle of length c <= r that is
/// reachable in d <= r^2 steps and co-reachable in e <= r^2 steps
/// contributes the progression (d + e, c).
ProgressionSet length_set(const Nfa& nfa);

/// Length set of {w : char_matrix(w) = m}, via the automaton whose states
/// are the monoid elements. Throws std::runtime_error if the closure was
/// capped or m is not realizable.
ProgressionSet matrix_language_length_set(const UnionAutomaton& ua,
                                          const MonoidClosure& closure,
                                          const BoolMatrix& m);

}  // namespace weq
