#include "weq/automata.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace weq {

bool Nfa::accepts(std::string_view word) const {
    std::vector<bool> current(states, false);
    if (states == 0) return false;
    current[initial] = true;
    for (char c : word) {
        std::vector<bool> next(states, false);
        bool any = false;
        for (const auto& t : transitions) {
            if (t.letter == c && current[t.from]) {
                next[t.to] = true;
                any = true;
            }
        }
        if (!any) return false;
        current = std::move(next);
    }
    for (auto f : finals)
        if (current[f]) return true;
    return false;
}

nlohmann::json Nfa::to_json() const {
    nlohmann::json j;
    j["states"] = states;
    j["alphabet"] = alphabet;
    j["initial"] = initial;
    j["finals"] = finals;
    auto& ts = j["transitions"] = nlohmann::json::array();
    for (const auto& t : transitions)
        ts.push_back({t.from, std::string(1, t.letter), t.to});
    return j;
}

// ---------------------------------------------------------------------------
// Regex parsing (Glushkov position automaton)

namespace {

struct RegexNode {
    enum class Kind { Empty, Epsilon, Letter, Concat, Alt, Star, Plus, Opt };
    Kind kind;
    char letter{0};
    std::size_t pos{0};  // for Letter: position index
    std::unique_ptr<RegexNode> left, right;
};

class RegexParser {
  public:
    explicit RegexParser(std::string_view text) : text_(text) {}

    std::unique_ptr<RegexNode> parse() {
        auto node = alternation();
        if (pos_ != text_.size())
            fail("unexpected character");
        return node;
    }

    std::vector<char>& positions() { return positions_; }

  private:
    std::string_view text_;
    std::size_t pos_{0};
    std::vector<char> positions_;

    [[noreturn]] void fail(const std::string& msg) {
        throw std::runtime_error("regex error at position " +
                                 std::to_string(pos_) + ": " + msg);
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    std::unique_ptr<RegexNode> alternation() {
        auto node = concatenation();
        while (!eof() && peek() == '|') {
            ++pos_;
            auto rhs = concatenation();
            auto alt = std::make_unique<RegexNode>();
            alt->kind = RegexNode::Kind::Alt;
            alt->left = std::move(node);
            alt->right = std::move(rhs);
            node = std::move(alt);
        }
        return node;
    }

    std::unique_ptr<RegexNode> concatenation() {
        std::unique_ptr<RegexNode> node;
        while (!eof() && peek() != '|' && peek() != ')') {
            auto factor = postfix();
            if (!node) {
                node = std::move(factor);
            } else {
                auto cat = std::make_unique<RegexNode>();
                cat->kind = RegexNode::Kind::Concat;
                cat->left = std::move(node);
                cat->right = std::move(factor);
                node = std::move(cat);
            }
        }
        if (!node) {
            node = std::make_unique<RegexNode>();
            node->kind = RegexNode::Kind::Epsilon;
        }
        return node;
    }

    std::unique_ptr<RegexNode> postfix() {
        auto node = atom();
        while (!eof() && (peek() == '*' || peek() == '+' || peek() == '?')) {
            auto wrap = std::make_unique<RegexNode>();
            switch (peek()) {
                case '*': wrap->kind = RegexNode::Kind::Star; break;
                case '+': wrap->kind = RegexNode::Kind::Plus; break;
                default: wrap->kind = RegexNode::Kind::Opt; break;
            }
            ++pos_;
            wrap->left = std::move(node);
            node = std::move(wrap);
        }
        return node;
    }

    std::unique_ptr<RegexNode> atom() {
        if (eof()) fail("unexpected end of pattern");
        char c = peek();
        if (c == '(') {
            ++pos_;
            auto node = alternation();
            if (eof() || peek() != ')') fail("missing ')'");
            ++pos_;
            return node;
        }
        if (c == ')' || c == '|' || c == '*' || c == '+' || c == '?')
            fail("unexpected operator");
        ++pos_;
        auto node = std::make_unique<RegexNode>();
        node->kind = RegexNode::Kind::Letter;
        node->letter = c;
        node->pos = positions_.size();
        positions_.push_back(c);
        return node;
    }
};

struct GlushkovSets {
    bool nullable{false};
    std::set<std::size_t> first, last;
};

GlushkovSets glushkov(const RegexNode& n,
                      std::vector<std::set<std::size_t>>& follow) {
    GlushkovSets s;
    switch (n.kind) {
        case RegexNode::Kind::Empty:
            break;
        case RegexNode::Kind::Epsilon:
            s.nullable = true;
            break;
        case RegexNode::Kind::Letter:
            s.first.insert(n.pos);
            s.last.insert(n.pos);
            break;
        case RegexNode::Kind::Concat: {
            auto l = glushkov(*n.left, follow);
            auto r = glushkov(*n.right, follow);
            for (auto p : l.last)
                for (auto q : r.first) follow[p].insert(q);
            s.nullable = l.nullable && r.nullable;
            s.first = l.first;
            if (l.nullable) s.first.insert(r.first.begin(), r.first.end());
            s.last = r.last;
            if (r.nullable) s.last.insert(l.last.begin(), l.last.end());
            break;
        }
        case RegexNode::Kind::Alt: {
            auto l = glushkov(*n.left, follow);
            auto r = glushkov(*n.right, follow);
            s.nullable = l.nullable || r.nullable;
            s.first = l.first;
            s.first.insert(r.first.begin(), r.first.end());
            s.last = l.last;
            s.last.insert(r.last.begin(), r.last.end());
            break;
        }
        case RegexNode::Kind::Star:
        case RegexNode::Kind::Plus:
        case RegexNode::Kind::Opt: {
            auto l = glushkov(*n.left, follow);
            if (n.kind != RegexNode::Kind::Opt)
                for (auto p : l.last)
                    for (auto q : l.first) follow[p].insert(q);
            s.nullable = n.kind == RegexNode::Kind::Plus ? l.nullable : true;
            s.first = l.first;
            s.last = l.last;
            break;
        }
    }
    return s;
}

}  // namespace

Nfa parse_regex(std::string_view pattern) {
    RegexParser parser(pattern);
    auto tree = parser.parse();
    auto& positions = parser.positions();

    std::vector<std::set<std::size_t>> follow(positions.size());
    GlushkovSets sets = glushkov(*tree, follow);

    Nfa nfa;
    nfa.states = static_cast<std::uint32_t>(positions.size() + 1);
    nfa.initial = 0;  // state p+1 corresponds to position p
    std::set<char> letters;
    for (char c : positions) letters.insert(c);
    nfa.alphabet.assign(letters.begin(), letters.end());

    for (auto q : sets.first)
        nfa.transitions.push_back({0, positions[q], static_cast<std::uint32_t>(q + 1)});
    for (std::size_t p = 0; p < positions.size(); ++p)
        for (auto q : follow[p])
            nfa.transitions.push_back({static_cast<std::uint32_t>(p + 1),
                                       positions[q],
                                       static_cast<std::uint32_t>(q + 1)});
    if (sets.nullable) nfa.finals.push_back(0);
    for (auto p : sets.last) nfa.finals.push_back(static_cast<std::uint32_t>(p + 1));
    std::sort(nfa.finals.begin(), nfa.finals.end());
    nfa.finals.erase(std::unique(nfa.finals.begin(), nfa.finals.end()),
                     nfa.finals.end());
    return nfa;
}

// ---------------------------------------------------------------------------
// Boolean matrices

BoolMatrix::BoolMatrix(std::uint32_t dim)
    : dim_(dim), row_words_((dim + 63) / 64), bits_(static_cast<std::size_t>(dim) * row_words_, 0) {}

BoolMatrix BoolMatrix::identity(std::uint32_t dim) {
    BoolMatrix m(dim);
    for (std::uint32_t i = 0; i < dim; ++i) m.set(i, i);
    return m;
}

bool BoolMatrix::get(std::uint32_t i, std::uint32_t j) const {
    return (bits_[static_cast<std::size_t>(i) * row_words_ + j / 64] >> (j % 64)) & 1;
}

void BoolMatrix::set(std::uint32_t i, std::uint32_t j, bool value) {
    auto& word = bits_[static_cast<std::size_t>(i) * row_words_ + j / 64];
    if (value)
        word |= std::uint64_t{1} << (j % 64);
    else
        word &= ~(std::uint64_t{1} << (j % 64));
}

BoolMatrix BoolMatrix::operator*(const BoolMatrix& o) const {
    BoolMatrix out(dim_);
    for (std::uint32_t i = 0; i < dim_; ++i) {
        std::uint64_t* out_row = &out.bits_[static_cast<std::size_t>(i) * row_words_];
        for (std::uint32_t w = 0; w < row_words_; ++w) {
            std::uint64_t bitsw = bits_[static_cast<std::size_t>(i) * row_words_ + w];
            while (bitsw) {
                std::uint32_t j = w * 64 + static_cast<std::uint32_t>(__builtin_ctzll(bitsw));
                bitsw &= bitsw - 1;
                const std::uint64_t* o_row = &o.bits_[static_cast<std::size_t>(j) * row_words_];
                for (std::uint32_t v = 0; v < row_words_; ++v) out_row[v] |= o_row[v];
            }
        }
    }
    return out;
}

std::size_t BoolMatrix::hash() const {
    std::size_t h = dim_;
    for (auto w : bits_) h = h * 1099511628211ull + w;
    return h;
}

std::string BoolMatrix::render_rows() const {
    std::string out;
    for (std::uint32_t i = 0; i < dim_; ++i) {
        if (i) out += '|';
        for (std::uint32_t j = 0; j < dim_; ++j) out += get(i, j) ? '1' : '0';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Union automaton and characteristic matrices

std::optional<std::size_t> UnionAutomaton::letter_index(char c) const {
    auto pos = alphabet.find(c);
    if (pos == std::string::npos) return std::nullopt;
    return pos;
}

UnionAutomaton build_union(std::span<const Nfa> nfas, std::string alphabet) {
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());

    UnionAutomaton ua;
    ua.alphabet = std::move(alphabet);
    for (const auto& nfa : nfas) {
        ua.offsets.push_back(ua.states);
        ua.states += nfa.states;
    }
    for (std::size_t a = 0; a < ua.alphabet.size(); ++a) {
        BoolMatrix m(ua.states);
        for (std::size_t i = 0; i < nfas.size(); ++i) {
            std::uint32_t off = ua.offsets[i];
            for (const auto& t : nfas[i].transitions)
                if (t.letter == ua.alphabet[a]) m.set(off + t.from, off + t.to);
        }
        ua.letter_matrix.push_back(std::move(m));
    }
    return ua;
}

BoolMatrix char_matrix(const UnionAutomaton& ua, std::string_view word) {
    BoolMatrix m = BoolMatrix::identity(ua.states);
    for (char c : word) {
        auto idx = ua.letter_index(c);
        if (!idx)
            throw std::invalid_argument(std::string("letter outside alphabet: ") + c);
        m = m * ua.letter_matrix[*idx];
    }
    return m;
}

MonoidClosure realizable_matrices(const UnionAutomaton& ua, std::size_t cap) {
    MonoidClosure cl;
    if (cap == 0) throw std::invalid_argument("monoid cap must be positive");

    auto add = [&](BoolMatrix m, std::string w) -> std::optional<std::uint32_t> {
        auto it = cl.index.find(m);
        if (it != cl.index.end()) return it->second;
        if (cl.elements.size() >= cap) {
            cl.capped = true;
            return std::nullopt;
        }
        std::uint32_t id = static_cast<std::uint32_t>(cl.elements.size());
        cl.index.emplace(m, id);
        cl.elements.push_back(std::move(m));
        cl.witness.push_back(std::move(w));
        return id;
    };

    add(BoolMatrix::identity(ua.states), "");
    for (std::size_t i = 0; i < cl.elements.size(); ++i) {
        cl.letter_succ.emplace_back();
        for (std::size_t a = 0; a < ua.alphabet.size(); ++a) {
            BoolMatrix prod = cl.elements[i] * ua.letter_matrix[a];
            std::string w = cl.witness[i] + ua.alphabet[a];
            auto id = add(std::move(prod), std::move(w));
            cl.letter_succ.back().push_back(id.value_or(UINT32_MAX));
        }
    }
    return cl;
}

std::optional<std::uint32_t> MonoidClosure::find(const BoolMatrix& m) const {
    auto it = index.find(m);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// Length sets

ProgressionSet ProgressionSet::all_naturals() {
    ProgressionSet s;
    s.progressions.push_back({0, 1});
    return s;
}

bool ProgressionSet::contains(std::uint64_t n) const {
    for (const auto& p : progressions) {
        if (n == p.offset) return true;
        if (p.period > 0 && n > p.offset && (n - p.offset) % p.period == 0)
            return true;
    }
    return false;
}

void ProgressionSet::normalize() {
    std::sort(progressions.begin(), progressions.end());
    progressions.erase(std::unique(progressions.begin(), progressions.end()),
                       progressions.end());
    // Drop progressions subsumed by one with the same period and congruent
    // smaller offset, and singletons covered by some progression.
    std::vector<Progression> kept;
    for (const auto& p : progressions) {
        bool subsumed = false;
        for (const auto& q : progressions) {
            if (q == p) continue;
            if (q.period > 0 && p.offset >= q.offset &&
                (p.offset - q.offset) % q.period == 0 &&
                (p.period == q.period || p.period == 0)) {
                // Everything p denotes is inside q (same stride or singleton).
                if (p.period == 0 || !(q.offset == p.offset && q.period == p.period)) {
                    subsumed = true;
                    break;
                }
            }
        }
        if (!subsumed) kept.push_back(p);
    }
    progressions = std::move(kept);
}

namespace {

// Unary reachability: per-step successor sets on the NFA's digraph.
struct UnaryGraph {
    std::uint32_t states;
    std::vector<std::vector<std::uint32_t>> succ;

    explicit UnaryGraph(const Nfa& nfa) : states(nfa.states), succ(nfa.states) {
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
        for (const auto& t : nfa.transitions)
            if (seen.emplace(t.from, t.to).second) succ[t.from].push_back(t.to);
    }
};

// dist[k][q] = q reachable from sources in exactly k steps, k <= horizon.
std::vector<std::vector<bool>> exact_steps(const UnaryGraph& g,
                                           const std::vector<bool>& sources,
                                           std::size_t horizon,
                                           bool reverse = false) {
    std::vector<std::vector<std::uint32_t>> succ(g.states);
    if (reverse) {
        for (std::uint32_t s = 0; s < g.states; ++s)
            for (auto t : g.succ[s]) succ[t].push_back(s);
    } else {
        succ = g.succ;
    }
    std::vector<std::vector<bool>> dist;
    dist.push_back(sources);
    for (std::size_t k = 1; k <= horizon; ++k) {
        std::vector<bool> next(g.states, false);
        const auto& prev = dist.back();
        for (std::uint32_t s = 0; s < g.states; ++s)
            if (prev[s])
                for (auto t : succ[s]) next[t] = true;
        dist.push_back(std::move(next));
    }
    return dist;
}

}  // namespace

ProgressionSet length_set(const Nfa& nfa) {
    ProgressionSet out;
    if (nfa.states == 0) return out;
    if (nfa.states > 256)
        throw std::runtime_error("length_set: automaton too large");

    UnaryGraph g(nfa);
    std::size_t r = nfa.states;
    std::size_t horizon = 2 * r * r;

    std::vector<bool> init(r, false);
    init[nfa.initial] = true;
    std::vector<bool> fin(r, false);
    for (auto f : nfa.finals) fin[f] = true;

    auto fwd = exact_steps(g, init, horizon);
    auto bwd = exact_steps(g, fin, r * r, /*reverse=*/true);

    // Exact lengths up to 2r^2.
    for (std::size_t k = 0; k <= horizon; ++k) {
        for (std::uint32_t q = 0; q < r; ++q) {
            if (fwd[k][q] && fin[q]) {
                out.progressions.push_back({k, 0});
                break;
            }
        }
    }

    // Cycle pumping: for q with a closed walk of length c <= r, reachable in
    // d <= r^2 steps and co-reachable in e <= r^2 steps, the construction
    // contributes every progression (d + e, c). Progressions with the same
    // period and congruent offsets coincide above their offsets, so it is
    // enough to keep, per residue class mod c, the smallest achieved d + e.
    BoolMatrix adj(static_cast<std::uint32_t>(r));
    for (std::uint32_t s = 0; s < r; ++s)
        for (auto t : g.succ[s]) adj.set(s, t);

    std::vector<std::vector<bool>> cyc(r + 1, std::vector<bool>(r, false));
    BoolMatrix power = adj;
    for (std::size_t c = 1; c <= r; ++c) {
        for (std::uint32_t q = 0; q < r; ++q) cyc[c][q] = power.get(q, q);
        if (c < r) power = power * adj;
    }

    const std::size_t kNoSum = SIZE_MAX;
    for (std::uint32_t q = 0; q < r; ++q) {
        std::vector<std::size_t> ds, es;
        for (std::size_t d = 0; d <= r * r; ++d)
            if (fwd[d][q]) ds.push_back(d);
        for (std::size_t e = 0; e <= r * r; ++e)
            if (bwd[e][q]) es.push_back(e);
        if (ds.empty() || es.empty()) continue;
        for (std::size_t c = 1; c <= r; ++c) {
            if (!cyc[c][q]) continue;
            std::vector<std::size_t> dmin(c, kNoSum), emin(c, kNoSum);
            for (auto d : ds) dmin[d % c] = std::min(dmin[d % c], d);
            for (auto e : es) emin[e % c] = std::min(emin[e % c], e);
            std::vector<std::size_t> best(c, kNoSum);
            for (std::size_t i = 0; i < c; ++i) {
                if (dmin[i] == kNoSum) continue;
                for (std::size_t j = 0; j < c; ++j) {
                    if (emin[j] == kNoSum) continue;
                    std::size_t sum = dmin[i] + emin[j];
                    best[sum % c] = std::min(best[sum % c], sum);
                }
            }
            for (std::size_t rho = 0; rho < c; ++rho)
                if (best[rho] != kNoSum) out.progressions.push_back({best[rho], c});
        }
    }
    out.normalize();
    return out;
}

ProgressionSet matrix_language_length_set(const UnionAutomaton& ua,
                                          const MonoidClosure& closure,
                                          const BoolMatrix& m) {
    if (closure.capped)
        throw std::runtime_error("matrix_language_length_set: monoid closure capped");
    auto target = closure.find(m);
    if (!target)
        throw std::runtime_error("matrix_language_length_set: matrix not realizable");

    Nfa monoid_nfa;
    monoid_nfa.states = static_cast<std::uint32_t>(closure.elements.size());
    monoid_nfa.alphabet = ua.alphabet;
    monoid_nfa.initial = 0;
    monoid_nfa.finals = {*target};
    for (std::uint32_t e = 0; e < monoid_nfa.states; ++e)
        for (std::size_t a = 0; a < ua.alphabet.size(); ++a)
            monoid_nfa.transitions.push_back(
                {e, ua.alphabet[a], closure.letter_succ[e][a]});
    return length_set(monoid_nfa);
}

}  // namespace weq
