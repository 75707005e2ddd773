// pad.hpp -- linear integer arithmetic with divisibility: terms, formulas,
// evaluation, bounded model search, SMT-LIB export.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace weq {

using Assignment = std::map<std::string, std::int64_t>;

/// Linear polynomial with integer coefficients over named variables.
struct LinTerm {
    std::int64_t constant{0};
    std::map<std::string, std::int64_t> coeffs;

    LinTerm() = default;
    explicit LinTerm(std::int64_t c) : constant(c) {}

    static LinTerm var(std::string name, std::int64_t coeff = 1);

    LinTerm operator+(const LinTerm& o) const;
    LinTerm operator-(const LinTerm& o) const;
    LinTerm operator*(std::int64_t k) const;

    bool is_constant() const { return coeffs.empty(); }
    /// Evaluates under mu; throws std::out_of_range on a missing variable.
    std::int64_t eval(const Assignment& mu) const;
    std::string str() const;
};

/// Formulas over nonnegative integer variables. Atoms are f <= g, f = g and
/// the divisibility predicate f | g; connectives are conjunction, disjunction
/// and existential quantification. There is no negation.
class PadFormula {
  public:
    enum class Kind { True, False, Le, Eq, Div, And, Or, Exists };

    PadFormula() : PadFormula(truth(true)) {}

    static PadFormula truth(bool value);
    static PadFormula le(LinTerm lhs, LinTerm rhs);
    static PadFormula eq(LinTerm lhs, LinTerm rhs);
    /// Divisibility: lhs | rhs, with the convention 0 | g iff g = 0.
    static PadFormula div(LinTerm lhs, LinTerm rhs);
    static PadFormula conj(std::vector<PadFormula> parts);
    static PadFormula disj(std::vector<PadFormula> parts);
    static PadFormula exists(std::string var, PadFormula body);

    Kind kind() const { return node_->kind; }
    const LinTerm& lhs() const { return node_->lhs; }
    const LinTerm& rhs() const { return node_->rhs; }
    const std::vector<PadFormula>& children() const { return node_->children; }
    const std::string& bound_var() const { return node_->var; }
    const PadFormula& body() const { return node_->children.front(); }

    /// Free variables (bound occurrences excluded).
    std::set<std::string> free_vars() const;
    std::string str() const;

  private:
    struct Node {
        Kind kind;
        LinTerm lhs, rhs;
        std::vector<PadFormula> children;
        std::string var;
    };
    explicit PadFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct EvalResult {
    bool value{false};
    /// False when an existential search exhausted the witness bound without
    /// settling the answer.
    bool certain{true};
};

/// Standard semantics over nonnegative assignments; existential quantifiers
/// are searched over [0, witness_bound].
EvalResult eval(const PadFormula& phi, const Assignment& mu,
                std::int64_t witness_bound);

struct BoundedSatResult {
    std::optional<Assignment> model;  // over the free variables of the input
    std::int64_t bound{0};
    bool sat() const { return model.has_value(); }
};

/// Searches free and existential variables over [0, bound]. A missing model
/// is not an unsatisfiability proof.
BoundedSatResult bounded_sat(const PadFormula& phi, std::int64_t bound);

/// SMT-LIB 2 script over (quantified) nonlinear integer arithmetic. Each
/// divisibility atom f | g is rendered as an existential multiplier k with
/// g = k * f; formula variables are constrained to be >= 0.
std::string export_smtlib(const PadFormula& phi);

/// Parses `(define-fun name () Int n)` entries from solver model output.
/// Throws std::runtime_error on malformed input.
Assignment parse_smtlib_model(std::string_view text);

}  // namespace weq
