#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "polylab/exec.hpp"
#include "polylab/field.hpp"

namespace polylab {

/// A point of F_p^n as raw coordinate values (coordinate 0 first).
using Point = std::vector<std::uint8_t>;

std::size_t index_from_point(const Point& x, std::uint8_t p);
Point point_from_index(std::size_t idx, std::uint8_t p, int n);

/// One monomial: exponent vector of length n plus a nonzero coefficient.
/// Canonical terms have every exponent below p (x^p = x on F_p).
struct Term {
    std::vector<std::uint8_t> exps;
    std::uint8_t coeff = 1;

    int total_degree() const;
    bool operator==(const Term&) const = default;
};

/// Affine image of one variable under a substitution: sum of (variable,
/// coefficient) pairs plus a constant.
struct LinearSub {
    std::vector<std::pair<int, std::uint8_t>> vars;
    std::uint8_t constant = 0;
};

/// Multivariate polynomial over F_p viewed as a function on F_p^n.
///
/// The canonical form is Frobenius-reduced (all exponents < p), merged, and
/// ordered graded-lexicographically, so two polynomials are equal as
/// functions iff their canonical forms are identical. The zero polynomial
/// has an empty term list and degree 0 by convention.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(FieldSpec field, int n) : field_(field), n_(n) {}

    /// Canonicalizes: Frobenius-reduces exponents, merges duplicates,
    /// drops zero coefficients, sorts graded-lex.
    static Polynomial from_terms(FieldSpec field, int n, std::vector<Term> terms);

    /// Merges and sorts but keeps exponents as given (possibly >= p).
    /// Needed to exercise reduce_frobenius; all arithmetic canonicalizes.
    static Polynomial unreduced(FieldSpec field, int n, std::vector<Term> terms);

    static Polynomial zero(FieldSpec field, int n) { return Polynomial(field, n); }
    static Polynomial constant(FieldSpec field, int n, long long c);
    static Polynomial variable(FieldSpec field, int n, int i);

    FieldSpec field() const { return field_; }
    int n_vars() const { return n_; }
    const std::vector<Term>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::uint8_t constant_value() const;  // value at 0 of a constant polynomial
    int degree() const;                   // 0 for the zero polynomial
    bool is_canonical() const;

    std::uint8_t evaluate_raw(const Point& x) const;
    FieldElement evaluate(const Point& x) const { return {field_, evaluate_raw(x)}; }

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial scaled(std::uint8_t c) const;

    /// q(X + a) for a constant offset a of length n.
    Polynomial shift(const Point& a) const;

    /// Replaces variable i by subs[i] over a fresh variable set of size n_out.
    Polynomial substitute(int n_out, const std::vector<LinearSub>& subs) const;

    std::string to_string() const;

    bool operator==(const Polynomial& o) const {
        return field_ == o.field_ && n_ == o.n_ && terms_ == o.terms_;
    }

private:
    void check_compatible(const Polynomial& o) const;

    FieldSpec field_;
    int n_ = 0;
    std::vector<Term> terms_;  // canonical unless built via unreduced()
};

/// Rewrites exponents via x^p = x until every exponent is below p.
/// The result represents the same function on F_p^n.
Polynomial reduce_frobenius(const Polynomial& q);

/// Parses the polynomial grammar:
///   poly  := term ('+' term)*
///   term  := coeff? ('*'? var)*
///   var   := 'x' index ('^' exp)?
/// with decimal coeff/index/exp and whitespace ignored. Coefficients must
/// lie in [0, p); exponents are Frobenius-reduced.
Polynomial parse_polynomial(std::string_view text, FieldSpec field, int n);

/// Dense value table over F_p^n, indexed little-endian base p
/// (coordinate 0 is the least significant digit).
struct FunctionTable {
    FieldSpec field;
    int nvars = 0;
    std::vector<std::uint8_t> values;

    std::size_t size() const { return values.size(); }
    std::uint8_t at(std::size_t idx) const { return values[idx]; }
    FieldElement at_elem(std::size_t idx) const { return {field, values[idx]}; }

    bool operator==(const FunctionTable&) const = default;
};

/// Exhaustive evaluation of q over all p^n points.
FunctionTable tabulate(const Polynomial& q, std::size_t budget = default_table_budget());

/// The unique canonical polynomial agreeing with the table everywhere
/// (per-axis inverse Vandermonde over F_p).
Polynomial interpolate(const FunctionTable& t);

}  // namespace polylab
