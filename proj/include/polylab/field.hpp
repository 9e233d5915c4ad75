#pragma once

#include <cstdint>
#include <vector>

#include "polylab/errors.hpp"

namespace polylab {

/// Prime field F_p. The modulus is capped at 61 so that dense p^n value
/// tables stay within the desk-scale memory budget.
struct FieldSpec {
    std::uint8_t p = 2;

    FieldSpec() = default;
    explicit FieldSpec(int prime);

    bool operator==(const FieldSpec&) const = default;
};

constexpr int kMaxPrime = 61;

bool is_prime(int x);

/// Raw arithmetic on reduced residues. Hot paths use these directly;
/// FieldElement wraps them with field-consistency checks.
namespace fp {

inline std::uint8_t add(std::uint8_t a, std::uint8_t b, std::uint8_t p) {
    int s = a + b;
    return static_cast<std::uint8_t>(s >= p ? s - p : s);
}

inline std::uint8_t sub(std::uint8_t a, std::uint8_t b, std::uint8_t p) {
    int s = a - b;
    return static_cast<std::uint8_t>(s < 0 ? s + p : s);
}

inline std::uint8_t neg(std::uint8_t a, std::uint8_t p) {
    return a == 0 ? 0 : static_cast<std::uint8_t>(p - a);
}

inline std::uint8_t mul(std::uint8_t a, std::uint8_t b, std::uint8_t p) {
    return static_cast<std::uint8_t>((a * b) % p);
}

std::uint8_t pow(std::uint8_t a, unsigned e, std::uint8_t p);
std::uint8_t inv(std::uint8_t a, std::uint8_t p);
std::uint8_t reduce(long long v, std::uint8_t p);

}  // namespace fp

/// A value in F_p that remembers its field. Mixing fields is a hard error.
struct FieldElement {
    std::uint8_t value = 0;
    FieldSpec field;

    FieldElement() = default;
    FieldElement(FieldSpec f, long long v) : value(fp::reduce(v, f.p)), field(f) {}

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement inv() const;

    bool operator==(const FieldElement&) const = default;
};

/// Dense matrix over F_p, stored row-major as reduced residues.
class Matrix {
public:
    Matrix(FieldSpec field, std::size_t rows, std::size_t cols);

    static Matrix identity(FieldSpec field, std::size_t n);

    FieldSpec field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint8_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, long long v) { a_[r * cols_ + c] = fp::reduce(v, field_.p); }

    Matrix transpose() const;
    Matrix operator+(const Matrix& o) const;

    const std::vector<std::uint8_t>& data() const { return a_; }

private:
    FieldSpec field_;
    std::size_t rows_, cols_;
    std::vector<std::uint8_t> a_;
};

/// Rank over F_p by Gaussian elimination.
int matrix_rank(const Matrix& m);

/// Rank of an n x n GF(2) matrix given as packed rows (bit j of rows[i] is entry (i,j)).
int gf2_rank(std::vector<std::uint64_t> rows);

}  // namespace polylab
