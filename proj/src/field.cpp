#include "polylab/field.hpp"

#include <string>

namespace polylab {

bool is_prime(int x) {
    if (x < 2) return false;
    for (int d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

FieldSpec::FieldSpec(int prime) {
    if (prime < 2 || prime > kMaxPrime)
        throw precondition_error("field modulus must be in [2, " + std::to_string(kMaxPrime) +
                                 "], got " + std::to_string(prime));
    if (!is_prime(prime))
        throw precondition_error("field modulus must be prime, got " + std::to_string(prime));
    p = static_cast<std::uint8_t>(prime);
}

namespace fp {

std::uint8_t pow(std::uint8_t a, unsigned e, std::uint8_t p) {
    std::uint8_t r = 1 % p;
    std::uint8_t base = a;
    while (e) {
        if (e & 1) r = mul(r, base, p);
        base = mul(base, base, p);
        e >>= 1;
    }
    return r;
}

std::uint8_t inv(std::uint8_t a, std::uint8_t p) {
    if (a == 0) throw precondition_error("inverse of zero in F_" + std::to_string(p));
    return pow(a, static_cast<unsigned>(p - 2), p);
}

std::uint8_t reduce(long long v, std::uint8_t p) {
    long long r = v % p;
    if (r < 0) r += p;
    return static_cast<std::uint8_t>(r);
}

}  // namespace fp

namespace {

void check_same_field(const FieldElement& a, const FieldElement& b) {
    if (a.field != b.field)
        throw field_mismatch("operands live in different prime fields (F_" +
                             std::to_string(a.field.p) + " vs F_" + std::to_string(b.field.p) + ")");
}

}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same_field(*this, o);
    return {field, fp::add(value, o.value, field.p)};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same_field(*this, o);
    return {field, fp::sub(value, o.value, field.p)};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same_field(*this, o);
    return {field, fp::mul(value, o.value, field.p)};
}

FieldElement FieldElement::operator-() const { return {field, fp::neg(value, field.p)}; }

FieldElement FieldElement::inv() const { return {field, fp::inv(value, field.p)}; }

Matrix::Matrix(FieldSpec field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

Matrix Matrix::identity(FieldSpec field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.set(c, r, at(r, c));
    return t;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (field_ != o.field_) throw field_mismatch("matrix sum across different fields");
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw precondition_error("matrix sum with mismatched dimensions");
    Matrix s(field_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = fp::add(a_[i], o.a_[i], field_.p);
    return s;
}

int matrix_rank(const Matrix& m) {
    const std::uint8_t p = m.field().p;
    std::vector<std::uint8_t> a = m.data();
    const std::size_t rows = m.rows(), cols = m.cols();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot * cols + col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(pivot * cols),
                         a.begin() + static_cast<std::ptrdiff_t>((pivot + 1) * cols),
                         a.begin() + static_cast<std::ptrdiff_t>(rank * cols));
        const std::uint8_t piv_inv = fp::inv(a[rank * cols + col], p);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || a[r * cols + col] == 0) continue;
            const std::uint8_t f = fp::mul(a[r * cols + col], piv_inv, p);
            for (std::size_t c = col; c < cols; ++c)
                a[r * cols + c] = fp::sub(a[r * cols + c], fp::mul(f, a[rank * cols + c], p), p);
        }
        ++rank;
    }
    return static_cast<int>(rank);
}

int gf2_rank(std::vector<std::uint64_t> rows) {
    int rank = 0;
    for (int bit = 0; bit < 64 && rank < static_cast<int>(rows.size()); ++bit) {
        const std::uint64_t mask = 1ULL << bit;
        std::size_t pivot = static_cast<std::size_t>(rank);
        while (pivot < rows.size() && !(rows[pivot] & mask)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[static_cast<std::size_t>(rank)]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != static_cast<std::size_t>(rank) && (rows[r] & mask))
                rows[r] ^= rows[static_cast<std::size_t>(rank)];
        ++rank;
    }
    return rank;
}

}  // namespace polylab
