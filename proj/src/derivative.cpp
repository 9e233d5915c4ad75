#include "polylab/derivative.hpp"

#include <complex>

#include "polylab/errors.hpp"
#include "polylab/transform.hpp"

namespace polylab {

Polynomial derivative(const Polynomial& q, const Point& a) {
    return q.shift(a) - q;
}

FieldElement cube_sum(const Polynomial& q, const Point& x, const std::vector<Point>& ys) {
    const std::size_t k = ys.size();
    if (k == 0) throw precondition_error("cube_sum needs at least one direction");
    if (k > 30) throw precondition_error("cube_sum: cube dimension too large");
    const std::uint8_t p = q.field().p;
    const std::size_t n = x.size();
    if (static_cast<int>(n) != q.n_vars()) throw precondition_error("point arity mismatch");
    for (const auto& y : ys)
        if (y.size() != n) throw precondition_error("direction arity mismatch");

    const std::uint8_t minus_one = fp::neg(1, p);
    std::uint8_t acc = 0;
    Point pt(n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        pt = x;
        int bits = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (!(mask >> i & 1)) continue;
            ++bits;
            for (std::size_t j = 0; j < n; ++j) pt[j] = fp::add(pt[j], ys[i][j], p);
        }
        const std::uint8_t sign = (bits % 2 == 0) ? std::uint8_t{1} : minus_one;
        acc = fp::add(acc, fp::mul(sign, q.evaluate_raw(pt), p), p);
    }
    return {q.field(), acc};
}

bool degree_le(const Polynomial& q, int d, DegreeTestMode mode, Rng& rng, int trials) {
    if (d < 0) throw precondition_error("degree bound must be nonnegative");
    if (mode == DegreeTestMode::formal) {
        const Polynomial r = q.is_canonical() ? q : reduce_frobenius(q);
        return r.degree() <= d;
    }
    const std::uint8_t p = q.field().p;
    const int n = q.n_vars();
    for (int t = 0; t < trials; ++t) {
        Point x = rng.point(p, n);
        std::vector<Point> ys;
        ys.reserve(static_cast<std::size_t>(d) + 1);
        for (int i = 0; i <= d; ++i) ys.push_back(rng.point(p, n));
        if (cube_sum(q, x, ys).value != 0) return false;
    }
    return true;
}

BlockPolynomial BlockPolynomial::single_block(const Polynomial& q) {
    return {q.field(), q.n_vars(), 1, q};
}

BlockPolynomial BlockPolynomial::make(FieldSpec field, int width, int blocks, Polynomial body) {
    if (body.n_vars() != width * blocks)
        throw precondition_error("block polynomial body arity does not match blocks*width");
    if (body.field() != field) throw field_mismatch("block polynomial body field mismatch");
    return {field, width, blocks, std::move(body)};
}

namespace {

// Embeds an m-variable polynomial into n_out variables (same indices).
Polynomial embed(const Polynomial& q, int n_out) {
    std::vector<LinearSub> subs(static_cast<std::size_t>(q.n_vars()));
    for (int i = 0; i < q.n_vars(); ++i) subs[static_cast<std::size_t>(i)].vars = {{i, 1}};
    return q.substitute(n_out, subs);
}

}  // namespace

BlockPolynomial block_derive(const BlockPolynomial& h, int r) {
    if (r < 0 || r > h.blocks)
        throw precondition_error("block_derive: derivation order exceeds block count");
    const int w = h.width;
    const int n_out = (h.blocks + r) * w;

    Polynomial acc = Polynomial::zero(h.field, n_out);
    for (std::uint32_t wmask = 0; wmask < (1u << r); ++wmask) {
        std::vector<LinearSub> subs(static_cast<std::size_t>(h.total_vars()));
        for (int v = 0; v < h.total_vars(); ++v) {
            auto& s = subs[static_cast<std::size_t>(v)];
            s.vars = {{v, 1}};
            const int blk = v / w;
            if (blk < r && (wmask >> blk & 1)) s.vars.push_back({(h.blocks + blk) * w + v % w, 1});
        }
        Polynomial term = h.body.substitute(n_out, subs);
        const bool odd = __builtin_popcount(wmask) % 2 == 1;
        acc = odd ? acc - term : acc + term;
    }
    return BlockPolynomial{h.field, w, h.blocks + r, std::move(acc)};
}

BlockPolynomial block_derive_single(const BlockPolynomial& h, int block) {
    if (block < 0 || block >= h.blocks)
        throw precondition_error("block_derive_single: block index out of range");
    const int w = h.width;
    const int n_out = (h.blocks + 1) * w;
    std::vector<LinearSub> subs(static_cast<std::size_t>(h.total_vars()));
    for (int v = 0; v < h.total_vars(); ++v) {
        auto& s = subs[static_cast<std::size_t>(v)];
        s.vars = {{v, 1}};
        if (v / w == block) s.vars.push_back({h.blocks * w + v % w, 1});
    }
    Polynomial shifted = h.body.substitute(n_out, subs);
    Polynomial base = embed(h.body, n_out);
    return BlockPolynomial{h.field, w, h.blocks + 1, shifted - base};
}

namespace {

// Symmetric matrix of the quadratic part: entry (s,t) is the coefficient of
// x_s*x_t for s != t and twice the coefficient of x_s^2 on the diagonal,
// i.e. B + B^t. The gradient of the quadratic part at y is (B + B^t) y.
Matrix polar_matrix(const Polynomial& g) {
    const int n = g.n_vars();
    Matrix m(g.field(), static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (const auto& t : g.terms()) {
        if (t.total_degree() != 2) continue;
        int a = -1, b = -1;
        for (int i = 0; i < n; ++i) {
            if (t.exps[static_cast<std::size_t>(i)] == 1) (a < 0 ? a : b) = i;
            if (t.exps[static_cast<std::size_t>(i)] == 2) a = b = i;
        }
        if (a == b) {
            m.set(static_cast<std::size_t>(a), static_cast<std::size_t>(a),
                  m.at(static_cast<std::size_t>(a), static_cast<std::size_t>(a)) + 2L * t.coeff);
        } else {
            m.set(static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                  m.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) + t.coeff);
            m.set(static_cast<std::size_t>(b), static_cast<std::size_t>(a),
                  m.at(static_cast<std::size_t>(b), static_cast<std::size_t>(a)) + t.coeff);
        }
    }
    return m;
}

double pow_neg(std::uint8_t p, int rank) {
    double v = 1.0;
    for (int i = 0; i < rank; ++i) v /= p;
    return v;
}

// E over b of 2^{-rank(M(b))} for cubic g over F_2, where M(b) is the
// symmetric matrix of the quadratic part of g(X+b)-g(X). The quadratic part
// receives contributions from cubic terms only, so M(b) = sum_u b_u T_u
// with T_u built from the cubic support sets.
double cubic_leaf_f2(const Polynomial& g, std::size_t budget) {
    const int n = g.n_vars();
    const std::size_t size = require_table_size(2, n, budget, "gowers_derivative_bias");
    std::vector<std::vector<std::uint64_t>> tensor(
        static_cast<std::size_t>(n), std::vector<std::uint64_t>(static_cast<std::size_t>(n), 0));
    for (const auto& t : g.terms()) {
        if (t.total_degree() != 3) continue;
        int idx[3], c = 0;
        for (int i = 0; i < n; ++i)
            if (t.exps[static_cast<std::size_t>(i)]) idx[c++] = i;
        for (int u = 0; u < 3; ++u) {
            const int uu = idx[u], s = idx[(u + 1) % 3], tt = idx[(u + 2) % 3];
            tensor[static_cast<std::size_t>(s)][static_cast<std::size_t>(uu)] ^= 1ULL << tt;
            tensor[static_cast<std::size_t>(tt)][static_cast<std::size_t>(uu)] ^= 1ULL << s;
        }
    }

    std::vector<std::uint64_t> m(static_cast<std::size_t>(n), 0);
    double acc = 1.0;  // b = 0 gives the zero matrix
    std::size_t gray = 0;
    for (std::size_t i = 1; i < size; ++i) {
        const std::size_t g2 = i ^ (i >> 1);
        const int bit = __builtin_ctzll(gray ^ g2);
        gray = g2;
        for (int row = 0; row < n; ++row)
            m[static_cast<std::size_t>(row)] ^= tensor[static_cast<std::size_t>(row)]
                                                      [static_cast<std::size_t>(bit)];
        acc += pow_neg(2, gf2_rank(m));
    }
    return acc / static_cast<double>(size);
}

double gowers_rec(const Polynomial& g, int r, std::size_t budget) {
    if (g.is_zero() || g.degree() < r) return 1.0;
    const std::uint8_t p = g.field().p;
    const int n = g.n_vars();

    if (r == 1) {
        const FunctionTable t = tabulate(g, budget);
        std::vector<std::size_t> counts(p, 0);
        for (auto v : t.values) ++counts[v];
        std::complex<double> b = 0;
        for (int v = 0; v < p; ++v)
            b += static_cast<double>(counts[static_cast<std::size_t>(v)]) *
                 root_of_unity(static_cast<std::uint8_t>(v), p);
        b /= static_cast<double>(t.size());
        return std::norm(b);
    }

    if (g.degree() == 2) {
        // First derivative is linear in X with gradient (B+B^t)y, so the
        // two-fold derivative bias is Pr_y[(B+B^t)y = 0] = p^{-rank}.
        return pow_neg(p, matrix_rank(polar_matrix(g)));
    }

    if (r == 2) {
        const FunctionTable t = tabulate(g, budget);
        std::vector<std::complex<double>> f(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) f[i] = root_of_unity(t.values[i], p);
        group_transform(f, p);
        const double norm = static_cast<double>(t.size());
        double acc = 0;
        for (const auto& c : f) {
            const double m2 = std::norm(c) / (norm * norm);
            acc += m2 * m2;
        }
        return acc;
    }

    if (p == 2 && g.degree() == 3 && r == 3 && n <= 63) return cubic_leaf_f2(g, budget);

    const std::size_t size = require_table_size(p, n, budget, "gowers_derivative_bias");
    double acc = 0;
    for (std::size_t i = 0; i < size; ++i)
        acc += gowers_rec(derivative(g, point_from_index(i, p, n)), r - 1, budget);
    return acc / static_cast<double>(size);
}

}  // namespace

double gowers_derivative_bias(const Polynomial& q, int d, std::size_t budget) {
    if (d < 1) throw precondition_error("gowers_derivative_bias requires d >= 1");
    const Polynomial g = q.is_canonical() ? q : reduce_frobenius(q);
    return gowers_rec(g, d, budget);
}

DerivativeSpaceSample der_space_sample(const std::vector<Polynomial>& base, int C,
                                       std::size_t count, Rng& rng) {
    if (C < 0) throw precondition_error("derivative depth must be nonnegative");
    DerivativeSpaceSample s{base, C, {}};
    if (base.empty()) return s;
    const std::uint8_t p = base[0].field().p;
    const int n = base[0].n_vars();
    s.members.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        DerivativeSpaceMember m;
        if (C == 0) {
            m.base_index = i % base.size();
        } else {
            m.base_index = rng.below(base.size());
            const std::uint64_t len = rng.below(static_cast<std::uint64_t>(C) + 1);
            for (std::uint64_t j = 0; j < len; ++j) m.directions.push_back(rng.point(p, n));
        }
        m.poly = base[m.base_index];
        for (const auto& a : m.directions) m.poly = derivative(m.poly, a);
        s.members.push_back(std::move(m));
    }
    return s;
}

}  // namespace polylab
