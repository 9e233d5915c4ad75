#pragma once

// Shared test utilities: random instance generation and independent
// brute-force oracles. Oracles here must not share code paths with the
// library routines they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "polylab/poly.hpp"
#include "polylab/rng.hpp"
#include "polylab/transform.hpp"

namespace polylab::testing {

inline Point unit_point(int n, int i, std::uint8_t v = 1) {
    Point e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = v;
    return e;
}

/// Random canonical polynomial of total degree <= d with at most max_terms
/// monomials (possibly fewer after merging).
inline Polynomial random_polynomial(Rng& rng, FieldSpec field, int n, int d,
                                    std::size_t max_terms) {
    std::vector<Term> terms;
    const std::size_t count = rng.below(max_terms + 1);
    for (std::size_t t = 0; t < count; ++t) {
        Term term{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0),
                  static_cast<std::uint8_t>(1 + rng.below(field.p - 1 ? field.p - 1 : 1))};
        int budget = static_cast<int>(rng.below(static_cast<std::uint64_t>(d) + 1));
        while (budget > 0) {
            const auto i = rng.below(static_cast<std::uint64_t>(n));
            const int maxe = std::min<int>(budget, field.p - 1 - term.exps[i]);
            if (maxe <= 0) break;
            const int e = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(maxe)));
            term.exps[i] = static_cast<std::uint8_t>(term.exps[i] + e);
            budget -= e;
        }
        terms.push_back(std::move(term));
    }
    return Polynomial::from_terms(field, n, std::move(terms));
}

/// The symmetric degree-4 polynomial sum of x_i x_j x_k x_l over i<j<k<l.
inline Polynomial s4_polynomial(int n) {
    const FieldSpec f2(2);
    std::vector<Term> terms;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = k + 1; l < n; ++l) {
                    Term t{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0), 1};
                    t.exps[static_cast<std::size_t>(i)] = 1;
                    t.exps[static_cast<std::size_t>(j)] = 1;
                    t.exps[static_cast<std::size_t>(k)] = 1;
                    t.exps[static_cast<std::size_t>(l)] = 1;
                    terms.push_back(std::move(t));
                }
    return Polynomial::from_terms(f2, n, std::move(terms));
}

/// Naive O(p^{2n}) character sums, the oracle for the fast transform.
inline std::vector<std::complex<double>> naive_spectrum(const FunctionTable& t) {
    const std::uint8_t p = t.field.p;
    const int n = t.nvars;
    std::vector<std::complex<double>> out(t.size());
    for (std::size_t ai = 0; ai < t.size(); ++ai) {
        const Point alpha = point_from_index(ai, p, n);
        std::complex<double> s = 0;
        for (std::size_t xi = 0; xi < t.size(); ++xi) {
            const Point x = point_from_index(xi, p, n);
            std::uint8_t dot = 0;
            for (int i = 0; i < n; ++i)
                dot = fp::add(dot,
                              fp::mul(alpha[static_cast<std::size_t>(i)],
                                      x[static_cast<std::size_t>(i)], p),
                              p);
            s += root_of_unity(t.values[xi], p) * std::conj(root_of_unity(dot, p));
        }
        out[ai] = s / static_cast<double>(t.size());
    }
    return out;
}

/// Naive (d+1)-block enumeration of the iterated derivative bias: loops over
/// every (x, y_1..y_d) tuple and sums omega^(sum over I of (-1)^(d-|I|)
/// q(x+y_I)) from the value table alone.
inline double naive_gowers(const FunctionTable& t, int d) {
    const std::uint8_t p = t.field.p;
    const int n = t.nvars;
    const std::size_t size = t.size();
    const std::uint8_t minus_one = fp::neg(1, p);

    std::complex<double> acc = 0;
    std::vector<std::size_t> yidx(static_cast<std::size_t>(d), 0);
    std::size_t tuples = 1;
    for (int i = 0; i < d; ++i) tuples *= size;
    for (std::size_t ti = 0; ti < tuples; ++ti) {
        std::vector<Point> ys;
        ys.reserve(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            ys.push_back(point_from_index(yidx[static_cast<std::size_t>(i)], p, n));
        for (std::size_t xi = 0; xi < size; ++xi) {
            const Point x = point_from_index(xi, p, n);
            std::uint8_t e = 0;
            for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
                Point pt = x;
                for (int i = 0; i < d; ++i)
                    if (mask >> i & 1)
                        for (int j = 0; j < n; ++j)
                            pt[static_cast<std::size_t>(j)] =
                                fp::add(pt[static_cast<std::size_t>(j)],
                                        ys[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                        p);
                std::uint8_t sign = 1;
                const int flips = d - __builtin_popcount(mask);
                for (int s = 0; s < flips; ++s) sign = fp::mul(sign, minus_one, p);
                e = fp::add(e, fp::mul(sign, t.values[index_from_point(pt, p)], p), p);
            }
            acc += root_of_unity(e, p);
        }
        for (int i = 0; i < d; ++i) {
            if (++yidx[static_cast<std::size_t>(i)] < size) break;
            yidx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return (acc / static_cast<double>(tuples * size)).real();
}

/// Bit-parallel variant of the same five-block enumeration for p = 2 and
/// d = 4 (used at n = 5, 6): the x loop runs across the bits of one word.
/// Exact integer arithmetic throughout.
inline double naive_gowers_f2_d4_packed(const FunctionTable& t) {
    const std::size_t size = t.size();
    std::vector<std::uint64_t> perm(size);  // perm[m] packs x -> f(x ^ m)
    for (std::size_t m = 0; m < size; ++m) {
        std::uint64_t w = 0;
        for (std::size_t x = 0; x < size; ++x) w |= static_cast<std::uint64_t>(t.values[x ^ m]) << x;
        perm[m] = w;
    }
    long long num = 0;
    const long long per_tuple = static_cast<long long>(size);
    for (std::size_t y1 = 0; y1 < size; ++y1)
        for (std::size_t y2 = 0; y2 < size; ++y2)
            for (std::size_t y3 = 0; y3 < size; ++y3) {
                // XOR over the 8 subsets of {y1,y2,y3}
                std::size_t sub[8];
                for (int m = 0; m < 8; ++m) {
                    std::size_t yi = 0;
                    if (m & 1) yi ^= y1;
                    if (m & 2) yi ^= y2;
                    if (m & 4) yi ^= y3;
                    sub[m] = yi;
                }
                std::uint64_t a = 0;
                for (int m = 0; m < 8; ++m) a ^= perm[sub[m]];
                for (std::size_t y4 = 0; y4 < size; ++y4) {
                    std::uint64_t h = a;
                    for (int m = 0; m < 8; ++m) h ^= perm[sub[m] ^ y4];
                    num += per_tuple - 2 * __builtin_popcountll(h);
                }
            }
    double tuples = 1;
    for (int i = 0; i < 5; ++i) tuples *= static_cast<double>(size);
    return static_cast<double>(num) / tuples;
}

/// Exact majority-success probability for s iid binary votes that are each
/// correct with probability rho (s odd, no ties).
inline double majority_success_probability(double rho, int s) {
    // sum over k > s/2 of C(s,k) rho^k (1-rho)^(s-k)
    std::vector<double> logfact(static_cast<std::size_t>(s) + 1, 0.0);
    for (int i = 2; i <= s; ++i)
        logfact[static_cast<std::size_t>(i)] =
            logfact[static_cast<std::size_t>(i - 1)] + std::log(static_cast<double>(i));
    double acc = 0.0;
    for (int k = s / 2 + 1; k <= s; ++k) {
        const double lc = logfact[static_cast<std::size_t>(s)] -
                          logfact[static_cast<std::size_t>(k)] -
                          logfact[static_cast<std::size_t>(s - k)];
        acc += std::exp(lc + k * std::log(rho) + (s - k) * std::log1p(-rho));
    }
    return acc;
}

}  // namespace polylab::testing
