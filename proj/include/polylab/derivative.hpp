#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polylab/poly.hpp"
#include "polylab/rng.hpp"

namespace polylab {

/// Directional derivative q(X + a) - q(X). Drops total degree by at least
/// one (or vanishes); derivative(q, 0) is the zero polynomial.
Polynomial derivative(const Polynomial& q, const Point& a);

/// Alternating sum over the combinatorial cube spanned by ys at x:
///   sum over I subset of [k] of (-1)^|I| q(x + y_I),  y_I = sum_{i in I} y_i.
/// Signs are taken in F_p ((-1) == p-1). Zero whenever deg(q) <= k-1.
FieldElement cube_sum(const Polynomial& q, const Point& x, const std::vector<Point>& ys);

enum class DegreeTestMode { formal, randomized };

/// Formal mode reads the canonical degree. Randomized mode samples `trials`
/// cubes of dimension d+1 and rejects on any nonzero cube sum; it never
/// rejects a polynomial of true degree <= d.
bool degree_le(const Polynomial& q, int d, DegreeTestMode mode, Rng& rng, int trials = 64);

/// Polynomial over several equal-width variable blocks. Variable
/// block*width + j is coordinate j of that block.
struct BlockPolynomial {
    FieldSpec field;
    int width = 0;
    int blocks = 0;
    Polynomial body;

    static BlockPolynomial single_block(const Polynomial& q);
    static BlockPolynomial make(FieldSpec field, int width, int blocks, Polynomial body);

    int total_vars() const { return width * blocks; }
};

/// Derivative in the first r blocks by fresh direction blocks Z_1..Z_r
/// appended at the end:
///   h'(Y, Z) = sum over w in {0,1}^r of (-1)^|w| h(Y_1 + w_1 Z_1, ...).
/// Requires r <= h.blocks.
BlockPolynomial block_derive(const BlockPolynomial& h, int r);

/// Single-block variant deriving block `block` only.
BlockPolynomial block_derive_single(const BlockPolynomial& h, int block);

/// Bias of the d-fold iterated derivative polynomial
///   G(X, Y_1..Y_d) = sum over I of (-1)^(d-|I|) q(X + Y_I),
/// a real value in [0, 1]; equals 1 whenever deg(q) <= d-1. Computed by the
/// recursive derivative-table scheme (averaging the recursively computed
/// bias of q(X+a)-q(X) over the outermost direction, with closed-form
/// leaves), never by naive (d+1)-block enumeration.
double gowers_derivative_bias(const Polynomial& q, int d,
                              std::size_t budget = default_table_budget());

struct DerivativeSpaceMember {
    Polynomial poly;
    std::size_t base_index = 0;    // index into the base set
    std::vector<Point> directions; // shift chain applied to the base polynomial
};

/// Members of the iterated derivative space Der_C(F), each reconstructible
/// from its provenance chain.
struct DerivativeSpaceSample {
    std::vector<Polynomial> base;
    int depth = 0;
    std::vector<DerivativeSpaceMember> members;
};

/// Draws `count` members by random provenance chains of length <= C.
/// With C = 0 the members cycle through F itself.
DerivativeSpaceSample der_space_sample(const std::vector<Polynomial>& base, int C,
                                       std::size_t count, Rng& rng);

}  // namespace polylab
