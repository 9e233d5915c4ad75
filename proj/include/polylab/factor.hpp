#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polylab/poly.hpp"
#include "polylab/rng.hpp"

namespace polylab {

/// Ordered polynomial list g_1..g_m with per-polynomial degree bounds
/// Delta(g_i) in [1, deg(g_i)]. The joint value map partitions F_p^n into
/// p^m regions.
struct Factor {
    std::vector<Polynomial> polys;
    std::vector<int> delta;

    Factor() = default;
    explicit Factor(std::vector<Polynomial> gs);  // Delta(g) = deg(g)
    Factor(std::vector<Polynomial> gs, std::vector<int> deltas);

    std::size_t dimension() const { return polys.size(); }
    int order() const;  // max degree, 0 for the empty factor

    FieldSpec field() const;
    int n_vars() const;

    void validate() const;  // shared field/arity, Delta bounds
};

/// Region index c in F^m encoded little-endian base p, with exact point counts.
struct RegionMap {
    std::uint8_t p = 2;
    std::size_t dimension = 0;
    std::vector<std::size_t> counts;  // length p^m, summing to p^n

    std::size_t regions() const { return counts.size(); }
    std::size_t nonempty() const;
};

RegionMap region_decompose(const Factor& g, std::size_t budget = default_table_budget());

struct UniformityReport {
    double max_rel_dev = 0.0;  // max over c of | |R_c| p^(m-n) - 1 |
    std::size_t empty_regions = 0;
};

UniformityReport uniformity_report(const Factor& g, std::size_t budget = default_table_budget());

/// Value lookup F^m -> F realizing a polynomial as a function of a factor.
/// Cells never hit by any point keep the default symbol 0 and are flagged.
struct FactorLookup {
    std::uint8_t p = 2;
    std::size_t dimension = 0;
    std::vector<std::uint8_t> values;   // length p^m
    std::vector<bool> defined;          // per cell
    bool has_empty_cells = false;

    std::uint8_t at(std::size_t cell) const { return values[cell]; }
};

struct FunctionOfWitness {
    std::size_t region = 0;  // region index where two points disagree
    Point a, b;
};

struct FunctionOfResult {
    std::optional<FactorLookup> lookup;       // present iff q is a function of the factor
    std::optional<FunctionOfWitness> witness; // present otherwise

    bool ok() const { return lookup.has_value(); }
};

/// Decides whether q is constant on every region of G; on success returns
/// the realizing lookup, otherwise a two-point witness.
FunctionOfResult is_function_of(const Polynomial& q, const Factor& g,
                                std::size_t budget = default_table_budget());

/// Table-level variant: target and component tables over the same domain.
FunctionOfResult is_function_of_tables(const FunctionTable& target,
                                       const std::vector<const FunctionTable*>& components);

/// Checks the degree identity
///   f(X + Y_[r]) = sum over proper I of (-1)^(r-|I|+1) f(X + Y_I)
/// symbolically (equivalently: the r-fold block derivative of f vanishes).
/// Requires r > deg(f).
bool high_deriv_identity_check(const Polynomial& f, int r);

/// A verified failure of the strong-regularity condition: a nonzero linear
/// combination a(X, Y_1..Y_r) of shifted factor members (index sets bounded
/// by Delta) that is computable from at most `l` shifted derivatives of the
/// participating polynomials.
struct ViolationWitness {
    int r = 0;
    // (factor member index, direction subset of [r]) -> nonzero coefficient
    std::map<std::pair<std::size_t, std::uint32_t>, std::uint8_t> alpha;
    Polynomial combination;  // over (r+1)*n variables: X, Y_1..Y_r

    struct Expressor {
        std::size_t source = 0;      // factor member the derivative is taken from
        Point direction;             // h = g(X + direction) - g(X)
        std::uint32_t shift_set = 0; // evaluated at X + Y_I
        Polynomial h;
    };
    std::vector<Expressor> expressing;
    FactorLookup lookup;  // H with H(h_1(X+Y_I1), ...) == combination
};

struct ViolationSearchConfig {
    int r_max = 1;
    int growth_budget = 2;                  // materialized growth function F(m)
    std::uint64_t pattern_ceiling = 5000;   // max coefficient patterns per r
    std::uint64_t combo_ceiling = 200000;   // max expressibility candidates per pattern
    std::size_t direction_pool_cap = 256;   // exhaustive when p^n is at most this
    std::size_t budget = kDefaultTableBudget;
};

struct ViolationSearchOutcome {
    std::optional<ViolationWitness> witness;
    bool truncated = false;  // search space exceeded a ceiling; absence is not conclusive
    std::string note;
    std::uint64_t patterns_tried = 0;
    int r_searched = -1;
};

ViolationSearchOutcome violation_search(const Factor& g, const ViolationSearchConfig& cfg, Rng& rng);

/// One refinement step record: which member's Delta was lowered (or dropped)
/// and which derivative polynomials joined the factor.
struct RefinementStep {
    std::size_t lowered_member = 0;
    std::string lowered_name;
    int old_delta = 0;
    int new_delta = 0;  // <= 0 means the member was dropped
    std::size_t added = 0;
};

/// Provenance of a factor member: iterated derivative of one input
/// polynomial along the recorded directions (empty chain = the input itself).
struct MemberProvenance {
    std::size_t input_index = 0;
    std::vector<Point> chain;
};

struct RegularizeResult {
    Factor factor;
    std::vector<MemberProvenance> provenance;
    bool refined = false;       // true iff the loop stopped with no violation found
    bool truncated_search = false;
    int iterations = 0;
    std::vector<RefinementStep> trace;
};

struct RegularizeConfig {
    ViolationSearchConfig search;
    int iteration_cap = 32;
};

/// Budgeted strong-regularity refinement: repeatedly finds a violation,
/// adjoins its expressing derivatives, and lowers the Delta of the maximal
/// participating polynomial (dropping it at zero). The output always
/// computes every input polynomial (verified via is_function_of).
RegularizeResult regularize(const std::vector<Polynomial>& inputs, const RegularizeConfig& cfg,
                            Rng& rng);

}  // namespace polylab
