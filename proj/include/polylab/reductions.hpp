#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "polylab/factor.hpp"
#include "polylab/poly.hpp"
#include "polylab/rng.hpp"
#include "polylab/spectral.hpp"

namespace polylab {

/// One component of a computation certificate: either a derivative of the
/// target, q(X+a) - q(X), or a shifted base polynomial g(X+a).
struct CertificateComponent {
    enum class Kind { derivative, shifted_g };
    Kind kind = Kind::derivative;
    Point shift;
    std::optional<Polynomial> base;  // present for shifted_g

    Polynomial realize(const Polynomial& q) const;
};

/// Verified witness that q is exactly a function of the listed components.
struct ComputationCertificate {
    std::vector<CertificateComponent> components;
    FactorLookup lookup;
    bool verified = false;
};

/// Exhaustive replay: F'(components(x)) == q(x) at every point.
bool verify_certificate(const ComputationCertificate& cert, const Polynomial& q,
                        std::size_t budget = default_table_budget());

/// Majority-vote approximator built from random derivatives: vote_j(x) =
/// beta - (q(x+a_j) - q(x)), correct exactly when q(x+a_j) hits the
/// plurality value beta.
struct Approximator {
    std::vector<Point> shifts;
    FieldElement plurality;          // beta
    double measured_agreement = 0.0;
    bool agreement_exhaustive = true;

    /// Plurality combine of the votes; ties break toward the smallest symbol.
    std::uint8_t combine(const std::vector<std::uint8_t>& votes, std::uint8_t p) const;
    std::uint8_t predict(const Polynomial& q, const Point& x) const;
};

struct ApproximatorConfig {
    std::size_t agreement_samples = 10000;  // used when exhaustive measurement is over budget
    std::size_t exhaustive_cap = std::size_t{1} << 20;
    std::size_t budget = kDefaultTableBudget;
};

/// Lemma-style construction; refuses polynomials with zero bias (no
/// plurality gap to vote toward).
Approximator bv_approximator(const Polynomial& q, std::size_t s, Rng& rng,
                             const ApproximatorConfig& cfg = {});

/// Dense lookup F^c -> F, little-endian indexed by (z_1..z_c).
struct ValueLookup {
    std::uint8_t p = 2;
    std::size_t arity = 0;
    std::vector<std::uint8_t> values;  // length p^c

    std::uint8_t at(std::size_t idx) const { return values[idx]; }
};

struct PeelResult {
    std::vector<std::uint8_t> alpha;  // coefficients on g_1..g_c
    double peeled_bias = 0.0;         // |bias(q - sum alpha_i g_i)| at the maximizer
    Polynomial residual;              // q - sum alpha_i g_i
    std::vector<std::complex<double>> lookup_spectrum;  // spectrum of omega^F on F^c
};

/// Scans all characters alpha of F^c, returning the alpha maximizing the
/// residual bias (lexicographically smallest on ties). If the composition
/// F(g_1..g_c) delta-approximates q, the maximum is at least delta * p^-c.
PeelResult fourier_peel(const ValueLookup& F, const std::vector<Polynomial>& gs,
                        const Polynomial& q, std::size_t budget = default_table_budget());

/// All nonzero directions when p^n <= cap, otherwise a seeded sample of cap
/// distinct nonzero directions.
std::vector<Point> make_direction_pool(FieldSpec field, int n, std::size_t cap, Rng& rng);

struct RankSearchResult {
    std::optional<ComputationCertificate> certificate;
    int c = -1;  // components used, when found
    std::uint64_t subsets_tried = 0;
    bool pool_exhaustive = false;
    std::size_t pool_size = 0;
};

/// Searches c-subsets of the direction pool in size order (then
/// lexicographic), returning the first factor of derivatives through which q
/// factors; the reported c is minimal over the searched pool.
RankSearchResult rank_via_derivatives(const Polynomial& q, int c_max,
                                      const std::vector<Point>& pool,
                                      std::size_t budget = default_table_budget());

/// Approximation threshold consumed by the degree-d region argument.
double default_epsilon_d(int d);

struct ReduceResult {
    std::optional<ComputationCertificate> certificate;
    PeelResult peel;
    RankSearchResult rank;
    double approximation_bias = 0.0;  // |bias(q - F(g_1..g_c))|, exact
    double epsilon_d = 0.0;           // threshold at deg(q); configurable
    bool meets_epsilon_d = false;
};

/// Approximation-to-computation pipeline: peel a character, rank the
/// residual through its derivatives, then merge derivative shifts with
/// shifted base polynomials into one verified certificate for q.
/// epsilon_d <= 0 selects default_epsilon_d(deg q).
ReduceResult avg_to_worst(const Polynomial& q, const std::vector<Polynomial>& gs,
                          const ValueLookup& F, int c_max, const std::vector<Point>& pool,
                          std::size_t budget = default_table_budget(), double epsilon_d = 0.0);

struct DixonReport {
    double bias_mag = 0.0;  // |bias| of the two-block phase x^t A y
    int rank_a = 0;
    int rank_sym = 0;       // rank(A + A^t)
    bool bilinear_law_holds = false;  // bias_mag == p^-rank(A) within 1e-9
    // quadratic phase q(x) = x^t A x, square A only
    bool has_quadratic = false;
    double quad_bias_mag = 0.0;
    bool quad_law_holds = false;  // |bias| in {0, p^(-rank_sym/2)} within 1e-9
};

DixonReport bilinear_dixon_check(const Matrix& a, std::size_t budget = default_table_budget());

/// Degree-d form, linear in each of d width-n blocks. `blocks` lists the
/// original block labels the form still depends on; each term picks exactly
/// one coordinate per listed block.
struct MultilinearForm {
    FieldSpec field;
    int width = 0;
    std::vector<int> blocks;
    std::map<std::vector<int>, std::uint8_t> terms;  // per-block coordinate -> coeff

    int degree() const { return static_cast<int>(blocks.size()); }
    std::uint8_t evaluate(const std::vector<Point>& all_blocks) const;

    /// Substitutes direction a for block `label`; the result is multilinear
    /// in the remaining blocks (a derivative of the form).
    MultilinearForm fix_block(int label, const Point& a) const;
};

struct MultilinearComponent {
    int omitted_block = 0;
    Point direction;
    MultilinearForm form;
};

struct MultilinearDecomposition {
    std::vector<MultilinearComponent> components;
    FactorLookup lookup;
};

struct MultilinearRankResult {
    double bias_mag = 0.0;
    std::optional<MultilinearDecomposition> decomposition;
    std::uint64_t subsets_tried = 0;
};

/// Bias of L over independent blocks; when biased, searches decompositions
/// into at most c_max derivative forms, each omitting one block.
MultilinearRankResult multilinear_bias_rank(const MultilinearForm& l, int c_max, Rng& rng,
                                            std::size_t pool_cap = 256,
                                            std::size_t budget = default_table_budget());

/// Shared subset searcher: smallest subset of candidate tables (size order,
/// then lexicographic) through which the target factors.
struct SubsetSearchResult {
    std::optional<std::vector<std::size_t>> chosen;
    FactorLookup lookup;
    std::uint64_t tried = 0;
    bool truncated = false;
};

SubsetSearchResult find_expressing_subset(const FunctionTable& target,
                                          const std::vector<const FunctionTable*>& candidates,
                                          int l_max, std::uint64_t combo_ceiling);

}  // namespace polylab
