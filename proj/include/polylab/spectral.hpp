#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "polylab/derivative.hpp"
#include "polylab/factor.hpp"
#include "polylab/poly.hpp"
#include "polylab/rng.hpp"

namespace polylab {

/// bias(f) = E over X of omega^f(X), with the full value distribution.
struct BiasReport {
    std::complex<double> bias_value;
    double magnitude = 0.0;
    std::vector<double> value_distribution;  // per symbol of F_p, sums to 1
    std::vector<std::size_t> value_counts;
    FieldElement plurality_value;  // ties break toward the smallest symbol
};

BiasReport bias_exact(const FunctionTable& t);

/// Character coefficients of omega^f over F_p^n: coefficient at alpha is
/// E_X[omega^(f(X) - alpha.X)], indexed little-endian base p.
struct Spectrum {
    FieldSpec field;
    int nvars = 0;
    std::vector<std::complex<double>> coefficients;

    std::size_t size() const { return coefficients.size(); }
};

Spectrum character_spectrum(const FunctionTable& t, std::size_t budget = default_table_budget());

/// Reconstructs the phase table omega^f from its spectrum (inverse transform).
std::vector<std::complex<double>> spectrum_inverse(const Spectrum& s);

void write_spectrum_csv(std::ostream& os, const Spectrum& s);

using PointOracle = std::function<std::uint8_t(const Point&)>;

struct BiasEstimate {
    std::complex<double> estimate;
    double radius = 0.0;  // 99% Hoeffding bound per real/imaginary part
    std::size_t samples = 0;
};

/// Empirical mean of omega^f(X) over N uniform samples.
BiasEstimate bias_estimate(const PointOracle& oracle, std::uint8_t p, int n, std::size_t N,
                           Rng& rng);

struct DerivativeBiasCheck {
    double bias_h = 0.0;        // |bias| magnitudes
    double bias_h_prime = 0.0;
    bool holds = false;         // bias_h_prime >= bias_h^(2^r) - 1e-9
};

/// Checks the derivative-bias inequality for the r-block derivative of h.
DerivativeBiasCheck derivative_bias_check(const BlockPolynomial& h, int r,
                                          std::size_t budget = default_table_budget());

enum class DistanceMode { exhaustive, sampled };

/// Statistical distance (half L1) between the joint distribution of
///   { g_i(x + Y_I) : i in [m], 1 <= |I| <= Delta(g_i) }
/// over uniform Y_1..Y_k and the uniform distribution on the corresponding
/// product space.
double joint_dist_distance(const Factor& g, const Point& x, int k, DistanceMode mode,
                           std::size_t samples, Rng& rng,
                           std::size_t budget = default_table_budget());

}  // namespace polylab
