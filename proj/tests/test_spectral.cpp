#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "helpers.hpp"
#include "polylab/spectral.hpp"

using namespace polylab;
using namespace polylab::testing;

TEST_CASE("exact bias") {
    const FieldSpec f2(2);
    CHECK(bias_exact(tabulate(Polynomial::zero(f2, 2))).bias_value == std::complex<double>(1, 0));
    CHECK(bias_exact(tabulate(Polynomial::variable(f2, 2, 0))).magnitude == 0.0);

    const BiasReport and2 = bias_exact(tabulate(parse_polynomial("x0*x1", f2, 2)));
    CHECK(and2.bias_value.real() == 0.5);
    CHECK(and2.bias_value.imag() == 0.0);
    CHECK(and2.magnitude == 0.5);
    CHECK(and2.plurality_value.value == 0);
    CHECK(and2.value_counts == std::vector<std::size_t>{3, 1});

    double sum = 0;
    for (auto d : and2.value_distribution) sum += d;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("character spectrum on known inputs") {
    const FieldSpec f2(2);
    const Spectrum s0 = character_spectrum(tabulate(Polynomial::zero(f2, 2)));
    CHECK(s0.coefficients[0] == std::complex<double>(1, 0));
    for (std::size_t i = 1; i < s0.size(); ++i) CHECK(std::abs(s0.coefficients[i]) == 0.0);

    const Spectrum sx = character_spectrum(tabulate(Polynomial::variable(f2, 1, 0)));
    CHECK(std::abs(sx.coefficients[0]) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(sx.coefficients[1] - std::complex<double>(1, 0)) ==
          doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("fast transform equals naive character sums") {
    Rng rng(41);
    for (int trial = 0; trial < 6; ++trial) {
        const FieldSpec f(trial % 2 ? 2 : 3);
        const int n = trial % 2 ? 5 : 4;
        const FunctionTable t = tabulate(random_polynomial(rng, f, n, 4, 8));
        const Spectrum s = character_spectrum(t);
        const auto naive = naive_spectrum(t);
        REQUIRE(s.size() == naive.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            CHECK(std::abs(s.coefficients[i] - naive[i]) < 1e-9);
    }
}

TEST_CASE("parseval and inversion") {
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const FieldSpec f(trial % 2 ? 2 : 3);
        const int n = 1 + static_cast<int>(rng.below(trial % 2 ? 8 : 5));
        const FunctionTable t = tabulate(random_polynomial(rng, f, n, 3, 8));
        const Spectrum s = character_spectrum(t);

        double l2 = 0;
        for (const auto& c : s.coefficients) l2 += std::norm(c);
        CHECK(l2 == doctest::Approx(1.0).epsilon(1e-9));

        const auto back = spectrum_inverse(s);
        for (std::size_t i = 0; i < t.size(); ++i)
            CHECK(std::abs(back[i] - root_of_unity(t.values[i], f.p)) < 1e-9);

        const BiasReport b = bias_exact(t);
        CHECK(std::abs(b.bias_value - s.coefficients[0]) < 1e-12);
    }
}

TEST_CASE("bias estimate") {
    const FieldSpec f2(2);
    Rng rng(43);
    const auto zero_oracle = [](const Point&) -> std::uint8_t { return 0; };
    const BiasEstimate e0 = bias_estimate(zero_oracle, 2, 3, 100, rng);
    CHECK(e0.estimate == std::complex<double>(1, 0));
    CHECK(e0.radius == doctest::Approx(std::sqrt(2.0 * std::log(200.0) / 100.0)));

    const Polynomial x0 = Polynomial::variable(f2, 4, 0);
    const BiasEstimate e1 = bias_estimate(
        [&](const Point& x) { return x0.evaluate_raw(x); }, 2, 4, 10000, rng);
    CHECK(std::abs(e1.estimate) < 0.05);

    const FieldSpec f5(5);
    const Polynomial q5 = parse_polynomial("x0 + 2", f5, 1);
    const BiasEstimate e2 = bias_estimate(
        [&](const Point& x) { return q5.evaluate_raw(x); }, 5, 1, 1, rng);
    CHECK(std::abs(e2.estimate) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("derivative bias inequality") {
    const FieldSpec f2(2);

    const auto c = BlockPolynomial::single_block(Polynomial::constant(f2, 2, 1));
    const DerivativeBiasCheck cc = derivative_bias_check(c, 1);
    CHECK(cc.bias_h == 1.0);
    CHECK(cc.bias_h_prime == 1.0);
    CHECK(cc.holds);

    const auto h = BlockPolynomial::single_block(parse_polynomial("x0*x1", f2, 2));
    const DerivativeBiasCheck ch = derivative_bias_check(h, 1);
    CHECK(ch.bias_h == 0.5);
    CHECK(ch.bias_h_prime == 0.25);
    CHECK(ch.holds);

    const auto bal = BlockPolynomial::single_block(Polynomial::variable(f2, 2, 0));
    CHECK(derivative_bias_check(bal, 1).holds);  // bias 0, vacuous
}

TEST_CASE("derivative bias sweep over all small polynomials") {
    // all 128 polynomials of degree <= 2 in 3 variables over F_2, r in {1,2}
    const FieldSpec f2(2);
    const std::vector<Polynomial> monos = {
        Polynomial::constant(f2, 3, 1),      parse_polynomial("x0", f2, 3),
        parse_polynomial("x1", f2, 3),       parse_polynomial("x2", f2, 3),
        parse_polynomial("x0*x1", f2, 3),    parse_polynomial("x0*x2", f2, 3),
        parse_polynomial("x1*x2", f2, 3)};
    for (std::uint32_t mask = 0; mask < 128; ++mask) {
        Polynomial h = Polynomial::zero(f2, 3);
        for (int i = 0; i < 7; ++i)
            if (mask >> i & 1) h = h + monos[static_cast<std::size_t>(i)];
        const BlockPolynomial b = BlockPolynomial::single_block(h);
        const DerivativeBiasCheck c1 = derivative_bias_check(b, 1);
        CHECK(c1.holds);
        // r = 2 as two chained single-block derivations
        const BlockPolynomial b2 = block_derive(block_derive(b, 1), 1);
        const double bias2 = bias_exact(tabulate(b2.body)).magnitude;
        const double rhs = c1.bias_h * c1.bias_h * c1.bias_h * c1.bias_h;
        CHECK(bias2 >= rhs - 1e-9);
    }
}

TEST_CASE("joint distribution distance") {
    const FieldSpec f2(2);
    Rng rng(44);

    // independent linear forms on disjoint variables, k = 1: exactly uniform
    const Factor indep{{parse_polynomial("x0", f2, 3), parse_polynomial("x1", f2, 3)}};
    CHECK(joint_dist_distance(indep, {0, 0, 0}, 1, DistanceMode::exhaustive, 0, rng) == 0.0);

    const Factor empty{};
    CHECK(joint_dist_distance(empty, {}, 1, DistanceMode::exhaustive, 0, rng) == 0.0);

    // {x0*x1} with Delta = 2, k = 2, n = 2: match a direct enumeration
    const Polynomial q = parse_polynomial("x0*x1", f2, 2);
    const Factor g{{q}, {2}};
    const Point x = {0, 0};
    const double dist = joint_dist_distance(g, x, 2, DistanceMode::exhaustive, 0, rng);

    // oracle: enumerate the 16 direction pairs by hand
    std::map<std::vector<int>, int> counts;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const Point y1 = point_from_index(static_cast<std::size_t>(a), 2, 2);
            const Point y2 = point_from_index(static_cast<std::size_t>(b), 2, 2);
            Point y12 = {static_cast<std::uint8_t>(y1[0] ^ y2[0]),
                         static_cast<std::uint8_t>(y1[1] ^ y2[1])};
            std::vector<int> key = {q.evaluate_raw(y1), q.evaluate_raw(y2),
                                    q.evaluate_raw(y12)};
            ++counts[key];
        }
    double l1 = 0;
    int seen = 0;
    for (const auto& [k, c] : counts) {
        l1 += std::abs(c / 16.0 - 1.0 / 8.0);
        ++seen;
    }
    l1 += (8 - seen) * (1.0 / 8.0);
    CHECK(dist == doctest::Approx(l1 / 2).epsilon(1e-12));

    // sampled mode stays close for the same instance
    const double sampled = joint_dist_distance(g, x, 2, DistanceMode::sampled, 4000, rng);
    CHECK(std::abs(sampled - dist) < 0.1);
}
