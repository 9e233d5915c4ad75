#include "polylab/spectral.hpp"

#include <cmath>
#include <ostream>
#include <unordered_map>

#include "polylab/errors.hpp"
#include "polylab/transform.hpp"

namespace polylab {

BiasReport bias_exact(const FunctionTable& t) {
    const std::uint8_t p = t.field.p;
    BiasReport r;
    r.value_counts.assign(p, 0);
    for (auto v : t.values) ++r.value_counts[v];

    const double total = static_cast<double>(t.size());
    r.value_distribution.resize(p);
    std::complex<double> bias = 0;
    std::size_t best = 0;
    for (int v = 0; v < p; ++v) {
        const auto c = r.value_counts[static_cast<std::size_t>(v)];
        r.value_distribution[static_cast<std::size_t>(v)] = static_cast<double>(c) / total;
        bias += static_cast<double>(c) * root_of_unity(static_cast<std::uint8_t>(v), p);
        if (c > r.value_counts[best]) best = static_cast<std::size_t>(v);
    }
    r.bias_value = bias / total;
    r.magnitude = std::abs(r.bias_value);
    r.plurality_value = FieldElement{t.field, static_cast<long long>(best)};
    return r;
}

Spectrum character_spectrum(const FunctionTable& t, std::size_t budget) {
    if (t.size() > budget)
        throw budget_error("character_spectrum: table exceeds budget");
    Spectrum s{t.field, t.nvars, std::vector<std::complex<double>>(t.size())};
    for (std::size_t i = 0; i < t.size(); ++i)
        s.coefficients[i] = root_of_unity(t.values[i], t.field.p);
    group_transform(s.coefficients, t.field.p);
    const double norm = static_cast<double>(t.size());
    for (auto& c : s.coefficients) c /= norm;
    return s;
}

std::vector<std::complex<double>> spectrum_inverse(const Spectrum& s) {
    std::vector<std::complex<double>> f = s.coefficients;
    group_transform(f, s.field.p, /*inverse=*/true);
    return f;
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
    os << "alpha_index,re,im\n";
    os.precision(17);
    for (std::size_t i = 0; i < s.size(); ++i)
        os << i << ',' << s.coefficients[i].real() << ',' << s.coefficients[i].imag() << '\n';
}

BiasEstimate bias_estimate(const PointOracle& oracle, std::uint8_t p, int n, std::size_t N,
                           Rng& rng) {
    if (N == 0) throw precondition_error("bias_estimate needs at least one sample");
    std::complex<double> acc = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const Point x = rng.point(p, n);
        acc += root_of_unity(oracle(x), p);
    }
    BiasEstimate e;
    e.estimate = acc / static_cast<double>(N);
    e.radius = std::sqrt(2.0 * std::log(2.0 / 0.01) / static_cast<double>(N));
    e.samples = N;
    return e;
}

DerivativeBiasCheck derivative_bias_check(const BlockPolynomial& h, int r, std::size_t budget) {
    DerivativeBiasCheck out;
    out.bias_h = bias_exact(tabulate(h.body, budget)).magnitude;
    const BlockPolynomial hp = block_derive(h, r);
    out.bias_h_prime = bias_exact(tabulate(hp.body, budget)).magnitude;
    double threshold = 1.0;
    for (int i = 0; i < (1 << r); ++i) threshold *= out.bias_h;
    out.holds = out.bias_h_prime >= threshold - 1e-9;
    return out;
}

namespace {

struct JointLayout {
    // (member index, direction subset of [k]) pairs, fixed enumeration order
    std::vector<std::pair<std::size_t, std::uint32_t>> slots;
};

JointLayout joint_layout(const Factor& g, int k) {
    JointLayout lay;
    for (std::size_t i = 0; i < g.polys.size(); ++i)
        for (std::uint32_t mask = 1; mask < (1u << k); ++mask)
            if (__builtin_popcount(mask) <= g.delta[i]) lay.slots.emplace_back(i, mask);
    return lay;
}

double distance_from_counts(const std::unordered_map<std::uint64_t, std::size_t>& counts,
                            double total, double cells) {
    const double u = 1.0 / cells;
    double dist = 0.0;
    for (const auto& [cell, c] : counts) dist += std::abs(static_cast<double>(c) / total - u);
    dist += (cells - static_cast<double>(counts.size())) * u;
    return dist / 2.0;
}

}  // namespace

double joint_dist_distance(const Factor& g, const Point& x, int k, DistanceMode mode,
                           std::size_t samples, Rng& rng, std::size_t budget) {
    if (k < 1) throw precondition_error("joint_dist_distance requires k >= 1");
    if (g.polys.empty()) return 0.0;
    const std::uint8_t p = g.field().p;
    const int n = g.n_vars();
    if (static_cast<int>(x.size()) != n) throw precondition_error("base point arity mismatch");

    const JointLayout lay = joint_layout(g, k);
    const std::size_t dims = lay.slots.size();
    if (dims * std::log2(double(p)) > 63)
        throw budget_error("joint_dist_distance: value tuple too wide to index");
    double cells = 1.0;
    for (std::size_t i = 0; i < dims; ++i) cells *= p;

    std::vector<FunctionTable> tables;
    tables.reserve(g.polys.size());
    for (const auto& q : g.polys) tables.push_back(tabulate(q, budget));
    const std::size_t domain = tables[0].size();
    const std::size_t xi = index_from_point(x, p);

    // index of x + sum of selected directions, all in table-index space
    auto tuple_key = [&](const std::vector<std::size_t>& yidx) {
        std::uint64_t key = 0;
        for (std::size_t s = lay.slots.size(); s-- > 0;) {
            const auto [member, mask] = lay.slots[s];
            Point pt = point_from_index(xi, p, n);
            for (int i = 0; i < k; ++i) {
                if (!(mask >> i & 1)) continue;
                const Point y = point_from_index(yidx[static_cast<std::size_t>(i)], p, n);
                for (int j = 0; j < n; ++j)
                    pt[static_cast<std::size_t>(j)] =
                        fp::add(pt[static_cast<std::size_t>(j)], y[static_cast<std::size_t>(j)], p);
            }
            key = key * p + tables[member].values[index_from_point(pt, p)];
        }
        return key;
    };

    std::unordered_map<std::uint64_t, std::size_t> counts;
    if (mode == DistanceMode::exhaustive) {
        const std::size_t tuples =
            require_table_size(p, n * k, budget, "joint_dist_distance (exhaustive)");
        std::vector<std::size_t> yidx(static_cast<std::size_t>(k), 0);
        for (std::size_t t = 0; t < tuples; ++t) {
            ++counts[tuple_key(yidx)];
            for (int i = 0; i < k; ++i) {
                if (++yidx[static_cast<std::size_t>(i)] < domain) break;
                yidx[static_cast<std::size_t>(i)] = 0;
            }
        }
        return distance_from_counts(counts, static_cast<double>(tuples), cells);
    }

    if (samples == 0) throw precondition_error("sampled joint_dist_distance needs samples >= 1");
    std::vector<std::size_t> yidx(static_cast<std::size_t>(k));
    for (std::size_t s = 0; s < samples; ++s) {
        for (int i = 0; i < k; ++i)
            yidx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(rng.below(domain));
        ++counts[tuple_key(yidx)];
    }
    return distance_from_counts(counts, static_cast<double>(samples), cells);
}

}  // namespace polylab
