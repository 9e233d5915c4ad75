#include "polylab/tester.hpp"

#include <ostream>

#include "polylab/errors.hpp"
#include "polylab/transform.hpp"

namespace polylab {

namespace {

std::size_t total_queries(const TesterVerdict& v) {
    std::size_t q = 0;
    for (const auto& b : v.transcript) q += b.points.size();
    return q;
}

}  // namespace

TesterVerdict low_degree_test(const PointOracle& oracle, std::uint8_t p, int n, int d, int trials,
                              Rng& rng) {
    if (d < 0) throw precondition_error("low_degree_test: degree must be nonnegative");
    if (d > 29) throw precondition_error("low_degree_test: degree too large for cube probes");
    TesterVerdict v;
    v.phase = TesterPhase::degree;
    if (trials <= 0) {
        v.decision = TesterDecision::accept;
        v.vacuous = true;
        return v;
    }
    const std::uint8_t minus_one = fp::neg(1, p);
    const int k = d + 1;
    for (int t = 0; t < trials; ++t) {
        const Point x = rng.point(p, n);
        std::vector<Point> ys;
        ys.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) ys.push_back(rng.point(p, n));

        QueryBatch batch;
        batch.phase = TesterPhase::degree;
        std::uint8_t acc = 0;
        for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
            Point pt = x;
            int bits = 0;
            for (int i = 0; i < k; ++i) {
                if (!(mask >> i & 1)) continue;
                ++bits;
                for (int j = 0; j < n; ++j)
                    pt[static_cast<std::size_t>(j)] = fp::add(
                        pt[static_cast<std::size_t>(j)], ys[static_cast<std::size_t>(i)]
                                                           [static_cast<std::size_t>(j)],
                        p);
            }
            const std::uint8_t resp = oracle(pt);
            batch.points.push_back(std::move(pt));
            batch.responses.push_back(resp);
            const std::uint8_t sign = (bits % 2 == 0) ? std::uint8_t{1} : minus_one;
            acc = fp::add(acc, fp::mul(sign, resp, p), p);
        }
        v.transcript.push_back(std::move(batch));
        if (acc != 0) {
            v.decision = TesterDecision::reject;
            v.queries_used = total_queries(v);
            return v;
        }
    }
    v.decision = TesterDecision::accept;
    v.queries_used = total_queries(v);
    return v;
}

TesterVerdict concise_test(const PointOracle& oracle, std::uint8_t p, int n,
                           const TesterConfig& cfg, Rng& rng) {
    if (cfg.theta <= 0.0 || cfg.theta > 1.0)
        throw precondition_error("concise_test: theta must lie in (0, 1]");
    if (cfg.samples < 1) throw precondition_error("concise_test: needs at least one sample");

    TesterVerdict v = low_degree_test(oracle, p, n, cfg.degree, cfg.trials, rng);
    if (v.decision == TesterDecision::reject) return v;

    QueryBatch batch;
    batch.phase = TesterPhase::bias;
    auto recording = [&](const Point& x) {
        const std::uint8_t r = oracle(x);
        batch.points.push_back(x);
        batch.responses.push_back(r);
        return r;
    };
    const BiasEstimate est = bias_estimate(recording, p, n, cfg.samples, rng);
    v.transcript.push_back(std::move(batch));
    v.estimate = est;
    v.queries_used = total_queries(v);
    if (std::abs(est.estimate) >= cfg.theta - est.radius) {
        v.decision = TesterDecision::accept;
    } else {
        v.decision = TesterDecision::reject;
        v.phase = TesterPhase::bias;
    }
    return v;
}

void write_transcript_jsonl(std::ostream& os, const TesterVerdict& v) {
    for (const auto& b : v.transcript) {
        os << "{\"phase\":\"" << (b.phase == TesterPhase::degree ? "degree" : "bias")
           << "\",\"queries\":[";
        for (std::size_t i = 0; i < b.points.size(); ++i) {
            if (i) os << ',';
            os << "{\"x\":[";
            for (std::size_t j = 0; j < b.points[i].size(); ++j) {
                if (j) os << ',';
                os << int(b.points[i][j]);
            }
            os << "],\"r\":" << int(b.responses[i]) << '}';
        }
        os << "]}\n";
    }
}

}  // namespace polylab
