#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polylab/rng.hpp"
#include "polylab/spectral.hpp"

namespace polylab {

enum class TesterDecision { accept, reject };
enum class TesterPhase { degree, bias };

/// One oracle-query batch: the points of a single cube probe (or bias
/// sample block) with the received responses.
struct QueryBatch {
    TesterPhase phase = TesterPhase::degree;
    std::vector<Point> points;
    std::vector<std::uint8_t> responses;
};

struct TesterVerdict {
    TesterDecision decision = TesterDecision::accept;
    TesterPhase phase = TesterPhase::degree;  // failing phase on reject
    std::size_t queries_used = 0;             // total query points, equals transcript size
    std::vector<QueryBatch> transcript;
    std::optional<BiasEstimate> estimate;
    bool vacuous = false;  // accepted with zero trials
};

struct TesterConfig {
    int degree = 1;
    int trials = 64;
    double theta = 0.1;      // bias threshold for concise_test
    std::size_t samples = 10000;
};

/// Cube-identity low-degree test: perfect completeness for polynomials of
/// degree <= d; rejects when a sampled (d+1)-cube has a nonzero
/// alternating sum. Queries exactly trials * 2^(d+1) points.
TesterVerdict low_degree_test(const PointOracle& oracle, std::uint8_t p, int n, int d, int trials,
                              Rng& rng);

/// Degree phase, then bias estimation: accept iff |estimate| >= theta - radius.
TesterVerdict concise_test(const PointOracle& oracle, std::uint8_t p, int n,
                           const TesterConfig& cfg, Rng& rng);

/// Transcript as JSON lines, one batch per line.
void write_transcript_jsonl(std::ostream& os, const TesterVerdict& v);

}  // namespace polylab
