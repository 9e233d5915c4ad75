#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "polylab/factor.hpp"
#include "polylab/poly.hpp"
#include "polylab/reductions.hpp"

namespace polylab {

/// Parsed polynomial/factor file:
///   field p=<p>
///   vars n=<n>
///   poly <name> = <expr>
///   delta <name> = <int>     (optional, factor files)
struct PolyFile {
    FieldSpec field;
    int n = 0;
    std::vector<std::pair<std::string, Polynomial>> polys;
    std::map<std::string, int> deltas;

    const Polynomial* find(const std::string& name) const;
    Factor to_factor(const std::vector<std::string>& exclude = {}) const;
};

PolyFile parse_poly_file(std::string_view content);
PolyFile load_poly_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

void write_region_csv(std::ostream& os, const RegionMap& r);

/// Certificate wire format: {"components":[{"kind":...,"shift":[...],
/// "base":...}], "lookup":{"entries":[...]}, "verified":true}.
std::string certificate_to_json(const ComputationCertificate& cert);
ComputationCertificate certificate_from_json(std::string_view text, FieldSpec field, int n);

}  // namespace polylab
