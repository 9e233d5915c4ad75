#include "polylab/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "polylab/errors.hpp"

namespace polylab {

const Polynomial* PolyFile::find(const std::string& name) const {
    for (const auto& [nm, q] : polys)
        if (nm == name) return &q;
    return nullptr;
}

Factor PolyFile::to_factor(const std::vector<std::string>& exclude) const {
    std::vector<Polynomial> gs;
    std::vector<int> ds;
    for (const auto& [nm, q] : polys) {
        bool skip = false;
        for (const auto& e : exclude) skip = skip || e == nm;
        if (skip) continue;
        gs.push_back(q);
        const auto it = deltas.find(nm);
        ds.push_back(it != deltas.end() ? it->second : std::max(1, q.degree()));
    }
    return Factor{std::move(gs), std::move(ds)};
}

namespace {

std::string trim(std::string s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

PolyFile parse_poly_file(std::string_view content) {
    PolyFile f;
    bool have_field = false, have_vars = false;
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "field") {
            std::string rest;
            std::getline(ls, rest);
            rest = trim(rest);
            if (rest.rfind("p=", 0) != 0)
                throw parse_error("expected 'field p=<prime>'", lineno);
            f.field = FieldSpec(std::stoi(rest.substr(2)));
            have_field = true;
        } else if (kw == "vars") {
            std::string rest;
            std::getline(ls, rest);
            rest = trim(rest);
            if (rest.rfind("n=", 0) != 0)
                throw parse_error("expected 'vars n=<count>'", lineno);
            f.n = std::stoi(rest.substr(2));
            if (f.n < 1) throw parse_error("variable count must be positive", lineno);
            have_vars = true;
        } else if (kw == "poly" || kw == "delta") {
            if (!have_field || !have_vars)
                throw parse_error("'" + kw + "' before field/vars headers", lineno);
            std::string name, eq;
            ls >> name >> eq;
            if (eq != "=") throw parse_error("expected '=' after name", lineno);
            std::string rest;
            std::getline(ls, rest);
            rest = trim(rest);
            if (kw == "poly") {
                if (f.find(name)) throw parse_error("duplicate polynomial '" + name + "'", lineno);
                f.polys.emplace_back(name, parse_polynomial(rest, f.field, f.n));
            } else {
                if (!f.find(name))
                    throw parse_error("delta for unknown polynomial '" + name + "'", lineno);
                f.deltas[name] = std::stoi(rest);
            }
        } else {
            throw parse_error("unknown directive '" + kw + "'", lineno);
        }
    }
    if (!have_field || !have_vars) throw parse_error("missing field/vars headers", 0);
    return f;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw precondition_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw precondition_error("cannot write file: " + path);
    out << content;
}

PolyFile load_poly_file(const std::string& path) { return parse_poly_file(read_file(path)); }

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view data) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

void write_region_csv(std::ostream& os, const RegionMap& r) {
    os << "region_index,count\n";
    for (std::size_t i = 0; i < r.counts.size(); ++i) os << i << ',' << r.counts[i] << '\n';
}

std::string certificate_to_json(const ComputationCertificate& cert) {
    nlohmann::ordered_json j;
    j["components"] = nlohmann::ordered_json::array();
    for (const auto& c : cert.components) {
        nlohmann::ordered_json jc;
        jc["kind"] = c.kind == CertificateComponent::Kind::derivative ? "derivative" : "shifted_g";
        jc["shift"] = c.shift;
        if (c.base)
            jc["base"] = c.base->to_string();
        else
            jc["base"] = nullptr;
        j["components"].push_back(std::move(jc));
    }
    j["lookup"]["entries"] = cert.lookup.values;
    j["verified"] = cert.verified;
    return j.dump(2) + "\n";
}

ComputationCertificate certificate_from_json(std::string_view text, FieldSpec field, int n) {
    const auto j = nlohmann::json::parse(text);
    ComputationCertificate cert;
    for (const auto& jc : j.at("components")) {
        CertificateComponent c;
        const std::string kind = jc.at("kind").get<std::string>();
        if (kind == "derivative")
            c.kind = CertificateComponent::Kind::derivative;
        else if (kind == "shifted_g")
            c.kind = CertificateComponent::Kind::shifted_g;
        else
            throw precondition_error("unknown certificate component kind: " + kind);
        c.shift = jc.at("shift").get<Point>();
        if (!jc.at("base").is_null())
            c.base = parse_polynomial(jc.at("base").get<std::string>(), field, n);
        cert.components.push_back(std::move(c));
    }
    cert.lookup.p = field.p;
    cert.lookup.dimension = cert.components.size();
    cert.lookup.values = j.at("lookup").at("entries").get<std::vector<std::uint8_t>>();
    cert.lookup.defined.assign(cert.lookup.values.size(), true);
    cert.verified = j.value("verified", false);
    return cert;
}

}  // namespace polylab
