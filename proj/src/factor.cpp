#include "polylab/factor.hpp"

#include <algorithm>

#include "polylab/errors.hpp"

namespace polylab {

Factor::Factor(std::vector<Polynomial> gs) : polys(std::move(gs)) {
    delta.reserve(polys.size());
    for (const auto& g : polys) delta.push_back(std::max(1, g.degree()));
    validate();
}

Factor::Factor(std::vector<Polynomial> gs, std::vector<int> deltas)
    : polys(std::move(gs)), delta(std::move(deltas)) {
    validate();
}

int Factor::order() const {
    int d = 0;
    for (const auto& g : polys) d = std::max(d, g.degree());
    return d;
}

FieldSpec Factor::field() const {
    if (polys.empty()) throw precondition_error("empty factor has no field");
    return polys[0].field();
}

int Factor::n_vars() const {
    if (polys.empty()) throw precondition_error("empty factor has no arity");
    return polys[0].n_vars();
}

void Factor::validate() const {
    if (delta.size() != polys.size())
        throw precondition_error("factor delta map size mismatch");
    for (std::size_t i = 1; i < polys.size(); ++i) {
        if (polys[i].field() != polys[0].field())
            throw field_mismatch("factor members over different fields");
        if (polys[i].n_vars() != polys[0].n_vars())
            throw precondition_error("factor members with different variable counts");
    }
    for (std::size_t i = 0; i < polys.size(); ++i) {
        const int d = polys[i].degree();
        if (delta[i] < 1 || delta[i] > std::max(1, d))
            throw precondition_error("factor degree bound outside [1, deg] for member " +
                                     std::to_string(i));
    }
}

std::size_t RegionMap::nonempty() const {
    std::size_t c = 0;
    for (auto v : counts)
        if (v) ++c;
    return c;
}

namespace {

std::vector<FunctionTable> tabulate_members(const Factor& g, std::size_t budget) {
    std::vector<FunctionTable> tables;
    tables.reserve(g.polys.size());
    for (const auto& q : g.polys) tables.push_back(tabulate(q, budget));
    return tables;
}

}  // namespace

RegionMap region_decompose(const Factor& g, std::size_t budget) {
    if (g.polys.empty()) {
        // one region holding everything; without a field the count is symbolic
        return RegionMap{2, 0, {0}};
    }
    const std::uint8_t p = g.field().p;
    const std::size_t m = g.dimension();
    const std::size_t cells = require_table_size(p, static_cast<int>(m), budget, "region_decompose");
    const auto tables = tabulate_members(g, budget);
    const std::size_t size = tables[0].size();

    RegionMap r{p, m, std::vector<std::size_t>(cells, 0)};
    for (std::size_t x = 0; x < size; ++x) {
        std::size_t cell = 0;
        for (std::size_t i = m; i-- > 0;) cell = cell * p + tables[i].values[x];
        ++r.counts[cell];
    }
    return r;
}

UniformityReport uniformity_report(const Factor& g, std::size_t budget) {
    UniformityReport rep;
    if (g.polys.empty()) return rep;
    const RegionMap r = region_decompose(g, budget);
    std::size_t total = 0;
    for (auto c : r.counts) total += c;
    const double expected = static_cast<double>(total) / static_cast<double>(r.counts.size());
    for (auto c : r.counts) {
        if (c == 0) ++rep.empty_regions;
        rep.max_rel_dev =
            std::max(rep.max_rel_dev, std::abs(static_cast<double>(c) / expected - 1.0));
    }
    return rep;
}

FunctionOfResult is_function_of_tables(const FunctionTable& target,
                                       const std::vector<const FunctionTable*>& components) {
    const std::uint8_t p = target.field.p;
    const std::size_t m = components.size();
    auto cells_opt = checked_pow(p, static_cast<int>(m), default_table_budget());
    if (!cells_opt)
        throw budget_error("is_function_of: region index space p^" + std::to_string(m) +
                           " exceeds the table budget");
    const std::size_t cells = *cells_opt;

    FactorLookup lk{p, m, std::vector<std::uint8_t>(cells, 0), std::vector<bool>(cells, false),
                    false};
    std::vector<std::size_t> first_seen(cells, SIZE_MAX);
    for (std::size_t x = 0; x < target.size(); ++x) {
        std::size_t cell = 0;
        for (std::size_t i = m; i-- > 0;) cell = cell * p + components[i]->values[x];
        if (!lk.defined[cell]) {
            lk.defined[cell] = true;
            lk.values[cell] = target.values[x];
            first_seen[cell] = x;
        } else if (lk.values[cell] != target.values[x]) {
            FunctionOfWitness w;
            w.region = cell;
            w.a = point_from_index(first_seen[cell], p, target.nvars);
            w.b = point_from_index(x, p, target.nvars);
            return FunctionOfResult{std::nullopt, w};
        }
    }
    for (std::size_t c = 0; c < cells; ++c)
        if (!lk.defined[c]) {
            lk.has_empty_cells = true;
            break;
        }
    return FunctionOfResult{std::move(lk), std::nullopt};
}

FunctionOfResult is_function_of(const Polynomial& q, const Factor& g, std::size_t budget) {
    const FunctionTable target = tabulate(q, budget);
    if (g.polys.empty()) {
        std::vector<const FunctionTable*> none;
        return is_function_of_tables(target, none);
    }
    if (g.field() != q.field()) throw field_mismatch("factor and polynomial field mismatch");
    if (g.n_vars() != q.n_vars())
        throw precondition_error("factor and polynomial arity mismatch");
    const auto tables = tabulate_members(g, budget);
    std::vector<const FunctionTable*> ptrs;
    ptrs.reserve(tables.size());
    for (const auto& t : tables) ptrs.push_back(&t);
    return is_function_of_tables(target, ptrs);
}

bool high_deriv_identity_check(const Polynomial& f, int r) {
    if (r <= f.degree())
        throw precondition_error("high_deriv_identity_check requires r > deg(f)");
    const int n = f.n_vars();
    const int n_out = (r + 1) * n;

    // sum over I of (-1)^(r-|I|) f(X + Y_I) must vanish identically
    Polynomial acc = Polynomial::zero(f.field(), n_out);
    for (std::uint32_t mask = 0; mask < (1u << r); ++mask) {
        std::vector<LinearSub> subs(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            auto& s = subs[static_cast<std::size_t>(v)];
            s.vars = {{v, 1}};
            for (int i = 0; i < r; ++i)
                if (mask >> i & 1) s.vars.push_back({(i + 1) * n + v, 1});
        }
        Polynomial term = f.substitute(n_out, subs);
        const bool odd = (r - __builtin_popcount(mask)) % 2 == 1;
        acc = odd ? acc - term : acc + term;
    }
    return acc.is_zero();
}

}  // namespace polylab
