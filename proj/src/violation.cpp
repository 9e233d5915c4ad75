#include <algorithm>

#include "polylab/derivative.hpp"
#include "polylab/errors.hpp"
#include "polylab/factor.hpp"
#include "polylab/reductions.hpp"

namespace polylab {

namespace {

// g(X + Y_mask) over the (r+1)*n-variable space (X block first, then Y_1..Y_r).
Polynomial shift_by_blocks(const Polynomial& g, int r, std::uint32_t mask) {
    const int n = g.n_vars();
    const int n_out = (r + 1) * n;
    std::vector<LinearSub> subs(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        auto& s = subs[static_cast<std::size_t>(v)];
        s.vars = {{v, 1}};
        for (int j = 0; j < r; ++j)
            if (mask >> j & 1) s.vars.push_back({(j + 1) * n + v, 1});
    }
    return g.substitute(n_out, subs);
}

struct Slot {
    std::size_t member;
    std::uint32_t mask;
};

struct CandidateComponent {
    std::size_t member;
    Point direction;
    std::uint32_t shift_set;
    Polynomial h;            // derivative over the base space
    FunctionTable table;     // h(X + Y_shift_set) over the extended space
};

}  // namespace

ViolationSearchOutcome violation_search(const Factor& g, const ViolationSearchConfig& cfg,
                                        Rng& rng) {
    ViolationSearchOutcome out;
    if (g.polys.empty()) {
        out.r_searched = cfg.r_max;
        return out;
    }
    g.validate();
    const std::uint8_t p = g.field().p;
    const int n = g.n_vars();
    const std::size_t m = g.dimension();

    std::vector<Point> pool = make_direction_pool(g.field(), n, cfg.direction_pool_cap, rng);

    for (int r = 0; r <= cfg.r_max; ++r) {
        out.r_searched = r;
        const auto domain_opt = checked_pow(p, (r + 1) * n, cfg.budget);
        if (!domain_opt) {
            out.truncated = true;
            out.note = "extended domain p^((r+1)n) exceeds budget at r=" + std::to_string(r);
            return out;
        }

        std::vector<Slot> slots;
        for (std::size_t i = 0; i < m; ++i)
            for (std::uint32_t mask = 0; mask < (1u << r); ++mask)
                if (__builtin_popcount(mask) <= g.delta[i]) slots.push_back({i, mask});

        std::vector<FunctionTable> slot_tables;
        slot_tables.reserve(slots.size());
        for (const auto& s : slots)
            slot_tables.push_back(tabulate(shift_by_blocks(g.polys[s.member], r, s.mask), cfg.budget));
        const std::size_t domain = slot_tables[0].size();

        // Expressing candidates: shifted derivatives of every member. The
        // participant filter is applied per pattern below.
        std::vector<CandidateComponent> cands;
        if (cfg.growth_budget > 0) {
            for (std::size_t i = 0; i < m; ++i) {
                for (const auto& a : pool) {
                    Polynomial h = derivative(g.polys[i], a);
                    if (h.is_constant()) continue;
                    for (std::uint32_t mask = 0; mask < (1u << r); ++mask) {
                        FunctionTable t = tabulate(shift_by_blocks(h, r, mask), cfg.budget);
                        cands.push_back({i, a, mask, h, std::move(t)});
                    }
                }
            }
        }

        const auto patterns_opt = checked_pow(p, static_cast<int>(slots.size()), UINT64_MAX >> 1);
        if (!patterns_opt || *patterns_opt - 1 > cfg.pattern_ceiling) {
            out.truncated = true;
            out.note = "coefficient pattern space exceeds ceiling at r=" + std::to_string(r);
        }

        std::vector<std::uint8_t> alpha(slots.size());
        FunctionTable combo{g.field(), (r + 1) * n, std::vector<std::uint8_t>(domain)};
        for (std::uint64_t pat = 1; pat < (patterns_opt ? *patterns_opt : UINT64_MAX); ++pat) {
            if (pat > cfg.pattern_ceiling) break;
            ++out.patterns_tried;
            {
                std::uint64_t rem = pat;
                for (std::size_t i = 0; i < slots.size(); ++i) {
                    alpha[i] = static_cast<std::uint8_t>(rem % p);
                    rem /= p;
                }
            }
            std::fill(combo.values.begin(), combo.values.end(), 0);
            for (std::size_t i = 0; i < slots.size(); ++i) {
                if (!alpha[i]) continue;
                for (std::size_t x = 0; x < domain; ++x)
                    combo.values[x] =
                        fp::add(combo.values[x], fp::mul(alpha[i], slot_tables[i].values[x], p), p);
            }

            std::vector<bool> participates(m, false);
            for (std::size_t i = 0; i < slots.size(); ++i)
                if (alpha[i]) participates[slots[i].member] = true;

            std::vector<const FunctionTable*> filtered;
            std::vector<std::size_t> filtered_idx;
            for (std::size_t ci = 0; ci < cands.size(); ++ci) {
                if (!participates[cands[ci].member]) continue;
                filtered.push_back(&cands[ci].table);
                filtered_idx.push_back(ci);
            }

            SubsetSearchResult sr =
                find_expressing_subset(combo, filtered, cfg.growth_budget, cfg.combo_ceiling);
            if (sr.truncated) {
                out.truncated = true;
                if (out.note.empty())
                    out.note = "expressibility candidate space exceeds ceiling at r=" +
                               std::to_string(r);
            }
            if (!sr.chosen) continue;

            ViolationWitness w;
            w.r = r;
            w.combination = Polynomial::zero(g.field(), (r + 1) * n);
            for (std::size_t i = 0; i < slots.size(); ++i) {
                if (!alpha[i]) continue;
                w.alpha[{slots[i].member, slots[i].mask}] = alpha[i];
                w.combination =
                    w.combination + shift_by_blocks(g.polys[slots[i].member], r, slots[i].mask)
                                        .scaled(alpha[i]);
            }
            for (auto fi : *sr.chosen) {
                const auto& c = cands[filtered_idx[fi]];
                w.expressing.push_back({c.member, c.direction, c.shift_set, c.h});
            }
            w.lookup = std::move(sr.lookup);
            out.witness = std::move(w);
            return out;
        }
    }
    return out;
}

namespace {

struct Member {
    Polynomial poly;
    int delta;
    MemberProvenance prov;
};

Factor factor_of(const std::vector<Member>& ms) {
    std::vector<Polynomial> polys;
    std::vector<int> deltas;
    for (const auto& m : ms) {
        polys.push_back(m.poly);
        deltas.push_back(m.delta);
    }
    return Factor{std::move(polys), std::move(deltas)};
}

}  // namespace

RegularizeResult regularize(const std::vector<Polynomial>& inputs, const RegularizeConfig& cfg,
                            Rng& rng) {
    RegularizeResult res;
    std::vector<Member> members;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i].is_constant()) continue;  // computable from any factor
        members.push_back({inputs[i], inputs[i].degree(), MemberProvenance{i, {}}});
    }

    for (res.iterations = 0; res.iterations < cfg.iteration_cap; ++res.iterations) {
        Factor g = factor_of(members);
        ViolationSearchOutcome vo = violation_search(g, cfg.search, rng);
        if (!vo.witness) {
            res.refined = !vo.truncated;
            res.truncated_search = vo.truncated;
            break;
        }
        const ViolationWitness& w = *vo.witness;

        // Update target: first maximal-degree participant; maximal index set
        // by inclusion among its nonzero coefficients.
        std::size_t i0 = SIZE_MAX;
        int best_deg = -1;
        for (const auto& [key, coeff] : w.alpha) {
            (void)coeff;
            const int d = members[key.first].poly.degree();
            if (d > best_deg) {
                best_deg = d;
                i0 = key.first;
            }
        }
        std::uint32_t i0_mask = 0;
        bool have_mask = false;
        for (const auto& [key, coeff] : w.alpha) {
            (void)coeff;
            if (key.first != i0) continue;
            const std::uint32_t mask = key.second;
            if (!have_mask) {
                i0_mask = mask;
                have_mask = true;
                continue;
            }
            const bool covers = (mask & i0_mask) == i0_mask;
            const bool covered = (mask | i0_mask) == i0_mask;
            if ((covers && !covered) ||
                (!covers && !covered &&
                 (__builtin_popcount(mask) > __builtin_popcount(i0_mask) ||
                  (__builtin_popcount(mask) == __builtin_popcount(i0_mask) && mask > i0_mask))))
                i0_mask = mask;
        }

        RefinementStep step;
        step.lowered_member = i0;
        step.old_delta = members[i0].delta;

        // adjoin the expressing derivatives
        for (const auto& ex : w.expressing) {
            if (ex.h.is_constant()) continue;
            bool dup = false;
            for (const auto& mm : members)
                if (mm.poly == ex.h) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            MemberProvenance prov = members[ex.source].prov;
            prov.chain.push_back(ex.direction);
            members.push_back({ex.h, ex.h.degree(), std::move(prov)});
            ++step.added;
        }

        const int new_delta = static_cast<int>(__builtin_popcount(i0_mask)) - 1;
        step.new_delta = new_delta;
        if (new_delta < 1) {
            members.erase(members.begin() + static_cast<std::ptrdiff_t>(i0));
        } else {
            members[i0].delta = std::min(members[i0].delta - 1, new_delta);
        }
        res.trace.push_back(std::move(step));
    }

    // Refinement contract: every input must factor through the output.
    for (std::size_t pass = 0; pass < inputs.size() + 1; ++pass) {
        bool all_ok = true;
        Factor g = factor_of(members);
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            if (inputs[i].is_constant()) continue;
            if (!is_function_of(inputs[i], g, cfg.search.budget).ok()) {
                members.push_back({inputs[i], inputs[i].degree(), MemberProvenance{i, {}}});
                all_ok = false;
                break;
            }
        }
        if (all_ok) break;
    }

    res.factor = factor_of(members);
    res.provenance.clear();
    for (const auto& m : members) res.provenance.push_back(m.prov);
    return res;
}

}  // namespace polylab
