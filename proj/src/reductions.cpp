#include "polylab/reductions.hpp"

#include <algorithm>
#include <cmath>

#include "polylab/errors.hpp"
#include "polylab/transform.hpp"

namespace polylab {

Polynomial CertificateComponent::realize(const Polynomial& q) const {
    if (kind == Kind::derivative) return derivative(q, shift);
    if (!base) throw precondition_error("shifted_g component without a base polynomial");
    return base->shift(shift);
}

bool verify_certificate(const ComputationCertificate& cert, const Polynomial& q,
                        std::size_t budget) {
    const std::uint8_t p = q.field().p;
    const FunctionTable tq = tabulate(q, budget);
    std::vector<FunctionTable> comp;
    comp.reserve(cert.components.size());
    for (const auto& c : cert.components) comp.push_back(tabulate(c.realize(q), budget));
    if (cert.lookup.dimension != cert.components.size()) return false;
    for (std::size_t x = 0; x < tq.size(); ++x) {
        std::size_t cell = 0;
        for (std::size_t i = comp.size(); i-- > 0;) cell = cell * p + comp[i].values[x];
        if (cert.lookup.at(cell) != tq.values[x]) return false;
    }
    return true;
}

std::uint8_t Approximator::combine(const std::vector<std::uint8_t>& votes, std::uint8_t p) const {
    std::vector<std::size_t> counts(p, 0);
    for (auto v : votes) ++counts[v];
    std::size_t best = 0;
    for (std::size_t v = 1; v < p; ++v)
        if (counts[v] > counts[best]) best = v;
    return static_cast<std::uint8_t>(best);
}

std::uint8_t Approximator::predict(const Polynomial& q, const Point& x) const {
    const std::uint8_t p = q.field().p;
    const std::uint8_t qx = q.evaluate_raw(x);
    std::vector<std::uint8_t> votes;
    votes.reserve(shifts.size());
    Point pt(x.size());
    for (const auto& a : shifts) {
        for (std::size_t i = 0; i < x.size(); ++i) pt[i] = fp::add(x[i], a[i], p);
        const std::uint8_t diff = fp::sub(q.evaluate_raw(pt), qx, p);
        votes.push_back(fp::sub(plurality.value, diff, p));
    }
    return combine(votes, p);
}

Approximator bv_approximator(const Polynomial& q, std::size_t s, Rng& rng,
                             const ApproximatorConfig& cfg) {
    if (s < 1) throw precondition_error("bv_approximator needs s >= 1");
    const std::uint8_t p = q.field().p;
    const int n = q.n_vars();

    const auto exhaustive_size = checked_pow(p, n, cfg.exhaustive_cap);
    std::uint8_t beta;
    if (exhaustive_size) {
        const BiasReport rep = bias_exact(tabulate(q, cfg.budget));
        if (rep.magnitude < 1e-12)
            throw precondition_error(
                "bv_approximator: polynomial has zero bias (no plurality gap)");
        beta = rep.plurality_value.value;
    } else {
        std::vector<std::size_t> counts(p, 0);
        for (std::size_t i = 0; i < cfg.agreement_samples; ++i) ++counts[q.evaluate_raw(rng.point(p, n))];
        const std::size_t best =
            static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        if (counts[best] * p <= cfg.agreement_samples * 11 / 10)
            throw precondition_error("bv_approximator: sampled bias indistinguishable from zero");
        beta = static_cast<std::uint8_t>(best);
    }

    Approximator app;
    app.plurality = FieldElement{q.field(), beta};
    app.shifts.reserve(s);
    for (std::size_t j = 0; j < s; ++j) app.shifts.push_back(rng.point(p, n));

    std::size_t agree = 0, total = 0;
    if (exhaustive_size) {
        app.agreement_exhaustive = true;
        total = *exhaustive_size;
        for (std::size_t i = 0; i < total; ++i) {
            const Point x = point_from_index(i, p, n);
            if (app.predict(q, x) == q.evaluate_raw(x)) ++agree;
        }
    } else {
        app.agreement_exhaustive = false;
        total = cfg.agreement_samples;
        for (std::size_t i = 0; i < total; ++i) {
            const Point x = rng.point(p, n);
            if (app.predict(q, x) == q.evaluate_raw(x)) ++agree;
        }
    }
    app.measured_agreement = static_cast<double>(agree) / static_cast<double>(total);
    return app;
}

PeelResult fourier_peel(const ValueLookup& F, const std::vector<Polynomial>& gs,
                        const Polynomial& q, std::size_t budget) {
    const std::uint8_t p = q.field().p;
    const std::size_t c = gs.size();
    const std::size_t cells = require_table_size(p, static_cast<int>(c), budget, "fourier_peel");
    if (F.values.size() != cells)
        throw precondition_error("fourier_peel: lookup size is not p^c");

    PeelResult out;
    out.lookup_spectrum.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) out.lookup_spectrum[i] = root_of_unity(F.values[i], p);
    group_transform(out.lookup_spectrum, p);
    for (auto& z : out.lookup_spectrum) z /= static_cast<double>(cells);

    const FunctionTable tq = tabulate(q, budget);
    std::vector<FunctionTable> tg;
    tg.reserve(c);
    for (const auto& g : gs) {
        if (g.field() != q.field() || g.n_vars() != q.n_vars())
            throw precondition_error("fourier_peel: component polynomial arity/field mismatch");
        tg.push_back(tabulate(g, budget));
    }

    std::vector<std::uint8_t> best_alpha, alpha(c);
    double best = -1.0;
    std::vector<std::size_t> counts(p);
    for (std::size_t ai = 0; ai < cells; ++ai) {
        {
            std::size_t rem = ai;
            for (std::size_t i = 0; i < c; ++i) {
                alpha[i] = static_cast<std::uint8_t>(rem % p);
                rem /= p;
            }
        }
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t x = 0; x < tq.size(); ++x) {
            std::uint8_t v = tq.values[x];
            for (std::size_t i = 0; i < c; ++i)
                if (alpha[i]) v = fp::sub(v, fp::mul(alpha[i], tg[i].values[x], p), p);
            ++counts[v];
        }
        std::complex<double> b = 0;
        for (int v = 0; v < p; ++v)
            b += static_cast<double>(counts[static_cast<std::size_t>(v)]) *
                 root_of_unity(static_cast<std::uint8_t>(v), p);
        const double mag = std::abs(b) / static_cast<double>(tq.size());
        if (ai == 0 || mag > best + 1e-12 || (mag > best - 1e-12 && alpha < best_alpha)) {
            best = mag;
            best_alpha = alpha;
        }
    }

    out.alpha = best_alpha;
    out.peeled_bias = best;
    out.residual = q;
    for (std::size_t i = 0; i < c; ++i)
        if (best_alpha[i]) out.residual = out.residual - gs[i].scaled(best_alpha[i]);
    return out;
}

std::vector<Point> make_direction_pool(FieldSpec field, int n, std::size_t cap, Rng& rng) {
    const std::uint8_t p = field.p;
    const auto size = checked_pow(p, n, SIZE_MAX);
    std::vector<Point> pool;
    if (size && *size - 1 <= cap) {
        pool.reserve(*size - 1);
        for (std::size_t i = 1; i < *size; ++i) pool.push_back(point_from_index(i, p, n));
        return pool;
    }
    std::vector<std::size_t> seen;
    while (pool.size() < cap) {
        Point a = rng.point(p, n);
        const std::size_t idx = index_from_point(a, p);
        if (idx == 0 || std::find(seen.begin(), seen.end(), idx) != seen.end()) continue;
        seen.push_back(idx);
        pool.push_back(std::move(a));
    }
    return pool;
}

SubsetSearchResult find_expressing_subset(const FunctionTable& target,
                                          const std::vector<const FunctionTable*>& candidates,
                                          int l_max, std::uint64_t combo_ceiling) {
    const std::uint8_t p = target.field.p;
    SubsetSearchResult res;
    l_max = std::min<int>(l_max, static_cast<int>(candidates.size()));

    const auto max_cells = checked_pow(p, l_max, default_table_budget());
    if (!max_cells) throw budget_error("find_expressing_subset: p^l_max exceeds the table budget");
    std::vector<std::uint32_t> stamp(*max_cells, 0);
    std::vector<std::uint8_t> val(*max_cells, 0);
    std::uint32_t epoch = 0;

    std::vector<std::size_t> idx;
    for (int l = 0; l <= l_max; ++l) {
        idx.assign(static_cast<std::size_t>(l), 0);
        for (int i = 0; i < l; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
        const std::size_t cells = *checked_pow(p, l, SIZE_MAX);
        for (;;) {
            if (res.tried >= combo_ceiling) {
                res.truncated = true;
                return res;
            }
            ++res.tried;
            ++epoch;
            bool ok = true;
            for (std::size_t x = 0; x < target.size() && ok; ++x) {
                std::size_t cell = 0;
                for (std::size_t i = idx.size(); i-- > 0;)
                    cell = cell * p + candidates[idx[i]]->values[x];
                if (stamp[cell] != epoch) {
                    stamp[cell] = epoch;
                    val[cell] = target.values[x];
                } else if (val[cell] != target.values[x]) {
                    ok = false;
                }
            }
            if (ok) {
                FactorLookup lk{p, static_cast<std::size_t>(l),
                                std::vector<std::uint8_t>(cells, 0), std::vector<bool>(cells, false),
                                false};
                for (std::size_t cell = 0; cell < cells; ++cell) {
                    if (stamp[cell] == epoch) {
                        lk.defined[cell] = true;
                        lk.values[cell] = val[cell];
                    } else {
                        lk.has_empty_cells = true;
                    }
                }
                res.chosen = idx;
                res.lookup = std::move(lk);
                return res;
            }
            // next combination of size l
            if (l == 0) break;
            int i = l - 1;
            while (i >= 0 &&
                   idx[static_cast<std::size_t>(i)] ==
                       candidates.size() - static_cast<std::size_t>(l - i))
                --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < l; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return res;
}

namespace {

FunctionTable derivative_table(const FunctionTable& tq, const Point& a) {
    const std::uint8_t p = tq.field.p;
    const int n = tq.nvars;
    FunctionTable d{tq.field, n, std::vector<std::uint8_t>(tq.size())};
    Point x(static_cast<std::size_t>(n), 0), y(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < tq.size(); ++i) {
        for (int j = 0; j < n; ++j)
            y[static_cast<std::size_t>(j)] =
                fp::add(x[static_cast<std::size_t>(j)], a[static_cast<std::size_t>(j)], p);
        d.values[i] = fp::sub(tq.values[index_from_point(y, p)], tq.values[i], p);
        for (int j = 0; j < n; ++j) {
            auto& c = x[static_cast<std::size_t>(j)];
            if (++c < p) break;
            c = 0;
        }
    }
    return d;
}

}  // namespace

RankSearchResult rank_via_derivatives(const Polynomial& q, int c_max,
                                      const std::vector<Point>& pool, std::size_t budget) {
    RankSearchResult res;
    res.pool_size = pool.size();
    const auto full = checked_pow(q.field().p, q.n_vars(), SIZE_MAX);
    res.pool_exhaustive = full && pool.size() + 1 >= *full;

    const FunctionTable tq = tabulate(q, budget);
    std::vector<FunctionTable> dtabs;
    dtabs.reserve(pool.size());
    for (const auto& a : pool) dtabs.push_back(derivative_table(tq, a));
    std::vector<const FunctionTable*> cands;
    cands.reserve(dtabs.size());
    for (const auto& t : dtabs) cands.push_back(&t);

    SubsetSearchResult sr = find_expressing_subset(tq, cands, c_max, UINT64_MAX);
    res.subsets_tried = sr.tried;
    if (!sr.chosen) return res;

    ComputationCertificate cert;
    for (auto j : *sr.chosen)
        cert.components.push_back(
            CertificateComponent{CertificateComponent::Kind::derivative, pool[j], std::nullopt});
    cert.lookup = std::move(sr.lookup);
    if (!verify_certificate(cert, q, budget))
        throw std::logic_error("rank_via_derivatives: internal verification failed");
    cert.verified = true;
    res.c = static_cast<int>(cert.components.size());
    res.certificate = std::move(cert);
    return res;
}

double default_epsilon_d(int d) {
    double v = 1.0;
    for (int i = 0; i < 2 * (d + 1); ++i) v /= 2.0;
    return v;
}

ReduceResult avg_to_worst(const Polynomial& q, const std::vector<Polynomial>& gs,
                          const ValueLookup& F, int c_max, const std::vector<Point>& pool,
                          std::size_t budget, double epsilon_d) {
    const std::uint8_t p = q.field().p;
    ReduceResult out;
    out.peel = fourier_peel(F, gs, q, budget);

    {
        // exact phase correlation between q and the composition F(g_1..g_c)
        const FunctionTable tq = tabulate(q, budget);
        std::vector<FunctionTable> tg;
        for (const auto& g : gs) tg.push_back(tabulate(g, budget));
        std::complex<double> acc = 0;
        for (std::size_t x = 0; x < tq.size(); ++x) {
            std::size_t cell = 0;
            for (std::size_t i = tg.size(); i-- > 0;) cell = cell * p + tg[i].values[x];
            acc += root_of_unity(fp::sub(tq.values[x], F.at(cell), p), p);
        }
        out.approximation_bias = std::abs(acc) / static_cast<double>(tq.size());
        out.epsilon_d = epsilon_d > 0 ? epsilon_d : default_epsilon_d(q.degree());
        out.meets_epsilon_d = out.approximation_bias >= out.epsilon_d;
    }
    out.rank = rank_via_derivatives(out.peel.residual, c_max, pool, budget);
    if (!out.rank.certificate) return out;

    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < gs.size(); ++i)
        if (out.peel.alpha[i]) used.push_back(i);

    const auto& rank_cert = *out.rank.certificate;
    const std::size_t r = rank_cert.components.size();
    const std::size_t cprime = r + used.size() * r + used.size();
    const std::size_t cells = require_table_size(p, static_cast<int>(cprime), budget,
                                                 "avg_to_worst certificate lookup");

    ComputationCertificate cert;
    for (const auto& comp : rank_cert.components)
        cert.components.push_back(
            CertificateComponent{CertificateComponent::Kind::derivative, comp.shift, std::nullopt});
    for (auto i : used)
        for (const auto& comp : rank_cert.components)
            cert.components.push_back(CertificateComponent{CertificateComponent::Kind::shifted_g,
                                                           comp.shift, gs[i]});
    const Point zero(static_cast<std::size_t>(q.n_vars()), 0);
    for (auto i : used)
        cert.components.push_back(
            CertificateComponent{CertificateComponent::Kind::shifted_g, zero, gs[i]});

    // Tuple layout: u_j = D_{a_j} q, then v_{i,j} = g_i(x + a_j), then w_i = g_i(x).
    // D_{a_j} residual = u_j - sum_i alpha_i (v_{i,j} - w_i); the final value is
    // rank_lookup(those) + sum_i alpha_i w_i.
    cert.lookup = FactorLookup{p, cprime, std::vector<std::uint8_t>(cells, 0),
                               std::vector<bool>(cells, true), false};
    std::vector<std::uint8_t> tuple(cprime);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::size_t rem = cell;
        for (std::size_t i = 0; i < cprime; ++i) {
            tuple[i] = static_cast<std::uint8_t>(rem % p);
            rem /= p;
        }
        std::size_t inner_cell = 0;
        for (std::size_t j = r; j-- > 0;) {
            std::uint8_t uj = tuple[j];
            for (std::size_t ui = 0; ui < used.size(); ++ui) {
                const std::uint8_t vij = tuple[r + ui * r + j];
                const std::uint8_t wi = tuple[r + used.size() * r + ui];
                const std::uint8_t ai = out.peel.alpha[used[ui]];
                uj = fp::sub(uj, fp::mul(ai, fp::sub(vij, wi, p), p), p);
            }
            inner_cell = inner_cell * p + uj;
        }
        std::uint8_t v = rank_cert.lookup.at(inner_cell);
        for (std::size_t ui = 0; ui < used.size(); ++ui) {
            const std::uint8_t wi = tuple[r + used.size() * r + ui];
            v = fp::add(v, fp::mul(out.peel.alpha[used[ui]], wi, p), p);
        }
        cert.lookup.values[cell] = v;
    }

    if (!verify_certificate(cert, q, budget))
        throw std::logic_error("avg_to_worst: merged certificate failed verification");
    cert.verified = true;
    out.certificate = std::move(cert);
    return out;
}

DixonReport bilinear_dixon_check(const Matrix& a, std::size_t budget) {
    const std::uint8_t p = a.field().p;
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    DixonReport rep;
    rep.rank_a = matrix_rank(a);

    const std::size_t pairs = require_table_size(p, rows + cols, budget, "bilinear_dixon_check");
    std::complex<double> acc = 0;
    Point x(static_cast<std::size_t>(rows), 0);
    const auto ycount = *checked_pow(p, cols, SIZE_MAX);
    for (std::size_t xi = 0; xi < pairs / ycount; ++xi) {
        // v = A^t x once per x
        std::vector<std::uint8_t> v(static_cast<std::size_t>(cols), 0);
        for (int c = 0; c < cols; ++c) {
            std::uint8_t s = 0;
            for (int r = 0; r < rows; ++r)
                s = fp::add(s,
                            fp::mul(a.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)),
                                    x[static_cast<std::size_t>(r)], p),
                            p);
            v[static_cast<std::size_t>(c)] = s;
        }
        Point y(static_cast<std::size_t>(cols), 0);
        for (std::size_t yi = 0; yi < ycount; ++yi) {
            std::uint8_t val = 0;
            for (int c = 0; c < cols; ++c)
                val = fp::add(val, fp::mul(v[static_cast<std::size_t>(c)],
                                           y[static_cast<std::size_t>(c)], p),
                              p);
            acc += root_of_unity(val, p);
            for (int c = 0; c < cols; ++c) {
                auto& d = y[static_cast<std::size_t>(c)];
                if (++d < p) break;
                d = 0;
            }
        }
        for (int r = 0; r < rows; ++r) {
            auto& d = x[static_cast<std::size_t>(r)];
            if (++d < p) break;
            d = 0;
        }
    }
    rep.bias_mag = std::abs(acc) / static_cast<double>(pairs);
    rep.bilinear_law_holds = std::abs(rep.bias_mag - std::pow(double(p), -rep.rank_a)) <= 1e-9;

    if (rows == cols) {
        rep.has_quadratic = true;
        rep.rank_sym = matrix_rank(a + a.transpose());
        const std::size_t size = *checked_pow(p, rows, SIZE_MAX);
        std::complex<double> qa = 0;
        Point xx(static_cast<std::size_t>(rows), 0);
        for (std::size_t i = 0; i < size; ++i) {
            std::uint8_t val = 0;
            for (int r = 0; r < rows; ++r) {
                if (xx[static_cast<std::size_t>(r)] == 0) continue;
                for (int c = 0; c < cols; ++c)
                    val = fp::add(val,
                                  fp::mul(fp::mul(xx[static_cast<std::size_t>(r)],
                                                  a.at(static_cast<std::size_t>(r),
                                                       static_cast<std::size_t>(c)),
                                                  p),
                                          xx[static_cast<std::size_t>(c)], p),
                                  p);
            }
            qa += root_of_unity(val, p);
            for (int r = 0; r < rows; ++r) {
                auto& d = xx[static_cast<std::size_t>(r)];
                if (++d < p) break;
                d = 0;
            }
        }
        rep.quad_bias_mag = std::abs(qa) / static_cast<double>(size);
        const double law = std::pow(double(p), -rep.rank_sym / 2.0);
        rep.quad_law_holds =
            rep.quad_bias_mag <= 1e-9 || std::abs(rep.quad_bias_mag - law) <= 1e-9;
    } else {
        rep.rank_sym = -1;
    }
    return rep;
}

std::uint8_t MultilinearForm::evaluate(const std::vector<Point>& all_blocks) const {
    const std::uint8_t p = field.p;
    std::uint8_t acc = 0;
    for (const auto& [coords, coeff] : terms) {
        std::uint8_t v = coeff;
        for (std::size_t t = 0; t < blocks.size() && v; ++t)
            v = fp::mul(v,
                        all_blocks[static_cast<std::size_t>(blocks[t])]
                                  [static_cast<std::size_t>(coords[t])],
                        p);
        acc = fp::add(acc, v, p);
    }
    return acc;
}

MultilinearForm MultilinearForm::fix_block(int label, const Point& a) const {
    const auto it = std::find(blocks.begin(), blocks.end(), label);
    if (it == blocks.end()) throw precondition_error("fix_block: label not present");
    const std::size_t pos = static_cast<std::size_t>(it - blocks.begin());
    MultilinearForm out{field, width, {}, {}};
    out.blocks = blocks;
    out.blocks.erase(out.blocks.begin() + static_cast<std::ptrdiff_t>(pos));
    for (const auto& [coords, coeff] : terms) {
        const std::uint8_t c =
            fp::mul(coeff, a[static_cast<std::size_t>(coords[pos])], field.p);
        if (!c) continue;
        std::vector<int> rest = coords;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos));
        auto [jt, fresh] = out.terms.emplace(std::move(rest), c);
        if (!fresh) {
            jt->second = fp::add(jt->second, c, field.p);
            if (jt->second == 0) out.terms.erase(jt);
        }
    }
    return out;
}

MultilinearRankResult multilinear_bias_rank(const MultilinearForm& l, int c_max, Rng& rng,
                                            std::size_t pool_cap, std::size_t budget) {
    const std::uint8_t p = l.field.p;
    const int d = l.degree();
    const int w = l.width;
    const std::size_t domain = require_table_size(p, d * w, budget, "multilinear_bias_rank");

    auto form_table = [&](const MultilinearForm& f) {
        FunctionTable t{l.field, d * w, std::vector<std::uint8_t>(domain)};
        std::vector<Point> blocks(static_cast<std::size_t>(d),
                                  Point(static_cast<std::size_t>(w), 0));
        for (std::size_t i = 0; i < domain; ++i) {
            t.values[i] = f.evaluate(blocks);
            for (int v = 0; v < d * w; ++v) {
                auto& c = blocks[static_cast<std::size_t>(v / w)][static_cast<std::size_t>(v % w)];
                if (++c < p) break;
                c = 0;
            }
        }
        return t;
    };

    MultilinearRankResult res;
    const FunctionTable tl = form_table(l);
    std::complex<double> acc = 0;
    for (auto v : tl.values) acc += root_of_unity(v, p);
    res.bias_mag = std::abs(acc) / static_cast<double>(domain);
    if (res.bias_mag <= 1e-12) return res;

    std::vector<Point> pool = make_direction_pool(l.field, w, pool_cap, rng);
    std::vector<MultilinearComponent> comps;
    std::vector<FunctionTable> tabs;
    for (int t : l.blocks) {
        for (const auto& a : pool) {
            MultilinearComponent mc{t, a, l.fix_block(t, a)};
            if (mc.form.terms.empty()) continue;
            tabs.push_back(form_table(mc.form));
            comps.push_back(std::move(mc));
        }
    }
    std::vector<const FunctionTable*> cands;
    cands.reserve(tabs.size());
    for (const auto& t : tabs) cands.push_back(&t);

    SubsetSearchResult sr = find_expressing_subset(tl, cands, c_max, UINT64_MAX);
    res.subsets_tried = sr.tried;
    if (!sr.chosen) return res;
    MultilinearDecomposition dec;
    for (auto j : *sr.chosen) dec.components.push_back(comps[j]);
    dec.lookup = std::move(sr.lookup);
    res.decomposition = std::move(dec);
    return res;
}

}  // namespace polylab
