#include "polylab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

#include "polylab/errors.hpp"

namespace polylab {

std::size_t index_from_point(const Point& x, std::uint8_t p) {
    std::size_t idx = 0;
    for (std::size_t i = x.size(); i-- > 0;) idx = idx * p + x[i];
    return idx;
}

Point point_from_index(std::size_t idx, std::uint8_t p, int n) {
    Point x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(idx % p);
        idx /= p;
    }
    return x;
}

int Term::total_degree() const {
    return std::accumulate(exps.begin(), exps.end(), 0,
                           [](int s, std::uint8_t e) { return s + e; });
}

namespace {

// x^e = x^{((e-1) mod (p-1)) + 1} for e >= 1 on F_p.
std::uint8_t frobenius_exp(std::uint8_t e, std::uint8_t p) {
    if (e < p) return e;
    return static_cast<std::uint8_t>((e - 1) % (p - 1) + 1);
}

// Graded lexicographic, highest term first.
bool term_before(const Term& a, const Term& b) {
    const int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da > db;
    return a.exps > b.exps;
}

std::vector<Term> merge_terms(std::uint8_t p, std::vector<Term> terms) {
    std::map<std::vector<std::uint8_t>, std::uint8_t> acc;
    for (auto& t : terms) {
        if (t.coeff == 0) continue;
        auto [it, fresh] = acc.emplace(std::move(t.exps), t.coeff);
        if (!fresh) it->second = fp::add(it->second, t.coeff, p);
    }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [e, c] : acc)
        if (c != 0) out.push_back(Term{e, c});
    std::sort(out.begin(), out.end(), term_before);
    return out;
}

// Binomial and multinomial coefficients mod p, valid for arguments < p.
struct SmallBinomials {
    std::vector<std::vector<std::uint8_t>> c;
    explicit SmallBinomials(std::uint8_t p) : c(p) {
        for (int i = 0; i < p; ++i) {
            c[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i) + 1, 1);
            for (int j = 1; j < i; ++j)
                c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    fp::add(c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)],
                            c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)], p);
        }
    }
    std::uint8_t at(int n, int k) const {
        return c[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    }
};

}  // namespace

Polynomial Polynomial::from_terms(FieldSpec field, int n, std::vector<Term> terms) {
    for (auto& t : terms) {
        if (static_cast<int>(t.exps.size()) != n)
            throw precondition_error("term arity does not match variable count");
        for (auto& e : t.exps) e = frobenius_exp(e, field.p);
        t.coeff = fp::reduce(t.coeff, field.p);
    }
    Polynomial q(field, n);
    q.terms_ = merge_terms(field.p, std::move(terms));
    return q;
}

Polynomial Polynomial::unreduced(FieldSpec field, int n, std::vector<Term> terms) {
    for (auto& t : terms) {
        if (static_cast<int>(t.exps.size()) != n)
            throw precondition_error("term arity does not match variable count");
        t.coeff = fp::reduce(t.coeff, field.p);
    }
    Polynomial q(field, n);
    q.terms_ = merge_terms(field.p, std::move(terms));
    return q;
}

Polynomial Polynomial::constant(FieldSpec field, int n, long long c) {
    const std::uint8_t v = fp::reduce(c, field.p);
    Polynomial q(field, n);
    if (v != 0) q.terms_.push_back(Term{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0), v});
    return q;
}

Polynomial Polynomial::variable(FieldSpec field, int n, int i) {
    if (i < 0 || i >= n) throw precondition_error("variable index out of range");
    Term t{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0), 1};
    t.exps[static_cast<std::size_t>(i)] = 1;
    Polynomial q(field, n);
    q.terms_.push_back(std::move(t));
    return q;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].total_degree() == 0);
}

std::uint8_t Polynomial::constant_value() const {
    if (terms_.empty()) return 0;
    if (!is_constant()) throw precondition_error("constant_value on a nonconstant polynomial");
    return terms_[0].coeff;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.total_degree());
    return d;
}

bool Polynomial::is_canonical() const {
    for (const auto& t : terms_)
        for (auto e : t.exps)
            if (e >= field_.p) return false;
    return true;
}

std::uint8_t Polynomial::evaluate_raw(const Point& x) const {
    if (static_cast<int>(x.size()) != n_) throw precondition_error("point arity mismatch");
    const std::uint8_t p = field_.p;
    std::uint8_t acc = 0;
    for (const auto& t : terms_) {
        std::uint8_t v = t.coeff;
        for (std::size_t i = 0; i < t.exps.size() && v != 0; ++i)
            if (t.exps[i]) v = fp::mul(v, fp::pow(x[i], t.exps[i], p), p);
        acc = fp::add(acc, v, p);
    }
    return acc;
}

void Polynomial::check_compatible(const Polynomial& o) const {
    if (field_ != o.field_) throw field_mismatch("polynomials over different fields");
    if (n_ != o.n_) throw precondition_error("polynomials with different variable counts");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    check_compatible(o);
    std::vector<Term> ts = terms_;
    ts.insert(ts.end(), o.terms_.begin(), o.terms_.end());
    return from_terms(field_, n_, std::move(ts));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    check_compatible(o);
    std::vector<Term> ts = terms_;
    for (const auto& t : o.terms_) ts.push_back(Term{t.exps, fp::neg(t.coeff, field_.p)});
    return from_terms(field_, n_, std::move(ts));
}

Polynomial Polynomial::operator-() const { return scaled(fp::neg(1, field_.p)); }

Polynomial Polynomial::scaled(std::uint8_t c) const {
    std::vector<Term> ts;
    ts.reserve(terms_.size());
    for (const auto& t : terms_) ts.push_back(Term{t.exps, fp::mul(t.coeff, c, field_.p)});
    return from_terms(field_, n_, std::move(ts));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    check_compatible(o);
    std::vector<Term> ts;
    ts.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_) {
        for (const auto& b : o.terms_) {
            Term t{a.exps, fp::mul(a.coeff, b.coeff, field_.p)};
            for (std::size_t i = 0; i < t.exps.size(); ++i)
                t.exps[i] = static_cast<std::uint8_t>(t.exps[i] + b.exps[i]);
            ts.push_back(std::move(t));
        }
    }
    return from_terms(field_, n_, std::move(ts));
}

Polynomial Polynomial::shift(const Point& a) const {
    if (static_cast<int>(a.size()) != n_) throw precondition_error("shift offset arity mismatch");
    std::vector<LinearSub> subs(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        subs[static_cast<std::size_t>(i)].vars = {{i, 1}};
        subs[static_cast<std::size_t>(i)].constant = a[static_cast<std::size_t>(i)];
    }
    return substitute(n_, subs);
}

Polynomial Polynomial::substitute(int n_out, const std::vector<LinearSub>& subs) const {
    if (static_cast<int>(subs.size()) != n_)
        throw precondition_error("substitution arity mismatch");
    const std::uint8_t p = field_.p;
    SmallBinomials binom(p);

    // (c_1 u_1 + ... + c_t u_t + c_0)^e expanded as exponent/coefficient pairs.
    auto expand_power = [&](const LinearSub& s, std::uint8_t e) {
        std::vector<std::pair<std::vector<std::uint8_t>, std::uint8_t>> out;
        std::vector<std::uint8_t> exps(static_cast<std::size_t>(n_out), 0);
        auto rec = [&](auto&& self, std::size_t part, int left, std::uint8_t coeff) -> void {
            if (coeff == 0) return;
            if (part == s.vars.size()) {
                // remainder goes to the constant
                std::uint8_t c = coeff;
                if (left > 0) {
                    if (s.constant == 0) return;
                    c = fp::mul(c, fp::pow(s.constant, static_cast<unsigned>(left), p), p);
                }
                out.emplace_back(exps, c);
                return;
            }
            const auto [var, vc] = s.vars[part];
            for (int k = 0; k <= left; ++k) {
                std::uint8_t c = fp::mul(coeff, binom.at(left, k), p);
                if (k > 0) {
                    if (vc == 0) break;
                    c = fp::mul(c, fp::pow(vc, static_cast<unsigned>(k), p), p);
                    exps[static_cast<std::size_t>(var)] =
                        static_cast<std::uint8_t>(exps[static_cast<std::size_t>(var)] + k);
                }
                self(self, part + 1, left - k, c);
                if (k > 0)
                    exps[static_cast<std::size_t>(var)] =
                        static_cast<std::uint8_t>(exps[static_cast<std::size_t>(var)] - k);
            }
        };
        rec(rec, 0, e, 1);
        return out;
    };

    std::vector<Term> acc;
    for (const auto& t : terms_) {
        std::vector<std::pair<std::vector<std::uint8_t>, std::uint8_t>> partial = {
            {std::vector<std::uint8_t>(static_cast<std::size_t>(n_out), 0), t.coeff}};
        for (std::size_t i = 0; i < t.exps.size(); ++i) {
            if (t.exps[i] == 0) continue;
            auto factor = expand_power(subs[i], frobenius_exp(t.exps[i], p));
            std::vector<std::pair<std::vector<std::uint8_t>, std::uint8_t>> next;
            next.reserve(partial.size() * factor.size());
            for (const auto& [pe, pc] : partial) {
                for (const auto& [fe, fc] : factor) {
                    std::vector<std::uint8_t> e = pe;
                    for (std::size_t j = 0; j < e.size(); ++j)
                        e[j] = static_cast<std::uint8_t>(e[j] + fe[j]);
                    next.emplace_back(std::move(e), fp::mul(pc, fc, p));
                }
            }
            partial = std::move(next);
        }
        for (auto& [e, c] : partial) acc.push_back(Term{std::move(e), c});
    }
    return from_terms(field_, n_out, std::move(acc));
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t ti = 0; ti < terms_.size(); ++ti) {
        const auto& t = terms_[ti];
        if (ti) s += " + ";
        bool printed = false;
        if (t.coeff != 1 || t.total_degree() == 0) {
            s += std::to_string(int(t.coeff));
            printed = true;
        }
        for (std::size_t i = 0; i < t.exps.size(); ++i) {
            if (t.exps[i] == 0) continue;
            if (printed) s += "*";
            s += "x" + std::to_string(i);
            if (t.exps[i] > 1) s += "^" + std::to_string(int(t.exps[i]));
            printed = true;
        }
    }
    return s;
}

Polynomial reduce_frobenius(const Polynomial& q) {
    std::vector<Term> ts(q.terms().begin(), q.terms().end());
    return Polynomial::from_terms(q.field(), q.n_vars(), std::move(ts));
}

namespace {

class Parser {
public:
    Parser(std::string_view text, FieldSpec field, int n) : s_(text), field_(field), n_(n) {}

    Polynomial run() {
        std::vector<Term> terms;
        skip_ws();
        if (eof()) throw parse_error("empty polynomial", pos_);
        terms.push_back(parse_term());
        skip_ws();
        while (!eof()) {
            expect('+');
            terms.push_back(parse_term());
            skip_ws();
        }
        return Polynomial::from_terms(field_, n_, std::move(terms));
    }

private:
    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    void expect(char c) {
        skip_ws();
        if (eof() || peek() != c)
            throw parse_error(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }
    long long number() {
        skip_ws();
        if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
            throw parse_error("expected a number", pos_);
        long long v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (peek() - '0');
            if (v > 1'000'000'000) throw parse_error("number too large", pos_);
            ++pos_;
        }
        return v;
    }

    Term parse_term() {
        skip_ws();
        Term t{std::vector<std::uint8_t>(static_cast<std::size_t>(n_), 0), 1};
        bool any = false;
        if (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            const std::size_t at = pos_;
            const long long c = number();
            if (c >= field_.p)
                throw parse_error("coefficient " + std::to_string(c) + " not in [0, " +
                                      std::to_string(int(field_.p)) + ")",
                                  at);
            t.coeff = static_cast<std::uint8_t>(c);
            any = true;
        }
        for (;;) {
            skip_ws();
            std::size_t save = pos_;
            if (!eof() && peek() == '*') {
                ++pos_;
                skip_ws();
                if (eof() || peek() != 'x') throw parse_error("expected a variable after '*'", pos_);
            }
            if (eof() || peek() != 'x') {
                pos_ = save;
                break;
            }
            ++pos_;
            const std::size_t at = pos_;
            const long long idx = number();
            if (idx >= n_)
                throw parse_error("variable index " + std::to_string(idx) + " out of range (n=" +
                                      std::to_string(n_) + ")",
                                  at);
            long long e = 1;
            skip_ws();
            if (!eof() && peek() == '^') {
                ++pos_;
                e = number();
            }
            auto& cur = t.exps[static_cast<std::size_t>(idx)];
            long long combined = cur + e;
            if (combined >= field_.p && field_.p > 1)
                combined = (combined - 1) % (field_.p - 1) + 1;
            cur = static_cast<std::uint8_t>(combined);
            any = true;
        }
        if (!any) throw parse_error("expected a coefficient or variable", pos_);
        return t;
    }

    std::string_view s_;
    FieldSpec field_;
    int n_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, FieldSpec field, int n) {
    return Parser(text, field, n).run();
}

FunctionTable tabulate(const Polynomial& q, std::size_t budget) {
    const std::uint8_t p = q.field().p;
    const int n = q.n_vars();
    const std::size_t size = require_table_size(p, n, budget, "tabulate");
    FunctionTable t{q.field(), n, std::vector<std::uint8_t>(size, 0)};

    if (p == 2 && n <= 63 && q.is_canonical()) {
        // Monomials over F_2 are squarefree; a term contributes iff its
        // support is a subset of the point's support.
        std::vector<std::uint64_t> masks;
        masks.reserve(q.terms().size());
        for (const auto& term : q.terms()) {
            std::uint64_t m = 0;
            for (std::size_t i = 0; i < term.exps.size(); ++i)
                if (term.exps[i]) m |= (1ULL << i);
            masks.push_back(m);
        }
        parallel_for_chunked(size, [&](std::size_t, std::size_t b, std::size_t e) {
            for (std::size_t idx = b; idx < e; ++idx) {
                std::uint8_t v = 0;
                for (auto m : masks) v ^= ((idx & m) == m);
                t.values[idx] = v;
            }
        });
        return t;
    }

    parallel_for_chunked(size, [&](std::size_t, std::size_t b, std::size_t e) {
        Point x = point_from_index(b, p, n);
        for (std::size_t idx = b; idx < e; ++idx) {
            t.values[idx] = q.evaluate_raw(x);
            for (int i = 0; i < n; ++i) {  // odometer increment
                auto& c = x[static_cast<std::size_t>(i)];
                if (++c < p) break;
                c = 0;
            }
        }
    });
    return t;
}

Polynomial interpolate(const FunctionTable& t) {
    const std::uint8_t p = t.field.p;
    const int n = t.nvars;
    if (t.values.size() != checked_pow(p, n, SIZE_MAX).value_or(0))
        throw precondition_error("table length is not p^n");

    // Inverse of the p x p evaluation matrix V[v][e] = v^e over F_p.
    std::vector<std::vector<std::uint8_t>> vinv(p, std::vector<std::uint8_t>(2 * p, 0));
    for (int v = 0; v < p; ++v) {
        for (int e = 0; e < p; ++e)
            vinv[static_cast<std::size_t>(v)][static_cast<std::size_t>(e)] =
                fp::pow(static_cast<std::uint8_t>(v), static_cast<unsigned>(e), p);
        vinv[static_cast<std::size_t>(v)][static_cast<std::size_t>(p + v)] = 1;
    }
    for (int col = 0; col < p; ++col) {
        int piv = col;
        while (vinv[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)] == 0) ++piv;
        std::swap(vinv[static_cast<std::size_t>(piv)], vinv[static_cast<std::size_t>(col)]);
        const std::uint8_t inv = fp::inv(vinv[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)], p);
        for (auto& x : vinv[static_cast<std::size_t>(col)]) x = fp::mul(x, inv, p);
        for (int r = 0; r < p; ++r) {
            if (r == col) continue;
            const std::uint8_t f = vinv[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
            if (!f) continue;
            for (int c = 0; c < 2 * p; ++c)
                vinv[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                    fp::sub(vinv[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                            fp::mul(f, vinv[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)], p), p);
        }
    }

    std::vector<std::uint8_t> coef = t.values;
    std::size_t stride = 1;
    std::vector<std::uint8_t> scratch(p);
    for (int axis = 0; axis < n; ++axis) {
        const std::size_t block = stride * p;
        for (std::size_t base = 0; base < coef.size(); base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (int e = 0; e < p; ++e) {
                    std::uint8_t s = 0;
                    for (int v = 0; v < p; ++v)
                        s = fp::add(s,
                                    fp::mul(vinv[static_cast<std::size_t>(e)]
                                                [static_cast<std::size_t>(p + v)],
                                            coef[base + off + static_cast<std::size_t>(v) * stride], p),
                                    p);
                    scratch[static_cast<std::size_t>(e)] = s;
                }
                for (int e = 0; e < p; ++e)
                    coef[base + off + static_cast<std::size_t>(e) * stride] =
                        scratch[static_cast<std::size_t>(e)];
            }
        }
        stride = block;
    }

    std::vector<Term> terms;
    for (std::size_t idx = 0; idx < coef.size(); ++idx) {
        if (coef[idx] == 0) continue;
        terms.push_back(Term{point_from_index(idx, p, n), coef[idx]});
    }
    return Polynomial::from_terms(t.field, n, std::move(terms));
}

}  // namespace polylab
