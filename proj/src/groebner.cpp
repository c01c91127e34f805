#include "flagloop/groebner.hpp"

#include <algorithm>
#include <deque>

namespace flagloop {

namespace {

// Quotient q for one reduction step of coefficient c by divisor d (> 0 over
// Z after normalization): over Z the remainder c - q*d is the canonical
// residue in [0, d); over F_p the term is cleared completely.
mpz_class step_quotient(const mpz_class& c, const mpz_class& d, unsigned long mod) {
    mpz_class q;
    if (mod == 0) {
        mpz_fdiv_q(q.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
    } else {
        mpz_class inv, p(mod);
        if (mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t()) == 0)
            throw RingError("leading coefficient not invertible mod p");
        q = coeff_norm(c * inv, mod);
    }
    return q;
}

// Normalize sign / make monic so leading coefficients are positive (Z) or 1 (F_p).
void normalize_lead(Polynomial& f, const MonomialOrder& ord) {
    if (f.is_zero())
        return;
    unsigned long mod = f.ambient()->mod;
    const mpz_class& lc = ord.leading_coefficient(f);
    if (mod == 0) {
        if (lc < 0)
            f = -f;
    } else if (lc != 1) {
        mpz_class inv, p(mod);
        mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), p.get_mpz_t());
        f = f * inv;
    }
}

}  // namespace

Polynomial reduce(const Polynomial& f, const std::vector<Polynomial>& G,
                  const MonomialOrder& ord) {
    unsigned long mod = f.ambient()->mod;
    struct Lead {
        const Polynomial* g;
        const Exponents* m;
        mpz_class abs_c;
        bool neg;
    };
    std::vector<Lead> leads;
    for (const auto& g : G) {
        if (g.is_zero())
            continue;
        auto [gm, gc] = ord.leading_term(g);
        leads.push_back({&g, gm, *gc < 0 ? mpz_class(-*gc) : *gc, *gc < 0});
    }
    Polynomial r = f;
    while (!r.is_zero()) {
        // largest reducible term of r
        const Exponents* best_m = nullptr;
        const Lead* best = nullptr;
        mpz_class best_q;
        for (const auto& [m, c] : r.terms()) {
            if (best_m && ord.less(m, *best_m))
                continue;
            for (const auto& l : leads) {
                if (!monomial_divides(*l.m, m))
                    continue;
                mpz_class q = step_quotient(c, l.abs_c, mod);
                if (q == 0)
                    continue;  // already the canonical remainder w.r.t. this divisor
                best_m = &m;
                best = &l;
                best_q = q;
                break;
            }
        }
        if (!best)
            break;
        if (best->neg)
            best_q = -best_q;
        Exponents shift = monomial_div(*best_m, *best->m);
        r -= multiply_plain_monomial(*best->g, shift, best_q);
    }
    return r;
}

GroebnerBasis buchberger(std::vector<Polynomial> F, const MonomialOrder& ord, int degree_cap,
                         bool make_reduced) {
    const Ambient& amb = *ord.ambient();
    unsigned long mod = amb.mod;

    std::vector<Polynomial> G;
    for (auto& f : F) {
        if (f.is_zero())
            continue;
        normalize_lead(f, ord);
        G.push_back(std::move(f));
    }

    struct Pair {
        size_t i, j;
        bool gcd_pair;
    };
    std::deque<Pair> queue;
    auto push_pairs = [&](size_t j) {
        for (size_t i = 0; i < j; ++i) {
            queue.push_back({i, j, false});
            if (mod == 0) {
                const mpz_class& a = ord.leading_coefficient(G[i]);
                const mpz_class& b = ord.leading_coefficient(G[j]);
                if (!mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t()) &&
                    !mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()))
                    queue.push_back({i, j, true});
            }
        }
    };
    for (size_t j = 0; j < G.size(); ++j)
        push_pairs(j);

    while (!queue.empty()) {
        auto [i, j, gcd_pair] = queue.front();
        queue.pop_front();
        auto [mi, ci] = ord.leading_term(G[i]);
        auto [mj, cj] = ord.leading_term(G[j]);
        Exponents m = monomial_lcm(*mi, *mj);
        if (degree_cap >= 0 && monomial_degree(m, amb) > degree_cap)
            continue;
        Polynomial h(G[i].ambient());
        if (!gcd_pair) {
            mpz_class cl;
            if (mod == 0)
                mpz_lcm(cl.get_mpz_t(), ci->get_mpz_t(), cj->get_mpz_t());
            else
                cl = 1;
            mpz_class ai = cl / *ci;
            mpz_class aj = cl / *cj;
            if (mod != 0) {
                mpz_class p(mod), inv;
                mpz_invert(inv.get_mpz_t(), ci->get_mpz_t(), p.get_mpz_t());
                ai = inv;
                mpz_invert(inv.get_mpz_t(), cj->get_mpz_t(), p.get_mpz_t());
                aj = inv;
            }
            h = multiply_plain_monomial(G[i], monomial_div(m, *mi), ai) -
                multiply_plain_monomial(G[j], monomial_div(m, *mj), aj);
        } else {
            mpz_class g, a, b;
            mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), ci->get_mpz_t(),
                       cj->get_mpz_t());
            h = multiply_plain_monomial(G[i], monomial_div(m, *mi), a) +
                multiply_plain_monomial(G[j], monomial_div(m, *mj), b);
        }
        h = reduce(h, G, ord);
        if (h.is_zero())
            continue;
        normalize_lead(h, ord);
        G.push_back(std::move(h));
        push_pairs(G.size() - 1);
    }

    if (make_reduced) {
        // drop elements whose leading term is a multiple of another's
        std::vector<bool> dead(G.size(), false);
        for (size_t i = 0; i < G.size(); ++i) {
            if (dead[i])
                continue;
            auto [mi, ci] = ord.leading_term(G[i]);
            for (size_t j = 0; j < G.size(); ++j) {
                if (i == j || dead[j])
                    continue;
                auto [mj, cj] = ord.leading_term(G[j]);
                if (monomial_divides(*mj, *mi) &&
                    mpz_divisible_p(ci->get_mpz_t(), cj->get_mpz_t()) &&
                    !(*mi == *mj && *ci == *cj && i < j)) {
                    dead[i] = true;
                    break;
                }
            }
        }
        std::vector<Polynomial> M;
        for (size_t i = 0; i < G.size(); ++i)
            if (!dead[i])
                M.push_back(std::move(G[i]));
        // interreduce tails to a fixpoint
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < M.size(); ++i) {
                std::vector<Polynomial> others;
                for (size_t j = 0; j < M.size(); ++j)
                    if (j != i)
                        others.push_back(M[j]);
                Polynomial r = reduce(M[i], others, ord);
                normalize_lead(r, ord);
                if (!(r == M[i])) {
                    changed = true;
                    if (r.is_zero()) {
                        M.erase(M.begin() + static_cast<long>(i));
                        --i;
                    } else {
                        M[i] = std::move(r);
                    }
                }
            }
        }
        G = std::move(M);
    }

    std::sort(G.begin(), G.end(), [&](const Polynomial& a, const Polynomial& b) {
        return ord.less(ord.leading_monomial(a), ord.leading_monomial(b));
    });
    return GroebnerBasis{std::move(G), ord};
}

std::vector<Polynomial> elimination_part(const GroebnerBasis& G) {
    const auto& pr = G.order.priority();
    int block = G.order.block();
    std::vector<Polynomial> out;
    for (const auto& g : G.elements) {
        bool clean = true;
        for (const auto& [m, c] : g.terms())
            for (int i = 0; i < block && clean; ++i)
                if (m[pr[i]] != 0)
                    clean = false;
        if (clean)
            out.push_back(g);
    }
    return out;
}

std::vector<Polynomial> ideal_intersect(const std::vector<Polynomial>& A,
                                        const std::vector<Polynomial>& B,
                                        const MonomialOrder& ord) {
    AmbientPtr amb = ord.ambient();
    size_t n = amb->gens.size();
    std::vector<Generator> gens = amb->gens;
    Generator tag;
    tag.name = "t_elim";
    tag.degree = 0;
    gens.push_back(tag);
    AmbientPtr ext = make_ambient(std::move(gens), amb->mod);

    auto lift = [&](const Polynomial& f, bool with_tag) {
        Polynomial r(ext);
        for (const auto& [m, c] : f.terms()) {
            Exponents e = m;
            e.push_back(with_tag ? 1 : 0);
            r.add_term(e, c);
        }
        return r;
    };
    std::vector<Polynomial> F;
    for (const auto& a : A)
        F.push_back(lift(a, true));  // t*a
    for (const auto& b : B)
        F.push_back(lift(b, false) - lift(b, true));  // (1-t)*b
    std::vector<int> pr;
    pr.push_back(static_cast<int>(n));  // tag first: eliminate it
    for (const auto& g : ord.priority())
        pr.push_back(g);
    MonomialOrder elim(ext, ord.kind(), pr, /*block=*/1);
    GroebnerBasis G = buchberger(std::move(F), elim);

    std::vector<Polynomial> out;
    for (const auto& g : elimination_part(G)) {
        Polynomial f(amb);
        for (const auto& [m, c] : g.terms())
            f.add_term(Exponents(m.begin(), m.end() - 1), c);
        out.push_back(std::move(f));
    }
    return out;
}

bool ideal_contains(const GroebnerBasis& G, const std::vector<Polynomial>& F) {
    for (const auto& f : F)
        if (!G.contains(f))
            return false;
    return true;
}

bool ideal_equal(const std::vector<Polynomial>& A, const std::vector<Polynomial>& B,
                 const MonomialOrder& ord) {
    GroebnerBasis GA = buchberger(A, ord);
    GroebnerBasis GB = buchberger(B, ord);
    return ideal_contains(GA, B) && ideal_contains(GB, A);
}

}  // namespace flagloop
