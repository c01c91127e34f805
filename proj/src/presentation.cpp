#include "flagloop/presentation.hpp"

#include <algorithm>

namespace flagloop {

std::string family_member_name(const FamilySpec& f, int k) {
    return f.base + "_" + std::to_string(k);
}

int family_member_count(const FamilySpec& f, int cutoff) {
    if (f.degree <= 0)
        throw RingError("family degree must be positive");
    return std::max(0, cutoff / f.degree);
}

mpz_class family_norm(FamilyKind kind, int m) {
    mpz_class n;
    mpz_fac_ui(n.get_mpz_t(), static_cast<unsigned long>(m));
    if (kind == FamilyKind::HalfDividedPower)
        n >>= m / 2;
    return n;
}

mpz_class family_structure_constant(FamilyKind kind, int i, int j) {
    mpz_class num = family_norm(kind, i + j);
    mpz_class den = family_norm(kind, i) * family_norm(kind, j);
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (r != 0)
        throw RingError("family structure constant is not integral");
    return q;
}

mpz_class family_derivation_constant(FamilyKind kind, int k) {
    mpz_class num = k * family_norm(kind, k - 1);
    mpz_class den = family_norm(kind, k);
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (r != 0)
        throw RingError("family derivation constant is not integral");
    return q;
}

PresentationBuilder& PresentationBuilder::gen(const std::string& name, int degree, bool odd) {
    Generator g;
    g.name = name;
    g.degree = degree;
    g.odd = odd;
    gens_.push_back(std::move(g));
    return *this;
}

PresentationBuilder& PresentationBuilder::family(const FamilySpec& f) {
    int count = family_member_count(f, cutoff_);
    for (int k = 1; k <= count; ++k) {
        Generator g;
        g.name = family_member_name(f, k);
        g.degree = k * f.degree;
        g.odd = false;
        g.family = f.kind;
        g.family_index = k;
        gens_.push_back(std::move(g));
    }
    families_.push_back(f);
    return *this;
}

PresentationBuilder& PresentationBuilder::relation(const std::string& text) {
    relation_texts_.push_back(text);
    return *this;
}

Presentation PresentationBuilder::build() const {
    std::vector<Generator> gens = gens_;
    AmbientPtr amb = make_ambient(gens, mod_);
    // wire family_prev links
    {
        std::vector<Generator> fixed = amb->gens;
        for (auto& g : fixed)
            if (g.family != FamilyKind::None && g.family_index > 1)
                g.family_prev = amb->index_of(
                    g.name.substr(0, g.name.rfind('_') + 1) + std::to_string(g.family_index - 1));
        amb = make_ambient(std::move(fixed), mod_);
    }

    Presentation p;
    p.amb = amb;
    for (const auto& g : amb->gens)
        if (g.odd)
            p.relations.push_back(multiply_plain(generator_poly(amb, g.name),
                                                 generator_poly(amb, g.name)));
    for (const auto& f : families_) {
        int count = family_member_count(f, cutoff_);
        for (int i = 1; i <= count; ++i)
            for (int j = i; j <= count; ++j) {
                if (i + j > count)
                    continue;
                Polynomial rel = multiply_plain(generator_poly(amb, family_member_name(f, i)),
                                                generator_poly(amb, family_member_name(f, j))) -
                                 generator_poly(amb, family_member_name(f, i + j)) *
                                     family_structure_constant(f.kind, i, j);
                p.relations.push_back(std::move(rel));
            }
    }
    for (const auto& text : relation_texts_)
        p.relations.push_back(parse_polynomial(amb, text));
    return p;
}

Presentation tensor(const Presentation& a, const Presentation& b) {
    if (a.amb->mod != b.amb->mod)
        throw RingError("tensor factors over different coefficients");
    std::vector<Generator> gens = a.amb->gens;
    size_t na = gens.size();
    for (Generator g : b.amb->gens) {
        if (g.family_prev >= 0)
            g.family_prev += static_cast<int>(na);
        gens.push_back(std::move(g));
    }
    AmbientPtr amb = make_ambient(std::move(gens), a.amb->mod);

    Presentation p;
    p.amb = amb;
    size_t n = amb->gens.size();
    auto lift = [&](const Polynomial& f, size_t offset, size_t width) {
        Polynomial r(amb);
        for (const auto& [m, c] : f.terms()) {
            Exponents e(n, 0);
            std::copy(m.begin(), m.end(), e.begin() + static_cast<long>(offset));
            (void)width;
            r.add_term(e, c);
        }
        return r;
    };
    for (const auto& f : a.relations)
        p.relations.push_back(lift(f, 0, na));
    for (const auto& f : b.relations)
        p.relations.push_back(lift(f, na, n - na));
    return p;
}

std::vector<Exponents> monomials_of_degree(const Ambient& amb, int degree) {
    for (const auto& g : amb.gens)
        if (g.degree <= 0)
            throw RingError("graded enumeration requires positive generator degrees");
    std::vector<Exponents> out;
    Exponents cur(amb.gens.size(), 0);
    // recursive enumeration, generator by generator
    auto rec = [&](auto&& self, size_t i, int remaining) -> void {
        if (remaining == 0) {
            // pad the rest with zeros (already zero)
            out.push_back(cur);
            return;
        }
        if (i == amb.gens.size())
            return;
        int d = amb.gens[i].degree;
        int cap = remaining / d;
        if (amb.gens[i].odd)
            cap = std::min(cap, 1);
        for (int e = 0; e <= cap; ++e) {
            cur[i] = e;
            self(self, i + 1, remaining - e * d);
        }
        cur[i] = 0;
    };
    rec(rec, 0, degree);
    return out;
}

DegreeBasis graded_basis(const GroebnerBasis& gb, int degree) {
    const Ambient& amb = *gb.order.ambient();
    DegreeBasis out;
    struct Lead {
        const Exponents* m;
        bool unit;
    };
    std::vector<Lead> leads;
    for (const auto& g : gb.elements) {
        auto [m, c] = gb.order.leading_term(g);
        leads.push_back({m, *c == 1 || *c == -1 || amb.mod != 0});
    }
    for (const auto& g : amb.gens)
        if (g.degree <= 0)
            throw RingError("graded enumeration requires positive generator degrees");
    // depth-first enumeration, pruning any branch already divisible by a
    // unit leading monomial (divisibility is monotone in the exponents)
    Exponents cur(amb.gens.size(), 0);
    auto rec = [&](auto&& self, size_t i, int remaining) -> void {
        if (remaining == 0) {
            bool reducible = false;
            for (const auto& l : leads)
                if (!l.unit && monomial_divides(*l.m, cur)) {
                    reducible = true;
                    break;
                }
            if (reducible)
                out.torsion_witness.push_back(cur);
            else
                out.free.push_back(cur);
            return;
        }
        if (i == amb.gens.size())
            return;
        int d = amb.gens[i].degree;
        int cap = remaining / d;
        if (amb.gens[i].odd)
            cap = std::min(cap, 1);
        for (int e = 0; e <= cap; ++e) {
            cur[i] = e;
            bool dead = false;
            if (e > 0)
                for (const auto& l : leads)
                    if (l.unit && monomial_divides(*l.m, cur)) {
                        dead = true;
                        break;
                    }
            if (!dead)
                self(self, i + 1, remaining - e * d);
        }
        cur[i] = 0;
    };
    rec(rec, 0, degree);
    return out;
}

}  // namespace flagloop
