#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagloop/groebner.hpp"

#include <algorithm>
#include <random>

using namespace flagloop;

namespace {

AmbientPtr vars(std::initializer_list<const char*> names, unsigned long mod = 0) {
    std::vector<Generator> gens;
    for (const char* n : names)
        gens.push_back({n, 2, false});
    return make_ambient(std::move(gens), mod);
}

std::vector<Polynomial> parse_all(const AmbientPtr& amb,
                                  std::initializer_list<const char*> texts) {
    std::vector<Polynomial> out;
    for (const char* t : texts)
        out.push_back(parse_polynomial(amb, t));
    return out;
}

// strong S- and GCD-polynomials of a pair over Z
Polynomial s_poly(const Polynomial& f, const Polynomial& g, const MonomialOrder& ord) {
    auto [mf, cf] = ord.leading_term(f);
    auto [mg, cg] = ord.leading_term(g);
    Exponents m = monomial_lcm(*mf, *mg);
    mpz_class l = lcm(*cf, *cg);
    return multiply_plain_monomial(f, monomial_div(m, *mf), l / *cf) -
           multiply_plain_monomial(g, monomial_div(m, *mg), l / *cg);
}

Polynomial gcd_poly(const Polynomial& f, const Polynomial& g, const MonomialOrder& ord) {
    auto [mf, cf] = ord.leading_term(f);
    auto [mg, cg] = ord.leading_term(g);
    Exponents m = monomial_lcm(*mf, *mg);
    mpz_class d, a, b;
    mpz_gcdext(d.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), cf->get_mpz_t(), cg->get_mpz_t());
    return multiply_plain_monomial(f, monomial_div(m, *mf), a) +
           multiply_plain_monomial(g, monomial_div(m, *mg), b);
}

Polynomial random_poly(const AmbientPtr& amb, std::mt19937& rng) {
    std::uniform_int_distribution<int> exp(0, 4), coeff(-50, 50), nterms(1, 5);
    Polynomial f(amb);
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        Exponents e(amb->gens.size());
        for (auto& x : e)
            x = exp(rng);
        f.add_term(e, coeff(rng));
    }
    return f;
}

}  // namespace

TEST_CASE("canonical remainders over Z") {
    AmbientPtr amb = vars({"x"});
    MonomialOrder ord(amb);
    Polynomial five_x = parse_polynomial(amb, "5*x");
    Polynomial two_x = parse_polynomial(amb, "2*x");
    CHECK(reduce(five_x, {two_x}, ord) == parse_polynomial(amb, "x"));
    CHECK(reduce(parse_polynomial(amb, "4*x"), {two_x}, ord).is_zero());
    CHECK(reduce(parse_polynomial(amb, "-x"), {two_x}, ord) == parse_polynomial(amb, "x"));
}

TEST_CASE("lex basis with variable priority") {
    AmbientPtr amb = vars({"g1", "g2"});
    MonomialOrder ord(amb, OrderKind::Lex, {amb->index_of("g2"), amb->index_of("g1")});
    GroebnerBasis gb = buchberger(
        parse_all(amb, {"g1^2+g1*g2+g2^2", "g1^2*g2+g1*g2^2"}), ord);
    CHECK(reduce(parse_polynomial(amb, "g1^3"), gb.elements, ord).is_zero());
    // g1*(first generator) + second generator
    CHECK(gb.contains(parse_polynomial(amb, "g1^3+2*g1^2*g2+2*g1*g2^2")));
    CHECK_FALSE(gb.contains(parse_polynomial(amb, "g1*g2")));
}

TEST_CASE("normal forms are independent of the reduction order") {
    AmbientPtr amb = vars({"a", "b", "c"});
    MonomialOrder ord(amb);
    GroebnerBasis gb = buchberger(
        parse_all(amb, {"2*a^2-b*c", "3*b^2-a*c", "a*b*c-4*c^2"}), ord);
    std::mt19937 rng(101);
    std::vector<Polynomial> shuffled = gb.elements;
    for (int it = 0; it < 500; ++it) {
        Polynomial f = random_poly(amb, rng);
        Polynomial nf = reduce(f, gb.elements, ord);
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(reduce(f, shuffled, ord) == nf);
        // a normal form is fully reduced
        CHECK(reduce(nf, gb.elements, ord) == nf);
    }
}

TEST_CASE("S- and GCD-polynomials reduce to zero after completion") {
    AmbientPtr amb = vars({"a", "b", "c"});
    for (auto kind : {OrderKind::GrevLex, OrderKind::Lex}) {
        MonomialOrder ord(amb, kind);
        GroebnerBasis gb = buchberger(
            parse_all(amb, {"2*a^2-b*c", "3*b^2-a*c", "6*c^3-a*b", "4*a*b-5*c^2"}), ord);
        for (size_t i = 0; i < gb.elements.size(); ++i)
            for (size_t j = i + 1; j < gb.elements.size(); ++j) {
                const Polynomial& f = gb.elements[i];
                const Polynomial& g = gb.elements[j];
                CHECK(reduce(s_poly(f, g, ord), gb.elements, ord).is_zero());
                CHECK(reduce(gcd_poly(f, g, ord), gb.elements, ord).is_zero());
            }
    }
}

TEST_CASE("degree-capped completion matches the full basis below the cap") {
    AmbientPtr amb = vars({"a", "b"});
    MonomialOrder ord(amb);
    auto F = parse_all(amb, {"a^2+2*b^2", "3*a*b"});
    GroebnerBasis full = buchberger(F, ord);
    GroebnerBasis capped = buchberger(F, ord, 12);
    std::mt19937 rng(5);
    for (int it = 0; it < 100; ++it) {
        Polynomial f = random_poly(amb, rng);
        int d;
        if (!f.homogeneous_degree(d) || d > 12)
            continue;
        CHECK(reduce(f, full.elements, ord) == reduce(f, capped.elements, ord));
    }
}

TEST_CASE("ideal intersection") {
    AmbientPtr amb = vars({"x", "y"});
    MonomialOrder ord(amb);
    auto I = ideal_intersect(parse_all(amb, {"x"}), parse_all(amb, {"y"}), ord);
    CHECK(ideal_equal(I, parse_all(amb, {"x*y"}), ord));

    // <2x> meets <3x> = <6x>
    auto J = ideal_intersect(parse_all(amb, {"2*x"}), parse_all(amb, {"3*x"}), ord);
    CHECK(ideal_equal(J, parse_all(amb, {"6*x"}), ord));
}

TEST_CASE("ideal containment and equality") {
    AmbientPtr amb = vars({"x", "y"});
    MonomialOrder ord(amb);
    GroebnerBasis gb = buchberger(parse_all(amb, {"x^2", "x*y"}), ord);
    CHECK(ideal_contains(gb, parse_all(amb, {"x^2*y", "x^3+x*y"})));
    CHECK_FALSE(ideal_contains(gb, parse_all(amb, {"y^2"})));
    CHECK(ideal_equal(parse_all(amb, {"x+y", "x-y", "2*y"}),
                      parse_all(amb, {"x+y", "x-y"}), ord));
    CHECK_FALSE(ideal_equal(parse_all(amb, {"2*x"}), parse_all(amb, {"x"}), ord));
}

TEST_CASE("groebner bases over a prime field") {
    AmbientPtr amb = vars({"x", "y"}, 3);
    MonomialOrder ord(amb);
    GroebnerBasis gb = buchberger(parse_all(amb, {"x^2+2*y^2", "x*y"}), ord);
    // 3 = 0, so x^2 + 2y^2 and xy generate x^3 (= x*(x^2+2y^2) - 2y*(xy))
    CHECK(gb.contains(parse_polynomial(amb, "x^3")));
    for (size_t i = 0; i < gb.elements.size(); ++i)
        for (size_t j = i + 1; j < gb.elements.size(); ++j)
            CHECK(reduce(s_poly(gb.elements[i], gb.elements[j], ord), gb.elements, ord)
                      .is_zero());
}

TEST_CASE("elimination blocks") {
    AmbientPtr amb = make_ambient({{"t", 0, false}, {"x", 2, false}, {"y", 2, false}});
    MonomialOrder ord(amb, OrderKind::GrevLex,
                      {amb->index_of("t"), amb->index_of("x"), amb->index_of("y")}, 1);
    GroebnerBasis gb = buchberger(
        parse_all(amb, {"t*x", "t*y-y", "t^2-t"}), ord);
    auto elim = elimination_part(gb);
    // the t-free part of <tx, ty - y, t^2 - t> contains xy
    GroebnerBasis egb = buchberger(elim, ord);
    CHECK(egb.contains(parse_polynomial(amb, "x*y")));
    for (const auto& f : elim)
        for (const auto& [m, c] : f.terms())
            CHECK(m[amb->index_of("t")] == 0);
}
