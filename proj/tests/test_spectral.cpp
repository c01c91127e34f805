#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagloop/bundles.hpp"

#include <random>

using namespace flagloop;

namespace {

// circle bundle over CP^2: base Z[g]/g^3, fiber an exterior line, d2(y) = c*g
FibrationSpec circle_bundle(int c, int cutoff = 12) {
    FibrationSpec spec;
    spec.name = "circle";
    spec.cutoff = cutoff;
    spec.base = PresentationBuilder(cutoff).gen("g", 2).relation("g^3").build();
    spec.fiber = PresentationBuilder(cutoff).gen("y", 1, true).build();
    AmbientPtr amb = tensor(spec.base, spec.fiber).amb;
    spec.differentials.push_back(
        {2, "y", parse_polynomial(amb, std::to_string(c) + "*g"), false});
    return spec;
}

const DegreeRow* row(const EInfinityTable& t, int degree) {
    for (const auto& r : t.rows)
        if (r.degree == degree)
            return &r;
    return nullptr;
}

// random low-degree monomial class: one or two generators, small exponents
Polynomial random_class(const SpectralSequence& ss, std::mt19937& rng) {
    const AmbientPtr& amb = ss.total().amb;
    std::uniform_int_distribution<int> gen(0, static_cast<int>(amb->gens.size()) - 1);
    std::uniform_int_distribution<int> nfactors(1, 2), coeff(-4, 4);
    for (;;) {
        Exponents e(amb->gens.size());
        int n = nfactors(rng);
        for (int i = 0; i < n; ++i) {
            int j = gen(rng);
            if (e[j] == 0 || !amb->gens[j].odd)
                ++e[j];
        }
        if (monomial_degree(e, *amb) > ss.spec().cutoff / 2)
            continue;
        mpz_class c = coeff(rng);
        Polynomial f = ss.normal_form(monomial_poly(amb, e, c == 0 ? 1 : c));
        if (!f.is_zero())
            return f;
    }
}

}  // namespace

TEST_CASE("sphere total space of a circle bundle") {
    SpectralSequence ss(circle_bundle(1));
    ss.run();
    EInfinityTable t = ss.table();
    for (const auto& r : t.rows) {
        if (!r.certified)
            continue;
        int want = (r.degree == 0 || r.degree == 5) ? 1 : 0;
        CHECK(r.free_rank == want);
        CHECK(r.torsion.empty());
    }
}

TEST_CASE("torsion from a degree-2 circle bundle") {
    SpectralSequence ss(circle_bundle(2));
    ss.run();
    EInfinityTable t = ss.table();
    auto tors = [&](int d) { return row(t, d)->torsion; };
    CHECK(row(t, 0)->free_rank == 1);
    CHECK(tors(2) == std::vector<mpz_class>{2});
    CHECK(tors(4) == std::vector<mpz_class>{2});
    CHECK(row(t, 5)->free_rank == 1);
    CHECK(row(t, 1)->free_rank == 0);
    CHECK(row(t, 3)->free_rank == 0);
}

TEST_CASE("bidegrees and normal forms") {
    NamedBundle b = load_bundle("su3-eval", 10);
    SpectralSequence ss(b.fibration);
    auto P = [&](const char* s) { return parse_polynomial(ss.total().amb, s); };
    CHECK(ss.bidegree(P("g1")) == std::pair<int, int>{2, 0});
    CHECK(ss.bidegree(P("y1")) == std::pair<int, int>{0, 1});
    CHECK(ss.bidegree(P("y1*g1^2")) == std::pair<int, int>{4, 1});
    CHECK_THROWS_AS(ss.bidegree(P("g1+y1")), MathError);
    CHECK(ss.normal_form(P("g1^2+g1*g2+g2^2")).is_zero());
    CHECK(ss.normal_form(P("y1^2")).is_zero());
    // E2 cell bases are normal-form monomials of the right bidegree
    for (const auto& m : ss.cell_basis(4, 1)) {
        CHECK(monomial_degree(m, *ss.total().amb) == 5);
        Polynomial f = monomial_poly(ss.total().amb, m);
        CHECK(ss.normal_form(f) == f);
    }
}

TEST_CASE("derivation respects family constants") {
    NamedBundle b = load_bundle("g2-eval", 14);
    SpectralSequence ss(b.fibration);
    auto P = [&](const char* s) { return parse_polynomial(ss.total().amb, s); };
    Polynomial da = ss.apply_derivation(P("a2_1"), 2);
    CHECK(ss.normal_form(da - P("y1*(2*g1+g2)+y2*(g1+2*g2)")).is_zero());
    // half-divided family: d(a_2) = 2 a_1 d(a_1), d(a_3) = a_2 d(a_1)
    CHECK(ss.normal_form(ss.apply_derivation(P("a2_2"), 2) -
                         multiply(P("2*a2_1"), da))
              .is_zero());
    CHECK(ss.normal_form(ss.apply_derivation(P("a2_3"), 2) - multiply(P("a2_2"), da))
              .is_zero());

    NamedBundle s = load_bundle("su3-eval", 12);
    SpectralSequence ss2(s.fibration);
    auto Q = [&](const char* t) { return parse_polynomial(ss2.total().amb, t); };
    // divided powers: d(x_m) = x_{m-1} d(x_1)
    CHECK(ss2.normal_form(ss2.apply_derivation(Q("x2_3"), 2) -
                          multiply(Q("x2_2"), ss2.apply_derivation(Q("x2_1"), 2)))
              .is_zero());
}

TEST_CASE("derivations satisfy the signed Leibniz rule") {
    NamedBundle b = load_bundle("su3-eval", 10);
    SpectralSequence ss(b.fibration);
    std::mt19937 rng(31);
    int checked = 0;
    for (int it = 0; it < 200; ++it) {
        Polynomial f = random_class(ss, rng), g = random_class(ss, rng);
        int df = 0, dg = 0;
        if (!f.homogeneous_degree(df) || !g.homogeneous_degree(dg))
            continue;
        // the product (and its derivative) must stay inside the truncation
        if (df + dg >= ss.spec().cutoff)
            continue;
        Polynomial fg = multiply(f, g);
        Polynomial lhs = ss.apply_derivation(fg, 2);
        Polynomial rhs = multiply(ss.apply_derivation(f, 2), g);
        Polynomial second = multiply(f, ss.apply_derivation(g, 2));
        rhs += (df % 2 != 0) ? -second : second;
        CHECK(ss.normal_form(lhs - rhs).is_zero());
        // the derivation descends to the quotient
        CHECK(ss.normal_form(ss.apply_derivation(fg - ss.normal_form(fg), 2)).is_zero());
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("d after d vanishes on every page of every bundle") {
    for (const auto& id : bundle_ids()) {
        int cutoff = id.substr(0, 2) == "g2" ? 12 : 10;
        NamedBundle b = load_bundle(id, cutoff);
        SpectralSequence ss(b.fibration);
        CHECK_NOTHROW(ss.run());  // run() throws DSquareError otherwise
    }
}

TEST_CASE("loop space cohomology starts with Z and Z^2") {
    NamedBundle b = load_bundle("su3-eval", 8);
    SpectralSequence ss(b.fibration);
    ss.run();
    EInfinityTable t = ss.table();
    CHECK(row(t, 0)->free_rank == 1);
    CHECK(row(t, 0)->torsion.empty());
    CHECK(row(t, 1)->free_rank == 2);
    CHECK(row(t, 1)->torsion.empty());
}

TEST_CASE("certification horizon") {
    NamedBundle b = load_bundle("su3-eval", 12);
    SpectralSequence ss(b.fibration);
    ss.run();
    EInfinityTable t = ss.table();
    CHECK(t.max_page == 4);
    CHECK(t.horizon == 8);
    for (const auto& r : t.rows)
        CHECK(r.certified == (r.degree <= t.horizon));
}

TEST_CASE("page snapshots are recorded on demand") {
    SpectralSequence ss(circle_bundle(1, 8));
    ss.run(true);
    REQUIRE_FALSE(ss.snapshots().empty());
    CHECK(ss.snapshots().front().page == 2);
    // E2 of the circle bundle is H(CP^2) (x) E(y): six nonzero cells
    int nonzero = 0;
    for (const auto& [pq, cell] : ss.snapshots().front().cells)
        if (cell.free_rank > 0 || !cell.torsion.empty())
            ++nonzero;
    CHECK(nonzero == 6);
}

TEST_CASE("mod-p dimensions bound the integral ranks") {
    NamedBundle zb = load_bundle("su3-eval", 10);
    SpectralSequence zss(zb.fibration);
    zss.run();
    NamedBundle pb = load_bundle("su3-eval", 10, 3);
    SpectralSequence pss(pb.fibration);
    pss.run();
    EInfinityTable zt = zss.table(), pt = pss.table();
    CHECK(pt.mod == 3);
    for (const auto& r : zt.rows) {
        if (!r.certified)
            continue;
        const DegreeRow* p = row(pt, r.degree);
        REQUIRE(p != nullptr);
        CHECK(p->torsion.empty());
        CHECK(p->free_rank >= r.free_rank);
    }
}
