#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagloop/presentation.hpp"

using namespace flagloop;

namespace {

std::vector<int> even_ranks(const Presentation& p, int top) {
    GroebnerBasis gb = p.groebner();
    std::vector<int> out;
    for (int d = 0; d <= top; d += 2)
        out.push_back(static_cast<int>(graded_basis(gb, d).free.size()));
    return out;
}

}  // namespace

TEST_CASE("flag cohomology rank tables") {
    // rank-2 flag manifolds: Poincare polynomial coefficients in even degrees
    Presentation su3 = PresentationBuilder(20)
                           .gen("g1", 2)
                           .gen("g2", 2)
                           .relation("g1^2+g1*g2+g2^2")
                           .relation("g1^3")
                           .build();
    CHECK(even_ranks(su3, 8) == std::vector<int>{1, 2, 2, 1, 0});

    Presentation sp2 = PresentationBuilder(20)
                           .gen("g1", 2)
                           .gen("g2", 2)
                           .relation("g1^2+g2^2")
                           .relation("g1^4")
                           .build();
    CHECK(even_ranks(sp2, 10) == std::vector<int>{1, 2, 2, 2, 1, 0});

    Presentation g2 = PresentationBuilder(20)
                          .gen("g1", 2)
                          .gen("g2", 2)
                          .gen("t3", 6)
                          .relation("g1^2+g1*g2+g2^2")
                          .relation("2*t3-g1^3")
                          .relation("t3^2")
                          .build();
    CHECK(even_ranks(g2, 14) == std::vector<int>{1, 2, 2, 2, 2, 2, 1, 0});
}

TEST_CASE("family norms and constants") {
    // divided powers: x^m = m! x_m
    CHECK(family_norm(FamilyKind::DividedPower, 1) == 1);
    CHECK(family_norm(FamilyKind::DividedPower, 4) == 24);
    // half-divided: x^m = (m!/2^floor(m/2)) x_m
    CHECK(family_norm(FamilyKind::HalfDividedPower, 2) == 1);
    CHECK(family_norm(FamilyKind::HalfDividedPower, 3) == 3);
    CHECK(family_norm(FamilyKind::HalfDividedPower, 4) == 6);
    CHECK(family_norm(FamilyKind::HalfDividedPower, 5) == 30);

    CHECK(family_structure_constant(FamilyKind::DividedPower, 2, 3) == 10);  // C(5,2)
    // half-divided: x_1 x_{m-1} = m x_m for odd m
    CHECK(family_structure_constant(FamilyKind::HalfDividedPower, 1, 2) == 3);
    CHECK(family_structure_constant(FamilyKind::HalfDividedPower, 1, 4) == 5);
    CHECK(family_structure_constant(FamilyKind::HalfDividedPower, 1, 1) == 1);

    for (int k = 2; k <= 6; ++k) {
        CHECK(family_derivation_constant(FamilyKind::DividedPower, k) == 1);
        CHECK(family_derivation_constant(FamilyKind::HalfDividedPower, k) ==
              (k % 2 == 0 ? 2 : 1));
    }
}

TEST_CASE("family members and truncation") {
    FamilySpec f{"x2", 2, FamilyKind::DividedPower};
    CHECK(family_member_name(f, 3) == "x2_3");
    CHECK(family_member_count(f, 12) == 6);
    FamilySpec h{"a2", 4, FamilyKind::HalfDividedPower};
    CHECK(family_member_count(h, 12) == 3);
    CHECK(family_member_count(h, 3) == 0);
}

TEST_CASE("family product relations in the quotient") {
    Presentation p = PresentationBuilder(16)
                         .family({"a2", 4, FamilyKind::HalfDividedPower})
                         .build();
    GroebnerBasis gb = p.groebner();
    MonomialOrder ord = p.default_order();
    auto nf = [&](const char* s) {
        return reduce(parse_polynomial(p.amb, s), gb.elements, ord);
    };
    // a2^2 = a2_2, a2^3 = 3 a2_3, a2 a2_2 = 3 a2_3, a2_2^2 = 6 a2_4
    CHECK(nf("a2_1^2-a2_2").is_zero());
    CHECK(nf("a2_1^3-3*a2_3").is_zero());
    CHECK(nf("a2_1*a2_2-3*a2_3").is_zero());
    CHECK(nf("a2_2^2-6*a2_4").is_zero());

    Presentation q = PresentationBuilder(12)
                         .family({"x2", 2, FamilyKind::DividedPower})
                         .build();
    GroebnerBasis qgb = q.groebner();
    CHECK(reduce(parse_polynomial(q.amb, "x2_1*x2_2-3*x2_3"), qgb.elements,
                 q.default_order())
              .is_zero());
    CHECK(reduce(parse_polynomial(q.amb, "x2_2*x2_2-6*x2_4"), qgb.elements,
                 q.default_order())
              .is_zero());
}

TEST_CASE("odd generators square to zero in the quotient") {
    Presentation p = PresentationBuilder(10).gen("y1", 1, true).gen("y2", 1, true).build();
    GroebnerBasis gb = p.groebner();
    MonomialOrder ord = p.default_order();
    CHECK(reduce(parse_polynomial(p.amb, "y1^2"), gb.elements, ord).is_zero());
    CHECK(graded_basis(gb, 2).free.size() == 1);  // y1 y2 only
}

TEST_CASE("tensor product") {
    Presentation base = PresentationBuilder(10).gen("g1", 2).relation("g1^3").build();
    Presentation fiber = PresentationBuilder(10).gen("y1", 1, true).build();
    Presentation t = tensor(base, fiber);
    CHECK(t.amb->gens.size() == 2);
    CHECK(t.amb->find("g1") >= 0);
    CHECK(t.amb->find("y1") >= 0);
    GroebnerBasis gb = t.groebner();
    // rank per degree: 1, y1, g1, g1 y1, g1^2, g1^2 y1, then zero
    std::vector<size_t> want = {1, 1, 1, 1, 1, 1, 0};
    for (int d = 0; d < static_cast<int>(want.size()); ++d)
        CHECK(graded_basis(gb, d).free.size() == want[d]);
}

TEST_CASE("torsion witnesses") {
    Presentation p = PresentationBuilder(10).gen("x", 2).relation("2*x").build();
    GroebnerBasis gb = p.groebner();
    DegreeBasis b = graded_basis(gb, 2);
    CHECK(b.free.empty());
    CHECK(b.torsion_witness.size() == 1);
    CHECK(graded_basis(gb, 0).free.size() == 1);
}

TEST_CASE("monomials of a degree") {
    AmbientPtr amb = make_ambient({{"y", 1, true}, {"g", 2, false}});
    CHECK(monomials_of_degree(*amb, 5).size() == 1);  // y g^2
    CHECK(monomials_of_degree(*amb, 4).size() == 1);  // g^2
    CHECK(monomials_of_degree(*amb, 0).size() == 1);
}
