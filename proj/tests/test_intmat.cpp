#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagloop/intmat.hpp"

#include <random>

using namespace flagloop;

namespace {

IntMat make(int r, int c, std::initializer_list<long> vals) {
    IntMat m(r, c);
    auto it = vals.begin();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            m.at(i, j) = *it++;
    return m;
}

void check_smith(const IntMat& A) {
    SmithForm s = smith(A);
    CHECK(s.U.mul(s.Uinv) == IntMat::identity(A.rows));
    CHECK(s.V.mul(s.Vinv) == IntMat::identity(A.cols));
    CHECK(s.U.mul(A).mul(s.V) == s.D);
    CHECK(static_cast<int>(s.divisors.size()) == s.rank);
    for (size_t i = 0; i < s.divisors.size(); ++i) {
        CHECK(s.divisors[i] > 0);
        if (i > 0)
            CHECK(s.divisors[i] % s.divisors[i - 1] == 0);
    }
    for (int i = 0; i < s.D.rows; ++i)
        for (int j = 0; j < s.D.cols; ++j) {
            mpz_class want = (i == j && i < s.rank) ? s.divisors[i] : 0;
            CHECK(s.D.at(i, j) == want);
        }
}

}  // namespace

TEST_CASE("smith normal form of a fixed 2x2") {
    IntMat A = make(2, 2, {2, 4, 6, 8});
    SmithForm s = smith(A);
    REQUIRE(s.rank == 2);
    CHECK(s.divisors[0] == 2);
    CHECK(s.divisors[1] == 4);
    check_smith(A);
}

TEST_CASE("smith normal form on degenerate shapes") {
    check_smith(IntMat(3, 0));
    check_smith(IntMat(0, 3));
    check_smith(IntMat(4, 4));  // zero matrix
    IntMat row = make(1, 3, {6, 10, 15});
    SmithForm s = smith(row);
    REQUIRE(s.rank == 1);
    CHECK(s.divisors[0] == 1);  // gcd(6,10,15)
}

TEST_CASE("smith normal form randomized reconstruction") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> dim(1, 8);
    std::uniform_int_distribution<long> entry(-1000000, 1000000);
    std::bernoulli_distribution sparse(0.3);
    for (int it = 0; it < 500; ++it) {
        IntMat A(dim(rng), dim(rng));
        for (auto& x : A.a)
            x = sparse(rng) ? 0 : entry(rng);
        check_smith(A);
    }
}

TEST_CASE("integral solve") {
    IntMat A = make(2, 2, {2, 0, 0, 3});
    auto x = solve(A, {4, 9});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 2);
    CHECK((*x)[1] == 3);
    CHECK_FALSE(solve(A, {1, 0}).has_value());
    auto [y, d] = *solve_rational(A, {1, 0});
    CHECK(d == 2);
    CHECK(y[0] == 1);
}

TEST_CASE("kernel is saturated") {
    // kernel of (2 4) is spanned by (2,-1), not (4,-2)
    IntMat A = make(1, 2, {2, 4});
    IntMat K = kernel(A);
    REQUIRE(K.cols == 1);
    CHECK(A.mul(K).is_zero());
    mpz_class g = gcd(K.at(0, 0), K.at(1, 0));
    CHECK(g == 1);
}

TEST_CASE("lattice quotient") {
    // Z^2 / <(2,0),(0,3)> = Z/2 + Z/3 = Z/6
    LatticeQuotient q = lattice_quotient(IntMat::identity(2), make(2, 2, {2, 0, 0, 3}));
    CHECK(q.free_rank == 0);
    REQUIRE(q.torsion.size() == 1);
    CHECK(q.torsion[0] == 6);

    // Z^2 / <(1,1)> = Z
    q = lattice_quotient(IntMat::identity(2), make(2, 1, {1, 1}));
    CHECK(q.free_rank == 1);
    CHECK(q.torsion.empty());

    // <(2,0),(0,1)> / <(4,0)> = Z + Z/2
    q = lattice_quotient(make(2, 2, {2, 0, 0, 1}), make(2, 1, {4, 0}));
    CHECK(q.free_rank == 1);
    REQUIRE(q.torsion.size() == 1);
    CHECK(q.torsion[0] == 2);
}

TEST_CASE("saturation and complement") {
    IntMat S = saturation(make(3, 1, {2, 4, 6}));
    REQUIRE(S.cols == 1);
    mpz_class g = gcd(gcd(S.at(0, 0), S.at(1, 0)), S.at(2, 0));
    CHECK(g == 1);
    IntMat C = saturated_complement(S);
    CHECK(C.cols == 2);
    IntMat full = IntMat::hstack(S, C);
    SmithForm s = smith(full);
    REQUIRE(s.rank == 3);
    CHECK(s.divisors[2] == 1);  // S + C = Z^3
}

TEST_CASE("mod-p linear algebra") {
    IntMat A = make(2, 2, {1, 1, 1, 1});
    CHECK(rank_mod(A, 5) == 1);
    IntMat K = kernel_mod(A, 5);
    CHECK(K.cols == 1);
    A = make(2, 2, {2, 0, 0, 2});
    CHECK(rank_mod(A, 2) == 0);
    auto x = solve_mod(make(2, 2, {1, 2, 0, 1}), {0, 1}, 3);
    REQUIRE(x.has_value());
    CHECK(((*x)[0] + 2 * (*x)[1]) % 3 == 0);
    CHECK((*x)[1] % 3 == 1);
}

TEST_CASE("column lattice basis spans the columns") {
    IntMat A = make(3, 4, {1, 2, 0, 4, 0, 2, 2, 4, 0, 0, 3, 3});
    IntMat B = column_lattice_basis(A);
    for (int j = 0; j < A.cols; ++j)
        CHECK(solve(B, A.col(j)).has_value());
    for (int j = 0; j < B.cols; ++j)
        CHECK(solve(A, B.col(j)).has_value());
}
