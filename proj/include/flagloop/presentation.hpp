#pragma once

#include "flagloop/groebner.hpp"

namespace flagloop {

/// Finitely presented graded-commutative algebra, handled through a plain
/// commutative model: odd generators contribute their squares as relations,
/// truncated power families contribute pairwise product relations.
struct Presentation {
    AmbientPtr amb;
    std::vector<Polynomial> relations;

    MonomialOrder default_order() const { return MonomialOrder(amb); }
    GroebnerBasis groebner(int degree_cap = -1) const {
        return buchberger(relations, default_order(), degree_cap);
    }
};

/// Truncated family x_1, x_2, ... of a divided-power style generator.
struct FamilySpec {
    std::string base;   // member k is named base + "_" + k
    int degree = 0;     // degree of x_1; member k has degree k * degree
    FamilyKind kind = FamilyKind::DividedPower;
};

std::string family_member_name(const FamilySpec& f, int k);
int family_member_count(const FamilySpec& f, int cutoff);

/// Scaling N_m with x^m = N_m * x_m: m! for divided powers,
/// m!/2^floor(m/2) for the half-divided variant.
mpz_class family_norm(FamilyKind kind, int m);

/// Structure constant c_{ij} = N_{i+j} / (N_i N_j) in x_i x_j = c_{ij} x_{i+j}.
mpz_class family_structure_constant(FamilyKind kind, int i, int j);

/// Coefficient c_k in d(x_k) = c_k x_{k-1} d(x_1) for a derivation d
/// (c_k = k N_{k-1} / N_k: always 1 for divided powers; 2 for even k and 1
/// for odd k in the half-divided family).
mpz_class family_derivation_constant(FamilyKind kind, int k);

/// Incremental construction of a presentation: plain generators, odd
/// generators (square relations added), families (members + pairwise
/// relations up to the degree cutoff), extra relations parsed at the end.
class PresentationBuilder {
  public:
    explicit PresentationBuilder(int cutoff, unsigned long mod = 0)
        : cutoff_(cutoff), mod_(mod) {}

    PresentationBuilder& gen(const std::string& name, int degree, bool odd = false);
    PresentationBuilder& family(const FamilySpec& f);
    PresentationBuilder& relation(const std::string& text);

    Presentation build() const;
    int cutoff() const { return cutoff_; }

  private:
    int cutoff_;
    unsigned long mod_;
    std::vector<Generator> gens_;
    std::vector<FamilySpec> families_;
    std::vector<std::string> relation_texts_;
};

/// Tensor product over the coefficients: disjoint generator names required.
Presentation tensor(const Presentation& a, const Presentation& b);

/// Additive basis of a graded piece of the quotient algebra. `free` holds
/// the normal-form monomials; `torsion_witness` the monomials reducible only
/// by leading terms with a non-unit coefficient (possible torsion classes).
struct DegreeBasis {
    std::vector<Exponents> free;
    std::vector<Exponents> torsion_witness;
};

std::vector<Exponents> monomials_of_degree(const Ambient& amb, int degree);
DegreeBasis graded_basis(const GroebnerBasis& gb, int degree);

}  // namespace flagloop
