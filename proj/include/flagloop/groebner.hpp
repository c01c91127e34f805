#pragma once

#include "flagloop/order.hpp"

#include <optional>

namespace flagloop {

/// Full normal form of f modulo G under ord. Over the integers each
/// coefficient is left as the unique remainder r, 0 <= r < lc, with respect
/// to every applicable divisor; over F_p reducible terms vanish entirely.
Polynomial reduce(const Polynomial& f, const std::vector<Polynomial>& G, const MonomialOrder& ord);

struct GroebnerBasis {
    std::vector<Polynomial> elements;
    MonomialOrder order;

    bool contains(const Polynomial& f) const { return reduce(f, elements, order).is_zero(); }
};

/// Buchberger completion producing a strong Groebner basis: S-polynomials
/// (lcm of leading coefficients) and gcd-polynomials (Bezout combination)
/// are both processed, so every ideal element reduces to zero even over Z.
/// With degree_cap >= 0 (homogeneous input only) pairs above the cap are
/// skipped and the result is a basis in degrees <= degree_cap.
GroebnerBasis buchberger(std::vector<Polynomial> F, const MonomialOrder& ord,
                         int degree_cap = -1, bool make_reduced = true);

/// Elements of G not involving the elimination block of its order; they
/// generate the elimination ideal.
std::vector<Polynomial> elimination_part(const GroebnerBasis& G);

/// Intersection of two ideals of the same ambient, computed with a fresh
/// degree-zero tag variable t via <t*A, (1-t)*B> and elimination of t.
std::vector<Polynomial> ideal_intersect(const std::vector<Polynomial>& A,
                                        const std::vector<Polynomial>& B,
                                        const MonomialOrder& ord);

bool ideal_contains(const GroebnerBasis& G, const std::vector<Polynomial>& F);
bool ideal_equal(const std::vector<Polynomial>& A, const std::vector<Polynomial>& B,
                 const MonomialOrder& ord);

}  // namespace flagloop
