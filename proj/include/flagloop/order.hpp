#pragma once

#include "flagloop/ring.hpp"

namespace flagloop {

enum class OrderKind { Lex, GrLex, GrevLex };

/// Monomial order with a variable priority permutation and an optional
/// elimination block: the first `block` priority entries are compared
/// first (by graded-lex among themselves), so they are eliminated by
/// taking the basis elements free of them.
class MonomialOrder {
  public:
    MonomialOrder(AmbientPtr amb, OrderKind kind = OrderKind::GrevLex,
                  std::vector<int> priority = {}, int block = 0);

    const AmbientPtr& ambient() const { return amb_; }
    OrderKind kind() const { return kind_; }
    int block() const { return block_; }
    const std::vector<int>& priority() const { return priority_; }

    bool less(const Exponents& a, const Exponents& b) const;
    bool greater(const Exponents& a, const Exponents& b) const { return less(b, a); }

    /// Leading monomial/coefficient of f under this order; f must be nonzero.
    const Exponents& leading_monomial(const Polynomial& f) const;
    const mpz_class& leading_coefficient(const Polynomial& f) const;
    std::pair<const Exponents*, const mpz_class*> leading_term(const Polynomial& f) const;

  private:
    AmbientPtr amb_;
    OrderKind kind_;
    std::vector<int> priority_;  // generator indices, most significant first
    int block_;

    int cmp(const Exponents& a, const Exponents& b) const;
    int cmp_range(const Exponents& a, const Exponents& b, int from, int to, OrderKind k) const;
};

}  // namespace flagloop
