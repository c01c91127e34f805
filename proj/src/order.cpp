#include "flagloop/order.hpp"

#include <numeric>

namespace flagloop {

MonomialOrder::MonomialOrder(AmbientPtr amb, OrderKind kind, std::vector<int> priority, int block)
    : amb_(std::move(amb)), kind_(kind), priority_(std::move(priority)), block_(block) {
    size_t n = amb_->gens.size();
    if (priority_.empty()) {
        priority_.resize(n);
        std::iota(priority_.begin(), priority_.end(), 0);
    }
    if (priority_.size() != n)
        throw RingError("priority permutation has wrong length");
    std::vector<bool> seen(n, false);
    for (int g : priority_) {
        if (g < 0 || static_cast<size_t>(g) >= n || seen[g])
            throw RingError("priority is not a permutation of the generators");
        seen[g] = true;
    }
    if (block_ < 0 || static_cast<size_t>(block_) > n)
        throw RingError("elimination block out of range");
}

// Compare restricted to priority_[from..to) with order kind k.
// Returns -1/0/+1 for a < b / a == b / a > b.
int MonomialOrder::cmp_range(const Exponents& a, const Exponents& b, int from, int to,
                             OrderKind k) const {
    if (k != OrderKind::Lex) {
        long da = 0, db = 0;
        for (int i = from; i < to; ++i) {
            int g = priority_[i];
            int w = amb_->gens[g].degree;
            da += static_cast<long>(a[g]) * w;
            db += static_cast<long>(b[g]) * w;
        }
        if (da != db)
            return da < db ? -1 : 1;
    }
    if (k == OrderKind::GrevLex) {
        for (int i = to - 1; i >= from; --i) {
            int g = priority_[i];
            if (a[g] != b[g])
                return a[g] > b[g] ? -1 : 1;
        }
        return 0;
    }
    for (int i = from; i < to; ++i) {
        int g = priority_[i];
        if (a[g] != b[g])
            return a[g] < b[g] ? -1 : 1;
    }
    return 0;
}

int MonomialOrder::cmp(const Exponents& a, const Exponents& b) const {
    int n = static_cast<int>(priority_.size());
    if (block_ > 0) {
        int c = cmp_range(a, b, 0, block_, OrderKind::GrLex);
        if (c != 0)
            return c;
        return cmp_range(a, b, block_, n, kind_);
    }
    return cmp_range(a, b, 0, n, kind_);
}

bool MonomialOrder::less(const Exponents& a, const Exponents& b) const {
    return cmp(a, b) < 0;
}

std::pair<const Exponents*, const mpz_class*> MonomialOrder::leading_term(
    const Polynomial& f) const {
    if (f.is_zero())
        throw RingError("leading term of zero polynomial");
    const Exponents* bm = nullptr;
    const mpz_class* bc = nullptr;
    for (const auto& [m, c] : f.terms()) {
        if (!bm || less(*bm, m)) {
            bm = &m;
            bc = &c;
        }
    }
    return {bm, bc};
}

const Exponents& MonomialOrder::leading_monomial(const Polynomial& f) const {
    return *leading_term(f).first;
}

const mpz_class& MonomialOrder::leading_coefficient(const Polynomial& f) const {
    return *leading_term(f).second;
}

}  // namespace flagloop
