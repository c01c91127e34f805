#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flagloop {

class RingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Truncated generator families: (x)_k with pairwise product relations.
/// DividedPower:     (x)_i (x)_j = C(i+j,i) (x)_{i+j}
/// HalfDividedPower: x^m = (m!/2^floor(m/2)) (x)_m, products derived from that.
enum class FamilyKind { None, DividedPower, HalfDividedPower };

struct Generator {
    std::string name;
    int degree = 0;
    bool odd = false;
    FamilyKind family = FamilyKind::None;
    int family_index = 0;  // k for (x)_k, 0 when not in a family
    int family_prev = -1;  // ambient index of (x)_{k-1}, -1 if none
};

/// Generator list plus the coefficient ring (mod = 0 for the integers,
/// otherwise a prime p). Shared immutably by all values built over it.
struct Ambient {
    std::vector<Generator> gens;
    unsigned long mod = 0;

    int index_of(std::string_view name) const;
    int find(std::string_view name) const;  // -1 if absent
};

using AmbientPtr = std::shared_ptr<const Ambient>;

AmbientPtr make_ambient(std::vector<Generator> gens, unsigned long mod = 0);

/// Normalize a coefficient into the ring (residue in [0,p) when mod > 0).
mpz_class coeff_norm(const mpz_class& c, unsigned long mod);

using Exponents = std::vector<int>;

int monomial_degree(const Exponents& e, const Ambient& amb);
bool monomial_divides(const Exponents& a, const Exponents& b);  // a | b
Exponents monomial_mul(const Exponents& a, const Exponents& b);
Exponents monomial_div(const Exponents& a, const Exponents& b);  // a / b, pre: b | a
Exponents monomial_lcm(const Exponents& a, const Exponents& b);

/// Sparse multivariate polynomial over the ambient's coefficient ring.
/// Terms are kept on canonically ordered monomials (exponent vectors in
/// generator-list order); no zero coefficients are stored.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(AmbientPtr amb) : amb_(std::move(amb)) {}
    Polynomial(AmbientPtr amb, const mpz_class& constant);

    const AmbientPtr& ambient() const { return amb_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<Exponents, mpz_class>& terms() const { return terms_; }

    void add_term(const Exponents& m, const mpz_class& c);

    Polynomial& operator+=(const Polynomial& g);
    Polynomial& operator-=(const Polynomial& g);
    Polynomial operator+(const Polynomial& g) const;
    Polynomial operator-(const Polynomial& g) const;
    Polynomial operator-() const;
    Polynomial operator*(const mpz_class& c) const;
    bool operator==(const Polynomial& g) const { return terms_ == g.terms_; }

    /// True iff every term has the same total degree; sets it.
    bool homogeneous_degree(int& deg_out) const;
    int degree() const;  // max total degree, -1 for 0

    std::string str() const;

  private:
    AmbientPtr amb_;
    std::map<Exponents, mpz_class> terms_;

    friend Polynomial multiply(const Polynomial&, const Polynomial&);
    friend Polynomial multiply_plain(const Polynomial&, const Polynomial&);
};

/// Graded-commutative product with Koszul signs; any odd generator squared
/// is zero. Monomials stay canonical, the sign is the parity of the
/// transpositions needed to sort the concatenated word.
Polynomial multiply(const Polynomial& f, const Polynomial& g);
Polynomial multiply_monomial(const Polynomial& f, const Exponents& m, const mpz_class& c);

/// Plain commutative product (used by the Groebner engine, where exterior
/// squares are ideal relations rather than structural zeros).
Polynomial multiply_plain(const Polynomial& f, const Polynomial& g);
Polynomial multiply_plain_monomial(const Polynomial& f, const Exponents& m, const mpz_class& c);

Polynomial monomial_poly(const AmbientPtr& amb, const Exponents& m, const mpz_class& c = 1);
Polynomial generator_poly(const AmbientPtr& amb, int gen_index, int power = 1);
Polynomial generator_poly(const AmbientPtr& amb, std::string_view name, int power = 1);

std::string monomial_str(const Exponents& m, const Ambient& amb);

/// Parse an ASCII polynomial expression: integer coefficients, `+ - * ^ ( )`,
/// `*` optional between factors. Throws ParseError with position info.
class ParseError : public RingError {
  public:
    ParseError(const std::string& msg, size_t pos) : RingError(msg), position(pos) {}
    size_t position;
};

Polynomial parse_polynomial(const AmbientPtr& amb, std::string_view text);

}  // namespace flagloop
