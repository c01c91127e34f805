#include "flagloop/ring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace flagloop {

int Ambient::index_of(std::string_view name) const {
    int i = find(name);
    if (i < 0)
        throw RingError("unknown generator: " + std::string(name));
    return i;
}

int Ambient::find(std::string_view name) const {
    for (size_t i = 0; i < gens.size(); ++i)
        if (gens[i].name == name)
            return static_cast<int>(i);
    return -1;
}

AmbientPtr make_ambient(std::vector<Generator> gens, unsigned long mod) {
    auto amb = std::make_shared<Ambient>();
    amb->gens = std::move(gens);
    amb->mod = mod;
    for (size_t i = 0; i < amb->gens.size(); ++i)
        for (size_t j = i + 1; j < amb->gens.size(); ++j)
            if (amb->gens[i].name == amb->gens[j].name)
                throw RingError("duplicate generator name: " + amb->gens[i].name);
    return amb;
}

mpz_class coeff_norm(const mpz_class& c, unsigned long mod) {
    if (mod == 0)
        return c;
    mpz_class r;
    mpz_mod_ui(r.get_mpz_t(), c.get_mpz_t(), mod);
    return r;
}

int monomial_degree(const Exponents& e, const Ambient& amb) {
    int d = 0;
    for (size_t i = 0; i < e.size(); ++i)
        d += e[i] * amb.gens[i].degree;
    return d;
}

bool monomial_divides(const Exponents& a, const Exponents& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i])
            return false;
    return true;
}

Exponents monomial_mul(const Exponents& a, const Exponents& b) {
    Exponents r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

Exponents monomial_div(const Exponents& a, const Exponents& b) {
    Exponents r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

Exponents monomial_lcm(const Exponents& a, const Exponents& b) {
    Exponents r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = std::max(a[i], b[i]);
    return r;
}

Polynomial::Polynomial(AmbientPtr amb, const mpz_class& constant) : amb_(std::move(amb)) {
    add_term(Exponents(amb_->gens.size(), 0), constant);
}

void Polynomial::add_term(const Exponents& m, const mpz_class& c) {
    if (m.size() != amb_->gens.size())
        throw RingError("monomial length does not match ambient");
    mpz_class v = coeff_norm(c, amb_->mod);
    if (v == 0)
        return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, v);
        return;
    }
    it->second = coeff_norm(it->second + v, amb_->mod);
    if (it->second == 0)
        terms_.erase(it);
}

Polynomial& Polynomial::operator+=(const Polynomial& g) {
    for (const auto& [m, c] : g.terms_)
        add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& g) {
    for (const auto& [m, c] : g.terms_)
        add_term(m, -c);
    return *this;
}

Polynomial Polynomial::operator+(const Polynomial& g) const {
    Polynomial r = *this;
    r += g;
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& g) const {
    Polynomial r = *this;
    r -= g;
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(amb_);
    for (const auto& [m, c] : terms_)
        r.add_term(m, -c);
    return r;
}

Polynomial Polynomial::operator*(const mpz_class& c) const {
    Polynomial r(amb_);
    for (const auto& [m, co] : terms_)
        r.add_term(m, co * c);
    return r;
}

bool Polynomial::homogeneous_degree(int& deg_out) const {
    deg_out = -1;
    for (const auto& [m, c] : terms_) {
        int d = monomial_degree(m, *amb_);
        if (deg_out == -1)
            deg_out = d;
        else if (deg_out != d)
            return false;
    }
    return true;
}

int Polynomial::degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_)
        d = std::max(d, monomial_degree(m, *amb_));
    return d;
}

namespace {

// Koszul sign for merging two canonical words a, b: each odd letter of b at
// generator index j jumps over every odd letter of a with index > j.
// Returns 0 (coefficient vanishes: odd letter squared), +1 or -1.
int koszul_sign(const Exponents& a, const Exponents& b, const Ambient& amb) {
    long swaps = 0;
    long odd_above = 0;  // odd letters of a with index > current j
    for (size_t j = 0; j < a.size(); ++j)
        if (amb.gens[j].odd)
            odd_above += a[j];
    for (size_t j = 0; j < a.size(); ++j) {
        if (!amb.gens[j].odd)
            continue;
        odd_above -= a[j];
        if (b[j] > 0) {
            if (a[j] + b[j] > 1)
                return 0;
            swaps += odd_above;
        }
    }
    return (swaps % 2 == 0) ? 1 : -1;
}

}  // namespace

Polynomial multiply_monomial(const Polynomial& f, const Exponents& m, const mpz_class& c) {
    const Ambient& amb = *f.ambient();
    Polynomial r(f.ambient());
    for (const auto& [fm, fc] : f.terms()) {
        int s = koszul_sign(fm, m, amb);
        if (s == 0)
            continue;
        r.add_term(monomial_mul(fm, m), fc * c * s);
    }
    return r;
}

Polynomial multiply(const Polynomial& f, const Polynomial& g) {
    Polynomial r(f.ambient());
    for (const auto& [gm, gc] : g.terms())
        r += multiply_monomial(f, gm, gc);
    return r;
}

Polynomial multiply_plain_monomial(const Polynomial& f, const Exponents& m, const mpz_class& c) {
    Polynomial r(f.ambient());
    for (const auto& [fm, fc] : f.terms())
        r.add_term(monomial_mul(fm, m), fc * c);
    return r;
}

Polynomial multiply_plain(const Polynomial& f, const Polynomial& g) {
    Polynomial r(f.ambient());
    for (const auto& [gm, gc] : g.terms())
        r += multiply_plain_monomial(f, gm, gc);
    return r;
}

Polynomial monomial_poly(const AmbientPtr& amb, const Exponents& m, const mpz_class& c) {
    Polynomial r(amb);
    r.add_term(m, c);
    return r;
}

Polynomial generator_poly(const AmbientPtr& amb, int gen_index, int power) {
    Exponents m(amb->gens.size(), 0);
    m[gen_index] = power;
    return monomial_poly(amb, m);
}

Polynomial generator_poly(const AmbientPtr& amb, std::string_view name, int power) {
    return generator_poly(amb, amb->index_of(name), power);
}

std::string monomial_str(const Exponents& m, const Ambient& amb) {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0)
            continue;
        if (!first)
            os << "*";
        os << amb.gens[i].name;
        if (m[i] > 1)
            os << "^" << m[i];
        first = false;
    }
    if (first)
        os << "1";
    return os.str();
}

std::string Polynomial::str() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    // print highest monomial first for readability
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        mpz_class a = c;
        if (!first)
            os << (a < 0 ? " - " : " + ");
        else if (a < 0)
            os << "-";
        if (a < 0)
            a = -a;
        bool constant = std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
        if (a != 1 || constant) {
            os << a.get_str();
            if (!constant)
                os << "*";
        }
        if (!constant)
            os << monomial_str(m, *amb_);
        first = false;
    }
    return os.str();
}

namespace {

// Recursive-descent parser: expr := term (('+'|'-') term)*,
// term := signed factor ('*'? factor)*, factor := atom ('^' int)?,
// atom := int | name | '(' expr ')'.
struct Parser {
    const AmbientPtr& amb;
    std::string_view s;
    size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }

    Polynomial expr() {
        Polynomial r = term();
        while (true) {
            if (eat('+'))
                r += term();
            else if (eat('-'))
                r -= term();
            else
                break;
        }
        return r;
    }

    Polynomial term() {
        int sign = 1;
        while (true) {
            if (eat('-'))
                sign = -sign;
            else if (!eat('+'))
                break;
        }
        Polynomial r = factor();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos;
                r = multiply(r, factor());
            } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '_') {
                r = multiply(r, factor());
            } else {
                break;
            }
        }
        return sign < 0 ? -r : r;
    }

    Polynomial factor() {
        Polynomial a = atom();
        if (eat('^')) {
            skip();
            size_t start = pos;
            long n = integer();
            if (n < 0)
                throw ParseError("negative exponent", start);
            Polynomial r(amb, 1);
            for (long i = 0; i < n; ++i)
                r = multiply(r, a);
            return r;
        }
        return a;
    }

    long integer() {
        skip();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos == start)
            throw ParseError("expected integer", start);
        return std::stol(std::string(s.substr(start, pos - start)));
    }

    Polynomial atom() {
        skip();
        if (pos >= s.size())
            throw ParseError("unexpected end of input", pos);
        char c = s[pos];
        if (c == '(') {
            ++pos;
            Polynomial r = expr();
            if (!eat(')'))
                throw ParseError("expected ')'", pos);
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                ++pos;
            return Polynomial(amb, mpz_class(std::string(s.substr(start, pos - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            std::string name(s.substr(start, pos - start));
            int gi = amb->find(name);
            if (gi < 0)
                throw ParseError("unknown generator '" + name + "'", start);
            return generator_poly(amb, gi);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
};

}  // namespace

Polynomial parse_polynomial(const AmbientPtr& amb, std::string_view text) {
    Parser p{amb, text};
    Polynomial r = p.expr();
    p.skip();
    if (p.pos != text.size())
        throw ParseError("trailing input", p.pos);
    return r;
}

}  // namespace flagloop
