#include "flagloop/bundles.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace flagloop {

Presentation PresentationRecipe::build(int cutoff, unsigned long mod) const {
    PresentationBuilder b(cutoff, mod);
    for (const auto& g : gens)
        b.gen(g.name, g.degree, g.odd);
    for (const auto& f : families)
        b.family(f);
    for (const auto& r : relations)
        b.relation(r);
    return b.build();
}

const std::vector<std::string>& bundle_ids() {
    static const std::vector<std::string> ids = {"su3-diagonal", "sp2-diagonal", "g2-diagonal",
                                                 "su3-eval",     "sp2-eval",     "g2-eval"};
    return ids;
}

namespace {

PresentationRecipe diagonal_base(const std::vector<std::string>& rel_patterns,
                                 bool with_deg6 = false) {
    // two copies of the flag cohomology: al*/l3 and be*/s3
    PresentationRecipe r;
    r.gens.push_back({"al1", 2, false});
    r.gens.push_back({"al2", 2, false});
    if (with_deg6)
        r.gens.push_back({"l3", 6, false});
    r.gens.push_back({"be1", 2, false});
    r.gens.push_back({"be2", 2, false});
    if (with_deg6)
        r.gens.push_back({"s3", 6, false});
    auto subst = [](std::string p, const std::string& g1, const std::string& g2,
                    const std::string& t) {
        std::string out;
        for (size_t i = 0; i < p.size(); ++i) {
            if (p.compare(i, 2, "G1") == 0) {
                out += g1;
                ++i;
            } else if (p.compare(i, 2, "G2") == 0) {
                out += g2;
                ++i;
            } else if (p.compare(i, 2, "T3") == 0) {
                out += t;
                ++i;
            } else {
                out += p[i];
            }
        }
        return out;
    };
    for (const auto& p : rel_patterns) {
        r.relations.push_back(subst(p, "al1", "al2", "l3"));
        r.relations.push_back(subst(p, "be1", "be2", "s3"));
    }
    return r;
}

PresentationRecipe eval_base(const std::string& id) {
    PresentationRecipe r;
    r.gens.push_back({"g1", 2, false});
    r.gens.push_back({"g2", 2, false});
    if (id == "su3-eval") {
        r.relations = {"g1^2+g1*g2+g2^2", "g1^3"};
    } else if (id == "sp2-eval") {
        r.relations = {"g1^2+g2^2", "g1^4"};
    } else {
        r.gens.push_back({"t3", 6, false});
        r.relations = {"g1^2+g1*g2+g2^2", "2*t3-g1^3", "t3^2"};
    }
    return r;
}

PresentationRecipe loop_fiber(const std::string& group) {
    PresentationRecipe r;
    r.gens.push_back({"y1", 1, true});
    r.gens.push_back({"y2", 1, true});
    if (group == "su3") {
        r.families.push_back({"x2", 2, FamilyKind::DividedPower});
        r.families.push_back({"x4", 4, FamilyKind::DividedPower});
    } else if (group == "sp2") {
        r.families.push_back({"x2", 2, FamilyKind::DividedPower});
        r.families.push_back({"x6", 6, FamilyKind::DividedPower});
    } else {
        r.families.push_back({"a2", 2, FamilyKind::HalfDividedPower});
        r.families.push_back({"b10", 10, FamilyKind::DividedPower});
    }
    return r;
}

}  // namespace

NamedBundle load_bundle(const std::string& id, int cutoff, unsigned long mod) {
    if (std::find(bundle_ids().begin(), bundle_ids().end(), id) == bundle_ids().end())
        throw MathError("unknown bundle id: " + id);
    if (cutoff < 2)
        throw MathError("cutoff must be at least 2");

    NamedBundle b;
    b.id = id;
    b.cutoff = cutoff;
    b.diagonal = id.size() > 8 && id.substr(id.size() - 8) == "diagonal";
    b.has_oracle = !b.diagonal;
    std::string group = id.substr(0, id.find('-'));

    if (b.diagonal) {
        if (group == "su3")
            b.base_recipe = diagonal_base({"G1^2+G1*G2+G2^2", "G1^3"});
        else if (group == "sp2")
            b.base_recipe = diagonal_base({"G1^2+G2^2", "G1^4"});
        else
            b.base_recipe = diagonal_base({"G1^2+G1*G2+G2^2", "2*T3-G1^3", "T3^2"}, true);
    } else {
        b.base_recipe = eval_base(id);
    }
    b.fiber_recipe = loop_fiber(group);

    FibrationSpec& spec = b.fibration;
    spec.name = id;
    spec.cutoff = cutoff;
    spec.base = b.base_recipe.build(cutoff, mod);
    spec.fiber = b.fiber_recipe.build(cutoff, mod);
    AmbientPtr amb = tensor(spec.base, spec.fiber).amb;

    auto P = [&](const std::string& s) { return parse_polynomial(amb, s); };
    auto have = [&](const std::string& name) { return amb->find(name) >= 0; };
    auto add = [&](int page, const std::string& source, Polynomial value) {
        if (!have(source))
            return;  // family truncated away by a small cutoff
        spec.differentials.push_back({page, source, std::move(value), false});
    };

    if (b.diagonal) {
        Polynomial y1 = P("y1"), y2 = P("y2");
        Polynomial v1 = P("al1-be1"), v2 = P("al2-be2"), u1 = P("be1"), u2 = P("be2");
        auto M = [&](const Polynomial& a, const Polynomial& c) { return multiply(a, c); };
        add(2, "y1", v1);
        add(2, "y2", v2);
        if (group == "su3") {
            add(2, "x2_1",
                M(y1, v1) + M(y2, v2) + M(y1, v2) + M(y1, u1) * 2 + M(y2, u2) * 2 + M(y1, u2) +
                    M(y2, u1));
            add(4, "x4_1",
                M(y1, M(v1, v2)) + M(y2, M(v2, v1)) + M(y1, M(u1, v2)) * 2 +
                    M(y2, M(u2, v1)) * 2 + M(y1, M(v1, u2)) + M(y2, M(v2, u1)) +
                    M(y1, M(u1, u2)) * 2 + M(y2, M(u2, u1)) * 2 + M(y1, M(u2, u2)) +
                    M(y2, M(u1, u1)));
        } else if (group == "sp2") {
            add(2, "x2_1", M(y1, v1) + M(y2, v2) + M(y1, u1) * 2 + M(y2, u2) * 2);
            add(6, "x6_1",
                M(y1, M(v1, M(v1, v1))) + M(y1, M(v1, M(v1, u1))) * 4 +
                    M(y1, M(v1, M(u1, u1))) * 6 + M(y1, M(u1, M(u1, u1))) * 4);
        } else {
            // zeta, corrected so that d2(zeta) reduces to zero; its evaluation
            // image is y1(2g1+g2)+y2(g1+2g2)
            Polynomial zeta = M(y1, v1 + v2 + u1 * 2 + u2) + M(y2, v2 + u2 * 2 + u1);
            add(2, "a2_1", zeta);
            Polynomial theta = P("l3-s3");
            Polynomial q1 = M(v1, v1) + M(v1, u1) * 3 + M(u1, u1) * 3;  // v1^2+3v1u1+3u1^2
            // image of b10: y1*q1*(l3+s3); d2 of it is (2l3-2s3)(l3+s3) = 0
            add(10, "b10_1", M(y1, M(q1, P("l3+s3"))));
            if (have("a2_1") && cutoff >= 6)
                spec.class_differentials.push_back({4, M(P("a2_1"), zeta), theta, false});
        }
    } else {
        if (group == "su3") {
            add(2, "x2_1", P("y1*(2*g1+g2)+y2*(g1+2*g2)"));
            add(4, "x4_1", P("y1*(g1^2+2*g1*g2)+y2*(g2^2+2*g1*g2)"));
        } else if (group == "sp2") {
            add(2, "x2_1", P("2*y1*g1+2*y2*g2"));
            add(6, "x6_1", P("4*y1*g1^3"));
        } else {
            add(2, "a2_1", P("y1*(2*g1+g2)+y2*(g1+2*g2)"));
            add(10, "b10_1", P("3*y1*t3*g1^2"));
        }
    }
    return b;
}

std::vector<IdentityCheck> list_identities(const NamedBundle& b) {
    std::vector<IdentityCheck> out;
    const Ambient& amb = *b.fibration.base.amb;
    (void)amb;
    for (const auto& d : b.fibration.differentials) {
        // the y-assignments of a diagonal bundle are inputs, not image classes
        if (d.source == "y1" || d.source == "y2")
            continue;
        out.push_back({b.id + ": d" + std::to_string(d.page) + "(" + d.source + ")", d.value});
    }
    return out;
}

namespace {

struct OracleData {
    std::vector<Polynomial> gens;
    std::vector<Polynomial> ideal;
};

// family member as a polynomial: fam("x2", 0) = 1, missing member = 0
Polynomial fam(const AmbientPtr& amb, const std::string& base, int k) {
    if (k == 0)
        return Polynomial(amb, 1);
    int i = amb->find(base + "_" + std::to_string(k));
    if (i < 0)
        return Polynomial(amb);
    return generator_poly(amb, i);
}

OracleData oracle_data(const std::string& id, const SpectralSequence& ss) {
    const AmbientPtr& amb = ss.total().amb;
    int cutoff = ss.spec().cutoff;
    auto P = [&](const std::string& s) { return parse_polynomial(amb, s); };
    auto nf = [&](const Polynomial& f) { return ss.normal_form(f); };
    OracleData out;
    auto push = [&](std::vector<Polynomial>& dst, Polynomial f) {
        Polynomial r = nf(f);
        int deg = 0;
        if (!r.is_zero() && r.homogeneous_degree(deg) && deg <= cutoff)
            dst.push_back(std::move(r));
    };

    if (id == "su3-eval") {
        for (const char* s : {"g1", "g2", "y1", "y2"})
            out.gens.push_back(P(s));
        for (int m = 1; 4 * m <= cutoff; ++m)
            push(out.gens, fam(amb, "x4", m));
        std::vector<Polynomial> pats = {P("y1*y2"),
                                        P("y2*(g1+g2)+y1*g1"),
                                        P("y1*(g1+g2)+y2*g2"),
                                        P("(y1+2*y2)*g1^2"),
                                        P("y1*(2*g1+g2)+y2*(g1+2*g2)"),
                                        P("g1^2*g2")};
        for (int m = 1; 2 * m <= cutoff; ++m)
            for (const auto& p : pats)
                push(out.gens, multiply(fam(amb, "x2", m), p));
        Polynomial im = P("y1*(2*g1+g2)+y2*(g1+2*g2)");
        for (int a = 0; 2 * a <= cutoff; ++a)
            push(out.ideal, multiply(fam(amb, "x2", a), im));
    } else if (id == "sp2-eval") {
        std::vector<Polynomial> tails = {P("g1"), P("g2"), P("y1"), P("y2")};
        for (int bb = 0; 6 * bb <= cutoff; ++bb)
            for (const auto& t : tails)
                push(out.gens, multiply(fam(amb, "x6", bb), t));
        std::vector<Polynomial> pats = {P("y1*y2"), P("y1*g2-y2*g1"), P("y2*g1^3"),
                                        P("y1*g1+y2*g2"), P("g1^3*g2")};
        for (int m = 1; 2 * m <= cutoff; ++m)
            for (int bb = 0; 2 * m + 6 * bb <= cutoff; ++bb)
                for (const auto& p : pats)
                    push(out.gens, multiply(multiply(fam(amb, "x2", m), fam(amb, "x6", bb)), p));
        Polynomial im2 = P("2*y1*g1+2*y2*g2"), im6 = P("4*y1*g1^3");
        for (int a = 0; 2 * a <= cutoff; ++a)
            for (int bb = 0; 2 * a + 6 * bb <= cutoff; ++bb)
                push(out.ideal, multiply(multiply(fam(amb, "x2", a), fam(amb, "x6", bb)), im2));
        // the y1*g1^3 relation family carries only the x6 index
        for (int bb = 0; 6 * bb <= cutoff; ++bb)
            push(out.ideal, multiply(fam(amb, "x6", bb), im6));
    } else if (id == "g2-eval") {
        std::vector<Polynomial> tails = {P("g1"), P("g2"), P("t3"), P("y1"), P("y2")};
        for (int l = 0; 10 * l <= cutoff; ++l)
            for (const auto& t : tails)
                push(out.gens, multiply(fam(amb, "b10", l), t));
        // products (a2)_m t3, (a2)_m g1^3, (a2)_m g1^2 g2 are not d2-cycles
        // (no correction in their cell makes them one), so they are not
        // survivor generators despite their factors being ones
        std::vector<Polynomial> pats = {P("y1*y2"),
                                        P("y1*(g1+g2)+y2*g2"),
                                        P("t3*g1^2*(y1-2*y2)"),
                                        P("y1*(2*g1+g2)+y2*(g1+2*g2)")};
        for (int m = 1; 2 * m <= cutoff; ++m)
            for (int l = 0; 2 * m + 10 * l <= cutoff; ++l)
                for (const auto& p : pats)
                    push(out.gens, multiply(multiply(fam(amb, "a2", m), fam(amb, "b10", l)), p));
        Polynomial im2 = P("y1*(2*g1+g2)+y2*(g1+2*g2)"), im10 = P("3*y1*t3*g1^2");
        for (int l = 0; 10 * l <= cutoff; ++l) {
            Polynomial bl = fam(amb, "b10", l);
            for (int s = 0; 2 * s <= cutoff; ++s) {
                // half-divided derivation constants: image of (a2)_{s+1} is
                // c_{s+1} (a2)_s zeta with c = 1 for even s, 2 for odd s
                int c = (s % 2 == 0) ? 1 : 2;
                push(out.ideal, multiply(multiply(fam(amb, "a2", s), bl), im2) * c);
            }
            // d10 sources are the (b10)_m alone, so this family carries no a2 index
            push(out.ideal, multiply(bl, im10));
        }
    } else {
        throw MathError("no survivor oracle for bundle " + id);
    }
    return out;
}

}  // namespace

OracleTable oracle_table(const NamedBundle& b, const SpectralSequence& ss) {
    OracleData data = oracle_data(b.id, ss);
    const AmbientPtr& amb = ss.total().amb;
    int cutoff = ss.spec().cutoff;
    auto nf = [&](const Polynomial& f) { return ss.normal_form(f); };

    // all distinct normal forms of products of survivor generators, by degree
    std::vector<std::vector<Polynomial>> prods(static_cast<size_t>(cutoff) + 1);
    std::vector<std::set<std::string>> seen(static_cast<size_t>(cutoff) + 1);
    std::vector<int> gdeg;
    for (const auto& g : data.gens) {
        int d = 0;
        g.homogeneous_degree(d);
        gdeg.push_back(d);
    }
    prods[0].push_back(Polynomial(amb, 1));
    auto rec = [&](auto&& self, size_t i, const Polynomial& cur, int deg) -> void {
        for (size_t j = i; j < data.gens.size(); ++j) {
            int nd = deg + gdeg[j];
            if (nd > cutoff)
                continue;
            Polynomial np = nf(multiply(cur, data.gens[j]));
            if (np.is_zero())
                continue;
            // each multiset is reached once; dedupe only what we store
            if (seen[static_cast<size_t>(nd)].insert(np.str()).second)
                prods[static_cast<size_t>(nd)].push_back(np);
            self(self, j, np, nd);
        }
    };
    rec(rec, 0, prods[0][0], 0);

    OracleTable table;
    table.bundle = b.id;
    table.cutoff = cutoff;
    for (int d = 0; d <= cutoff; ++d) {
        DegreeBasis db = graded_basis(ss.total_groebner(), d);
        std::map<Exponents, int> index;
        for (size_t i = 0; i < db.free.size(); ++i)
            index[db.free[i]] = static_cast<int>(i);
        int n = static_cast<int>(db.free.size());
        auto to_col = [&](const Polynomial& f) {
            std::vector<mpz_class> v(static_cast<size_t>(n));
            for (const auto& [m, c] : f.terms()) {
                auto it = index.find(m);
                if (it == index.end())
                    throw MathError("oracle product is not in normal form");
                v[static_cast<size_t>(it->second)] = c;
            }
            return v;
        };
        std::vector<std::vector<mpz_class>> mcols, ncols;
        for (const auto& p : prods[static_cast<size_t>(d)])
            mcols.push_back(to_col(p));
        for (const auto& e : data.ideal) {
            int de = 0;
            e.homogeneous_degree(de);
            if (de > d)
                continue;
            for (const auto& p : prods[static_cast<size_t>(d - de)]) {
                Polynomial w = nf(multiply(e, p));
                if (!w.is_zero())
                    ncols.push_back(to_col(w));
            }
        }
        OracleRow row;
        row.degree = d;
        if (!mcols.empty()) {
            IntMat M = column_lattice_basis(IntMat::from_columns(n, mcols));
            IntMat N = ncols.empty() ? IntMat(n, 0)
                                     : column_lattice_basis(IntMat::from_columns(n, ncols));
            LatticeQuotient q = lattice_quotient(M, N);
            row.free_rank = q.free_rank;
            row.torsion = q.torsion;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<RowComparison> compare_tables(const EInfinityTable& engine, const OracleTable& oracle,
                                          bool allow_2_4) {
    std::vector<RowComparison> out;
    auto two_power_small = [](const mpz_class& v) { return v == 2 || v == 4; };
    // compare up to group isomorphism: split each order into prime powers
    // (Z/6 and Z/2 + Z/3 are the same group)
    auto primary = [](std::vector<mpz_class> t) {
        std::vector<mpz_class> out_t;
        for (auto& v : t) {
            for (mpz_class p = 2; v > 1 && p * p <= v; ++p) {
                if (v % p != 0)
                    continue;
                mpz_class pk = 1;
                while (v % p == 0) {
                    pk *= p;
                    v /= p;
                }
                out_t.push_back(pk);
            }
            if (v > 1)
                out_t.push_back(v);
        }
        return out_t;
    };
    for (const auto& row : engine.rows) {
        if (!row.certified)
            continue;
        if (row.degree >= static_cast<int>(oracle.rows.size()))
            break;
        const OracleRow& orow = oracle.rows[static_cast<size_t>(row.degree)];
        RowComparison c;
        c.degree = row.degree;
        std::vector<mpz_class> a = primary(row.torsion), b = primary(orow.torsion);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        std::ostringstream detail;
        if (row.free_rank != orow.free_rank) {
            detail << "free rank " << row.free_rank << " vs oracle " << orow.free_rank;
            c.match = false;
        } else if (a == b) {
            c.match = true;
        } else if (allow_2_4 && a.size() == b.size()) {
            c.match = true;
            for (size_t i = 0; i < a.size(); ++i) {
                if (a[i] == b[i])
                    continue;
                if (two_power_small(a[i]) && two_power_small(b[i])) {
                    c.ambiguous = true;
                    detail << (detail.str().empty() ? "" : "; ") << "torsion order "
                           << a[i].get_str() << " vs " << b[i].get_str();
                } else {
                    c.match = false;
                    break;
                }
            }
            if (!c.match) {
                detail.str("");
                detail << "torsion mismatch";
            }
        } else {
            auto list = [](const std::vector<mpz_class>& t) {
                std::string s = "[";
                for (size_t i = 0; i < t.size(); ++i)
                    s += (i ? "," : "") + t[i].get_str();
                return s + "]";
            };
            detail << "torsion " << list(a) << " vs oracle " << list(b);
            c.match = false;
        }
        c.detail = detail.str();
        out.push_back(std::move(c));
    }
    return out;
}

namespace {

const char* family_kind_name(FamilyKind k) {
    return k == FamilyKind::HalfDividedPower ? "half" : "divided";
}

void recipe_to_config(std::ostream& os, const std::string& section,
                      const PresentationRecipe& r) {
    os << "[" << section << "]\n";
    for (const auto& g : r.gens)
        os << "gen = " << g.name << " " << g.degree << (g.odd ? " odd" : "") << "\n";
    for (const auto& f : r.families)
        os << "family = " << f.base << " " << f.degree << " " << family_kind_name(f.kind) << "\n";
    for (const auto& rel : r.relations)
        os << "relation = " << rel << "\n";
    os << "\n";
}

}  // namespace

std::string bundle_to_config(const NamedBundle& b) {
    std::ostringstream os;
    os << "[bundle]\n";
    os << "id = " << b.id << "\n";
    os << "cutoff = " << b.cutoff << "\n";
    os << "diagonal = " << (b.diagonal ? 1 : 0) << "\n";
    os << "oracle = " << (b.has_oracle ? 1 : 0) << "\n\n";
    recipe_to_config(os, "base", b.base_recipe);
    recipe_to_config(os, "fiber", b.fiber_recipe);
    for (const auto& d : b.fibration.differentials) {
        os << "[differential]\n";
        os << "page = " << d.page << "\n";
        os << "source = " << d.source << "\n";
        os << "value = " << d.value.str() << "\n\n";
    }
    for (const auto& c : b.fibration.class_differentials) {
        os << "[class-differential]\n";
        os << "page = " << c.page << "\n";
        os << "source = " << c.source.str() << "\n";
        os << "value = " << c.value.str() << "\n\n";
    }
    return os.str();
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w)
        out.push_back(w);
    return out;
}

}  // namespace

NamedBundle parse_bundle_config(const std::string& text, int cutoff_override, unsigned long mod) {
    NamedBundle b;
    struct RawDiff {
        int page = 0;
        std::string source, value;
        bool clazz = false;
    };
    std::vector<RawDiff> raw;
    std::string section;
    PresentationRecipe* recipe = nullptr;
    std::istringstream is(text);
    std::string line;
    size_t lineno = 0;
    auto fail = [&](const std::string& msg) { throw ParseError(msg, lineno); };
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';')
            continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                fail("unterminated section header");
            section = t.substr(1, t.size() - 2);
            recipe = section == "base" ? &b.base_recipe
                     : section == "fiber" ? &b.fiber_recipe
                                          : nullptr;
            if (section == "differential" || section == "class-differential")
                raw.push_back({0, "", "", section == "class-differential"});
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            fail("expected key = value");
        std::string key = trim(t.substr(0, eq)), val = trim(t.substr(eq + 1));
        if (section == "bundle") {
            if (key == "id")
                b.id = val;
            else if (key == "cutoff")
                b.cutoff = std::stoi(val);
            else if (key == "diagonal")
                b.diagonal = val == "1" || val == "true";
            else if (key == "oracle")
                b.has_oracle = val == "1" || val == "true";
            else
                fail("unknown bundle key: " + key);
        } else if (recipe) {
            if (key == "gen") {
                auto w = split_ws(val);
                if (w.size() < 2)
                    fail("gen needs a name and a degree");
                recipe->gens.push_back(
                    {w[0], std::stoi(w[1]), w.size() > 2 && w[2] == "odd"});
            } else if (key == "family") {
                auto w = split_ws(val);
                if (w.size() < 3)
                    fail("family needs name, degree, kind");
                FamilyKind k = w[2] == "half" ? FamilyKind::HalfDividedPower
                                              : FamilyKind::DividedPower;
                recipe->families.push_back({w[0], std::stoi(w[1]), k});
            } else if (key == "relation") {
                recipe->relations.push_back(val);
            } else {
                fail("unknown " + section + " key: " + key);
            }
        } else if (section == "differential" || section == "class-differential") {
            RawDiff& d = raw.back();
            if (key == "page")
                d.page = std::stoi(val);
            else if (key == "source")
                d.source = val;
            else if (key == "value")
                d.value = val;
            else
                fail("unknown differential key: " + key);
        } else {
            fail("key outside of any known section");
        }
    }
    if (b.id.empty())
        throw ParseError("config has no [bundle] id", 0);
    if (cutoff_override > 0)
        b.cutoff = cutoff_override;
    if (b.cutoff < 2)
        throw ParseError("config cutoff must be at least 2", 0);
    if (b.base_recipe.gens.empty())
        throw ParseError("config has no base generators", 0);

    FibrationSpec& spec = b.fibration;
    spec.name = b.id;
    spec.cutoff = b.cutoff;
    spec.base = b.base_recipe.build(b.cutoff, mod);
    spec.fiber = b.fiber_recipe.build(b.cutoff, mod);
    AmbientPtr amb = tensor(spec.base, spec.fiber).amb;
    for (const auto& d : raw) {
        if (d.page < 2)
            throw ParseError("differential needs a page >= 2", 0);
        if (d.clazz)
            spec.class_differentials.push_back(
                {d.page, parse_polynomial(amb, d.source), parse_polynomial(amb, d.value), false});
        else if (amb->find(d.source) >= 0)
            spec.differentials.push_back({d.page, d.source, parse_polynomial(amb, d.value), false});
    }
    return b;
}

}  // namespace flagloop
