#include "flagloop/spectral.hpp"

#include <algorithm>
#include <future>
#include <sstream>

namespace flagloop {

namespace {

// basis of the column span over F_p, as columns
IntMat col_basis_mod(const IntMat& A, unsigned long p) {
    // rref rows of A^T = basis of the column space of A
    IntMat R = A.transpose();
    // local rref
    {
        int r = 0;
        for (int j = 0; j < R.cols && r < R.rows; ++j) {
            int pi = -1;
            for (int i = r; i < R.rows; ++i) {
                mpz_class v;
                mpz_mod_ui(v.get_mpz_t(), R.at(i, j).get_mpz_t(), p);
                if (v != 0) {
                    pi = i;
                    break;
                }
            }
            if (pi < 0)
                continue;
            for (int c = 0; c < R.cols; ++c)
                std::swap(R.at(r, c), R.at(pi, c));
            mpz_class inv, pp(p);
            mpz_class piv;
            mpz_mod_ui(piv.get_mpz_t(), R.at(r, j).get_mpz_t(), p);
            mpz_invert(inv.get_mpz_t(), piv.get_mpz_t(), pp.get_mpz_t());
            for (int c = 0; c < R.cols; ++c) {
                R.at(r, c) = R.at(r, c) * inv;
                mpz_mod_ui(R.at(r, c).get_mpz_t(), R.at(r, c).get_mpz_t(), p);
            }
            for (int i = 0; i < R.rows; ++i) {
                if (i == r)
                    continue;
                mpz_class f;
                mpz_mod_ui(f.get_mpz_t(), R.at(i, j).get_mpz_t(), p);
                if (f == 0)
                    continue;
                for (int c = 0; c < R.cols; ++c) {
                    R.at(i, c) = R.at(i, c) - f * R.at(r, c);
                    mpz_mod_ui(R.at(i, c).get_mpz_t(), R.at(i, c).get_mpz_t(), p);
                }
            }
            ++r;
        }
        // keep nonzero rows
        std::vector<std::vector<mpz_class>> cols;
        for (int i = 0; i < r; ++i) {
            std::vector<mpz_class> v(R.cols);
            for (int j = 0; j < R.cols; ++j)
                v[j] = R.at(i, j);
            cols.push_back(std::move(v));
        }
        IntMat out = IntMat::from_columns(R.cols, cols);
        if (out.cols == 0)
            out = IntMat(R.cols, 0);
        return out;
    }
}

std::string torsion_str(const std::vector<mpz_class>& t) {
    if (t.empty())
        return "-";
    std::string s;
    for (size_t i = 0; i < t.size(); ++i) {
        if (i)
            s += ",";
        s += t[i].get_str();
    }
    return s;
}

}  // namespace

std::string EInfinityTable::to_text(bool header) const {
    std::ostringstream os;
    if (header) {
        os << "bundle " << bundle << "  cutoff " << cutoff << "  max-page " << max_page
           << "  horizon " << horizon;
        if (mod)
            os << "  mod " << mod;
        os << "\n";
        os << "deg  " << (mod ? "dim " : "free") << "  torsion          cells\n";
    }
    for (const auto& r : rows) {
        os << r.degree;
        os << std::string(r.degree < 10 ? 4 : 3, ' ');
        std::string rank = std::to_string(r.free_rank);
        os << rank << std::string(rank.size() < 4 ? 5 - rank.size() : 1, ' ');
        std::string t = torsion_str(r.torsion);
        os << t << std::string(t.size() < 16 ? 17 - t.size() : 1, ' ');
        for (const auto& c : r.cells) {
            os << "(" << c.p << "," << c.q << "):" << c.free_rank;
            if (!c.torsion.empty())
                os << "+[" << torsion_str(c.torsion) << "]";
            os << " ";
        }
        if (!r.certified)
            os << " (beyond trust horizon)";
        os << "\n";
    }
    return os.str();
}

std::string EInfinityTable::to_csv(bool header) const {
    std::ostringstream os;
    if (header)
        os << "degree,free_rank,torsion,certified\n";
    for (const auto& r : rows) {
        os << r.degree << "," << r.free_rank << ",";
        for (size_t i = 0; i < r.torsion.size(); ++i)
            os << (i ? ";" : "") << r.torsion[i].get_str();
        os << "," << (r.certified ? 1 : 0) << "\n";
    }
    return os.str();
}

nlohmann::json EInfinityTable::to_json() const {
    nlohmann::json j;
    j["bundle"] = bundle;
    j["cutoff"] = cutoff;
    j["max_page"] = max_page;
    j["horizon"] = horizon;
    j["mod"] = mod;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row;
        row["degree"] = r.degree;
        row["free_rank"] = r.free_rank;
        row["torsion"] = nlohmann::json::array();
        for (const auto& t : r.torsion)
            row["torsion"].push_back(t.get_str());
        row["certified"] = r.certified;
        row["cells"] = nlohmann::json::array();
        for (const auto& c : r.cells) {
            nlohmann::json cj;
            cj["p"] = c.p;
            cj["q"] = c.q;
            cj["free_rank"] = c.free_rank;
            cj["torsion"] = nlohmann::json::array();
            for (const auto& t : c.torsion)
                cj["torsion"].push_back(t.get_str());
            row["cells"].push_back(cj);
        }
        j["rows"].push_back(row);
    }
    return j;
}

SpectralSequence::SpectralSequence(FibrationSpec spec, int jobs)
    : spec_(std::move(spec)), jobs_(std::max(1, jobs)) {
    total_ = tensor(spec_.base, spec_.fiber);
    base_gens_ = spec_.base.amb->gens.size();
    gb_ = buchberger(total_.relations, total_.default_order(), spec_.cutoff);
    index_assignments();
    build_e2();
}

void SpectralSequence::index_assignments() {
    const AmbientPtr& amb = total_.amb;
    max_page_ = 2;
    for (auto& a : spec_.differentials) {
        int gi = amb->find(a.source);
        if (gi < 0)
            throw MathError("assignment source '" + a.source + "' not in the total ring");
        const Generator& g = amb->gens[gi];
        if (g.family != FamilyKind::None && g.family_index != 1)
            throw MathError("family assignments must target the first member: " + a.source);
        if (static_cast<size_t>(gi) < base_gens_)
            throw MathError("assignment source must be a fiber generator: " + a.source);
        Polynomial v = normal_form(a.negate ? -a.value : a.value);
        if (!v.is_zero()) {
            auto [sp, sq] = bidegree(generator_poly(amb, gi));
            auto [vp, vq] = bidegree(v);
            if (vp != sp + a.page || vq != sq - a.page + 1)
                throw MathError("assignment value for '" + a.source +
                                "' has the wrong bidegree shift");
        }
        auto& page = gen_assignments_[a.page];
        if (page.count(gi))
            throw MathError("duplicate assignment for '" + a.source + "'");
        page.emplace(gi, std::move(v));
        max_page_ = std::max(max_page_, a.page);
    }
    for (const auto& ca : spec_.class_differentials) {
        if (mod() != 0)
            throw MathError("class assignments are only supported over the integers");
        max_page_ = std::max(max_page_, ca.page);
    }
}

void SpectralSequence::build_e2() {
    for (int n = 0; n <= spec_.cutoff; ++n) {
        DegreeBasis db = graded_basis(*gb_, n);
        if (!db.torsion_witness.empty())
            throw MathError("E2 coefficients are not torsion-free at degree " +
                            std::to_string(n));
        std::map<std::pair<int, int>, std::vector<Exponents>> split;
        for (auto& m : db.free) {
            int p = 0, q = 0;
            for (size_t i = 0; i < m.size(); ++i) {
                int d = m[i] * total_.amb->gens[i].degree;
                (i < base_gens_ ? p : q) += d;
            }
            split[{p, q}].push_back(std::move(m));
        }
        for (auto& [key, monos] : split) {
            Cell c;
            c.basis = std::move(monos);
            for (size_t i = 0; i < c.basis.size(); ++i)
                c.index.emplace(c.basis[i], static_cast<int>(i));
            int n2 = static_cast<int>(c.basis.size());
            c.cyc = IntMat::identity(n2);
            c.bnd = IntMat(n2, 0);
            cells_.emplace(key, std::move(c));
        }
    }
}

std::pair<int, int> SpectralSequence::bidegree(const Polynomial& f) const {
    int p = -1, q = -1;
    for (const auto& [m, c] : f.terms()) {
        int tp = 0, tq = 0;
        for (size_t i = 0; i < m.size(); ++i) {
            int d = m[i] * total_.amb->gens[i].degree;
            (i < base_gens_ ? tp : tq) += d;
        }
        if (p == -1) {
            p = tp;
            q = tq;
        } else if (p != tp || q != tq) {
            throw MathError("polynomial is not bihomogeneous: " + f.str());
        }
    }
    return {p, q};
}

Polynomial SpectralSequence::normal_form(const Polynomial& f) const {
    return reduce(f, gb_->elements, gb_->order);
}

Polynomial SpectralSequence::derive_monomial(const Exponents& m, int page) const {
    const AmbientPtr& amb = total_.amb;
    auto it = gen_assignments_.find(page);
    Polynomial out(amb);
    if (it == gen_assignments_.end())
        return out;
    const auto& assign = it->second;
    for (size_t j = 0; j < m.size(); ++j) {
        if (m[j] == 0)
            continue;
        const Generator& g = amb->gens[j];
        // differential of the letter at j
        Polynomial dval(amb);
        if (g.family == FamilyKind::None) {
            auto a = assign.find(static_cast<int>(j));
            if (a == assign.end())
                continue;
            dval = a->second;
        } else {
            int root = static_cast<int>(j);
            while (amb->gens[root].family_index > 1)
                root = amb->gens[root].family_prev;
            auto a = assign.find(root);
            if (a == assign.end())
                continue;
            dval = a->second * family_derivation_constant(g.family, g.family_index);
            if (g.family_index > 1)
                dval = multiply(generator_poly(amb, g.family_prev), dval);
        }
        if (dval.is_zero())
            continue;
        // Koszul sign relative to the canonical product dval * rest: the
        // Leibniz prefix sign and the sign from commuting an odd-parity
        // image back through the prefix cancel, so even letters (odd-parity
        // image) contribute no sign and odd letters contribute the parity
        // of the odd letters before them.
        long par = 0;
        if (g.odd)
            for (size_t i = 0; i < j; ++i)
                if (amb->gens[i].odd)
                    par += m[i];
        Exponents rest = m;
        rest[j] -= 1;
        Polynomial term = multiply_monomial(dval, rest, m[j]);
        out += (par % 2) ? -term : term;
    }
    return out;
}

Polynomial SpectralSequence::apply_derivation(const Polynomial& f, int page) const {
    Polynomial out(total_.amb);
    for (const auto& [m, c] : f.terms())
        out += derive_monomial(m, page) * c;
    return normal_form(out);
}

const std::vector<Exponents>& SpectralSequence::cell_basis(int p, int q) const {
    static const std::vector<Exponents> empty;
    auto it = cells_.find({p, q});
    return it == cells_.end() ? empty : it->second.basis;
}

std::vector<mpz_class> SpectralSequence::to_vector(const Polynomial& f, const Cell& cell) const {
    std::vector<mpz_class> v(cell.basis.size());
    for (const auto& [m, c] : f.terms()) {
        auto it = cell.index.find(m);
        if (it == cell.index.end())
            throw MathError("value contains a non-basis monomial: " + f.str());
        v[it->second] = c;
    }
    return v;
}

Polynomial SpectralSequence::from_vector(const std::vector<mpz_class>& v,
                                         const Cell& cell) const {
    Polynomial f(total_.amb);
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0)
            f.add_term(cell.basis[i], v[i]);
    return f;
}

IntMat SpectralSequence::cell_matrix(const Cell& src, const Cell& dst, int page) const {
    IntMat M(static_cast<int>(dst.basis.size()), src.cyc.cols);
    for (int j = 0; j < src.cyc.cols; ++j) {
        Polynomial rep = from_vector(src.cyc.col(j), src);
        Polynomial img = apply_derivation(rep, page);
        if (img.is_zero())
            continue;
        std::vector<mpz_class> v = to_vector(img, dst);
        for (int i = 0; i < M.rows; ++i)
            M.at(i, j) = v[i];
    }
    return M;
}

IntMat SpectralSequence::class_matrix(int page, const std::pair<int, int>& key,
                                      const Cell& cell) {
    // instance pairs: d(source * w) = value * w over normal-form monomials w
    std::vector<std::vector<mpz_class>> us, imgs;
    auto tgt_key = std::make_pair(key.first + page, key.second - page + 1);
    auto tgt_it = cells_.find(tgt_key);
    int tgt_dim = tgt_it == cells_.end() ? 0 : static_cast<int>(tgt_it->second.basis.size());
    for (const auto& ca : spec_.class_differentials) {
        if (ca.page != page)
            continue;
        Polynomial S = normal_form(ca.source);
        Polynomial V = normal_form(ca.negate ? -ca.value : ca.value);
        int degS = S.degree();
        for (const auto& [wkey, wcell] : cells_) {
            if (wkey.first + wkey.second + degS > spec_.cutoff)
                continue;
            // only surviving cycles w are valid cofactors: d(S*w) = +-V*w needs
            // d(w) = 0 through this page
            bool w_odd = (wkey.first + wkey.second) % 2 != 0;
            for (int wj = 0; wj < wcell.cyc.cols; ++wj) {
                Polynomial wp = from_vector(wcell.cyc.col(wj), wcell);
                Polynomial u = normal_form(multiply(S, wp));
                if (u.is_zero())
                    continue;
                auto bd = bidegree(u);
                if (bd != key)
                    continue;
                Polynomial img = normal_form(multiply(V, wp));
                if (w_odd)
                    img = -img;
                if (!img.is_zero()) {
                    if (bidegree(img) !=
                        std::make_pair(key.first + page, key.second - page + 1))
                        throw MathError("class assignment image has wrong bidegree");
                    if (tgt_it == cells_.end())
                        throw MathError("class assignment image lands in an empty cell");
                }
                us.push_back(to_vector(u, cell));
                imgs.push_back(img.is_zero() ? std::vector<mpz_class>(tgt_dim)
                                             : to_vector(img, tgt_it->second));
            }
        }
    }
    int c = cell.cyc.cols;
    if (us.empty())
        return IntMat(tgt_dim, c);
    // boundary classes are zero in E_r, so they are instances with image 0
    for (int j = 0; j < cell.bnd.cols; ++j) {
        us.push_back(cell.bnd.col(j));
        imgs.emplace_back(tgt_dim);
    }
    // coordinates of the instances in the current cycle basis
    IntMat W(c, static_cast<int>(us.size()));
    IntMat Img = IntMat::from_columns(tgt_dim, imgs);
    for (size_t k = 0; k < us.size(); ++k) {
        auto x = solve(cell.cyc, us[k]);
        if (!x)
            throw MathError("class assignment source is not a surviving cycle");
        for (int i = 0; i < c; ++i)
            W.at(i, static_cast<int>(k)) = (*x)[i];
    }
    // linear consistency: relations among the sources must map into current
    // boundaries of the target
    IntMat ker = kernel(W);
    const IntMat* tbnd = tgt_it == cells_.end() ? nullptr : &tgt_it->second.bnd;
    for (int j = 0; j < ker.cols; ++j) {
        std::vector<mpz_class> rel = Img.mul_vec(ker.col(j));
        bool zero = std::all_of(rel.begin(), rel.end(), [](const mpz_class& v) { return v == 0; });
        if (zero)
            continue;
        if (!tbnd || !solve(*tbnd, rel))
            throw MathError("class assignment instances are inconsistent");
    }
    // define the map on the saturation of the instance span, zero on a
    // complement
    IntMat sat = saturation(W);
    IntMat comp = saturated_complement(sat);
    IntMat P = IntMat::hstack(sat, comp);
    IntMat Q(tgt_dim, c);
    for (int j = 0; j < sat.cols; ++j) {
        auto sol = solve_rational(W, sat.col(j));
        if (!sol)
            throw MathError("saturation escapes the instance span");
        std::vector<mpz_class> img = Img.mul_vec(sol->first);
        // the instances pin the image only modulo target boundaries, so divide
        // by the denominator in the lattice den*Z^n + bnd
        std::vector<mpz_class> q(tgt_dim);
        if (sol->second == 1) {
            q = img;
        } else {
            IntMat D(tgt_dim, tgt_dim + (tbnd ? tbnd->cols : 0));
            for (int i = 0; i < tgt_dim; ++i)
                D.at(i, i) = sol->second;
            if (tbnd)
                for (int jc = 0; jc < tbnd->cols; ++jc)
                    for (int i = 0; i < tgt_dim; ++i)
                        D.at(i, tgt_dim + jc) = tbnd->at(i, jc);
            auto x = solve(D, img);
            if (!x)
                throw MathError("class assignment does not extend integrally");
            for (int i = 0; i < tgt_dim; ++i)
                q[i] = (*x)[i];
        }
        for (int i = 0; i < tgt_dim; ++i)
            Q.at(i, j) = q[i];
    }
    return Q.mul(inverse_unimodular(P));
}

void SpectralSequence::turn_page(int r) {
    unsigned long p = mod();
    bool has_gen = gen_assignments_.count(r) > 0;
    bool has_class = std::any_of(spec_.class_differentials.begin(),
                                 spec_.class_differentials.end(),
                                 [&](const ClassAssignment& ca) { return ca.page == r; });
    if (!has_gen && !has_class)
        return;

    struct Outgoing {
        std::pair<int, int> src, tgt;
        IntMat M;  // target E2 coords x source cycle coords
        IntMat coords;  // images in target cycle coordinates (for checks)
    };
    std::vector<Outgoing> outs;
    for (auto& [key, cell] : cells_) {
        if (key.first + key.second >= spec_.cutoff)
            continue;  // image degree would exceed the truncation
        auto tgt_key = std::make_pair(key.first + r, key.second - r + 1);
        if (tgt_key.second < 0)
            continue;
        auto tit = cells_.find(tgt_key);
        IntMat M;
        if (has_gen) {
            if (tit != cells_.end()) {
                M = cell_matrix(cell, tit->second, r);
            } else {
                // image space is empty: derivation must vanish
                for (int j = 0; j < cell.cyc.cols; ++j) {
                    Polynomial img = apply_derivation(from_vector(cell.cyc.col(j), cell), r);
                    if (!img.is_zero())
                        throw MathError("nonzero differential into an empty cell");
                }
                M = IntMat(0, cell.cyc.cols);
            }
        } else {
            M = IntMat(tit == cells_.end() ? 0 : static_cast<int>(tit->second.basis.size()),
                       cell.cyc.cols);
        }
        if (has_class && tit != cells_.end()) {
            IntMat C = class_matrix(r, key, cell);
            if (C.rows == M.rows)
                for (size_t i = 0; i < M.a.size(); ++i)
                    M.a[i] += C.a[i];
        } else if (has_class) {
            IntMat C = class_matrix(r, key, cell);
            if (!C.is_zero())
                throw MathError("nonzero class differential into an empty cell");
        }
        if (M.rows == 0 || M.is_zero())
            continue;
        // every image must be a current cycle in the target
        const Cell& tcell = tit->second;
        IntMat coords(tcell.cyc.cols, M.cols);
        for (int j = 0; j < M.cols; ++j) {
            std::optional<std::vector<mpz_class>> x =
                p == 0 ? solve(tcell.cyc, M.col(j)) : solve_mod(tcell.cyc, M.col(j), p);
            if (!x)
                throw MathError("differential image is not a surviving cycle at page " +
                                std::to_string(r));
            for (int i = 0; i < coords.rows; ++i)
                coords.at(i, j) = (*x)[i];
        }
        outs.push_back({key, tgt_key, std::move(M), std::move(coords)});
    }

    // d o d = 0 and boundary preservation
    for (const auto& o : outs) {
        for (const auto& o2 : outs) {
            if (o2.src != o.tgt)
                continue;
            // o2 on the image cycle coordinates of o
            IntMat dd = o2.M.mul(o.coords);
            auto t2 = cells_.find(o2.tgt);
            for (int j = 0; j < dd.cols; ++j) {
                std::vector<mpz_class> v = dd.col(j);
                bool zero =
                    std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x == 0; });
                if (zero)
                    continue;
                bool ok = t2 != cells_.end() &&
                          (p == 0 ? solve(t2->second.bnd, v).has_value()
                                  : solve_mod(t2->second.bnd, v, p).has_value());
                if (!ok)
                    throw DSquareError("d o d != 0 at page " + std::to_string(r) + ", cell (" +
                                       std::to_string(o.src.first) + "," +
                                       std::to_string(o.src.second) + ")");
            }
        }
    }
    for (const auto& o : outs) {
        // boundaries already present in the source must map into boundaries
        const Cell& scell = cells_.at(o.src);
        const Cell& tcell = cells_.at(o.tgt);
        for (int j = 0; j < scell.bnd.cols; ++j) {
            std::optional<std::vector<mpz_class>> x =
                p == 0 ? solve(scell.cyc, scell.bnd.col(j))
                       : solve_mod(scell.cyc, scell.bnd.col(j), p);
            if (!x)
                throw MathError("boundary escaped the cycle lattice");
            std::vector<mpz_class> img = o.M.mul_vec(*x);
            bool zero =
                std::all_of(img.begin(), img.end(), [](const mpz_class& v) { return v == 0; });
            if (zero)
                continue;
            bool ok = p == 0 ? solve(tcell.bnd, img).has_value()
                             : solve_mod(tcell.bnd, img, p).has_value();
            if (!ok)
                throw MathError("differential is not defined on page-" + std::to_string(r) +
                                " classes");
        }
    }

    // new cycles (against the old boundaries), then new boundaries
    std::map<std::pair<int, int>, IntMat> new_cyc;
    for (const auto& o : outs) {
        const Cell& scell = cells_.at(o.src);
        const Cell& tcell = cells_.at(o.tgt);
        IntMat stacked = IntMat::hstack(o.M, tcell.bnd);
        for (int i = 0; i < stacked.rows; ++i)
            for (int j = o.M.cols; j < stacked.cols; ++j)
                stacked.at(i, j) = -stacked.at(i, j);
        IntMat K = p == 0 ? kernel(stacked) : kernel_mod(stacked, p);
        IntMat proj(o.M.cols, K.cols);
        for (int i = 0; i < proj.rows; ++i)
            for (int j = 0; j < proj.cols; ++j)
                proj.at(i, j) = K.at(i, j);
        IntMat basis = p == 0 ? column_lattice_basis(proj) : col_basis_mod(proj, p);
        new_cyc[o.src] = scell.cyc.mul(basis);
    }
    std::map<std::pair<int, int>, std::vector<std::vector<mpz_class>>> new_bnd;
    for (const auto& o : outs)
        for (int j = 0; j < o.M.cols; ++j)
            new_bnd[o.tgt].push_back(o.M.col(j));
    for (auto& [key, cyc] : new_cyc)
        cells_.at(key).cyc = std::move(cyc);
    for (auto& [key, cols] : new_bnd) {
        Cell& cell = cells_.at(key);
        IntMat add = IntMat::from_columns(static_cast<int>(cell.basis.size()), cols);
        IntMat joined = IntMat::hstack(cell.bnd, add);
        cell.bnd = p == 0 ? column_lattice_basis(joined) : col_basis_mod(joined, p);
    }
}

CellReport SpectralSequence::cell_report(int p, int q, const Cell& c) const {
    CellReport r;
    r.p = p;
    r.q = q;
    if (mod() == 0) {
        LatticeQuotient lq = lattice_quotient(c.cyc, c.bnd);
        r.free_rank = lq.free_rank;
        r.torsion = lq.torsion;
    } else {
        r.free_rank = c.cyc.cols - c.bnd.cols;
    }
    return r;
}

void SpectralSequence::snapshot(int page) {
    PageSnapshot s;
    s.page = page;
    for (const auto& [key, cell] : cells_) {
        CellReport r = cell_report(key.first, key.second, cell);
        if (r.free_rank != 0 || !r.torsion.empty())
            s.cells.emplace(key, std::move(r));
    }
    snapshots_.push_back(std::move(s));
}

void SpectralSequence::run(bool keep_pages) {
    if (ran_)
        return;
    if (keep_pages)
        snapshot(2);
    for (int r = 2; r <= max_page_; ++r) {
        turn_page(r);
        if (keep_pages)
            snapshot(r + 1);
    }
    ran_ = true;
}

EInfinityTable SpectralSequence::table() const {
    EInfinityTable t;
    t.bundle = spec_.name;
    t.cutoff = spec_.cutoff;
    t.max_page = max_page_;
    t.horizon = spec_.cutoff - max_page_;
    t.mod = mod();
    t.rows.resize(spec_.cutoff + 1);

    std::vector<std::pair<const std::pair<int, int>*, const Cell*>> work;
    for (const auto& [key, cell] : cells_)
        work.emplace_back(&key, &cell);
    std::vector<CellReport> reports(work.size());
    auto chunk = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i)
            reports[i] = cell_report(work[i].first->first, work[i].first->second, *work[i].second);
    };
    if (jobs_ <= 1 || work.size() < 2) {
        chunk(0, work.size());
    } else {
        size_t n = work.size();
        size_t step = (n + jobs_ - 1) / jobs_;
        std::vector<std::future<void>> fs;
        for (size_t b = 0; b < n; b += step)
            fs.push_back(std::async(std::launch::async, chunk, b, std::min(n, b + step)));
        for (auto& f : fs)
            f.get();
    }
    for (size_t i = 0; i < work.size(); ++i) {
        const auto& key = *work[i].first;
        CellReport& r = reports[i];
        if (r.free_rank == 0 && r.torsion.empty())
            continue;
        DegreeRow& row = t.rows[key.first + key.second];
        row.free_rank += r.free_rank;
        row.torsion.insert(row.torsion.end(), r.torsion.begin(), r.torsion.end());
        row.cells.push_back(std::move(r));
    }
    for (int n = 0; n <= spec_.cutoff; ++n) {
        DegreeRow& row = t.rows[n];
        row.degree = n;
        row.certified = n <= t.horizon;
        std::sort(row.torsion.begin(), row.torsion.end());
        std::sort(row.cells.begin(), row.cells.end(), [](const CellReport& a, const CellReport& b) {
            return std::make_pair(a.p, a.q) < std::make_pair(b.p, b.q);
        });
    }
    return t;
}

}  // namespace flagloop
