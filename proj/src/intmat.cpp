#include "flagloop/intmat.hpp"

#include <algorithm>

namespace flagloop {

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

IntMat IntMat::mul(const IntMat& b) const {
    if (cols != b.rows)
        throw LinAlgError("dimension mismatch in matrix product");
    IntMat r(rows, b.cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            const mpz_class& v = at(i, k);
            if (v == 0)
                continue;
            for (int j = 0; j < b.cols; ++j)
                r.at(i, j) += v * b.at(k, j);
        }
    return r;
}

std::vector<mpz_class> IntMat::mul_vec(const std::vector<mpz_class>& v) const {
    if (static_cast<int>(v.size()) != cols)
        throw LinAlgError("dimension mismatch in matrix-vector product");
    std::vector<mpz_class> r(rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            r[i] += at(i, j) * v[j];
    return r;
}

IntMat IntMat::transpose() const {
    IntMat r(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            r.at(j, i) = at(i, j);
    return r;
}

bool IntMat::is_zero() const {
    return std::all_of(a.begin(), a.end(), [](const mpz_class& v) { return v == 0; });
}

std::vector<mpz_class> IntMat::col(int j) const {
    std::vector<mpz_class> v(rows);
    for (int i = 0; i < rows; ++i)
        v[i] = at(i, j);
    return v;
}

IntMat IntMat::from_columns(int rows, const std::vector<std::vector<mpz_class>>& cols) {
    IntMat m(rows, static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) {
        if (static_cast<int>(cols[j].size()) != rows)
            throw LinAlgError("column length mismatch");
        for (int i = 0; i < rows; ++i)
            m.at(i, static_cast<int>(j)) = cols[j][i];
    }
    return m;
}

IntMat IntMat::hstack(const IntMat& l, const IntMat& r) {
    if (l.rows != r.rows)
        throw LinAlgError("row mismatch in hstack");
    IntMat m(l.rows, l.cols + r.cols);
    for (int i = 0; i < l.rows; ++i) {
        for (int j = 0; j < l.cols; ++j)
            m.at(i, j) = l.at(i, j);
        for (int j = 0; j < r.cols; ++j)
            m.at(i, l.cols + j) = r.at(i, j);
    }
    return m;
}

namespace {

// Transform-tracking elementary operations keeping U*A*V invariant:
// row ops update U (same op) and Uinv (inverse op on columns),
// column ops update V and Vinv likewise.
struct Tracker {
    IntMat& A;
    IntMat &U, &Uinv, &V, &Vinv;

    void row_swap(int i, int j) {
        if (i == j)
            return;
        for (int c = 0; c < A.cols; ++c)
            std::swap(A.at(i, c), A.at(j, c));
        for (int c = 0; c < U.cols; ++c)
            std::swap(U.at(i, c), U.at(j, c));
        for (int r = 0; r < Uinv.rows; ++r)
            std::swap(Uinv.at(r, i), Uinv.at(r, j));
    }
    void col_swap(int i, int j) {
        if (i == j)
            return;
        for (int r = 0; r < A.rows; ++r)
            std::swap(A.at(r, i), A.at(r, j));
        for (int r = 0; r < V.rows; ++r)
            std::swap(V.at(r, i), V.at(r, j));
        for (int c = 0; c < Vinv.cols; ++c)
            std::swap(Vinv.at(i, c), Vinv.at(j, c));
    }
    // row i += q * row j
    void row_add(int i, int j, const mpz_class& q) {
        if (q == 0)
            return;
        for (int c = 0; c < A.cols; ++c)
            A.at(i, c) += q * A.at(j, c);
        for (int c = 0; c < U.cols; ++c)
            U.at(i, c) += q * U.at(j, c);
        for (int r = 0; r < Uinv.rows; ++r)
            Uinv.at(r, j) -= q * Uinv.at(r, i);
    }
    // col j += q * col i
    void col_add(int j, int i, const mpz_class& q) {
        if (q == 0)
            return;
        for (int r = 0; r < A.rows; ++r)
            A.at(r, j) += q * A.at(r, i);
        for (int r = 0; r < V.rows; ++r)
            V.at(r, j) += q * V.at(r, i);
        for (int c = 0; c < Vinv.cols; ++c)
            Vinv.at(i, c) -= q * Vinv.at(j, c);
    }
    void row_negate(int i) {
        for (int c = 0; c < A.cols; ++c)
            A.at(i, c) = -A.at(i, c);
        for (int c = 0; c < U.cols; ++c)
            U.at(i, c) = -U.at(i, c);
        for (int r = 0; r < Uinv.rows; ++r)
            Uinv.at(r, i) = -Uinv.at(r, i);
    }
};

}  // namespace

SmithForm smith(IntMat A) {
    SmithForm s;
    s.U = IntMat::identity(A.rows);
    s.Uinv = IntMat::identity(A.rows);
    s.V = IntMat::identity(A.cols);
    s.Vinv = IntMat::identity(A.cols);
    Tracker t{A, s.U, s.Uinv, s.V, s.Vinv};

    int n = std::min(A.rows, A.cols);
    int rank = 0;
    for (int p = 0; p < n; ++p) {
        while (true) {
            // min-abs nonzero pivot in the trailing submatrix
            int pi = -1, pj = -1;
            mpz_class best;
            for (int i = p; i < A.rows; ++i)
                for (int j = p; j < A.cols; ++j) {
                    if (A.at(i, j) == 0)
                        continue;
                    mpz_class v = abs(A.at(i, j));
                    if (pi < 0 || v < best) {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0)
                goto done;  // all remaining entries zero
            t.row_swap(p, pi);
            t.col_swap(p, pj);
            bool clean = true;
            for (int i = p + 1; i < A.rows; ++i) {
                if (A.at(i, p) == 0)
                    continue;
                mpz_class q = A.at(i, p) / A.at(p, p);  // truncated: remainder shrinks
                t.row_add(i, p, -q);
                if (A.at(i, p) != 0)
                    clean = false;
            }
            for (int j = p + 1; j < A.cols; ++j) {
                if (A.at(p, j) == 0)
                    continue;
                mpz_class q = A.at(p, j) / A.at(p, p);
                t.col_add(j, p, -q);
                if (A.at(p, j) != 0)
                    clean = false;
            }
            if (!clean)
                continue;
            // pull in a row breaking the divisibility chain, if any
            bool fixed = true;
            for (int i = p + 1; i < A.rows && fixed; ++i)
                for (int j = p + 1; j < A.cols && fixed; ++j)
                    if (!mpz_divisible_p(A.at(i, j).get_mpz_t(), A.at(p, p).get_mpz_t())) {
                        t.row_add(p, i, 1);
                        fixed = false;
                    }
            if (fixed)
                break;
        }
        if (A.at(p, p) < 0)
            t.row_negate(p);
        ++rank;
    }
done:
    s.rank = rank;
    s.D = std::move(A);
    for (int i = 0; i < rank; ++i)
        s.divisors.push_back(s.D.at(i, i));
    return s;
}

IntMat column_lattice_basis(const IntMat& A) {
    // column-style Hermite reduction: eliminate along rows using gcd steps
    IntMat M = A;
    IntMat dummyU = IntMat::identity(M.rows), dummyUinv = IntMat::identity(M.rows);
    IntMat V = IntMat::identity(M.cols), Vinv = IntMat::identity(M.cols);
    Tracker t{M, dummyU, dummyUinv, V, Vinv};
    int pc = 0;
    for (int r = 0; r < M.rows && pc < M.cols; ++r) {
        while (true) {
            int pj = -1;
            mpz_class best;
            for (int j = pc; j < M.cols; ++j) {
                if (M.at(r, j) == 0)
                    continue;
                mpz_class v = abs(M.at(r, j));
                if (pj < 0 || v < best) {
                    best = v;
                    pj = j;
                }
            }
            if (pj < 0)
                break;
            t.col_swap(pc, pj);
            bool clean = true;
            for (int j = pc + 1; j < M.cols; ++j) {
                if (M.at(r, j) == 0)
                    continue;
                mpz_class q = M.at(r, j) / M.at(r, pc);
                t.col_add(j, pc, -q);
                if (M.at(r, j) != 0)
                    clean = false;
            }
            if (clean) {
                ++pc;
                break;
            }
        }
    }
    // keep the nonzero columns (the first pc of them plus none after)
    std::vector<std::vector<mpz_class>> cols;
    for (int j = 0; j < M.cols; ++j) {
        bool z = true;
        for (int i = 0; i < M.rows; ++i)
            if (M.at(i, j) != 0)
                z = false;
        if (!z)
            cols.push_back(M.col(j));
    }
    return IntMat::from_columns(M.rows, cols);
}

std::optional<std::vector<mpz_class>> solve(const IntMat& A, const std::vector<mpz_class>& b) {
    SmithForm s = smith(A);
    std::vector<mpz_class> ub = s.U.mul_vec(b);
    std::vector<mpz_class> y(A.cols);
    for (int i = 0; i < A.rows; ++i) {
        if (i < s.rank) {
            mpz_class q, r;
            mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), ub[i].get_mpz_t(),
                        s.D.at(i, i).get_mpz_t());
            if (r != 0)
                return std::nullopt;
            if (i < A.cols)
                y[i] = q;
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    return s.V.mul_vec(y);
}

IntMat kernel(const IntMat& A) {
    SmithForm s = smith(A);
    std::vector<std::vector<mpz_class>> cols;
    for (int j = s.rank; j < A.cols; ++j)
        cols.push_back(s.V.col(j));
    IntMat k = IntMat::from_columns(A.cols, cols);
    if (k.cols == 0)
        k = IntMat(A.cols, 0);
    return k;
}

LatticeQuotient lattice_quotient(const IntMat& M, const IntMat& N) {
    if (M.rows != N.rows)
        throw LinAlgError("ambient mismatch in lattice quotient");
    // coordinates of N's columns in the basis M
    IntMat C(M.cols, N.cols);
    for (int j = 0; j < N.cols; ++j) {
        auto x = solve(M, N.col(j));
        if (!x)
            throw LinAlgError("sublattice is not contained in the ambient lattice");
        for (int i = 0; i < M.cols; ++i)
            C.at(i, j) = (*x)[i];
    }
    SmithForm s = smith(C);
    LatticeQuotient q;
    std::vector<std::vector<mpz_class>> reps;
    for (int i = 0; i < M.cols; ++i) {
        mpz_class order = 0;
        if (i < s.rank) {
            order = s.divisors[i];
            if (order == 1)
                continue;
            q.torsion.push_back(order);
        } else {
            ++q.free_rank;
        }
        reps.push_back(M.mul_vec(s.Uinv.col(i)));
        q.orders.push_back(order);
    }
    q.reps = IntMat::from_columns(M.rows, reps);
    if (q.reps.cols == 0)
        q.reps = IntMat(M.rows, 0);
    return q;
}

std::optional<std::pair<std::vector<mpz_class>, mpz_class>> solve_rational(
    const IntMat& A, const std::vector<mpz_class>& b) {
    SmithForm s = smith(A);
    std::vector<mpz_class> ub = s.U.mul_vec(b);
    for (int i = s.rank; i < A.rows; ++i)
        if (ub[i] != 0)
            return std::nullopt;
    mpz_class den = 1;
    for (int i = 0; i < s.rank; ++i) {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), ub[i].get_mpz_t(), s.D.at(i, i).get_mpz_t());
        mpz_class need = s.D.at(i, i) / g;
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), need.get_mpz_t());
    }
    std::vector<mpz_class> y(A.cols);
    for (int i = 0; i < s.rank && i < A.cols; ++i)
        y[i] = ub[i] * den / s.D.at(i, i);
    return std::make_pair(s.V.mul_vec(y), den);
}

IntMat inverse_unimodular(const IntMat& A) {
    if (A.rows != A.cols)
        throw LinAlgError("inverse of non-square matrix");
    SmithForm s = smith(A);
    if (s.rank != A.rows)
        throw LinAlgError("matrix is singular");
    for (const auto& d : s.divisors)
        if (d != 1)
            throw LinAlgError("matrix is not unimodular");
    // U A V = I  =>  A^{-1} = V U
    return s.V.mul(s.U);
}

IntMat saturation(const IntMat& A) {
    if (A.cols == 0)
        return IntMat(A.rows, 0);
    IntMat orth = kernel(A.transpose());
    IntMat sat = kernel(orth.transpose());
    return sat;
}

IntMat saturated_complement(const IntMat& S) {
    if (S.cols == 0)
        return IntMat::identity(S.rows);
    SmithForm s = smith(S);
    for (const auto& d : s.divisors)
        if (d != 1)
            throw LinAlgError("sublattice is not saturated");
    std::vector<std::vector<mpz_class>> cols;
    for (int i = s.rank; i < S.rows; ++i)
        cols.push_back(s.Uinv.col(i));
    IntMat c = IntMat::from_columns(S.rows, cols);
    if (c.cols == 0)
        c = IntMat(S.rows, 0);
    return c;
}

namespace {

mpz_class mod_norm(const mpz_class& v, unsigned long p) {
    mpz_class r;
    mpz_mod_ui(r.get_mpz_t(), v.get_mpz_t(), p);
    return r;
}

mpz_class mod_inv(const mpz_class& v, unsigned long p) {
    mpz_class inv, pp(p);
    if (mpz_invert(inv.get_mpz_t(), v.get_mpz_t(), pp.get_mpz_t()) == 0)
        throw LinAlgError("not invertible mod p");
    return inv;
}

// Reduced row echelon form mod p; returns pivot columns.
std::vector<int> rref_mod(IntMat& A, unsigned long p) {
    for (auto& v : A.a)
        v = mod_norm(v, p);
    std::vector<int> pivots;
    int r = 0;
    for (int j = 0; j < A.cols && r < A.rows; ++j) {
        int pi = -1;
        for (int i = r; i < A.rows; ++i)
            if (A.at(i, j) != 0) {
                pi = i;
                break;
            }
        if (pi < 0)
            continue;
        for (int c = 0; c < A.cols; ++c)
            std::swap(A.at(r, c), A.at(pi, c));
        mpz_class inv = mod_inv(A.at(r, j), p);
        for (int c = 0; c < A.cols; ++c)
            A.at(r, c) = mod_norm(A.at(r, c) * inv, p);
        for (int i = 0; i < A.rows; ++i) {
            if (i == r || A.at(i, j) == 0)
                continue;
            mpz_class f = A.at(i, j);
            for (int c = 0; c < A.cols; ++c)
                A.at(i, c) = mod_norm(A.at(i, c) - f * A.at(r, c), p);
        }
        pivots.push_back(j);
        ++r;
    }
    return pivots;
}

}  // namespace

int rank_mod(IntMat A, unsigned long p) {
    return static_cast<int>(rref_mod(A, p).size());
}

IntMat kernel_mod(const IntMat& A, unsigned long p) {
    IntMat R = A;
    std::vector<int> pivots = rref_mod(R, p);
    std::vector<bool> is_pivot(A.cols, false);
    for (int j : pivots)
        is_pivot[j] = true;
    std::vector<std::vector<mpz_class>> cols;
    for (int j = 0; j < A.cols; ++j) {
        if (is_pivot[j])
            continue;
        std::vector<mpz_class> v(A.cols);
        v[j] = 1;
        for (size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = mod_norm(-R.at(static_cast<int>(r), j), p);
        cols.push_back(std::move(v));
    }
    IntMat k = IntMat::from_columns(A.cols, cols);
    if (k.cols == 0)
        k = IntMat(A.cols, 0);
    return k;
}

std::optional<std::vector<mpz_class>> solve_mod(const IntMat& A, const std::vector<mpz_class>& b,
                                                unsigned long p) {
    IntMat aug = IntMat::hstack(A, IntMat::from_columns(A.rows, {b}));
    std::vector<int> pivots = rref_mod(aug, p);
    if (!pivots.empty() && pivots.back() == A.cols)
        return std::nullopt;
    std::vector<mpz_class> x(A.cols);
    for (size_t r = 0; r < pivots.size(); ++r)
        x[pivots[r]] = aug.at(static_cast<int>(r), A.cols);
    return x;
}

}  // namespace flagloop
