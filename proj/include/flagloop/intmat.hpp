#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <vector>

namespace flagloop {

class LinAlgError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Dense matrix over Z (arbitrary precision), row-major.
struct IntMat {
    int rows = 0, cols = 0;
    std::vector<mpz_class> a;

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    mpz_class& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const mpz_class& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static IntMat identity(int n);
    IntMat mul(const IntMat& b) const;
    std::vector<mpz_class> mul_vec(const std::vector<mpz_class>& v) const;
    IntMat transpose() const;
    bool is_zero() const;
    bool operator==(const IntMat& b) const { return rows == b.rows && cols == b.cols && a == b.a; }

    std::vector<mpz_class> col(int j) const;
    static IntMat from_columns(int rows, const std::vector<std::vector<mpz_class>>& cols);
    static IntMat hstack(const IntMat& l, const IntMat& r);
};

/// U * A * V = D with U, V unimodular; divisors is the nonzero diagonal,
/// each dividing the next, all positive.
struct SmithForm {
    IntMat U, Uinv, V, Vinv, D;
    int rank = 0;
    std::vector<mpz_class> divisors;
};

SmithForm smith(IntMat A);

/// Triangular basis of the column lattice (zero columns dropped).
IntMat column_lattice_basis(const IntMat& A);

/// Integral solution of A x = b, if one exists.
std::optional<std::vector<mpz_class>> solve(const IntMat& A, const std::vector<mpz_class>& b);

/// Columns form a basis of the (saturated) kernel lattice of A.
IntMat kernel(const IntMat& A);

/// Quotient of the lattice spanned by the columns of M by the sublattice
/// spanned by the columns of N; requires span(N) <= span(M). Representatives
/// are given in the ambient coordinates of M; orders align with reps
/// (0 = infinite). Torsion lists the invariant factors > 1.
struct LatticeQuotient {
    int free_rank = 0;
    std::vector<mpz_class> torsion;
    IntMat reps;
    std::vector<mpz_class> orders;
};

LatticeQuotient lattice_quotient(const IntMat& M, const IntMat& N);

/// Solution of A x = d b with d > 0 minimal (rational solve with cleared
/// denominator); nullopt if b is outside the rational column span.
std::optional<std::pair<std::vector<mpz_class>, mpz_class>> solve_rational(
    const IntMat& A, const std::vector<mpz_class>& b);

/// Inverse of a unimodular matrix.
IntMat inverse_unimodular(const IntMat& A);

/// Basis of the saturation of the column span (primitive sublattice of the
/// same rational span).
IntMat saturation(const IntMat& A);

/// For a saturated sublattice S (column basis), a direct complement C with
/// S (+) C = Z^n; returned as a column basis.
IntMat saturated_complement(const IntMat& S);

// Linear algebra over F_p (p prime).
int rank_mod(IntMat A, unsigned long p);
IntMat kernel_mod(const IntMat& A, unsigned long p);
std::optional<std::vector<mpz_class>> solve_mod(const IntMat& A, const std::vector<mpz_class>& b,
                                                unsigned long p);

}  // namespace flagloop
