#pragma once

#include "flagloop/intmat.hpp"
#include "flagloop/presentation.hpp"

#include <json.hpp>

#include <map>

namespace flagloop {

/// Errors from inconsistent spectral data (bad bidegrees, images outside
/// the cycle lattice, unsolvable class assignments).
class MathError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// d composed with d is nonzero somewhere: the input differentials are wrong.
class DSquareError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Page-r value of a differential on a multiplicative generator of the
/// fiber; family bases extend to all members through the derivation rule.
struct DifferentialAssignment {
    int page = 2;
    std::string source;  // fiber generator, or family member 1 for a family
    Polynomial value;    // in the total (base (x) fiber) ring
    bool negate = false;
};

/// Page-r value on a non-generator class: d_r(source * w) = value * w for
/// every complementary normal-form monomial w (all other classes in the
/// affected cells map to zero; see the engine notes).
struct ClassAssignment {
    int page = 2;
    Polynomial source;
    Polynomial value;
    bool negate = false;
};

struct FibrationSpec {
    std::string name;
    Presentation base, fiber;
    std::vector<DifferentialAssignment> differentials;
    std::vector<ClassAssignment> class_differentials;
    int cutoff = 10;
};

struct CellReport {
    int p = 0, q = 0;
    int free_rank = 0;
    std::vector<mpz_class> torsion;
};

struct DegreeRow {
    int degree = 0;
    int free_rank = 0;
    std::vector<mpz_class> torsion;  // empty in a mod-p run (ranks are dims)
    bool certified = false;          // within the trust horizon
    std::vector<CellReport> cells;
};

struct EInfinityTable {
    std::string bundle;
    int cutoff = 0;
    int max_page = 2;
    int horizon = 0;  // cutoff - max_page
    unsigned long mod = 0;
    std::vector<DegreeRow> rows;

    std::string to_text(bool header = true) const;
    std::string to_csv(bool header = true) const;
    nlohmann::json to_json() const;
};

struct PageSnapshot {
    int page = 0;
    // (p, q) -> (free rank, torsion) of E_page at that cell
    std::map<std::pair<int, int>, CellReport> cells;
};

class SpectralSequence {
  public:
    explicit SpectralSequence(FibrationSpec spec, int jobs = 1);

    const FibrationSpec& spec() const { return spec_; }
    const Presentation& total() const { return total_; }
    const GroebnerBasis& total_groebner() const { return *gb_; }
    int max_page() const { return max_page_; }
    unsigned long mod() const { return spec_.base.amb->mod; }

    /// Bidegrees of a homogeneous element; throws if mixed.
    std::pair<int, int> bidegree(const Polynomial& f) const;

    /// Normal form in the total quotient ring.
    Polynomial normal_form(const Polynomial& f) const;

    /// Derivation-extended page-r differential on the quotient ring
    /// (generator assignments only; class assignments handled per cell).
    Polynomial apply_derivation(const Polynomial& f, int page) const;

    /// E2 cell basis (normal-form monomials of bidegree (p,q)).
    const std::vector<Exponents>& cell_basis(int p, int q) const;

    /// Turn all pages; records snapshots when keep_pages is set.
    void run(bool keep_pages = false);

    EInfinityTable table() const;
    const std::vector<PageSnapshot>& snapshots() const { return snapshots_; }

  private:
    FibrationSpec spec_;
    Presentation total_;
    std::optional<GroebnerBasis> gb_;
    size_t base_gens_ = 0;
    int max_page_ = 2;
    int jobs_ = 1;
    bool ran_ = false;

    struct Cell {
        std::vector<Exponents> basis;
        std::map<Exponents, int> index;
        IntMat cyc, bnd;  // columns; E2 coordinates. bnd is a reduced basis
    };
    std::map<std::pair<int, int>, Cell> cells_;
    std::vector<PageSnapshot> snapshots_;

    // per page: generator index -> assigned value (family members resolved
    // through family_derivation_constant at application time)
    std::map<int, std::map<int, Polynomial>> gen_assignments_;

    void build_e2();
    void index_assignments();
    std::vector<mpz_class> to_vector(const Polynomial& f, const Cell& cell) const;
    Polynomial from_vector(const std::vector<mpz_class>& v, const Cell& cell) const;
    Polynomial derive_monomial(const Exponents& m, int page) const;

    IntMat cell_matrix(const Cell& src, const Cell& dst, int page) const;
    IntMat class_matrix(int page, const std::pair<int, int>& key, const Cell& cell);
    void turn_page(int r);
    void snapshot(int page);
    CellReport cell_report(int p, int q, const Cell& c) const;

    friend class SpectralChecks;
};

}  // namespace flagloop
