#pragma once

#include "flagloop/spectral.hpp"

namespace flagloop {

/// Builder-level description of a presentation, kept alongside the built
/// Presentation so bundles can be serialized back to editable config text.
struct PresentationRecipe {
    struct Gen {
        std::string name;
        int degree = 0;
        bool odd = false;
    };
    std::vector<Gen> gens;
    std::vector<FamilySpec> families;
    std::vector<std::string> relations;

    Presentation build(int cutoff, unsigned long mod) const;
};

/// A named fibration with everything needed to run and verify it.
struct NamedBundle {
    std::string id;
    bool diagonal = false;
    bool has_oracle = false;
    int cutoff = 0;
    PresentationRecipe base_recipe, fiber_recipe;
    FibrationSpec fibration;
};

const std::vector<std::string>& bundle_ids();
NamedBundle load_bundle(const std::string& id, int cutoff, unsigned long mod = 0);

/// Image classes whose d2-derivative must reduce to zero in the E2 ring
/// (one per encoded family differential).
struct IdentityCheck {
    std::string label;
    Polynomial value;
};
std::vector<IdentityCheck> list_identities(const NamedBundle& b);

/// Degreewise module structure of the independently encoded survivor
/// algebra (generators and relation families instantiated to the cutoff).
struct OracleRow {
    int degree = 0;
    int free_rank = 0;
    std::vector<mpz_class> torsion;
};
struct OracleTable {
    std::string bundle;
    int cutoff = 0;
    std::vector<OracleRow> rows;
};
OracleTable oracle_table(const NamedBundle& b, const SpectralSequence& ss);

/// Degreewise comparison of an engine table against the oracle, restricted
/// to certified (within-horizon) rows. With allow_2_4 set, positions where
/// both sides carry a 2-power torsion order in {2,4} are accepted but
/// reported as ambiguous.
struct RowComparison {
    int degree = 0;
    bool match = false;
    bool ambiguous = false;
    std::string detail;
};
std::vector<RowComparison> compare_tables(const EInfinityTable& engine, const OracleTable& oracle,
                                          bool allow_2_4);

/// INI-like config round-trip.
std::string bundle_to_config(const NamedBundle& b);
NamedBundle parse_bundle_config(const std::string& text, int cutoff_override = -1,
                                unsigned long mod = 0);

}  // namespace flagloop
