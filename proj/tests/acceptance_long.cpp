// Long tier: the G2 evaluation fibration at a cutoff deep enough that the
// page-10 differential acts inside the certified range.
#include "flagloop/bundles.hpp"

#include <iostream>

using namespace flagloop;

int main() {
    bool ok = true;
    try {
        NamedBundle b = load_bundle("g2-eval", 22);
        SpectralSequence ss(b.fibration, 4);
        ss.run();
        EInfinityTable t = ss.table();
        if (t.horizon < 12) {
            std::cout << "FAIL g2-eval horizon " << t.horizon << " below 12\n";
            return 1;
        }
        bool d10_seen = false;
        for (const auto& d : b.fibration.differentials)
            d10_seen |= d.page == 10;
        if (!d10_seen) {
            std::cout << "FAIL g2-eval page-10 differential not instantiated\n";
            return 1;
        }
        OracleTable oracle = oracle_table(b, ss);
        for (const auto& c : compare_tables(t, oracle, true)) {
            const char* tag = !c.match ? "FAIL" : c.ambiguous ? "AMBIGUOUS" : "PASS";
            ok &= c.match;
            std::cout << tag << " g2-eval degree " << c.degree;
            if (!c.detail.empty())
                std::cout << " (" << c.detail << ")";
            std::cout << "\n";
        }
    } catch (const std::exception& e) {
        std::cout << "FAIL g2-eval long run: " << e.what() << "\n";
        return 1;
    }
    std::cout << (ok ? "PASS" : "FAIL") << " long-tier survivor comparison\n";
    return ok ? 0 : 1;
}
