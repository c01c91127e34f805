#include "flagloop/bundles.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace flagloop;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitMath = 3;
constexpr int kExitDSquare = 4;
constexpr int kExitVerify = 5;

int default_cutoff() {
    if (const char* env = std::getenv("FLAGLOOP_CUTOFF"))
        return std::atoi(env);
    return 12;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open file: " + path, 0);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct GbOptions {
    std::string vars, order = "grevlex", ideal, ideal_file;
    std::string reduce_text, member_text;
    std::vector<std::string> intersect_files;
    unsigned long mod = 0;
};

// variables: name[:degree[:odd]] comma-separated
AmbientPtr gb_ambient(const GbOptions& opt) {
    std::vector<Generator> gens;
    std::stringstream ss(opt.vars);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        Generator g;
        size_t c1 = item.find(':');
        g.name = item.substr(0, c1);
        g.degree = 1;
        if (c1 != std::string::npos) {
            size_t c2 = item.find(':', c1 + 1);
            g.degree = std::stoi(item.substr(c1 + 1, c2 - c1 - 1));
            g.odd = c2 != std::string::npos && item.substr(c2 + 1) == "odd";
        }
        gens.push_back(std::move(g));
    }
    if (gens.empty())
        throw ParseError("--vars lists no variables", 0);
    return make_ambient(std::move(gens), opt.mod);
}

// order: lex | grlex | grevlex, optionally ":a>b>c" for variable priority
MonomialOrder gb_order(const AmbientPtr& amb, const std::string& text) {
    OrderKind kind = OrderKind::GrevLex;
    std::string spec = text;
    std::string prio;
    size_t colon = spec.find(':');
    if (colon != std::string::npos) {
        prio = spec.substr(colon + 1);
        spec = spec.substr(0, colon);
    }
    if (spec == "lex")
        kind = OrderKind::Lex;
    else if (spec == "grlex")
        kind = OrderKind::GrLex;
    else if (spec == "grevlex" || spec.empty())
        kind = OrderKind::GrevLex;
    else
        throw ParseError("unknown order: " + spec, 0);
    std::vector<int> priority;
    if (!prio.empty()) {
        std::stringstream ss(prio);
        std::string name;
        while (std::getline(ss, name, '>'))
            priority.push_back(amb->index_of(name));
    }
    return MonomialOrder(amb, kind, priority);
}

std::vector<Polynomial> parse_ideal_text(const AmbientPtr& amb, const std::string& text) {
    std::vector<Polynomial> out;
    std::string cur;
    int depth = 0;
    auto flush = [&]() {
        // trim
        size_t a = cur.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) {
            cur.clear();
            return;
        }
        size_t b = cur.find_last_not_of(" \t\r\n");
        out.push_back(parse_polynomial(amb, cur.substr(a, b - a + 1)));
        cur.clear();
    };
    for (char ch : text) {
        if (ch == '(')
            ++depth;
        if (ch == ')')
            --depth;
        if ((ch == ',' || ch == '\n' || ch == ';') && depth == 0) {
            flush();
            continue;
        }
        if (ch == '#') {
            flush();
            // skip to end of line handled by caller text structure; crude but fine
        }
        cur += ch;
    }
    flush();
    if (out.empty())
        throw ParseError("ideal lists no generators", 0);
    return out;
}

int cmd_gb(const GbOptions& opt) {
    AmbientPtr amb = gb_ambient(opt);
    MonomialOrder ord = gb_order(amb, opt.order);
    if (!opt.intersect_files.empty()) {
        if (opt.intersect_files.size() != 2)
            throw ParseError("--intersect needs exactly two ideal files", 0);
        auto A = parse_ideal_text(amb, slurp(opt.intersect_files[0]));
        auto B = parse_ideal_text(amb, slurp(opt.intersect_files[1]));
        for (const auto& f : ideal_intersect(A, B, ord))
            std::cout << f.str() << "\n";
        return 0;
    }
    std::string ideal_text = opt.ideal;
    if (!opt.ideal_file.empty())
        ideal_text = slurp(opt.ideal_file);
    auto F = parse_ideal_text(amb, ideal_text);
    GroebnerBasis gb = buchberger(F, ord);
    if (!opt.reduce_text.empty()) {
        std::cout << reduce(parse_polynomial(amb, opt.reduce_text), gb.elements, ord).str()
                  << "\n";
        return 0;
    }
    if (!opt.member_text.empty()) {
        bool in = gb.contains(parse_polynomial(amb, opt.member_text));
        std::cout << (in ? "member" : "not a member") << "\n";
        return in ? 0 : 1;
    }
    for (const auto& g : gb.elements)
        std::cout << g.str() << "\n";
    return 0;
}

struct SsOptions {
    std::string bundle, config, format = "text", output;
    int cutoff = 0;
    unsigned long mod = 0;
    bool pages = false, no_header = false, emit_config = false;
    int jobs = 1;
};

NamedBundle resolve_bundle(const std::string& bundle, const std::string& config, int cutoff,
                           unsigned long mod) {
    if (!config.empty())
        return parse_bundle_config(slurp(config), cutoff, mod);
    if (bundle.empty())
        throw ParseError("need --bundle or --config", 0);
    return load_bundle(bundle, cutoff, mod);
}

void emit(const std::string& text, const std::string& output) {
    if (output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output);
    if (!out)
        throw ParseError("cannot open output file: " + output, 0);
    out << text;
}

std::string header_line(const NamedBundle& b) {
    char buf[64];
    std::time_t t = std::time(nullptr);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", std::gmtime(&t));
    return "# " + b.id + " cutoff " + std::to_string(b.cutoff) + " generated " + buf + "\n";
}

int cmd_ss(const SsOptions& opt) {
    NamedBundle b = resolve_bundle(opt.bundle, opt.config, opt.cutoff, opt.mod);
    if (opt.emit_config) {
        emit(bundle_to_config(b), opt.output);
        return 0;
    }
    SpectralSequence ss(b.fibration, opt.jobs);
    ss.run(opt.pages);
    EInfinityTable table = ss.table();
    std::ostringstream os;
    if (!opt.no_header && opt.format != "json")
        os << header_line(b);
    if (opt.pages && opt.format == "text") {
        for (const auto& snap : ss.snapshots()) {
            os << "page " << snap.page << "\n";
            for (const auto& [pq, cell] : snap.cells) {
                if (cell.free_rank == 0 && cell.torsion.empty())
                    continue;
                os << "  (" << pq.first << "," << pq.second << ") free " << cell.free_rank;
                for (const auto& t : cell.torsion)
                    os << " Z/" << t.get_str();
                os << "\n";
            }
        }
    }
    if (opt.format == "text")
        os << table.to_text(false);
    else if (opt.format == "csv")
        os << table.to_csv(true);
    else if (opt.format == "json")
        os << table.to_json().dump(2) << "\n";
    else
        throw ParseError("unknown format: " + opt.format, 0);
    emit(os.str(), opt.output);
    return 0;
}

struct VerifyOptions {
    std::string bundle, config;
    int cutoff = 0;
    int jobs = 1;
};

int cmd_verify(const VerifyOptions& opt) {
    NamedBundle b = resolve_bundle(opt.bundle, opt.config, opt.cutoff, 0);
    bool hard_fail = false;
    SpectralSequence ss(b.fibration, opt.jobs);
    for (const auto& id : list_identities(b)) {
        Polynomial r = ss.normal_form(ss.apply_derivation(id.value, 2));
        bool ok = r.is_zero();
        hard_fail |= !ok;
        std::cout << (ok ? "PASS" : "FAIL") << " identity " << id.label << "\n";
    }
    ss.run();
    std::cout << "PASS d∘d = 0 on every page\n";  // run() would have thrown otherwise
    if (b.has_oracle) {
        OracleTable oracle = oracle_table(b, ss);
        bool allow24 = b.id != "su3-eval";
        for (const auto& c : compare_tables(ss.table(), oracle, allow24)) {
            const char* tag = !c.match ? "FAIL" : c.ambiguous ? "AMBIGUOUS" : "PASS";
            hard_fail |= !c.match;
            std::cout << tag << " degree " << c.degree;
            if (!c.detail.empty())
                std::cout << " (" << c.detail << ")";
            std::cout << "\n";
        }
    }
    return hard_fail ? kExitVerify : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Groebner bases over Z and spectral sequences of flag-manifold loop fibrations"};
    app.require_subcommand(1);

    GbOptions gb;
    auto* cgb = app.add_subcommand("gb", "Groebner basis computations");
    cgb->add_option("--vars", gb.vars, "comma list of variables, name[:degree[:odd]]")
        ->required();
    cgb->add_option("--order", gb.order, "lex|grlex|grevlex, optionally :a>b>c priority");
    cgb->add_option("--ideal", gb.ideal, "comma-separated generators");
    cgb->add_option("--ideal-file", gb.ideal_file, "file with one generator per line");
    cgb->add_option("--reduce", gb.reduce_text, "print the normal form of this polynomial");
    cgb->add_option("--member", gb.member_text, "test ideal membership");
    cgb->add_option("--intersect", gb.intersect_files, "two ideal files to intersect")
        ->expected(2);
    cgb->add_option("--mod", gb.mod, "prime field characteristic (0 = integers)");

    SsOptions ssopt;
    ssopt.cutoff = default_cutoff();
    auto* css = app.add_subcommand("ss", "run a spectral sequence to its stable page");
    css->add_option("--bundle", ssopt.bundle, "bundle id");
    css->add_option("--config", ssopt.config, "fibration config file");
    css->add_option("--cutoff", ssopt.cutoff, "total-degree truncation");
    css->add_option("--mod", ssopt.mod, "prime field characteristic (0 = integers)");
    css->add_option("--format", ssopt.format, "text|json|csv");
    css->add_option("--output", ssopt.output, "write to file instead of stdout");
    css->add_option("--jobs", ssopt.jobs, "parallel homology computations");
    css->add_flag("--pages", ssopt.pages, "dump every page, not only the stable one");
    css->add_flag("--no-header", ssopt.no_header, "suppress the timestamp header");
    css->add_flag("--emit-config", ssopt.emit_config, "print the bundle as an editable config");

    VerifyOptions v;
    v.cutoff = default_cutoff();
    auto* cv = app.add_subcommand("verify", "cycle identities and oracle cross-checks");
    cv->add_option("--bundle", v.bundle, "bundle id");
    cv->add_option("--config", v.config, "fibration config file");
    cv->add_option("--cutoff", v.cutoff, "total-degree truncation");
    cv->add_option("--jobs", v.jobs, "parallel homology computations");

    try {
        app.parse(argc, argv);
        if (cgb->parsed())
            return cmd_gb(gb);
        if (css->parsed())
            return cmd_ss(ssopt);
        return cmd_verify(v);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << " (at " << e.position << ")\n";
        return kExitParse;
    } catch (const DSquareError& e) {
        std::cerr << "differential error: " << e.what() << "\n";
        return kExitDSquare;
    } catch (const MathError& e) {
        std::cerr << "math error: " << e.what() << "\n";
        return kExitMath;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMath;
    }
}
