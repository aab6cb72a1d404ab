#include "ogw/descriptor.hpp"
#include "ogw/store.hpp"
#include "ogw/tables.hpp"
#include "ogw/verifier.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace ogw;

int exit_code_for(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::parse:
        return 2;
    case ErrorKind::missing_initial:
        return 3;
    case ErrorKind::digest:
        return 4;
    case ErrorKind::config:
        return 5;
    case ErrorKind::internal:
        return 6;
    }
    return 6;
}

struct CommonArgs {
    std::string preset;
    std::string descriptor;
    std::string initial;
    std::string mode = "theoremA";
    bool pointlike = false;
    std::string energy = "3";
    int lmax = 3;
    int kmax = 6;
    int jobs = 1;
    bool trace = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--preset", a.preset, "built-in geometry: cp:N or cpxcp:N1,N2");
    cmd->add_option("--descriptor", a.descriptor, "geometry descriptor file (JSON)");
    cmd->add_option("--initial", a.initial, "extra initial-data descriptor file (JSON)");
    cmd->add_option("--mode", a.mode, "reconstruction mode: theoremA | theoremB")
        ->check(CLI::IsMember({"theoremA", "theoremB"}));
    cmd->add_flag("--pointlike", a.pointlike, "assume the point-like vanishing rule (even n)");
}

void add_bounds(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--energy", a.energy, "energy bound (rational)");
    cmd->add_option("--lmax", a.lmax, "max number of interior constraints");
    cmd->add_option("--kmax", a.kmax, "max number of boundary constraints");
}

Model resolve_model(const CommonArgs& a) {
    if (a.preset.empty() == a.descriptor.empty())
        throw Error(ErrorKind::parse, "give exactly one of --preset / --descriptor");
    Model m = a.preset.empty() ? load_descriptor_file(a.descriptor) : preset_by_name(a.preset);
    if (!a.initial.empty()) {
        // merge the initial section of a second descriptor file
        Model extra = load_descriptor_file(a.initial);
        for (const auto& [key, value] : extra.closed_init.values)
            m.closed_init.add(m.geom, m.coh, key.beta, key.cons, value);
        for (const auto& [key, value] : extra.open_init.pure_boundary)
            m.open_init.add_pure_boundary(m.geom, key.beta, key.k, value);
        for (const auto& [key, value] : extra.open_init.one_interior)
            m.open_init.add_one_interior(m.geom, m.coh, key.beta, key.cons[0], value);
        if (extra.open_init.minimal_pair) {
            const auto& mp = *extra.open_init.minimal_pair;
            m.geom.sl_is_kernel = true;
            m.open_init.set_minimal_pair(m.geom, m.coh, mp.beta_prime, mp.cons, mp.value);
        }
        m.refresh_digests();
    }
    return m;
}

EngineOptions engine_options(const CommonArgs& a, bool trace) {
    EngineOptions o;
    o.mode = (a.mode == "theoremB") ? Mode::theorem_b : Mode::theorem_a;
    o.pointlike = a.pointlike;
    o.record_traces = trace;
    return o;
}

Lattice parse_beta(const std::string& s, int rank) {
    Lattice v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        v.push_back(std::stoll(tok));
    if ((int)v.size() != rank)
        throw Error(ErrorKind::parse, "--beta needs " + std::to_string(rank) + " coordinates");
    return v;
}

// "pt*8" or "pt,pt,H1^2*H2" -> indices; '*n' repeats a label
std::vector<int> parse_constraints(const Model& m, const std::string& s) {
    std::vector<int> out;
    if (s.empty())
        return out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        int repeat = 1;
        auto star = tok.rfind('*');
        // trailing *N as a repeat count (labels themselves contain '*', so the
        // suffix must be an integer)
        if (star != std::string::npos) {
            std::string tail = tok.substr(star + 1);
            bool numeric = !tail.empty() && tail.find_first_not_of("0123456789") == std::string::npos;
            if (numeric) {
                repeat = std::stoi(tail);
                tok = tok.substr(0, star);
            }
        }
        int idx = m.constraint_index(tok);
        for (int r = 0; r < repeat; ++r)
            out.push_back(idx);
    }
    return out;
}

std::string cache_dir() {
    const char* env = std::getenv("OGW_CACHE_DIR");
    return env ? std::string(env) : std::string();
}

int cmd_compute(const CommonArgs& a, bool closed, const std::string& beta_str,
                const std::string& cons_str, int k, const std::string& trace_out) {
    Model m = resolve_model(a);
    ClosedEngine closed_engine(m);
    if (closed) {
        Lattice beta = parse_beta(beta_str, m.geom.abs_rank);
        Rational v = closed_engine.compute(beta, parse_constraints(m, cons_str));
        std::cout << rational_str(v) << "\n";
        return 0;
    }
    OpenEngine open(m, closed_engine, engine_options(a, !trace_out.empty()));
    Lattice beta = parse_beta(beta_str, m.geom.rel_rank);
    Rational v = open.compute(beta, k, parse_constraints(m, cons_str));
    std::cout << rational_str(v) << "\n";
    if (!trace_out.empty()) {
        TableFile t;
        t.kind = "open";
        t.geometry_digest = m.geometry_digest;
        t.initial_digest = m.initial_digest;
        t.mode = a.mode;
        for (const auto& [key, value] : open.memo())
            t.open_entries.push_back({key, value});
        for (const auto& [key, rel] : open.traces())
            t.traces.push_back({key, rel});
        save_table(m, std::move(t), trace_out);
    }
    return 0;
}

int cmd_table(const CommonArgs& a, bool closed, const std::string& out_path) {
    Model m = resolve_model(a);
    TableBounds bounds{parse_rational(a.energy), a.lmax, a.kmax};
    TableFile t;
    t.geometry_digest = m.geometry_digest;
    t.initial_digest = m.initial_digest;
    t.mode = a.mode;

    std::string cache = cache_dir();
    std::string cache_file;
    if (!cache.empty()) {
        std::filesystem::create_directories(cache);
        cache_file = cache + "/" + m.geometry_digest + "-" + m.initial_digest + "-" +
                     (closed ? "c" : "o") + rational_str(bounds.max_energy) + "-" +
                     std::to_string(bounds.max_ell) + "-" + std::to_string(bounds.max_k) + ".json";
    }

    ClosedEngine closed_engine(m);
    size_t nonzero = 0;
    if (closed) {
        t.kind = "closed";
        auto entries = build_closed_table(closed_engine, bounds, a.jobs);
        for (const auto& e : entries)
            if (e.second != 0)
                ++nonzero;
        t.closed_entries = std::move(entries);
    } else {
        t.kind = "open";
        OpenEngine open(m, closed_engine, engine_options(a, a.trace));
        if (!cache_file.empty() && std::filesystem::exists(cache_file)) {
            TableFile cached = load_table(cache_file, m);
            open.seed_memo(cached.open_entries);
        }
        auto entries = build_open_table(open, bounds, a.jobs);
        for (const auto& e : entries)
            if (e.second != 0)
                ++nonzero;
        t.open_entries = std::move(entries);
        if (a.trace)
            for (const auto& [key, rel] : open.traces())
                t.traces.push_back({key, rel});
    }
    std::string text = table_to_text(m, t);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out)
            throw Error(ErrorKind::config, "cannot write '" + out_path + "'");
        out << text;
    } else {
        std::cout << text;
    }
    if (!cache_file.empty()) {
        std::ofstream out(cache_file, std::ios::binary);
        out << text;
    }
    size_t count = closed ? t.closed_entries.size() : t.open_entries.size();
    std::cerr << "table: " << count << " entries, " << nonzero << " nonzero\n";
    return 0;
}

int cmd_verify(const CommonArgs& a, const std::string& table_path, const std::string& report_path) {
    Model m = resolve_model(a);
    TableFile t = load_table(table_path, m);
    ClosedEngine closed_engine(m);
    EngineOptions opts = engine_options(a, false);
    OpenEngine open(m, closed_engine, opts);

    std::ostringstream txt;
    bool violated = false;
    SweepBounds bounds;
    bounds.max_energy = parse_rational(a.energy);
    bounds.max_s = a.kmax;
    bounds.max_t = a.lmax;

    uint64_t checked = 0;
    std::vector<ResidualReport> bad;
    if (t.kind == "closed") {
        ValueSource src(m, closed_engine, nullptr, a.pointlike);
        src.load_closed_table(t.closed_entries);
        bad = sweep_closed(m, src, bounds, &checked);
        txt << "closed residuals checked: " << checked << "\n";
    } else {
        AxiomSuiteReport ax = axiom_suite(m, t.open_entries, a.pointlike);
        txt << "axiom checks: " << ax.checked << " keys, " << ax.uncheckable
            << " uncheckable, " << ax.violations.size() << " violations\n";
        for (const auto& v : ax.violations)
            txt << "  violation: " << v << "\n";
        violated = violated || !ax.violations.empty();
        ValueSource src(m, closed_engine, &open, a.pointlike);
        src.load_open_table(t.open_entries);
        bad = sweep_open(m, src, bounds, &checked);
        txt << "open residuals checked: " << checked << "\n";
    }
    for (const auto& r : bad) {
        txt << "  residual violation: " << r.describe() << "\n";
        for (size_t i = 0; i < r.witness_terms.size() && i < 8; ++i)
            txt << "    witness: " << r.witness_terms[i].first << " -> "
                << rational_str(r.witness_terms[i].second) << "\n";
    }
    violated = violated || !bad.empty();
    txt << (violated ? "FAIL" : "OK") << "\n";
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        out << txt.str();
    }
    std::cout << txt.str();
    return violated ? 1 : 0;
}

int cmd_vanish(const CommonArgs& a, const std::string& campaign_mode) {
    Model m = resolve_model(a);
    CampaignReport rep =
        vanishing_campaign(m, campaign_mode, parse_rational(a.energy), a.lmax, a.kmax);
    std::cout << "campaign mode: " << rep.mode << "\n";
    std::cout << "certificate: " << rep.certificate << "\n";
    std::cout << "initial candidates scanned: " << rep.initial_candidates
              << ", satisfiable: " << rep.satisfiable_initial << "\n";
    for (const auto& d : rep.satisfiable_details)
        std::cout << "  satisfiable: " << d << "\n";
    std::cout << "keys computed: " << rep.keys_checked << " (gate-killed " << rep.gate_killed
              << "), nonzero: " << rep.keys_nonzero << "\n";
    for (const auto& d : rep.nonzero_details)
        std::cout << "  nonzero: " << d << "\n";
    std::cout << (rep.ok ? "OK" : "FAIL") << "\n";
    return rep.ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ogw: exact computation of open and closed genus-0 Gromov-Witten invariants\n"
                 "Exit codes: 0 ok, 1 verification violation, 2 usage/parse error,\n"
                 "3 missing initial datum, 4 digest mismatch, 5 configuration error,\n"
                 "6 internal invariant failure. Cache directory: $OGW_CACHE_DIR."};
    app.require_subcommand(1);

    CommonArgs args;

    auto* compute = app.add_subcommand("compute", "compute a single invariant");
    add_common(compute, args);
    bool closed = false;
    std::string beta_str, cons_str = "", trace_out;
    int kval = 0;
    compute->add_flag("--closed", closed, "closed invariant (beta over H_2(X))");
    compute->add_option("--beta", beta_str, "degree, comma-separated integers")->required();
    compute->add_option("--constraints", cons_str, "constraint labels, e.g. pt*8 or H1,H2");
    compute->add_option("--k", kval, "number of boundary point constraints");
    compute->add_option("--trace-out", trace_out, "write derivation traces to this table file");

    auto* table = app.add_subcommand("table", "compute all in-range invariants into a table file");
    add_common(table, args);
    add_bounds(table, args);
    bool table_closed = false;
    std::string out_path;
    table->add_flag("--closed", table_closed, "closed table");
    table->add_option("--out", out_path, "output path (stdout when omitted)");
    table->add_option("--jobs", args.jobs, "parallel workers over independent keys");
    table->add_flag("--trace", args.trace, "record derivation traces in the table");

    auto* verify = app.add_subcommand("verify", "re-check axioms and residuals on a table file");
    add_common(verify, args);
    add_bounds(verify, args);
    std::string table_path, report_path;
    verify->add_option("--table", table_path, "table file to verify")->required();
    verify->add_option("--report", report_path, "also write the report to this path");

    auto* vanish = app.add_subcommand("vanish", "run a vanishing campaign on a product preset");
    add_common(vanish, args);
    add_bounds(vanish, args);
    std::string campaign_mode = "mod6";
    vanish->add_option("--campaign", campaign_mode, "mod6 | pointlike");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed())
            return cmd_compute(args, closed, beta_str, cons_str, kval, trace_out);
        if (table->parsed())
            return cmd_table(args, table_closed, out_path);
        if (verify->parsed())
            return cmd_verify(args, table_path, report_path);
        if (vanish->parsed())
            return cmd_vanish(args, campaign_mode);
    } catch (const ogw::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 6;
    }
    return 2;
}
