#include "ogw/descriptor.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ogw {

using nlohmann::json;

namespace {

json rat_array(const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& r : v)
        a.push_back(rational_str(r));
    return a;
}

std::vector<Rational> parse_rat_array(const json& a) {
    std::vector<Rational> v;
    for (const auto& x : a)
        v.push_back(parse_rational(x.get<std::string>()));
    return v;
}

json lattice_json(const Lattice& v) {
    json a = json::array();
    for (auto x : v)
        a.push_back(x);
    return a;
}

Lattice parse_lattice(const json& a) {
    Lattice v;
    for (const auto& x : a)
        v.push_back(x.get<long long>());
    return v;
}

json geometry_json(const Geometry& g) {
    json j;
    j["n"] = g.n;
    j["rel_rank"] = g.rel_rank;
    j["abs_rank"] = g.abs_rank;
    j["omega_rel"] = rat_array(g.omega_rel);
    j["omega_abs"] = rat_array(g.omega_abs);
    j["maslov"] = g.maslov_cov;
    j["chern"] = g.chern_cov;
    json vp = json::array();
    for (const auto& row : g.varpi_matrix)
        vp.push_back(row);
    j["varpi"] = vp;
    j["hbar"] = rational_str(g.hbar);
    j["ws"] = g.ws;
    j["cone_vanishing"] = g.cone_vanishing;
    j["sl_is_kernel"] = g.sl_is_kernel;
    json dr = json::object(), da = json::object();
    for (const auto& [idx, cov] : g.divisor_rel)
        dr[std::to_string(idx)] = rat_array(cov);
    for (const auto& [idx, cov] : g.divisor_abs)
        da[std::to_string(idx)] = rat_array(cov);
    j["divisor_rel"] = dr;
    j["divisor_abs"] = da;
    return j;
}

json cohomology_json(const CohomologyModel& coh) {
    json j;
    j["labels"] = coh.basis.labels;
    j["degrees"] = coh.basis.degree;
    j["top_degree"] = coh.basis.top_degree;
    json cup = json::array();
    for (int i = 0; i < coh.basis.size(); ++i)
        for (int jdx = i; jdx < coh.basis.size(); ++jdx)
            for (const auto& [m, c] : coh.ring.cup_table[i][jdx])
                cup.push_back(json::array({i, jdx, m, rational_str(c)}));
    j["cup"] = cup;
    j["integral"] = rat_array(coh.ring.integral);
    if (coh.rel)
        j["relative"] = (coh.rel->kind == RelativeCase::trivial) ? "trivial" : "nontrivial";
    else
        j["relative"] = "none";
    return j;
}

json initial_json(const Model& m) {
    json j;
    std::vector<json> closed;
    for (const auto& [key, value] : m.closed_init.values) {
        json e;
        e["beta"] = lattice_json(key.beta);
        e["cons"] = key.cons;
        e["value"] = rational_str(value);
        closed.push_back(e);
    }
    std::sort(closed.begin(), closed.end(),
              [](const json& a, const json& b) { return a.dump() < b.dump(); });
    j["closed"] = closed;

    json open;
    std::vector<json> pb, oi;
    for (const auto& [key, value] : m.open_init.pure_boundary) {
        json e;
        e["beta"] = lattice_json(key.beta);
        e["k"] = key.k;
        e["value"] = rational_str(value);
        pb.push_back(e);
    }
    for (const auto& [key, value] : m.open_init.one_interior) {
        json e;
        e["beta"] = lattice_json(key.beta);
        e["i"] = key.cons[0];
        e["value"] = rational_str(value);
        oi.push_back(e);
    }
    auto by_dump = [](const json& a, const json& b) { return a.dump() < b.dump(); };
    std::sort(pb.begin(), pb.end(), by_dump);
    std::sort(oi.begin(), oi.end(), by_dump);
    open["pure_boundary"] = pb;
    open["one_interior"] = oi;
    if (m.open_init.minimal_pair) {
        json mp;
        mp["beta"] = lattice_json(m.open_init.minimal_pair->beta_prime);
        mp["cons"] = m.open_init.minimal_pair->cons;
        mp["value"] = rational_str(m.open_init.minimal_pair->value);
        open["minimal_pair"] = mp;
    }
    j["open"] = open;
    return j;
}

} // namespace

std::string model_geometry_text(const Model& m) {
    json j;
    j["geometry"] = geometry_json(m.geom);
    j["cohomology"] = cohomology_json(m.coh);
    return j.dump();
}

std::string model_initial_text(const Model& m) { return initial_json(m).dump(); }

std::string digest_of(const std::string& text) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return std::string(buf);
}

void Model::refresh_digests() {
    geometry_digest = digest_of(model_geometry_text(*this));
    initial_digest = digest_of(model_initial_text(*this));
}

std::string save_descriptor(const Model& m) {
    json j;
    j["format_version"] = 1;
    j["name"] = m.name;
    j["geometry"] = geometry_json(m.geom);
    j["cohomology"] = cohomology_json(m.coh);
    j["initial"] = initial_json(m);
    return j.dump(2) + "\n";
}

Model load_descriptor_text(const std::string& text, const std::string& name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorKind::parse, std::string("descriptor parse error: ") + e.what());
    }
    try {
        Model m;
        m.name = j.value("name", name);
        const json& jg = j.at("geometry");
        Geometry& g = m.geom;
        g.n = jg.at("n").get<int>();
        g.rel_rank = jg.at("rel_rank").get<int>();
        g.abs_rank = jg.at("abs_rank").get<int>();
        g.omega_rel = parse_rat_array(jg.at("omega_rel"));
        g.omega_abs = parse_rat_array(jg.at("omega_abs"));
        g.maslov_cov = jg.at("maslov").get<std::vector<long long>>();
        g.chern_cov = jg.at("chern").get<std::vector<long long>>();
        for (const auto& row : jg.at("varpi"))
            g.varpi_matrix.push_back(row.get<std::vector<long long>>());
        g.hbar = parse_rational(jg.at("hbar").get<std::string>());
        g.ws = jg.at("ws").get<std::vector<int>>();
        g.cone_vanishing = jg.value("cone_vanishing", true);
        g.sl_is_kernel = jg.value("sl_is_kernel", false);
        for (auto it = jg.at("divisor_rel").begin(); it != jg.at("divisor_rel").end(); ++it)
            g.divisor_rel[std::stoi(it.key())] = parse_rat_array(it.value());
        for (auto it = jg.at("divisor_abs").begin(); it != jg.at("divisor_abs").end(); ++it)
            g.divisor_abs[std::stoi(it.key())] = parse_rat_array(it.value());
        g.validate();

        const json& jc = j.at("cohomology");
        CohomologyModel& coh = m.coh;
        coh.basis.labels = jc.at("labels").get<std::vector<std::string>>();
        coh.basis.degree = jc.at("degrees").get<std::vector<int>>();
        coh.basis.top_degree = jc.at("top_degree").get<int>();
        int K1 = coh.basis.size();
        coh.ring.cup_table.assign(K1, std::vector<std::vector<std::pair<int, Rational>>>(K1));
        for (const auto& entry : jc.at("cup")) {
            int a = entry.at(0).get<int>(), b = entry.at(1).get<int>(), mm = entry.at(2).get<int>();
            Rational c = parse_rational(entry.at(3).get<std::string>());
            coh.ring.cup_table[a][b].push_back({mm, c});
            if (a != b)
                coh.ring.cup_table[b][a].push_back({mm, c});
        }
        coh.ring.integral = parse_rat_array(jc.at("integral"));
        std::string relcase = jc.value("relative", "none");
        if (relcase == "trivial") {
            RelativeBasis rel;
            rel.kind = RelativeCase::trivial;
            rel.N = K1;
            rel.diamond = K1;
            rel.rho.resize(K1 + 1);
            rel.pr.assign(K1 + 1, Rational(0));
            for (int i = 0; i < K1; ++i)
                rel.rho[i] = i;
            rel.rho[K1] = -1;
            rel.pr[K1] = 1;
            coh.rel = rel;
        } else if (relcase == "nontrivial") {
            RelativeBasis rel;
            rel.kind = RelativeCase::nontrivial;
            rel.N = K1 - 2;
            rel.diamond = -1;
            rel.rho.resize(K1 - 1);
            rel.pr.assign(K1 - 1, Rational(0));
            for (int i = 0; i < K1 - 1; ++i)
                rel.rho[i] = i;
            coh.rel = rel;
        } else if (relcase != "none") {
            throw Error(ErrorKind::parse, "relative case must be trivial/nontrivial/none");
        }
        coh.finalize();

        if (j.contains("initial")) {
            const json& ji = j.at("initial");
            for (const auto& e : ji.value("closed", json::array()))
                m.closed_init.add(g, coh, parse_lattice(e.at("beta")),
                                  e.at("cons").get<std::vector<int>>(),
                                  parse_rational(e.at("value").get<std::string>()));
            if (ji.contains("open")) {
                const json& jo = ji.at("open");
                for (const auto& e : jo.value("pure_boundary", json::array()))
                    m.open_init.add_pure_boundary(g, parse_lattice(e.at("beta")),
                                                  e.at("k").get<int>(),
                                                  parse_rational(e.at("value").get<std::string>()));
                for (const auto& e : jo.value("one_interior", json::array()))
                    m.open_init.add_one_interior(g, coh, parse_lattice(e.at("beta")),
                                                 e.at("i").get<int>(),
                                                 parse_rational(e.at("value").get<std::string>()));
                if (jo.contains("minimal_pair")) {
                    const json& mp = jo.at("minimal_pair");
                    m.open_init.set_minimal_pair(g, coh, parse_lattice(mp.at("beta")),
                                                 mp.at("cons").get<std::vector<int>>(),
                                                 parse_rational(mp.at("value").get<std::string>()));
                }
            }
        }
        m.refresh_digests();
        return m;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorKind::parse, std::string("descriptor field error: ") + e.what());
    }
}

Model load_descriptor_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::parse, "cannot open descriptor file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_descriptor_text(ss.str(), path);
}

} // namespace ogw
