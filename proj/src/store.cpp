#include "ogw/store.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ogw {

using nlohmann::json;

namespace {

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

json open_key_json(const OpenKey& k) {
    json j;
    j["beta"] = lattice_json(k.beta);
    j["k"] = k.k;
    j["cons"] = k.cons;
    return j;
}

OpenKey parse_open_key(const json& j) {
    return OpenKey{parse_lattice(j.at("beta")), j.at("k").get<int>(),
                   j.at("cons").get<std::vector<int>>()};
}

json closed_key_json(const ClosedKey& k) {
    json j;
    j["beta"] = lattice_json(k.beta);
    j["cons"] = k.cons;
    return j;
}

ClosedKey parse_closed_key(const json& j) {
    return ClosedKey{parse_lattice(j.at("beta")), j.at("cons").get<std::vector<int>>()};
}

json factor_json(const FactorRef& f) {
    json j;
    switch (f.kind) {
    case FactorRef::Kind::open:
        j["t"] = "open";
        j["key"] = open_key_json(f.open_key);
        break;
    case FactorRef::Kind::closed:
        j["t"] = "closed";
        j["key"] = closed_key_json(f.closed_key);
        break;
    case FactorRef::Kind::constant:
        j["t"] = "const";
        j["value"] = rational_str(f.constant);
        break;
    }
    return j;
}

FactorRef parse_factor(const json& j) {
    std::string t = j.at("t").get<std::string>();
    if (t == "open")
        return FactorRef::open(parse_open_key(j.at("key")));
    if (t == "closed")
        return FactorRef::closed(parse_closed_key(j.at("key")));
    if (t == "const")
        return FactorRef::from_const(parse_rational(j.at("value").get<std::string>()));
    throw Error(ErrorKind::parse, "unknown trace factor kind '" + t + "'");
}

json relation_json(const Relation& r) {
    json j;
    j["rule"] = r.rule;
    j["pre_scale"] = rational_str(r.pre_scale);
    json terms = json::array();
    for (const auto& t : r.terms) {
        json jt;
        jt["coeff"] = rational_str(t.coeff);
        json fs = json::array();
        for (const auto& f : t.factors)
            fs.push_back(factor_json(f));
        jt["factors"] = fs;
        terms.push_back(jt);
    }
    j["terms"] = terms;
    return j;
}

Relation parse_relation(const json& j) {
    Relation r;
    r.rule = j.at("rule").get<std::string>();
    r.pre_scale = parse_rational(j.at("pre_scale").get<std::string>());
    for (const auto& jt : j.at("terms")) {
        RelTerm t;
        t.coeff = parse_rational(jt.at("coeff").get<std::string>());
        for (const auto& jf : jt.at("factors"))
            t.factors.push_back(parse_factor(jf));
        r.terms.push_back(std::move(t));
    }
    return r;
}

} // namespace

void sort_table(const Model& m, TableFile& t) {
    const CohomologyModel& coh = m.coh;
    auto open_rank = [&](const OpenKey& k) {
        OrderTuple o;
        o.energy = m.geom.energy(k.beta, LatticeKind::rel);
        o.k = k.k;
        o.ell = k.ell();
        for (int c : k.cons)
            o.degs.push_back(coh.deg(c));
        return o;
    };
    std::sort(t.open_entries.begin(), t.open_entries.end(), [&](const auto& a, const auto& b) {
        OrderTuple oa = open_rank(a.first), ob = open_rank(b.first);
        if (!(oa == ob))
            return oa < ob;
        if (a.first.beta != b.first.beta)
            return a.first.beta < b.first.beta;
        return a.first.cons < b.first.cons;
    });
    auto closed_rank = [&](const ClosedKey& k) {
        OrderTuple o;
        o.energy = m.geom.energy(k.beta, LatticeKind::abs);
        o.ell = (int)k.cons.size();
        for (int c : k.cons)
            o.degs.push_back(coh.deg(c));
        return o;
    };
    std::sort(t.closed_entries.begin(), t.closed_entries.end(), [&](const auto& a, const auto& b) {
        OrderTuple oa = closed_rank(a.first), ob = closed_rank(b.first);
        if (!(oa == ob))
            return oa < ob;
        if (a.first.beta != b.first.beta)
            return a.first.beta < b.first.beta;
        return a.first.cons < b.first.cons;
    });
    std::sort(t.traces.begin(), t.traces.end(), [&](const auto& a, const auto& b) {
        OrderTuple oa = open_rank(a.first), ob = open_rank(b.first);
        if (!(oa == ob))
            return oa < ob;
        if (a.first.beta != b.first.beta)
            return a.first.beta < b.first.beta;
        return a.first.cons < b.first.cons;
    });
}

std::string table_to_text(const Model& m, TableFile t) {
    sort_table(m, t);
    json j;
    j["format_version"] = t.format_version;
    j["kind"] = t.kind;
    j["geometry_digest"] = t.geometry_digest;
    j["initial_digest"] = t.initial_digest;
    j["mode"] = t.mode;
    json entries = json::array();
    if (t.kind == "open") {
        for (const auto& [key, value] : t.open_entries) {
            json e = open_key_json(key);
            e["value"] = rational_str(value);
            entries.push_back(e);
        }
    } else {
        for (const auto& [key, value] : t.closed_entries) {
            json e = closed_key_json(key);
            e["value"] = rational_str(value);
            entries.push_back(e);
        }
    }
    j["entries"] = entries;
    if (!t.traces.empty()) {
        json traces = json::array();
        for (const auto& [key, rel] : t.traces) {
            json e;
            e["key"] = open_key_json(key);
            e["trace"] = relation_json(rel);
            traces.push_back(e);
        }
        j["traces"] = traces;
    }
    return j.dump(1) + "\n";
}

void save_table(const Model& m, TableFile t, const std::string& path) {
    std::string text = table_to_text(m, std::move(t));
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::config, "cannot write table file '" + path + "'");
    out << text;
}

TableFile load_table_text(const std::string& text, const Model& expected) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorKind::parse, std::string("table parse error: ") + e.what());
    }
    TableFile t;
    t.format_version = j.at("format_version").get<int>();
    if (t.format_version != 1)
        throw Error(ErrorKind::parse, "unsupported table format version");
    t.kind = j.at("kind").get<std::string>();
    t.geometry_digest = j.at("geometry_digest").get<std::string>();
    t.initial_digest = j.at("initial_digest").get<std::string>();
    t.mode = j.value("mode", "");
    if (t.geometry_digest != expected.geometry_digest)
        throw Error(ErrorKind::digest, "geometry digest mismatch: table was computed for a "
                                       "different geometry/cohomology descriptor");
    if (t.initial_digest != expected.initial_digest)
        throw Error(ErrorKind::digest, "initial-data digest mismatch: table was computed from "
                                       "different initial values");
    for (const auto& e : j.at("entries")) {
        Rational v = parse_rational(e.at("value").get<std::string>());
        if (t.kind == "open")
            t.open_entries.push_back({parse_open_key(e), v});
        else
            t.closed_entries.push_back({parse_closed_key(e), v});
    }
    for (const auto& e : j.value("traces", json::array()))
        t.traces.push_back({parse_open_key(e.at("key")), parse_relation(e.at("trace"))});
    return t;
}

TableFile load_table(const std::string& path, const Model& expected) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::parse, "cannot open table file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_table_text(ss.str(), expected);
}

Rational replay_trace(const Relation& rel, const OpenLookup& open_lookup,
                      const ClosedLookup& closed_lookup) {
    Rational acc = 0;
    for (const auto& term : rel.terms) {
        Rational prod = term.coeff;
        for (const auto& f : term.factors) {
            if (prod == 0)
                break;
            switch (f.kind) {
            case FactorRef::Kind::constant:
                prod *= f.constant;
                break;
            case FactorRef::Kind::open:
                prod *= open_lookup(f.open_key);
                break;
            case FactorRef::Kind::closed:
                prod *= closed_lookup(f.closed_key);
                break;
            }
        }
        acc += prod;
    }
    return rel.pre_scale * acc;
}

} // namespace ogw
