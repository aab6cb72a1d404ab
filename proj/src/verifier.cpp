#include "ogw/verifier.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace ogw {

namespace {

std::string open_key_str(const OpenKey& k) {
    std::string s = "OGW[beta=" + lattice_str(k.beta) + ",k=" + std::to_string(k.k) + ",cons=(";
    for (size_t i = 0; i < k.cons.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(k.cons[i]);
    }
    return s + ")]";
}

std::string closed_key_str(const ClosedKey& k) {
    std::string s = "GW[beta=" + lattice_str(k.beta) + ",cons=(";
    for (size_t i = 0; i < k.cons.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(k.cons[i]);
    }
    return s + ")]";
}

// kappa-restricted nonzero entries of the inverse pairing
std::vector<std::tuple<int, int, Rational>> kappa_pairs(const Model& m) {
    std::vector<std::tuple<int, int, Rational>> out;
    int kap = m.coh.kappa();
    for (int mu = 0; mu <= kap; ++mu)
        for (int nu = 0; nu <= kap; ++nu)
            if (m.coh.pairing.g_inv[mu][nu] != 0)
                out.push_back({mu, nu, m.coh.pairing.g_inv[mu][nu]});
    return out;
}

std::vector<std::tuple<int, int, Rational>> full_pairs(const Model& m) {
    std::vector<std::tuple<int, int, Rational>> out;
    for (int mu = 0; mu < m.coh.basis.size(); ++mu)
        for (int nu = 0; nu < m.coh.basis.size(); ++nu)
            if (m.coh.pairing.g_inv[mu][nu] != 0)
                out.push_back({mu, nu, m.coh.pairing.g_inv[mu][nu]});
    return out;
}

template <typename Fn> void for_subsets(const std::vector<int>& positions, Fn&& fn) {
    size_t nsub = 1ull << positions.size();
    std::vector<int> s1, s2;
    for (size_t mask = 0; mask < nsub; ++mask) {
        s1.clear();
        s2.clear();
        for (size_t i = 0; i < positions.size(); ++i)
            ((mask >> i) & 1 ? s1 : s2).push_back(positions[i]);
        fn(s1, s2);
    }
}

std::vector<int> with(const std::vector<int>& base, std::initializer_list<int> extra) {
    std::vector<int> v = base;
    for (int x : extra)
        if (x >= 0)
            v.push_back(x);
    return v;
}

// relative index -> absolute index under rho, or -1 for the diamond
int rho_abs(const Model& m, int rel_index) {
    if (m.coh.rel && rel_index == m.coh.rel->diamond)
        return -1;
    return rel_index;
}

} // namespace

ValueSource::ValueSource(const Model& model, ClosedEngine& closed, OpenEngine* open_fallback,
                         bool pointlike)
    : model_(model), closed_(closed), open_fallback_(open_fallback), pointlike_(pointlike) {}

void ValueSource::load_open_table(const std::vector<std::pair<OpenKey, Rational>>& entries) {
    for (const auto& [key, value] : entries)
        open_table_[key] = value;
}

void ValueSource::load_closed_table(const std::vector<std::pair<ClosedKey, Rational>>& entries) {
    for (const auto& [key, value] : entries)
        closed_table_[key] = value;
}

Rational ValueSource::open_value(const Lattice& beta, int k, std::vector<int> raw_cons) const {
    auto [key, sign] = normalize_open_key(model_, beta, k, std::move(raw_cons));
    auto it = open_table_.find(key);
    if (it != open_table_.end())
        return sign * it->second;
    if (auto v = open_axiom_value(model_, key, pointlike_))
        return sign * *v;
    if (open_fallback_)
        return sign * open_fallback_->compute_key(key);
    throw Error(ErrorKind::missing_initial, "uncomputable dependency: " + open_key_str(key) +
                                                " is absent from the table");
}

Rational ValueSource::closed_value(const Lattice& beta, std::vector<int> cons) const {
    ClosedKey key = closed_.canonical(beta, std::move(cons));
    auto it = closed_table_.find(key);
    if (it != closed_table_.end())
        return it->second;
    return closed_.compute_key(key);
}

std::string ResidualReport::describe() const {
    std::ostringstream os;
    os << relation << " indices=(";
    for (size_t i = 0; i < indices.size(); ++i)
        os << (i ? "," : "") << indices[i];
    os << ") beta=" << lattice_str(beta) << " s^" << s_power << " t=(";
    for (size_t i = 0; i < t_multiset.size(); ++i)
        os << (i ? "," : "") << t_multiset[i];
    os << ") residual=" << rational_str(residual);
    return os.str();
}

ResidualReport residual_closed(const Model& m, const ValueSource& src, int a, int b, int c, int d,
                               const Lattice& beta, const std::vector<int>& tset) {
    ResidualReport rep;
    rep.relation = "closed_wdvv";
    rep.indices = {a, b, c, d};
    rep.beta = beta;
    rep.t_multiset = tset;
    Rational acc = 0;
    auto pairs = full_pairs(m);
    auto splits = splits_abs_abs(m.geom, beta);
    for_subsets(tset, [&](const std::vector<int>& s1, const std::vector<int>& s2) {
        for (const auto& sp : splits) {
            for (const auto& [mu, nu, gmn] : pairs) {
                Rational lhs1 = src.closed_value(sp.first, with(s1, {a, b, mu}));
                if (lhs1 != 0) {
                    Rational lhs2 = src.closed_value(sp.second, with(s2, {c, d, nu}));
                    if (lhs2 != 0) {
                        Rational t = gmn * lhs1 * lhs2;
                        acc += t;
                        rep.witness_terms.push_back(
                            {closed_key_str({sp.first, with(s1, {a, b, mu})}) + " * " +
                                 closed_key_str({sp.second, with(s2, {c, d, nu})}),
                             t});
                    }
                }
                Rational rhs1 = src.closed_value(sp.first, with(s1, {a, d, mu}));
                if (rhs1 != 0) {
                    Rational rhs2 = src.closed_value(sp.second, with(s2, {b, c, nu}));
                    if (rhs2 != 0) {
                        Rational t = gmn * rhs1 * rhs2;
                        acc -= t;
                        rep.witness_terms.push_back(
                            {closed_key_str({sp.first, with(s1, {a, d, mu})}) + " * " +
                                 closed_key_str({sp.second, with(s2, {b, c, nu})}),
                             -t});
                    }
                }
            }
        }
    });
    rep.residual = acc;
    if (rep.residual == 0)
        rep.witness_terms.clear();
    return rep;
}

namespace {

struct OpenTermRecorder {
    std::vector<std::pair<std::string, Rational>>& sink;
    void operator()(const std::string& what, const Rational& contribution) const {
        if (contribution != 0)
            sink.push_back({what, contribution});
    }
};

} // namespace

ResidualReport residual_open_interior(const Model& m, const ValueSource& src, int a, int b, int c,
                                      const Lattice& beta, int s_power,
                                      const std::vector<int>& tset) {
    ResidualReport rep;
    rep.relation = "open_wdvv_interior";
    rep.indices = {a, b, c};
    rep.beta = beta;
    rep.s_power = s_power;
    rep.t_multiset = tset;
    OpenTermRecorder rec{rep.witness_terms};

    int abs_a = rho_abs(m, a), abs_b = rho_abs(m, b), abs_c = rho_abs(m, c);
    Rational acc = 0;
    auto kpairs = kappa_pairs(m);
    auto mixed = splits_rel_abs(m.geom, beta);
    auto relrel = splits_rel_rel(m.geom, beta);

    for_subsets(tset, [&](const std::vector<int>& s1, const std::vector<int>& s2) {
        for (const auto& sp : mixed) {
            Rational wsgn = Rational(m.geom.ws_sign(sp.second));
            for (const auto& [mu, nu, gmn] : kpairs) {
                // sum 1: OGW(mu, a | S1) g GW(nu, c, b | S2)
                if (abs_b >= 0 && abs_c >= 0) {
                    Rational o = src.open_value(sp.first, s_power, with(s1, {mu, a}));
                    if (o != 0) {
                        Rational cl = src.closed_value(sp.second, with(s2, {nu, abs_c, abs_b}));
                        Rational t = wsgn * gmn * o * cl;
                        acc += t;
                        rec("sum1 " + open_key_str({sp.first, s_power, with(s1, {mu, a})}), t);
                    }
                }
                // sum 3: GW(mu, b, a | S1) g OGW(nu, c | S2)
                if (abs_a >= 0 && abs_b >= 0) {
                    Rational cl = src.closed_value(sp.second, with(s1, {mu, abs_b, abs_a}));
                    if (cl != 0) {
                        Rational o = src.open_value(sp.first, s_power, with(s2, {nu, c}));
                        Rational t = wsgn * gmn * cl * o;
                        acc -= t;
                        rec("sum3 " + open_key_str({sp.first, s_power, with(s2, {nu, c})}), -t);
                    }
                }
            }
        }
        for (const auto& sp : relrel) {
            for (int k1 = 0; k1 <= s_power; ++k1) {
                int k2 = s_power - k1;
                Rational w = binomial(s_power, k1);
                // sum 2: OGW_{k1+1}(a | S1) OGW_{k2}(c, b | S2)
                Rational o1 = src.open_value(sp.first, k1 + 1, with(s1, {a}));
                if (o1 != 0) {
                    Rational o2 = src.open_value(sp.second, k2, with(s2, {c, b}));
                    Rational t = w * o1 * o2;
                    acc -= t;
                    rec("sum2 " + open_key_str({sp.first, k1 + 1, with(s1, {a})}), -t);
                }
                // sum 4: OGW_{k1}(b, a | S1) OGW_{k2+1}(c | S2)
                Rational o3 = src.open_value(sp.first, k1, with(s1, {b, a}));
                if (o3 != 0) {
                    Rational o4 = src.open_value(sp.second, k2 + 1, with(s2, {c}));
                    Rational t = w * o3 * o4;
                    acc += t;
                    rec("sum4 " + open_key_str({sp.first, k1, with(s1, {b, a})}), t);
                }
            }
        }
    });
    rep.residual = acc;
    if (rep.residual == 0)
        rep.witness_terms.clear();
    return rep;
}

ResidualReport residual_open_boundary(const Model& m, const ValueSource& src, int a, int b,
                                      const Lattice& beta, int s_power,
                                      const std::vector<int>& tset) {
    ResidualReport rep;
    rep.relation = "open_wdvv_boundary";
    rep.indices = {a, b};
    rep.beta = beta;
    rep.s_power = s_power;
    rep.t_multiset = tset;
    OpenTermRecorder rec{rep.witness_terms};

    int abs_a = rho_abs(m, a), abs_b = rho_abs(m, b);
    Rational acc = 0;
    auto kpairs = kappa_pairs(m);
    auto mixed = splits_rel_abs(m.geom, beta);
    auto relrel = splits_rel_rel(m.geom, beta);

    for_subsets(tset, [&](const std::vector<int>& s1, const std::vector<int>& s2) {
        for (const auto& sp : relrel) {
            for (int k1 = 0; k1 <= s_power; ++k1) {
                int k2 = s_power - k1;
                Rational w = binomial(s_power, k1);
                // left side: -OGW_{k1+1}(a | S1) OGW_{k2+1}(b | S2)
                Rational o1 = src.open_value(sp.first, k1 + 1, with(s1, {a}));
                if (o1 != 0) {
                    Rational o2 = src.open_value(sp.second, k2 + 1, with(s2, {b}));
                    Rational t = w * o1 * o2;
                    acc -= t;
                    rec("lhs " + open_key_str({sp.first, k1 + 1, with(s1, {a})}), -t);
                }
                // second right term: OGW_{k1}(b, a | S1) OGW_{k2+2}(S2)
                Rational o3 = src.open_value(sp.first, k1, with(s1, {b, a}));
                if (o3 != 0) {
                    Rational o4 = src.open_value(sp.second, k2 + 2, s2);
                    Rational t = w * o3 * o4;
                    acc += t;
                    rec("rhs2 " + open_key_str({sp.first, k1, with(s1, {b, a})}), t);
                }
            }
        }
        if (abs_a >= 0 && abs_b >= 0) {
            for (const auto& sp : mixed) {
                Rational wsgn = Rational(m.geom.ws_sign(sp.second));
                for (const auto& [mu, nu, gmn] : kpairs) {
                    Rational cl = src.closed_value(sp.second, with(s1, {mu, abs_b, abs_a}));
                    if (cl != 0) {
                        Rational o = src.open_value(sp.first, s_power + 1, with(s2, {nu}));
                        Rational t = wsgn * gmn * cl * o;
                        acc -= t;
                        rec("rhs1 " + open_key_str({sp.first, s_power + 1, with(s2, {nu})}), -t);
                    }
                }
            }
        }
    });
    rep.residual = acc;
    if (rep.residual == 0)
        rep.witness_terms.clear();
    return rep;
}

namespace {

// nondecreasing index tuples of every size up to max_t
void enumerate_multisets(int max_index, int max_t,
                         const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        fn(cur);
        if ((int)cur.size() == max_t)
            return;
        for (int i = start; i <= max_index; ++i) {
            cur.push_back(i);
            rec(i);
            cur.pop_back();
        }
    };
    rec(0);
}

} // namespace

std::vector<ResidualReport> sweep_closed(const Model& m, const ValueSource& src,
                                         const SweepBounds& bounds, uint64_t* checked) {
    std::vector<ResidualReport> bad;
    int K = m.coh.K();
    auto betas = enumerate_abs_upto(m.geom, bounds.max_energy);
    for (const auto& beta : betas) {
        enumerate_multisets(K, bounds.max_t, [&](const std::vector<int>& tset) {
            for (int a = 0; a <= K; ++a)
                for (int b = a; b <= K; ++b)
                    for (int c = 0; c <= K; ++c)
                        for (int d = c; d <= K; ++d) {
                            if (std::make_pair(a, b) > std::make_pair(c, d))
                                continue;
                            ResidualReport r = residual_closed(m, src, a, b, c, d, beta, tset);
                            if (checked)
                                ++*checked;
                            if (r.residual != 0)
                                bad.push_back(std::move(r));
                        }
        });
    }
    return bad;
}

std::vector<ResidualReport> sweep_open(const Model& m, const ValueSource& src,
                                       const SweepBounds& bounds, uint64_t* checked) {
    std::vector<ResidualReport> bad;
    int K = m.coh.K();
    int N = m.coh.rel ? m.coh.rel->N : K;
    auto betas = enumerate_rel_upto(m.geom, bounds.max_energy);
    for (const auto& beta : betas) {
        enumerate_multisets(K, bounds.max_t, [&](const std::vector<int>& tset) {
            for (int s = 0; s <= bounds.max_s; ++s) {
                for (int a = 0; a <= N; ++a) {
                    for (int b = 0; b <= N; ++b) {
                        for (int c = 0; c <= N; ++c) {
                            ResidualReport r =
                                residual_open_interior(m, src, a, b, c, beta, s, tset);
                            if (checked)
                                ++*checked;
                            if (r.residual != 0)
                                bad.push_back(std::move(r));
                        }
                        if (a <= b) {
                            ResidualReport r = residual_open_boundary(m, src, a, b, beta, s, tset);
                            if (checked)
                                ++*checked;
                            if (r.residual != 0)
                                bad.push_back(std::move(r));
                        }
                    }
                }
            }
        });
    }
    return bad;
}

AxiomSuiteReport axiom_suite(const Model& m, const std::vector<std::pair<OpenKey, Rational>>& table,
                             bool pointlike) {
    AxiomSuiteReport rep;
    const Geometry& g = m.geom;
    const CohomologyModel& coh = m.coh;
    std::unordered_map<OpenKey, Rational, OpenKeyHash> map;
    for (const auto& [key, value] : table)
        map[key] = value;
    for (const auto& [key, value] : table) {
        ++rep.checked;
        // canonical form
        std::vector<int> sorted = sort_constraints(coh, key.cons);
        if (sorted != key.cons) {
            rep.violations.push_back(open_key_str(key) + ": constraints are not canonical");
            continue;
        }
        // degree gate
        long long total = 0;
        for (int c : key.cons)
            total += coh.deg(c);
        bool deg_ok =
            g.n - 3 + g.maslov(key.beta) + 2LL * key.ell() + key.k == (long long)key.k * g.n + total;
        if (value != 0 && !deg_ok)
            rep.violations.push_back(open_key_str(key) + ": nonzero value violates the degree gate");
        // energy gate
        if (value != 0 && !is_zero(key.beta) && g.energy(key.beta, LatticeKind::rel) < g.hbar)
            rep.violations.push_back(open_key_str(key) + ": nonzero value below the energy gap");
        // zero / fundamental-class / point-like values
        if (auto ax = open_axiom_value(m, key, pointlike)) {
            if (value != *ax)
                rep.violations.push_back(open_key_str(key) + ": axiom value " +
                                         rational_str(*ax) + " but table has " +
                                         rational_str(value));
        }
        // divisor companion
        if (key.ell() >= 1 && coh.deg(key.cons.back()) == 2) {
            OpenKey rest{key.beta, key.k,
                         std::vector<int>(key.cons.begin(), key.cons.end() - 1)};
            auto it = map.find(rest);
            if (it == map.end()) {
                ++rep.uncheckable;
            } else {
                Rational expect =
                    g.divisor_integral(key.beta, LatticeKind::rel, key.cons.back()) * it->second;
                if (expect != value)
                    rep.violations.push_back(open_key_str(key) + ": divisor axiom expects " +
                                             rational_str(expect) + " but table has " +
                                             rational_str(value));
            }
        }
    }
    return rep;
}

CampaignReport vanishing_campaign(const Model& m, const std::string& mode,
                                  const Rational& energy_bound, int lmax, int kmax) {
    CampaignReport rep;
    rep.mode = mode;
    // extract (n1, n2) from the product preset name
    if (m.name.rfind("cpxcp:", 0) != 0)
        throw Error(ErrorKind::config, "vanishing campaign runs on cpxcp:n1,n2 presets");
    int n1 = 0, n2 = 0;
    {
        std::string rest = m.name.substr(6);
        auto comma = rest.find(',');
        n1 = std::stoi(rest.substr(0, comma));
        n2 = std::stoi(rest.substr(comma + 1));
    }
    const Geometry& g = m.geom;
    int n = g.n;
    bool pointlike = false;
    std::ostringstream cert;

    if (mode == "mod6") {
        if (n1 % 6 != 5 || n2 % 6 != 5)
            throw Error(ErrorKind::config,
                        "mod6 campaign requires n1, n2 congruent to 5 mod 6; got " +
                            std::to_string(n1) + "," + std::to_string(n2));
        if ((n1 + 1) % 3 != 0 || (n2 + 1) % 3 != 0 || (n - 1) % 3 != 0 ||
            ((n1 + n2 - 3) % 3 + 3) % 3 == 0)
            throw Error(ErrorKind::internal, "mod-3 certificate arithmetic failed");
        cert << "pure-boundary degree equation " << (n - 3)
             << " + " << (n1 + 1) << "a + " << (n2 + 1) << "b = k*" << (n - 1)
             << ": right side is divisible by 3, left side is " << ((n - 3) % 3)
             << " mod 3 for every (a,b); no solutions. One-interior entries need the odd number "
             << (n - 1) << " to equal an even constraint degree; none exist.";
    } else if (mode == "pointlike") {
        pointlike = true;
        if (n % 2 != 0)
            throw Error(ErrorKind::config, "point-like campaign requires even dimension");
        cert << "pure-boundary entries with k >= 2 vanish by the point-like rule; for k <= 1 and "
             << "a > 0 the degree equation forces " << (2 * n1 + n2 - 2) << " <= " << (n - 1)
             << " (and " << (n1 + 2 * n2 - 2) << " <= " << (n - 1)
             << " for b > 0), impossible since n1, n2 > 1. One-interior entries fail parity.";
    } else {
        throw Error(ErrorKind::config, "unknown campaign mode '" + mode + "' (mod6|pointlike)");
    }
    rep.certificate = cert.str();

    // per-key elimination scan of the declared initial shapes
    auto betas = enumerate_rel_upto(g, energy_bound);
    for (const auto& beta : betas) {
        if (is_zero(beta))
            continue;
        // pure boundary: k is determined by the degree equation when n > 1
        ++rep.initial_candidates;
        long long num = n - 3 + g.maslov(beta);
        long long den = n - 1;
        if (num >= 0 && num % den == 0) {
            long long k = num / den;
            bool killed = pointlike && k >= 2; // the point-like rule absorbs k >= 2
            if (!killed) {
                ++rep.satisfiable_initial;
                rep.satisfiable_details.push_back("pure-boundary beta=" + lattice_str(beta) +
                                                  " k=" + std::to_string(k));
            }
        }
        // one interior: parity kills every candidate in even dimension
        for (int i = 0; i <= m.coh.K(); ++i) {
            ++rep.initial_candidates;
            if (n - 3 + g.maslov(beta) + 2 == m.coh.deg(i)) {
                ++rep.satisfiable_initial;
                rep.satisfiable_details.push_back("one-interior beta=" + lattice_str(beta) +
                                                  " i=" + std::to_string(i));
            }
        }
    }
    if (mode == "mod6") {
        // the certificate covers all (a,b,k); cross-check the scan agreed
        if (rep.satisfiable_initial != 0)
            throw Error(ErrorKind::internal, "mod-3 certificate contradicted by the scan");
    }

    // compute every in-range key and assert vanishing
    ClosedEngine closed(m);
    EngineOptions opts;
    opts.mode = Mode::theorem_a;
    opts.pointlike = pointlike;
    OpenEngine open(m, closed, opts);
    for (const auto& beta : betas) {
        if (is_zero(beta))
            continue;
        enumerate_multisets(m.coh.K(), lmax, [&](const std::vector<int>& cons) {
            long long total = 0;
            for (int c : cons)
                total += m.coh.deg(c);
            long long rhs = n - 3 + g.maslov(beta) + 2LL * (long long)cons.size() - total;
            // k (n-1) = rhs
            if (rhs < 0 || rhs % (n - 1) != 0) {
                ++rep.gate_killed;
                return;
            }
            long long k = rhs / (n - 1);
            if (k > kmax) {
                ++rep.gate_killed;
                return;
            }
            OpenKey key{beta, (int)k, sort_constraints(m.coh, cons)};
            Rational v = open.compute_key(key);
            ++rep.keys_checked;
            rep.table.push_back({key, v});
            if (v != 0) {
                ++rep.keys_nonzero;
                rep.nonzero_details.push_back(open_key_str(key) + " = " + rational_str(v));
            }
        });
    }
    rep.ok = rep.satisfiable_initial == 0 && rep.keys_nonzero == 0;
    return rep;
}

} // namespace ogw
