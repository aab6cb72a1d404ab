#include "ogw/open_engine.hpp"

#include <algorithm>
#include <unordered_set>

namespace ogw {

namespace {

struct Ctx {
    std::unordered_set<OpenKey, OpenKeyHash> in_progress;
};

// Guard for the in-progress set; re-entry means the reduction does not descend.
struct ProgressGuard {
    Ctx& ctx;
    const OpenKey& key;
    ProgressGuard(Ctx& c, const OpenKey& k) : ctx(c), key(k) {
        if (!ctx.in_progress.insert(key).second)
            throw Error(ErrorKind::internal,
                        "open recursion revisited an in-progress key (data is inconsistent "
                        "with the declared reductions)");
    }
    ~ProgressGuard() { ctx.in_progress.erase(key); }
};

} // namespace

// The per-call recursion context lives on the public entry points' stacks;
// private helpers receive it explicitly so parallel callers never share state.
struct OpenEngineDetail {
    static Rational compute(OpenEngine& e, const OpenKey& key, Ctx& ctx, const OrderTuple* bound,
                            bool via_aux);
    static Rational eval_relation(OpenEngine& e, const Relation& rel, Ctx& ctx,
                                  const OrderTuple& bound, const Rational& parent_energy,
                                  bool allow_aux);
    static Rational compute_aux(OpenEngine& e, const OpenKey& key, Ctx& ctx,
                                const OrderTuple& bound);
    static Rational reduce(OpenEngine& e, const OpenKey& key, Ctx& ctx);
};

OpenEngine::OpenEngine(const Model& model, ClosedEngine& closed, EngineOptions opts)
    : model_(model), closed_(closed), opts_(opts) {
    if (!model_.has_open())
        throw Error(ErrorKind::config, "geometry '" + model_.name + "' has no relative structure");
    if (opts_.pointlike && model_.geom.n % 2 != 0)
        throw Error(ErrorKind::config, "point-like mode requires even complex dimension");
    if (opts_.mode == Mode::theorem_b) {
        if (!model_.open_init.minimal_pair)
            throw Error(ErrorKind::config, "theorem-B mode requires a registered minimal pair");
        if (!model_.geom.sl_is_kernel)
            throw Error(ErrorKind::config,
                        "theorem-B mode requires the S_L = ker(omega+mu) configuration flag");
        for (const auto& [key, value] : model_.open_init.pure_boundary)
            if (key.k >= 2)
                throw Error(ErrorKind::config,
                            "theorem-B mode restricts pure-boundary initial data to k <= 1");
    }
}

std::pair<OpenKey, Rational> normalize_open_key(const Model& model, const Lattice& beta, int k,
                                                std::vector<int> raw_cons) {
    const RelativeBasis& rel = *model.coh.rel;
    OpenKey key;
    key.beta = beta;
    key.k = k;
    Rational sign = 1;
    for (int c : raw_cons) {
        if (c < 0 || c > rel.N)
            throw Error(ErrorKind::config, "open constraint index out of range");
        if (c == rel.diamond) {
            key.k += 1;
            sign = -sign;
        } else {
            key.cons.push_back(c);
        }
    }
    key.cons = sort_constraints(model.coh, std::move(key.cons));
    return {key, sign};
}

std::pair<OpenKey, Rational> OpenEngine::normalize(const Lattice& beta, int k,
                                                   std::vector<int> raw_cons) const {
    return normalize_open_key(model_, beta, k, std::move(raw_cons));
}

OrderTuple OpenEngine::order_of(const OpenKey& key) const {
    OrderTuple t;
    t.energy = model_.geom.energy(key.beta, LatticeKind::rel);
    t.k = key.k;
    t.ell = key.ell();
    t.degs.reserve(key.cons.size());
    for (int c : key.cons)
        t.degs.push_back(model_.coh.deg(c));
    return t;
}

std::optional<Rational> open_axiom_value(const Model& model, const OpenKey& key, bool pointlike) {
    const Geometry& g = model.geom;
    const CohomologyModel& coh = model.coh;
    int ell = key.ell();

    long long total = 0;
    bool has_unit = false;
    for (int c : key.cons) {
        total += coh.deg(c);
        if (c == coh.basis.unit_index)
            has_unit = true;
    }
    // degree axiom: n - 3 + mu(beta) + 2 ell + k = k n + sum |gamma_i|
    if (g.n - 3 + g.maslov(key.beta) + 2LL * ell + key.k != (long long)key.k * g.n + total)
        return Rational(0);

    if (is_zero(key.beta)) {
        if (ell == 1 && key.k == 1 && has_unit)
            return Rational(-1);
        // (ell,k) = (2,0) gives P_R(gamma_1 ^ gamma_2), which vanishes on
        // absolute classes; canonical keys carry only those.
        return Rational(0);
    }
    if (!g.effective(key.beta)) {
        if (g.cone_vanishing)
            return Rational(0);
        throw Error(ErrorKind::config,
                    "open degree " + lattice_str(key.beta) + " outside the effective cone");
    }
    if (g.energy(key.beta, LatticeKind::rel) < g.hbar)
        return Rational(0);
    if (pointlike && ell == 0 && key.k >= 2)
        return Rational(0);
    if (has_unit)
        return Rational(0); // fundamental class, beta != 0
    return std::nullopt;
}

std::optional<Rational> OpenEngine::axiom_value(const OpenKey& key) const {
    return open_axiom_value(model_, key, opts_.pointlike);
}

std::optional<Rational> OpenEngine::fast_value(const OpenKey& key) const {
    if (auto v = axiom_value(key))
        return v;
    if (auto v = model_.open_init.lookup(key))
        return v;
    std::shared_lock lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end())
        return it->second;
    return std::nullopt;
}

Rational OpenEngine::compute(const Lattice& beta, int k, std::vector<int> raw_cons) {
    auto [key, sign] = normalize(beta, k, std::move(raw_cons));
    return sign * compute_key(key);
}

Rational OpenEngine::compute_key(const OpenKey& key) {
    Ctx ctx;
    return OpenEngineDetail::compute(*this, key, ctx, nullptr, false);
}

void OpenEngine::seed_memo(const std::vector<std::pair<OpenKey, Rational>>& entries) {
    std::unique_lock lock(mutex_);
    for (const auto& [key, value] : entries)
        memo_.emplace(key, value);
}

Rational OpenEngineDetail::compute(OpenEngine& e, const OpenKey& key, Ctx& ctx,
                                   const OrderTuple* bound, bool via_aux) {
    if (auto v = e.fast_value(key))
        return *v;
    if (bound && !via_aux) {
        OrderTuple mine = e.order_of(key);
        e.stats_.edges_checked.fetch_add(1, std::memory_order_relaxed);
        if (!(mine < *bound))
            throw Error(ErrorKind::internal, "open recursion order violation at " + mine.str() +
                                                 " under bound " + bound->str());
    }
    ProgressGuard guard(ctx, key);
    Rational v = reduce(e, key, ctx);
    {
        std::unique_lock lock(e.mutex_);
        e.memo_.emplace(key, v);
    }
    return v;
}

Rational OpenEngineDetail::reduce(OpenEngine& e, const OpenKey& key, Ctx& ctx) {
    const CohomologyModel& coh = e.model_.coh;
    int ell = key.ell();
    OrderTuple bound = e.order_of(key);

    auto remember = [&](const char* rule, std::function<Relation()> make) {
        if (e.opts_.record_traces) {
            Relation rel = make();
            std::unique_lock lock(e.mutex_);
            e.traces_.emplace(key, std::move(rel));
        }
        (void)rule;
    };

    if (ell >= 1 && coh.deg(key.cons.back()) == 2) {
        int div = key.cons.back();
        OpenKey rest{key.beta, key.k, std::vector<int>(key.cons.begin(), key.cons.end() - 1)};
        Rational pair = e.model_.geom.divisor_integral(key.beta, LatticeKind::rel, div);
        remember("divisor", [&] {
            Relation r;
            r.rule = "divisor";
            r.terms.push_back({pair, {FactorRef::open(rest)}});
            return r;
        });
        if (pair == 0)
            return Rational(0);
        return pair * compute(e, rest, ctx, &bound, false);
    }

    if (ell >= 2) {
        Relation rel = e.build_relation(key, OpenEngine::Rule::interior);
        remember("interior", [&] { return rel; });
        return eval_relation(e, rel, ctx, bound, bound.energy, false);
    }
    if (ell == 1 && key.k >= 1) {
        Relation rel = e.build_relation(key, OpenEngine::Rule::boundary);
        remember("boundary", [&] { return rel; });
        return eval_relation(e, rel, ctx, bound, bound.energy, false);
    }
    if (ell == 0 && key.k >= 2) {
        if (e.opts_.mode == Mode::theorem_b) {
            Relation rel = e.build_relation(key, OpenEngine::Rule::pure_boundary);
            remember("pure_boundary", [&] { return rel; });
            return eval_relation(e, rel, ctx, bound, bound.energy, true);
        }
        throw Error(ErrorKind::missing_initial,
                    "missing initial datum: pure-boundary invariant at beta=" +
                        lattice_str(key.beta) + " k=" + std::to_string(key.k));
    }
    if (ell == 0)
        throw Error(ErrorKind::missing_initial,
                    "missing initial datum: pure-boundary invariant at beta=" +
                        lattice_str(key.beta) + " k=" + std::to_string(key.k));
    throw Error(ErrorKind::missing_initial,
                "missing initial datum: one-interior invariant at beta=" + lattice_str(key.beta) +
                    " constraint '" + coh.basis.labels[key.cons[0]] + "'");
}

Rational OpenEngineDetail::compute_aux(OpenEngine& e, const OpenKey& key, Ctx& ctx,
                                       const OrderTuple& bound) {
    if (auto v = e.fast_value(key))
        return *v;
    // Auxiliary sub-recursion of the pure-boundary step: the key sits one
    // energy quantum above the target, so it is resolved through the boundary
    // relation whose right-hand side stays strictly below the caller's bound.
    if (key.k < 1 || key.ell() < 1 || e.model_.coh.deg(key.cons.back()) <= 2)
        throw Error(ErrorKind::internal, "unexpected auxiliary key shape");
    e.stats_.aux_edges.fetch_add(1, std::memory_order_relaxed);
    ProgressGuard guard(ctx, key);
    Relation rel = e.build_relation(key, OpenEngine::Rule::boundary);
    if (e.opts_.record_traces) {
        std::unique_lock lock(e.mutex_);
        e.traces_.emplace(key, rel);
    }
    Rational v = eval_relation(e, rel, ctx, bound, bound.energy, false);
    {
        std::unique_lock lock(e.mutex_);
        e.memo_.emplace(key, v);
    }
    return v;
}

Rational OpenEngineDetail::eval_relation(OpenEngine& e, const Relation& rel, Ctx& ctx,
                                         const OrderTuple& bound, const Rational& parent_energy,
                                         bool allow_aux) {
    Rational acc = 0;
    std::vector<const OpenKey*> pending;
    for (const RelTerm& term : rel.terms) {
        if (term.coeff == 0)
            continue;
        Rational prod = term.coeff;
        pending.clear();
        bool dead = false;
        // constants and closed factors first, then axiomatic opens
        for (const FactorRef& f : term.factors) {
            if (f.kind == FactorRef::Kind::constant) {
                if (f.constant == 0) {
                    dead = true;
                    break;
                }
                prod *= f.constant;
            } else if (f.kind == FactorRef::Kind::closed) {
                Rational v = e.closed_.compute_key(f.closed_key);
                if (v == 0) {
                    dead = true;
                    break;
                }
                prod *= v;
            }
        }
        if (dead)
            continue;
        for (const FactorRef& f : term.factors) {
            if (f.kind != FactorRef::Kind::open)
                continue;
            if (auto v = e.fast_value(f.open_key)) {
                if (*v == 0) {
                    dead = true;
                    break;
                }
                prod *= *v;
            } else {
                pending.push_back(&f.open_key);
            }
        }
        if (dead)
            continue;
        for (const OpenKey* kp : pending) {
            Rational v;
            Rational child_energy = e.model_.geom.energy(kp->beta, LatticeKind::rel);
            if (child_energy > parent_energy) {
                if (!allow_aux)
                    throw Error(ErrorKind::internal,
                                "reduction produced an above-energy child outside the "
                                "pure-boundary step");
                v = compute_aux(e, *kp, ctx, bound);
            } else {
                // energy contract: equal energy or a drop of at least hbar
                if (child_energy != parent_energy &&
                    child_energy > parent_energy - e.model_.geom.hbar)
                    throw Error(ErrorKind::internal, "child energy violates the hbar gap contract");
                v = compute(e, *kp, ctx, &bound, false);
            }
            if (v == 0) {
                prod = 0;
                break;
            }
            prod *= v;
        }
        acc += prod;
    }
    return rel.pre_scale * acc;
}

Relation OpenEngine::relation_for(const OpenKey& key) {
    const CohomologyModel& coh = model_.coh;
    int ell = key.ell();
    if (axiom_value(key))
        throw Error(ErrorKind::config, "relation_for: key is axiom-determined");
    if (ell >= 1 && coh.deg(key.cons.back()) == 2) {
        Relation r;
        r.rule = "divisor";
        OpenKey rest{key.beta, key.k, std::vector<int>(key.cons.begin(), key.cons.end() - 1)};
        Rational pair = model_.geom.divisor_integral(key.beta, LatticeKind::rel, key.cons.back());
        r.terms.push_back({pair, {FactorRef::open(rest)}});
        return r;
    }
    if (ell >= 2)
        return build_relation(key, Rule::interior);
    if (ell == 1 && key.k >= 1)
        return build_relation(key, Rule::boundary);
    if (ell == 0 && key.k >= 2 && opts_.mode == Mode::theorem_b)
        return build_relation(key, Rule::pure_boundary);
    throw Error(ErrorKind::config, "relation_for: key is an initial-value shape");
}

namespace {

// Iterate over all splits of `positions` into (S1, S2).
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
    v.insert(v.end(), extra);
    return v;
}

} // namespace

Relation OpenEngine::build_relation(const OpenKey& key, Rule rule) const {
    const CohomologyModel& coh = model_.coh;
    const Geometry& geom = model_.geom;

    // inverse-pairing entries restricted to indices <= kappa
    std::vector<std::tuple<int, int, Rational>> kpairs;
    int kap = coh.kappa();
    for (const auto& [mu, nu, gmn] : closed_.pairing_pairs())
        if (mu <= kap && nu <= kap)
            kpairs.push_back({mu, nu, gmn});

    auto open_ref = [&](const Lattice& b, int kk, std::vector<int> cons) {
        return FactorRef::open(OpenKey{b, kk, sort_constraints(coh, std::move(cons))});
    };
    auto closed_ref = [&](const Lattice& b, std::vector<int> cons) {
        return FactorRef::closed(closed_.canonical(b, std::move(cons)));
    };

    Relation out;

    if (rule == Rule::interior) {
        // factored constraint: lowest degree (canonical tail), highest index
        int ell = key.ell();
        int min_deg = coh.deg(key.cons.back());
        int fpos = 0;
        while (coh.deg(key.cons[fpos]) != min_deg)
            ++fpos;
        const Factorization& f = coh.factor_of(key.cons[fpos]);
        int apos = (fpos == 0) ? 1 : 0;
        int astar = key.cons[apos];
        std::vector<int> P;
        for (int i = 0; i < ell; ++i)
            if (i != fpos && i != apos)
                P.push_back(key.cons[i]);

        out.rule = "interior";
        out.pre_scale = Rational(1) / f.coeff;
        auto mixed = splits_rel_abs(geom, key.beta);
        auto relrel = splits_rel_rel(geom, key.beta);
        for_subsets(P, [&](const std::vector<int>& s1, const std::vector<int>& s2) {
            for (const auto& sp : mixed) {
                bool rel_zero = is_zero(sp.first);
                bool abs_zero = is_zero(sp.second);
                Rational wsgn = Rational(geom.ws_sign(sp.second));
                for (const auto& [mu, nu, gmn] : kpairs) {
                    // sum 1: open(mu,a*) x closed(b*,c*,nu); both parts nonzero
                    if (!rel_zero && !abs_zero)
                        out.terms.push_back(
                            {-wsgn * gmn,
                             {open_ref(sp.first, key.k, with(s1, {mu, astar})),
                              closed_ref(sp.second, with(s2, {f.dprime, f.d2, nu}))}});
                    // sum 3: closed(a*,b*,mu) x open(c*,nu); relative part nonzero
                    if (!rel_zero)
                        out.terms.push_back(
                            {wsgn * gmn,
                             {closed_ref(sp.second, with(s1, {astar, f.dprime, mu})),
                              open_ref(sp.first, key.k, with(s2, {f.d2, nu}))}});
                }
            }
            for (const auto& sp : relrel) {
                if (is_zero(sp.first) || is_zero(sp.second))
                    continue;
                for (int k1 = 0; k1 <= key.k; ++k1) {
                    int k2 = key.k - k1;
                    Rational w = binomial(key.k, k1);
                    out.terms.push_back({w,
                                         {open_ref(sp.first, k1 + 1, with(s1, {astar})),
                                          open_ref(sp.second, k2, with(s2, {f.d2, f.dprime}))}});
                    out.terms.push_back({-w,
                                         {open_ref(sp.first, k1, with(s1, {f.dprime, astar})),
                                          open_ref(sp.second, k2 + 1, with(s2, {f.d2}))}});
                }
            }
        });
        return out;
    }

    if (rule == Rule::boundary) {
        int ell = key.ell();
        int min_deg = coh.deg(key.cons.back());
        int fpos = 0;
        while (coh.deg(key.cons[fpos]) != min_deg)
            ++fpos;
        const Factorization& f = coh.factor_of(key.cons[fpos]);
        std::vector<int> P;
        for (int i = 0; i < ell; ++i)
            if (i != fpos)
                P.push_back(key.cons[i]);

        out.rule = "boundary";
        out.pre_scale = Rational(1) / f.coeff;
        auto mixed = splits_rel_abs(geom, key.beta);
        auto relrel = splits_rel_rel(geom, key.beta);
        for_subsets(P, [&](const std::vector<int>& s1, const std::vector<int>& s2) {
            for (const auto& sp : mixed) {
                if (is_zero(sp.second))
                    continue; // the abs-zero slot reconstructs the target
                Rational wsgn = Rational(geom.ws_sign(sp.second));
                for (const auto& [mu, nu, gmn] : kpairs)
                    out.terms.push_back(
                        {-wsgn * gmn,
                         {closed_ref(sp.second, with(s1, {f.dprime, f.d2, mu})),
                          open_ref(sp.first, key.k, with(s2, {nu}))}});
            }
            for (const auto& sp : relrel) {
                if (is_zero(sp.first) || is_zero(sp.second))
                    continue;
                for (int k1 = 0; k1 + 1 <= key.k; ++k1) {
                    int k2 = key.k - 1 - k1;
                    Rational w = binomial(key.k - 1, k1);
                    out.terms.push_back({-w,
                                         {open_ref(sp.first, k1 + 1, with(s1, {f.dprime})),
                                          open_ref(sp.second, k2 + 1, with(s2, {f.d2}))}});
                    out.terms.push_back({w,
                                         {open_ref(sp.first, k1, with(s1, {f.dprime, f.d2})),
                                          open_ref(sp.second, k2 + 2, s2)}});
                }
            }
        });
        return out;
    }

    // pure boundary (theorem B)
    const MinimalPair& pair = *model_.open_init.minimal_pair;
    int astar, bstar;
    std::vector<int> P;
    Rational scale = pair.value;
    if ((int)pair.cons.size() >= 2) {
        astar = pair.cons[0];
        bstar = pair.cons[1];
        P.assign(pair.cons.begin() + 2, pair.cons.end());
    } else {
        astar = -1;
        for (int i = 0; i < coh.basis.size(); ++i) {
            if (coh.deg(i) != 2)
                continue;
            if (geom.divisor_integral(pair.beta_prime, LatticeKind::rel, i) != 0) {
                astar = i;
                break;
            }
        }
        if (astar < 0)
            throw Error(ErrorKind::config,
                        "no divisor pairs nontrivially with the minimal-pair degree");
        bstar = pair.cons[0];
        scale = geom.divisor_integral(pair.beta_prime, LatticeKind::rel, astar) * pair.value;
    }

    out.rule = "pure_boundary";
    out.pre_scale = Rational(1) / scale;
    Lattice bhat = lattice_add(key.beta, pair.beta_prime);
    auto mixed = splits_rel_abs(geom, bhat);
    auto relrel = splits_rel_rel(geom, bhat);
    for_subsets(P, [&](const std::vector<int>& s1, const std::vector<int>& s2) {
        for (const auto& sp : mixed) {
            Rational wsgn = Rational(geom.ws_sign(sp.second));
            for (const auto& [mu, nu, gmn] : kpairs)
                out.terms.push_back({wsgn * gmn,
                                     {closed_ref(sp.second, with(s1, {astar, bstar, mu})),
                                      open_ref(sp.first, key.k - 1, with(s2, {nu}))}});
        }
        for (const auto& sp : relrel) {
            for (int k1 = 0; k1 + 2 <= key.k; ++k1) {
                int k2 = key.k - 2 - k1;
                Rational w = binomial(key.k - 2, k1);
                out.terms.push_back({w,
                                     {open_ref(sp.first, k1 + 1, with(s1, {astar})),
                                      open_ref(sp.second, k2 + 1, with(s2, {bstar}))}});
                // the (beta', beta, 0, full) slot carries the target itself
                if (!(k1 == 0 && s2.empty() && sp.first == pair.beta_prime))
                    out.terms.push_back({-w,
                                         {open_ref(sp.first, k1, with(s1, {astar, bstar})),
                                          open_ref(sp.second, k2 + 2, s2)}});
            }
        }
    });
    return out;
}

} // namespace ogw
