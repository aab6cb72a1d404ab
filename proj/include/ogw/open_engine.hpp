#pragma once

#include "ogw/closed_engine.hpp"
#include "ogw/model.hpp"

#include <atomic>
#include <functional>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace ogw {

enum class Mode { theorem_a, theorem_b };

struct EngineOptions {
    Mode mode = Mode::theorem_a;
    // Point-like rule: pure-boundary coefficients with k >= 2 vanish
    // (requires even complex dimension).
    bool pointlike = false;
    bool record_traces = false;
};

// One factor of a derivation term: an open key, a closed key, or a constant.
struct FactorRef {
    enum class Kind { open, closed, constant };
    Kind kind = Kind::constant;
    OpenKey open_key;
    ClosedKey closed_key;
    Rational constant;

    static FactorRef open(OpenKey k) {
        FactorRef f;
        f.kind = Kind::open;
        f.open_key = std::move(k);
        return f;
    }
    static FactorRef closed(ClosedKey k) {
        FactorRef f;
        f.kind = Kind::closed;
        f.closed_key = std::move(k);
        return f;
    }
    static FactorRef from_const(Rational c) {
        FactorRef f;
        f.kind = Kind::constant;
        f.constant = std::move(c);
        return f;
    }
};

struct RelTerm {
    Rational coeff;
    std::vector<FactorRef> factors;
};

// A derivation record: value = pre_scale * sum of coeff * product(factors).
struct Relation {
    std::string rule;
    Rational pre_scale{1};
    std::vector<RelTerm> terms;
};

struct DescentStats {
    std::atomic<uint64_t> edges_checked{0};
    std::atomic<uint64_t> aux_edges{0};
};

// Axiom-determined open value (degree/energy gates, zero and fundamental
// class, cone rule, point-like rule) on a canonical key; no recursion.
std::optional<Rational> open_axiom_value(const Model& model, const OpenKey& key, bool pointlike);

// Wall-crossing normalization without an engine instance.
std::pair<OpenKey, Rational> normalize_open_key(const Model& model, const Lattice& beta, int k,
                                                std::vector<int> raw_cons);

// Open invariants through the reduction relations of the structure equations,
// memoized over canonical keys.
class OpenEngine {
  public:
    OpenEngine(const Model& model, ClosedEngine& closed, EngineOptions opts);

    // Wall-crossing normalization: strips diamond insertions (each one raises
    // k and contributes a factor -1) and sorts the rest canonically.
    std::pair<OpenKey, Rational> normalize(const Lattice& beta, int k,
                                           std::vector<int> raw_cons) const;
    OrderTuple order_of(const OpenKey& key) const;

    // Axiom-determined value when one applies; no recursion.
    std::optional<Rational> axiom_value(const OpenKey& key) const;

    Rational compute(const Lattice& beta, int k, std::vector<int> raw_cons);
    Rational compute_key(const OpenKey& key);

    // Warm-start from a previously saved table (idempotent inserts).
    void seed_memo(const std::vector<std::pair<OpenKey, Rational>>& entries);

    // The derivation record for a key that requires a reduction (used for
    // traces and for table-backed replay). Throws if the key is axiomatic.
    Relation relation_for(const OpenKey& key);

    const std::unordered_map<OpenKey, Rational, OpenKeyHash>& memo() const { return memo_; }
    const std::unordered_map<OpenKey, Relation, OpenKeyHash>& traces() const { return traces_; }
    const DescentStats& stats() const { return stats_; }
    const Model& model() const { return model_; }
    ClosedEngine& closed() { return closed_; }
    const EngineOptions& options() const { return opts_; }

  private:
    enum class Rule { interior, boundary, pure_boundary };
    friend struct OpenEngineDetail;

    Relation build_relation(const OpenKey& key, Rule rule) const;
    std::optional<Rational> fast_value(const OpenKey& key) const;

    const Model& model_;
    ClosedEngine& closed_;
    EngineOptions opts_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<OpenKey, Rational, OpenKeyHash> memo_;
    std::unordered_map<OpenKey, Relation, OpenKeyHash> traces_;
    DescentStats stats_;
};

} // namespace ogw
