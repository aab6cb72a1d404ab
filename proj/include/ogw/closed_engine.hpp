#pragma once

#include "ogw/model.hpp"

#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>

namespace ogw {

// Genus-0 closed invariants from the three-point initial set, reconstructed
// through the associativity relation. Values are stored unsigned; the
// (-1)^{w_s} factor is applied by callers where the mixed relations need it.
class ClosedEngine {
  public:
    explicit ClosedEngine(const Model& model);

    ClosedKey canonical(const Lattice& beta, std::vector<int> cons) const;
    OrderTuple order_of(const ClosedKey& key) const;

    Rational compute(const Lattice& beta, std::vector<int> cons);
    Rational compute_key(const ClosedKey& key);

    // Axiom-determined value, when one applies (degree gate, zero,
    // fundamental class, energy gap, cone). No recursion, no divisor.
    std::optional<Rational> axiom_value(const ClosedKey& key) const;

    // Nonzero entries of the inverse pairing, as (mu, nu, g^{mu nu}).
    const std::vector<std::tuple<int, int, Rational>>& pairing_pairs() const {
        return g_inv_pairs_;
    }

    size_t memo_size() const;
    const Model& model() const { return model_; }

  private:
    std::optional<Rational> fast_value(const ClosedKey& key) const; // axiom/registry/memo
    Rational compute_bounded(const ClosedKey& key, const OrderTuple* bound);
    Rational reduce(const ClosedKey& key);
    Rational product_term(const ClosedKey& f1, const ClosedKey& f2, const OrderTuple& bound);

    const Model& model_;
    std::vector<std::tuple<int, int, Rational>> g_inv_pairs_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<ClosedKey, Rational, ClosedKeyHash> memo_;
};

} // namespace ogw
