#pragma once

#include "ogw/cohomology.hpp"
#include "ogw/geometry.hpp"
#include "ogw/keys.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace ogw {

// Closed initial values: three-point invariants with one degree-2 constraint,
// 2n + 2 c1(beta) = |g1| + |g2| + |g3|. Keys are stored canonically.
struct ClosedInitialSet {
    std::unordered_map<ClosedKey, Rational, ClosedKeyHash> values;

    void add(const Geometry& g, const CohomologyModel& coh, const Lattice& beta,
             std::vector<int> cons, const Rational& value);
    std::optional<Rational> lookup(const ClosedKey& key) const;
};

struct MinimalPair {
    Lattice beta_prime;
    std::vector<int> cons; // ell' >= 1 constraint indices, canonical order
    Rational value;        // A != 0
};

// Open initial values per the two reconstruction modes. Pure-boundary entries
// are keyed by (beta, k); one-interior entries by (beta, i).
struct OpenInitialSet {
    std::unordered_map<OpenKey, Rational, OpenKeyHash> pure_boundary;
    std::unordered_map<OpenKey, Rational, OpenKeyHash> one_interior;
    std::optional<MinimalPair> minimal_pair;

    void add_pure_boundary(const Geometry& g, const Lattice& beta, int k, const Rational& value);
    void add_one_interior(const Geometry& g, const CohomologyModel& coh, const Lattice& beta,
                          int i, const Rational& value);
    void set_minimal_pair(const Geometry& g, const CohomologyModel& coh, const Lattice& beta_prime,
                          std::vector<int> cons, const Rational& value);
    std::optional<Rational> lookup(const OpenKey& key) const;
};

// Shape checks shared by file loading and preset generation. Throw with a
// precise diagnostic when the defining degree equation is violated.
void check_closed_initial_shape(const Geometry& g, const CohomologyModel& coh,
                                const Lattice& beta, const std::vector<int>& cons);
void check_pure_boundary_shape(const Geometry& g, const Lattice& beta, int k);
void check_one_interior_shape(const Geometry& g, const CohomologyModel& coh, const Lattice& beta,
                              int i);

} // namespace ogw
