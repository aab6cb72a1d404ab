#include "ogw/initial_data.hpp"

#include <algorithm>

namespace ogw {

void check_closed_initial_shape(const Geometry& g, const CohomologyModel& coh,
                                const Lattice& beta, const std::vector<int>& cons) {
    if (cons.size() != 3)
        throw Error(ErrorKind::config, "closed initial entry must have exactly 3 constraints");
    int min_deg = coh.deg(cons[0]);
    long long total = 0;
    for (int c : cons) {
        min_deg = std::min(min_deg, coh.deg(c));
        total += coh.deg(c);
    }
    if (min_deg != 2)
        throw Error(ErrorKind::config,
                    "closed initial entry needs a degree-2 constraint (|gamma_3| = 2)");
    long long lhs = 2LL * g.n + 2 * g.chern(beta);
    if (lhs != total)
        throw Error(ErrorKind::config, "closed initial entry violates 2n + 2c1(beta) = sum|gamma|");
}

void check_pure_boundary_shape(const Geometry& g, const Lattice& beta, int k) {
    if (k < 0)
        throw Error(ErrorKind::config, "pure-boundary entry needs k >= 0");
    long long lhs = g.n - 3 + g.maslov(beta) + k;
    long long rhs = (long long)k * g.n;
    if (lhs != rhs)
        throw Error(ErrorKind::config,
                    "pure-boundary entry violates n - 3 + mu(beta) + k = k n at beta=" +
                        lattice_str(beta) + " k=" + std::to_string(k));
}

void check_one_interior_shape(const Geometry& g, const CohomologyModel& coh, const Lattice& beta,
                              int i) {
    if (i < 0 || i > coh.K())
        throw Error(ErrorKind::config, "one-interior entry constraint must be an absolute index");
    long long lhs = g.n - 3 + g.maslov(beta) + 2;
    if (lhs != coh.deg(i))
        throw Error(ErrorKind::config,
                    "one-interior entry violates n - 3 + mu(beta) + 2 = |Gamma_i| at beta=" +
                        lattice_str(beta) + " i=" + std::to_string(i));
}

void ClosedInitialSet::add(const Geometry& g, const CohomologyModel& coh, const Lattice& beta,
                           std::vector<int> cons, const Rational& value) {
    check_closed_initial_shape(g, coh, beta, cons);
    ClosedKey key{beta, sort_constraints(coh, std::move(cons))};
    auto it = values.find(key);
    if (it != values.end() && it->second != value)
        throw Error(ErrorKind::config, "conflicting closed initial values for one key");
    values[key] = value;
}

std::optional<Rational> ClosedInitialSet::lookup(const ClosedKey& key) const {
    auto it = values.find(key);
    if (it == values.end())
        return std::nullopt;
    return it->second;
}

void OpenInitialSet::add_pure_boundary(const Geometry& g, const Lattice& beta, int k,
                                       const Rational& value) {
    check_pure_boundary_shape(g, beta, k);
    OpenKey key{beta, k, {}};
    auto it = pure_boundary.find(key);
    if (it != pure_boundary.end() && it->second != value)
        throw Error(ErrorKind::config, "conflicting pure-boundary initial values for one key");
    pure_boundary[key] = value;
}

void OpenInitialSet::add_one_interior(const Geometry& g, const CohomologyModel& coh,
                                      const Lattice& beta, int i, const Rational& value) {
    check_one_interior_shape(g, coh, beta, i);
    OpenKey key{beta, 0, {i}};
    auto it = one_interior.find(key);
    if (it != one_interior.end() && it->second != value)
        throw Error(ErrorKind::config, "conflicting one-interior initial values for one key");
    one_interior[key] = value;
}

void OpenInitialSet::set_minimal_pair(const Geometry& g, const CohomologyModel& coh,
                                      const Lattice& beta_prime, std::vector<int> cons,
                                      const Rational& value) {
    if (value == 0)
        throw Error(ErrorKind::config, "minimal pair value must be nonzero");
    if (g.energy(beta_prime, LatticeKind::rel) != g.hbar)
        throw Error(ErrorKind::config, "minimal pair requires omega(beta') = hbar");
    if (cons.empty()) {
        // An ell'=0 pair carries no usable relation; the degree axiom limits
        // it to mu(beta') = 3 - n, and it is rejected outright.
        if (g.maslov(beta_prime) != 3 - g.n)
            throw Error(ErrorKind::config, "ell'=0 minimal pair requires mu(beta') = 3 - n");
        throw Error(ErrorKind::config, "ell'=0 minimal pairs give no reconstruction; not supported");
    }
    for (int c : cons) {
        if (c < 0 || c > coh.K())
            throw Error(ErrorKind::config, "minimal pair constraints must be absolute indices");
        if (coh.deg(c) == 0)
            throw Error(ErrorKind::config,
                        "minimal pair with a unit constraint is killed by the fundamental class");
        if (cons.size() >= 2 && coh.deg(c) == 2)
            throw Error(ErrorKind::config,
                        "degree-2 minimal pair constraint contradicts minimality (divisor)");
    }
    if (cons.size() == 1 && coh.deg(cons[0]) != 2 * g.n)
        throw Error(ErrorKind::config, "ell'=1 minimal pair requires |Gamma_{i_1}| = 2n");
    // the declared value must itself satisfy the degree equation
    long long total = 0;
    for (int c : cons)
        total += coh.deg(c);
    if (g.n - 3 + g.maslov(beta_prime) + 2 * (long long)cons.size() != total)
        throw Error(ErrorKind::config, "minimal pair violates the open degree equation");
    minimal_pair = MinimalPair{beta_prime, sort_constraints(coh, std::move(cons)), value};
}

std::optional<Rational> OpenInitialSet::lookup(const OpenKey& key) const {
    const auto& table = key.cons.empty() ? pure_boundary : one_interior;
    auto it = table.find(key);
    if (it == table.end())
        return std::nullopt;
    return it->second;
}

} // namespace ogw
