#pragma once

#include "ogw/keys.hpp"
#include "ogw/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace ogw {

enum class LatticeKind { rel, abs };

// Degree lattices and topological functionals of the pair (X, L).
struct Geometry {
    int n = 0; // complex dimension
    int rel_rank = 0;
    int abs_rank = 0;
    std::vector<Rational> omega_rel;
    std::vector<Rational> omega_abs;
    std::vector<long long> maslov_cov; // on Pi
    std::vector<long long> chern_cov;  // on H_2(X)
    std::vector<std::vector<long long>> varpi_matrix; // rel_rank x abs_rank, nonnegative
    Rational hbar = 1;
    std::vector<int> ws; // Z/2 covector on H_2(X)
    bool cone_nonneg = true;     // effective cone = coordinatewise Z>=0
    bool cone_vanishing = true;  // degrees outside the cone carry value 0
    bool sl_is_kernel = false;   // S_L = ker(omega (+) mu) asserted (Theorem B)
    // divisor pairing covectors, keyed by degree-2 basis index
    std::map<int, std::vector<Rational>> divisor_rel;
    std::map<int, std::vector<Rational>> divisor_abs;

    Rational energy(const Lattice& beta, LatticeKind kind) const;
    long long maslov(const Lattice& beta_rel) const;
    long long chern(const Lattice& beta_abs) const;
    Lattice varpi(const Lattice& beta_abs) const;
    int ws_sign(const Lattice& beta_abs) const; // +1 or -1
    Rational divisor_integral(const Lattice& beta, LatticeKind kind, int basis_index) const;

    bool effective(const Lattice& beta) const; // coordinatewise cone test
    void validate() const;
};

struct DegreeSplit {
    Lattice first;  // lattice of the first part (kind-dependent)
    Lattice second; // lattice of the second part
};

// All (b1, b2) with b1 + b2 = beta, both effective, over the relative cone.
std::vector<DegreeSplit> splits_rel_rel(const Geometry& g, const Lattice& beta);
// All (b1, btilde) with b1 + varpi(btilde) = beta, b1 relative-effective and
// btilde absolute-effective. Unsolvable varpi preimages contribute nothing.
std::vector<DegreeSplit> splits_rel_abs(const Geometry& g, const Lattice& beta);
// All (b1, b2) in the absolute cone with b1 + b2 = beta.
std::vector<DegreeSplit> splits_abs_abs(const Geometry& g, const Lattice& beta);

// Effective absolute classes btilde with omega(varpi(btilde)) <= bound.
std::vector<Lattice> enumerate_abs_upto(const Geometry& g, const Rational& energy_bound);
// Effective relative classes with omega <= bound.
std::vector<Lattice> enumerate_rel_upto(const Geometry& g, const Rational& energy_bound);

} // namespace ogw
