#pragma once

#include "ogw/rational.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ogw {

// Degree classes live in small integer lattices (relative Pi or absolute H_2).
using Lattice = std::vector<long long>;

inline Lattice lattice_zero(size_t rank) { return Lattice(rank, 0); }

inline bool is_zero(const Lattice& v) {
    for (auto x : v)
        if (x != 0)
            return false;
    return true;
}

inline Lattice lattice_add(const Lattice& a, const Lattice& b) {
    Lattice r(a);
    for (size_t i = 0; i < r.size(); ++i)
        r[i] += b[i];
    return r;
}

inline Lattice lattice_sub(const Lattice& a, const Lattice& b) {
    Lattice r(a);
    for (size_t i = 0; i < r.size(); ++i)
        r[i] -= b[i];
    return r;
}

std::string lattice_str(const Lattice& v);

// Canonical identifier of one closed invariant: degree plus the sorted
// constraint multiset (basis indices, descending degree then descending index).
struct ClosedKey {
    Lattice beta;
    std::vector<int> cons;

    bool operator==(const ClosedKey& o) const { return beta == o.beta && cons == o.cons; }
};

// Canonical identifier of one open invariant. Constraint indices are always
// absolute (0..K); the diamond class is eliminated during normalization.
struct OpenKey {
    Lattice beta;
    int k = 0;
    std::vector<int> cons;

    int ell() const { return static_cast<int>(cons.size()); }
    bool operator==(const OpenKey& o) const { return beta == o.beta && k == o.k && cons == o.cons; }
};

// The recursion order on symbols: energy, then k, then ell, then the degree
// list compared at the rightmost differing slot.
struct OrderTuple {
    Rational energy;
    int k = 0;
    int ell = 0;
    std::vector<int> degs; // descending

    bool operator==(const OrderTuple& o) const {
        return energy == o.energy && k == o.k && ell == o.ell && degs == o.degs;
    }
    bool operator<(const OrderTuple& o) const {
        if (energy != o.energy)
            return energy < o.energy;
        if (k != o.k)
            return k < o.k;
        if (ell != o.ell)
            return ell < o.ell;
        // rightmost differing degree decides
        for (int i = ell - 1; i >= 0; --i) {
            if (degs[i] != o.degs[i])
                return degs[i] < o.degs[i];
        }
        return false;
    }
    bool operator<=(const OrderTuple& o) const { return *this < o || *this == o; }
    std::string str() const;
};

struct LatticeHash {
    size_t operator()(const Lattice& v) const {
        size_t h = 1469598103934665603ull;
        for (auto x : v) {
            h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

struct ClosedKeyHash {
    size_t operator()(const ClosedKey& k) const {
        size_t h = LatticeHash{}(k.beta);
        for (int c : k.cons)
            h = h * 1099511628211ull + static_cast<size_t>(c + 7);
        return h;
    }
};

struct OpenKeyHash {
    size_t operator()(const OpenKey& k) const {
        size_t h = LatticeHash{}(k.beta) * 31 + static_cast<size_t>(k.k);
        for (int c : k.cons)
            h = h * 1099511628211ull + static_cast<size_t>(c + 7);
        return h;
    }
};

} // namespace ogw
