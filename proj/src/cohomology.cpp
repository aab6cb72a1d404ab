#include "ogw/cohomology.hpp"

#include <algorithm>

namespace ogw {

namespace {

// Exact Gauss-Jordan inverse; throws when the matrix is singular.
std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> m) {
    size_t n = m.size();
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
    for (size_t i = 0; i < n; ++i)
        inv[i][i] = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col] == 0)
            ++piv;
        if (piv == n)
            throw Error(ErrorKind::config,
                        "singular pairing matrix (basis is not Poincare-dual complete)");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        Rational p = m[col][col];
        for (size_t j = 0; j < n; ++j) {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0)
                continue;
            Rational f = m[r][col];
            for (size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

} // namespace

std::vector<int> sort_constraints(const CohomologyModel& coh, std::vector<int> cons) {
    std::sort(cons.begin(), cons.end(), [&](int a, int b) {
        if (coh.deg(a) != coh.deg(b))
            return coh.deg(a) > coh.deg(b);
        return a > b;
    });
    return cons;
}

PairingData build_pairing(const GradedBasis& basis, const RingStructure& ring) {
    int K1 = basis.size();
    PairingData p;
    p.g.assign(K1, std::vector<Rational>(K1, Rational(0)));
    for (int i = 0; i < K1; ++i) {
        for (int j = 0; j < K1; ++j) {
            Rational v = 0;
            for (const auto& [m, c] : ring.cup_table[i][j])
                v += c * ring.integral[m];
            p.g[i][j] = v;
        }
    }
    p.g_inv = invert(p.g);
    return p;
}

ClassVector CohomologyModel::cup(const ClassVector& a, const ClassVector& b) const {
    int K1 = basis.size();
    if ((int)a.size() != K1 || (int)b.size() != K1)
        throw Error(ErrorKind::config, "cup: vector/basis dimension mismatch");
    ClassVector out(K1, Rational(0));
    for (int i = 0; i < K1; ++i) {
        if (a[i] == 0)
            continue;
        for (int j = 0; j < K1; ++j) {
            if (b[j] == 0)
                continue;
            Rational cij = a[i] * b[j];
            for (const auto& [m, c] : ring.cup_table[i][j])
                out[m] += cij * c;
        }
    }
    return out;
}

Rational CohomologyModel::integrate_X(const ClassVector& a) const {
    Rational v = 0;
    for (int i = 0; i < basis.size(); ++i)
        if (a[i] != 0)
            v += a[i] * ring.integral[i];
    return v;
}

ClassVector CohomologyModel::resolve_unit_projection(const ClassVector& gamma) const {
    int kap = kappa();
    for (int i = kap + 1; i < basis.size(); ++i)
        if (gamma[i] != 0)
            throw Error(ErrorKind::config,
                        "resolve_unit_projection: class outside span(Delta_0..Delta_kappa)");
    ClassVector out(basis.size(), Rational(0));
    for (int mu = 0; mu <= kap; ++mu) {
        // int_X gamma ^ Delta_mu
        Rational pair = 0;
        for (int i = 0; i <= kap; ++i) {
            if (gamma[i] == 0)
                continue;
            for (const auto& [m, c] : ring.cup_table[i][mu])
                pair += gamma[i] * c * ring.integral[m];
        }
        if (pair == 0)
            continue;
        for (int nu = 0; nu <= kap; ++nu)
            out[nu] += pair * pairing.g_inv[mu][nu];
    }
    return out;
}

Rational CohomologyModel::pr_value(const std::vector<Rational>& rel_vec) const {
    if (!rel)
        throw Error(ErrorKind::config, "pr_value: geometry has no relative structure");
    Rational v = 0;
    for (size_t i = 0; i < rel_vec.size(); ++i)
        if (rel_vec[i] != 0)
            v += rel_vec[i] * rel->pr[i];
    return v;
}

int CohomologyModel::index_of_label(const std::string& label) const {
    for (int i = 0; i < basis.size(); ++i)
        if (basis.labels[i] == label)
            return i;
    return -1;
}

int CohomologyModel::rel_deg(int i, int n) const {
    if (rel && i == rel->diamond)
        return n + 1;
    return basis.degree[i];
}

const Factorization& CohomologyModel::factor_of(int m) const {
    const Factorization& f = fact[m];
    if (!f.valid)
        throw Error(ErrorKind::config,
                    "constraint '" + basis.labels[m] +
                        "' has no degree-2 factorization (cohomology not H^2-generated)");
    return f;
}

void CohomologyModel::finalize() {
    int K1 = basis.size();
    if (K1 == 0)
        throw Error(ErrorKind::config, "empty basis");
    basis.unit_index = -1;
    basis.top_index = -1;
    for (int i = 0; i < K1; ++i) {
        int d = basis.degree[i];
        if (d < 0 || d % 2 != 0 || d > basis.top_degree)
            throw Error(ErrorKind::config, "basis degree must be even in [0, 2n]");
        if (d == 0) {
            if (basis.unit_index >= 0)
                throw Error(ErrorKind::config, "more than one degree-0 basis element");
            basis.unit_index = i;
        }
        if (d == basis.top_degree) {
            if (basis.top_index >= 0)
                throw Error(ErrorKind::config, "more than one top-degree basis element");
            basis.top_index = i;
        }
    }
    if (basis.unit_index < 0 || basis.top_index < 0)
        throw Error(ErrorKind::config, "basis must contain a unit and a top-degree element");

    // graded, unital, commutative, associative; integral supported in top degree
    for (int i = 0; i < K1; ++i) {
        if (ring.integral[i] != 0 && basis.degree[i] != basis.top_degree)
            throw Error(ErrorKind::config, "integral supported outside top degree");
        for (int j = 0; j < K1; ++j) {
            for (const auto& [m, c] : ring.cup_table[i][j]) {
                if (c != 0 && basis.degree[m] != basis.degree[i] + basis.degree[j])
                    throw Error(ErrorKind::config, "cup structure constants violate grading");
            }
        }
    }
    auto cup_vec = [&](int i, int j) {
        ClassVector v(K1, Rational(0));
        for (const auto& [m, c] : ring.cup_table[i][j])
            v[m] += c;
        return v;
    };
    for (int i = 0; i < K1; ++i) {
        ClassVector ui = cup_vec(basis.unit_index, i);
        for (int m = 0; m < K1; ++m)
            if (ui[m] != (m == i ? Rational(1) : Rational(0)))
                throw Error(ErrorKind::config, "unit does not act as identity");
        for (int j = i; j < K1; ++j) {
            if (cup_vec(i, j) != cup_vec(j, i))
                throw Error(ErrorKind::config, "cup product is not commutative");
        }
    }
    for (int i = 0; i < K1; ++i)
        for (int j = 0; j < K1; ++j)
            for (int l = 0; l < K1; ++l) {
                ClassVector left(K1, Rational(0)), right(K1, Rational(0));
                for (const auto& [m, c] : ring.cup_table[i][j])
                    for (const auto& [m2, c2] : ring.cup_table[m][l])
                        left[m2] += c * c2;
                for (const auto& [m, c] : ring.cup_table[j][l])
                    for (const auto& [m2, c2] : ring.cup_table[i][m])
                        right[m2] += c * c2;
                if (left != right)
                    throw Error(ErrorKind::config, "cup product is not associative");
            }

    pairing = build_pairing(basis, ring);

    if (rel) {
        RelativeBasis& r = *rel;
        r.kappa = std::min(K(), r.N);
        if (r.kind == RelativeCase::trivial) {
            if (r.N != K() + 1 || r.diamond != K() + 1)
                throw Error(ErrorKind::config, "trivial case requires N=K+1 with a diamond class");
        } else {
            if (r.N != K() - 1 || r.diamond != -1)
                throw Error(ErrorKind::config, "nontrivial case requires N=K-1, no diamond");
        }
    }

    // Fixed factorization per basis element of degree > 2: the lowest-index
    // degree-2 divisor that divides it exactly, then the lowest-index cofactor.
    fact.assign(K1, Factorization{});
    h2_generated = true;
    for (int m = 0; m < K1; ++m) {
        if (basis.degree[m] <= 2)
            continue;
        Factorization best;
        for (int d2 = 0; d2 < K1 && !best.valid; ++d2) {
            if (basis.degree[d2] != 2)
                continue;
            for (int dp = 0; dp < K1 && !best.valid; ++dp) {
                if (basis.degree[dp] != basis.degree[m] - 2)
                    continue;
                const auto& prod = ring.cup_table[dp][d2];
                if (prod.size() == 1 && prod[0].first == m && prod[0].second != 0) {
                    best.valid = true;
                    best.dprime = dp;
                    best.d2 = d2;
                    best.coeff = prod[0].second;
                }
            }
        }
        fact[m] = best;
        if (!best.valid)
            h2_generated = false;
    }
}

} // namespace ogw
