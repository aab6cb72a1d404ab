#include "ogw/geometry.hpp"

#include <algorithm>
#include <functional>

namespace ogw {

namespace {

void check_rank(const Lattice& v, int rank, const char* what) {
    if ((int)v.size() != rank)
        throw Error(ErrorKind::config, std::string(what) + ": lattice rank mismatch");
}

} // namespace

Rational Geometry::energy(const Lattice& beta, LatticeKind kind) const {
    const auto& cov = (kind == LatticeKind::rel) ? omega_rel : omega_abs;
    check_rank(beta, (int)cov.size(), "energy");
    Rational v = 0;
    for (size_t i = 0; i < beta.size(); ++i)
        v += cov[i] * beta[i];
    return v;
}

long long Geometry::maslov(const Lattice& beta_rel) const {
    check_rank(beta_rel, rel_rank, "maslov");
    long long v = 0;
    for (int i = 0; i < rel_rank; ++i)
        v += maslov_cov[i] * beta_rel[i];
    return v;
}

long long Geometry::chern(const Lattice& beta_abs) const {
    check_rank(beta_abs, abs_rank, "chern");
    long long v = 0;
    for (int i = 0; i < abs_rank; ++i)
        v += chern_cov[i] * beta_abs[i];
    return v;
}

Lattice Geometry::varpi(const Lattice& beta_abs) const {
    check_rank(beta_abs, abs_rank, "varpi");
    Lattice out(rel_rank, 0);
    for (int i = 0; i < rel_rank; ++i)
        for (int j = 0; j < abs_rank; ++j)
            out[i] += varpi_matrix[i][j] * beta_abs[j];
    return out;
}

int Geometry::ws_sign(const Lattice& beta_abs) const {
    long long s = 0;
    for (int i = 0; i < abs_rank; ++i)
        s += (long long)ws[i] * beta_abs[i];
    return (s % 2 == 0) ? 1 : -1;
}

Rational Geometry::divisor_integral(const Lattice& beta, LatticeKind kind, int basis_index) const {
    const auto& table = (kind == LatticeKind::rel) ? divisor_rel : divisor_abs;
    auto it = table.find(basis_index);
    if (it == table.end())
        throw Error(ErrorKind::config, "divisor_integral: no pairing for this degree-2 class");
    Rational v = 0;
    for (size_t i = 0; i < beta.size(); ++i)
        v += it->second[i] * beta[i];
    return v;
}

bool Geometry::effective(const Lattice& beta) const {
    if (!cone_nonneg)
        throw Error(ErrorKind::config, "non-coordinatewise effective cones are not supported");
    for (auto x : beta)
        if (x < 0)
            return false;
    return true;
}

void Geometry::validate() const {
    if (n < 1)
        throw Error(ErrorKind::config, "complex dimension must be >= 1");
    if ((int)omega_rel.size() != rel_rank || (int)omega_abs.size() != abs_rank)
        throw Error(ErrorKind::config, "omega covector rank mismatch");
    if ((int)maslov_cov.size() != rel_rank || (int)chern_cov.size() != abs_rank)
        throw Error(ErrorKind::config, "maslov/chern covector rank mismatch");
    if ((int)varpi_matrix.size() != rel_rank)
        throw Error(ErrorKind::config, "varpi matrix rank mismatch");
    if (!(hbar > 0))
        throw Error(ErrorKind::config, "hbar must be positive");
    for (const auto& row : varpi_matrix) {
        if ((int)row.size() != abs_rank)
            throw Error(ErrorKind::config, "varpi matrix rank mismatch");
        for (auto x : row)
            if (x < 0)
                throw Error(ErrorKind::config, "varpi must have nonnegative entries");
    }
    // omega o varpi = omega, exactly
    for (int j = 0; j < abs_rank; ++j) {
        Rational lhs = 0;
        for (int i = 0; i < rel_rank; ++i)
            lhs += omega_rel[i] * varpi_matrix[i][j];
        if (lhs != omega_abs[j])
            throw Error(ErrorKind::config, "omega is not compatible with varpi");
    }
    // strict positivity of omega on cone generators, with gap hbar
    for (int i = 0; i < rel_rank; ++i) {
        if (!(omega_rel[i] > 0))
            throw Error(ErrorKind::config, "omega must be positive on every effective generator");
        if (omega_rel[i] < hbar)
            throw Error(ErrorKind::config, "effective generator below the energy gap hbar");
    }
    for (int j = 0; j < abs_rank; ++j) {
        bool has_positive = false;
        for (int i = 0; i < rel_rank; ++i)
            if (varpi_matrix[i][j] > 0)
                has_positive = true;
        if (!has_positive)
            throw Error(ErrorKind::config, "varpi kills an effective generator (unbounded splits)");
    }
}

std::vector<DegreeSplit> splits_rel_rel(const Geometry& g, const Lattice& beta) {
    if (!g.effective(beta))
        throw Error(ErrorKind::config, "splits: degree outside the effective cone");
    std::vector<DegreeSplit> out;
    Lattice b1(beta.size(), 0);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == beta.size()) {
            out.push_back({b1, lattice_sub(beta, b1)});
            return;
        }
        for (long long v = 0; v <= beta[i]; ++v) {
            b1[i] = v;
            rec(i + 1);
        }
        b1[i] = 0;
    };
    rec(0);
    return out;
}

std::vector<DegreeSplit> splits_rel_abs(const Geometry& g, const Lattice& beta) {
    if (!g.effective(beta))
        throw Error(ErrorKind::config, "splits: degree outside the effective cone");
    std::vector<DegreeSplit> out;
    // bound each abs coordinate by the smallest positive varpi entry in its column
    std::vector<long long> bound(g.abs_rank, 0);
    for (int j = 0; j < g.abs_rank; ++j) {
        long long b = -1;
        for (int i = 0; i < g.rel_rank; ++i) {
            if (g.varpi_matrix[i][j] > 0) {
                long long cap = beta[i] / g.varpi_matrix[i][j];
                b = (b < 0) ? cap : std::min(b, cap);
            }
        }
        bound[j] = std::max<long long>(b, 0);
    }
    Lattice bt(g.abs_rank, 0);
    std::function<void(int)> rec = [&](int j) {
        if (j == g.abs_rank) {
            Lattice image = g.varpi(bt);
            Lattice b1 = lattice_sub(beta, image);
            for (auto x : b1)
                if (x < 0)
                    return;
            out.push_back({b1, bt});
            return;
        }
        for (long long v = 0; v <= bound[j]; ++v) {
            bt[j] = v;
            rec(j + 1);
        }
        bt[j] = 0;
    };
    rec(0);
    return out;
}

std::vector<DegreeSplit> splits_abs_abs(const Geometry& g, const Lattice& beta) {
    for (auto x : beta)
        if (x < 0)
            throw Error(ErrorKind::config, "splits: degree outside the effective cone");
    std::vector<DegreeSplit> out;
    Lattice b1(beta.size(), 0);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == beta.size()) {
            out.push_back({b1, lattice_sub(beta, b1)});
            return;
        }
        for (long long v = 0; v <= beta[i]; ++v) {
            b1[i] = v;
            rec(i + 1);
        }
        b1[i] = 0;
    };
    rec(0);
    return out;
}

namespace {

std::vector<Lattice> enumerate_cone(const std::vector<Rational>& omega, const Rational& bound) {
    std::vector<Lattice> out;
    size_t rank = omega.size();
    Lattice v(rank, 0);
    std::function<void(size_t, Rational)> rec = [&](size_t i, Rational used) {
        if (i == rank) {
            out.push_back(v);
            return;
        }
        for (long long x = 0;; ++x) {
            Rational u = used + omega[i] * x;
            if (u > bound)
                break;
            v[i] = x;
            rec(i + 1, u);
        }
        v[i] = 0;
    };
    rec(0, Rational(0));
    return out;
}

} // namespace

std::vector<Lattice> enumerate_abs_upto(const Geometry& g, const Rational& energy_bound) {
    return enumerate_cone(g.omega_abs, energy_bound);
}

std::vector<Lattice> enumerate_rel_upto(const Geometry& g, const Rational& energy_bound) {
    return enumerate_cone(g.omega_rel, energy_bound);
}

std::string lattice_str(const Lattice& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(v[i]);
    }
    s += ")";
    return s;
}

} // namespace ogw
