#include "ogw/model.hpp"

#include <map>

namespace ogw {

namespace {

// Three-point genus-0 invariants of CP^n on the monomial basis: 1 exactly
// when a+b+c = n + d(n+1) with d in {0,1} and all exponents within range.
long long cp_three_point(int n, long long d, int a, int b, int c) {
    if (d < 0 || d > 1)
        return 0;
    if (a < 0 || b < 0 || c < 0 || a > n || b > n || c > n)
        return 0;
    return (a + b + c == n + d * (n + 1)) ? 1 : 0;
}

void attach_relative_trivial(CohomologyModel& coh) {
    RelativeBasis rel;
    rel.kind = RelativeCase::trivial;
    int K = coh.basis.size() - 1;
    rel.N = K + 1;
    rel.diamond = K + 1;
    rel.rho.resize(K + 2);
    rel.pr.assign(K + 2, Rational(0));
    for (int i = 0; i <= K; ++i)
        rel.rho[i] = i;
    rel.rho[K + 1] = -1;
    rel.pr[K + 1] = 1;
    coh.rel = rel;
}

} // namespace

Model preset_projective(int n) {
    if (n < 1)
        throw Error(ErrorKind::config, "preset cp:n needs n >= 1");
    Model m;
    m.name = "cp:" + std::to_string(n);
    bool open_side = (n % 2 == 1);

    CohomologyModel& coh = m.coh;
    coh.basis.top_degree = 2 * n;
    for (int i = 0; i <= n; ++i) {
        coh.basis.labels.push_back(i == 0 ? "1" : (i == 1 ? "H" : "H^" + std::to_string(i)));
        coh.basis.degree.push_back(2 * i);
    }
    int K1 = n + 1;
    coh.ring.cup_table.assign(K1, std::vector<std::vector<std::pair<int, Rational>>>(K1));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            if (i + j <= n)
                coh.ring.cup_table[i][j].push_back({i + j, Rational(1)});
    coh.ring.integral.assign(K1, Rational(0));
    coh.ring.integral[n] = 1;
    if (open_side)
        attach_relative_trivial(coh);
    coh.finalize();

    Geometry& g = m.geom;
    g.n = n;
    g.rel_rank = 1;
    g.abs_rank = 1;
    g.varpi_matrix = {{2}};
    g.maslov_cov = {n + 1};
    g.chern_cov = {n + 1};
    g.ws = {0};
    if (open_side) {
        // unit energy on the disk generator, hbar = 1
        g.omega_rel = {Rational(1)};
        g.omega_abs = {Rational(2)};
        g.hbar = 1;
    } else {
        // closed-only: unit energy on the line class
        g.omega_rel = {Rational(1, 2)};
        g.omega_abs = {Rational(1)};
        g.hbar = Rational(1, 2);
    }
    // The absolute pairing is dual-normalized (line class pairs to 1); since
    // varpi doubles, compatibility forces the disk class to pair to 1/2.
    g.divisor_rel[1] = {Rational(1, 2)};
    g.divisor_abs[1] = {Rational(1)};
    g.validate();

    // closed reconstruction seed: the unique admissible three-point value
    m.closed_init.add(g, coh, Lattice{1}, {n, n, 1}, Rational(1));

    m.refresh_digests();
    return m;
}

Model preset_product(int n1, int n2) {
    if (n1 < 1 || n2 < 1 || n1 % 2 == 0 || n2 % 2 == 0)
        throw Error(ErrorKind::config, "preset cpxcp:n1,n2 needs odd n1, n2 >= 1");
    Model m;
    m.name = "cpxcp:" + std::to_string(n1) + "," + std::to_string(n2);
    int n = n1 + n2;

    CohomologyModel& coh = m.coh;
    coh.basis.top_degree = 2 * n;
    auto flat = [n2](int i, int j) { return i * (n2 + 1) + j; };
    for (int i = 0; i <= n1; ++i) {
        for (int j = 0; j <= n2; ++j) {
            std::string label;
            if (i == 0 && j == 0)
                label = "1";
            else {
                if (i == 1)
                    label = "H1";
                else if (i > 1)
                    label = "H1^" + std::to_string(i);
                if (j >= 1) {
                    if (!label.empty())
                        label += "*";
                    label += (j == 1) ? "H2" : "H2^" + std::to_string(j);
                }
            }
            coh.basis.labels.push_back(label);
            coh.basis.degree.push_back(2 * (i + j));
        }
    }
    int K1 = (n1 + 1) * (n2 + 1);
    coh.ring.cup_table.assign(K1, std::vector<std::vector<std::pair<int, Rational>>>(K1));
    for (int i = 0; i <= n1; ++i)
        for (int j = 0; j <= n2; ++j)
            for (int k = 0; k <= n1; ++k)
                for (int l = 0; l <= n2; ++l)
                    if (i + k <= n1 && j + l <= n2)
                        coh.ring.cup_table[flat(i, j)][flat(k, l)].push_back(
                            {flat(i + k, j + l), Rational(1)});
    coh.ring.integral.assign(K1, Rational(0));
    coh.ring.integral[flat(n1, n2)] = 1;
    attach_relative_trivial(coh);
    coh.finalize();

    Geometry& g = m.geom;
    g.n = n;
    g.rel_rank = 2;
    g.abs_rank = 2;
    g.omega_rel = {Rational(1), Rational(1)};
    g.omega_abs = {Rational(2), Rational(2)};
    g.maslov_cov = {n1 + 1, n2 + 1};
    g.chern_cov = {n1 + 1, n2 + 1};
    g.varpi_matrix = {{2, 0}, {0, 2}};
    g.hbar = 1;
    g.ws = {0, 0};
    // disk classes pair to 1/2: varpi doubles and the line classes pair to 1
    g.divisor_rel[flat(1, 0)] = {Rational(1, 2), Rational(0)};
    g.divisor_rel[flat(0, 1)] = {Rational(0), Rational(1, 2)};
    g.divisor_abs[flat(1, 0)] = {Rational(1), Rational(0)};
    g.divisor_abs[flat(0, 1)] = {Rational(0), Rational(1)};
    g.validate();

    // Closed seed: every shape key passing the degree gate has factor degrees
    // d1, d2 <= 1; values split across the two factors.
    for (long long d1 = 0; d1 <= 1; ++d1) {
        for (long long d2 = 0; d2 <= 1; ++d2) {
            if (d1 == 0 && d2 == 0)
                continue; // zero-axiom territory
            for (int x1 = 0; x1 <= n1; ++x1)
                for (int x2 = 0; x2 <= n2; ++x2)
                    for (int y1 = 0; y1 <= n1; ++y1)
                        for (int y2 = 0; y2 <= n2; ++y2)
                            for (int div = 0; div < 2; ++div) {
                                int z1 = div == 0 ? 1 : 0;
                                int z2 = 1 - z1;
                                long long need =
                                    2LL * n + 2 * ((n1 + 1) * d1 + (n2 + 1) * d2);
                                long long got = 2LL * (x1 + x2 + y1 + y2 + z1 + z2);
                                if (need != got)
                                    continue;
                                Rational v = Rational(cp_three_point(n1, d1, x1, y1, z1)) *
                                             Rational(cp_three_point(n2, d2, x2, y2, z2));
                                m.closed_init.add(g, coh, Lattice{d1, d2},
                                                  {flat(x1, x2), flat(y1, y2), flat(z1, z2)}, v);
                            }
        }
    }

    m.refresh_digests();
    return m;
}

Model preset_by_name(const std::string& name) {
    auto starts = [&](const std::string& p) { return name.rfind(p, 0) == 0; };
    try {
        if (starts("cpxcp:")) {
            std::string rest = name.substr(6);
            auto comma = rest.find(',');
            if (comma == std::string::npos)
                throw Error(ErrorKind::parse, "expected cpxcp:n1,n2");
            return preset_product(std::stoi(rest.substr(0, comma)),
                                  std::stoi(rest.substr(comma + 1)));
        }
        if (starts("cp:"))
            return preset_projective(std::stoi(name.substr(3)));
        if (starts("cp"))
            return preset_projective(std::stoi(name.substr(2)));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(ErrorKind::parse, "unrecognized preset '" + name + "'");
    }
    throw Error(ErrorKind::parse, "unrecognized preset '" + name + "'");
}

int Model::constraint_index(const std::string& label) const {
    if (label == "pt")
        return coh.basis.top_index;
    if (label == "diamond" || label == "D") {
        if (!coh.rel || coh.rel->diamond < 0)
            throw Error(ErrorKind::parse, "no diamond class in this geometry");
        return coh.rel->diamond;
    }
    int idx = coh.index_of_label(label);
    if (idx >= 0)
        return idx;
    try {
        size_t pos = 0;
        int v = std::stoi(label, &pos);
        if (pos == label.size() && v >= 0 && (v <= coh.K() || (coh.rel && v <= coh.rel->N)))
            return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::parse, "unknown constraint label '" + label + "'");
}

} // namespace ogw
