#pragma once

#include "ogw/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ogw {

// Coordinate vector over the absolute basis Delta_0..Delta_K.
using ClassVector = std::vector<Rational>;

struct GradedBasis {
    std::vector<std::string> labels;
    std::vector<int> degree; // even, 0..2n
    int top_degree = 0;      // 2n
    int unit_index = -1;
    int top_index = -1;

    int size() const { return static_cast<int>(labels.size()); }
};

// Sparse cup structure constants: cup(i,j) = sum_m c(i,j,m) Delta_m.
struct RingStructure {
    std::vector<std::vector<std::vector<std::pair<int, Rational>>>> cup_table;
    std::vector<Rational> integral; // per basis element, nonzero only in top degree
};

struct PairingData {
    std::vector<std::vector<Rational>> g;
    std::vector<std::vector<Rational>> g_inv;
};

enum class RelativeCase { trivial, nontrivial };

// Basis data for H*(X,L): in the trivial case Gamma_i = Delta_i plus the
// extra class Gamma_diamond of degree n+1; in the nontrivial case the top
// absolute element is dropped.
struct RelativeBasis {
    RelativeCase kind = RelativeCase::trivial;
    int N = 0;             // relative indices 0..N
    int diamond = -1;      // index of Gamma_diamond, or -1
    int kappa = 0;         // min(K, N)
    std::vector<int> rho;  // relative index -> absolute index, -1 for diamond
    std::vector<Rational> pr; // P_R on each relative basis element
};

// One fixed factorization Delta_m = (1/coeff) * Delta_dprime ^ Delta_d2 with
// |Delta_d2| = 2, chosen deterministically per basis element of degree > 2.
struct Factorization {
    bool valid = false;
    int dprime = -1;
    int d2 = -1;
    Rational coeff; // cup(dprime, d2) = coeff * Delta_m exactly
};

class CohomologyModel {
  public:
    GradedBasis basis;
    RingStructure ring;
    PairingData pairing;
    std::optional<RelativeBasis> rel;
    std::vector<Factorization> fact;
    bool h2_generated = false;

    // Called once all fields above are populated; validates grading,
    // commutativity/associativity, unit, builds g, g_inv and factorizations.
    void finalize();

    int K() const { return basis.size() - 1; }
    int deg(int i) const { return basis.degree[i]; }
    int kappa() const { return rel ? rel->kappa : K(); }

    const std::vector<std::pair<int, Rational>>& cup_basis(int i, int j) const {
        return ring.cup_table[i][j];
    }
    ClassVector cup(const ClassVector& a, const ClassVector& b) const;
    Rational integrate_X(const ClassVector& a) const;

    // Sum_{mu,nu <= kappa} (int_X gamma ^ Delta_mu) g^{mu nu} Delta_nu; must
    // reproduce gamma on the span of Delta_0..Delta_kappa.
    ClassVector resolve_unit_projection(const ClassVector& gamma) const;

    // P_R on a coordinate vector over the relative basis (length N+1).
    Rational pr_value(const std::vector<Rational>& rel_vec) const;

    int index_of_label(const std::string& label) const; // -1 if absent
    // Relative degree: absolute degree for i <= K, n+1 for the diamond.
    int rel_deg(int i, int n) const;

    const Factorization& factor_of(int m) const;
};

// Builds the Poincare pairing and its exact inverse; throws on singular g.
PairingData build_pairing(const GradedBasis& basis, const RingStructure& ring);

// Canonical constraint order: descending degree, then descending index.
std::vector<int> sort_constraints(const CohomologyModel& coh, std::vector<int> cons);

} // namespace ogw
