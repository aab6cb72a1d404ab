#pragma once

#include "ogw/open_engine.hpp"
#include "ogw/store.hpp"

#include <string>
#include <vector>

namespace ogw {

// Value source for residual evaluation: axioms first, then the table, then an
// optional engine fallback. Strict mode (no fallback) reports absent keys.
class ValueSource {
  public:
    ValueSource(const Model& model, ClosedEngine& closed, OpenEngine* open_fallback,
                bool pointlike);

    void load_open_table(const std::vector<std::pair<OpenKey, Rational>>& entries);
    void load_closed_table(const std::vector<std::pair<ClosedKey, Rational>>& entries);

    // Accepts raw constraint lists (diamond allowed); normalizes first.
    Rational open_value(const Lattice& beta, int k, std::vector<int> raw_cons) const;
    Rational closed_value(const Lattice& beta, std::vector<int> cons) const;

  private:
    const Model& model_;
    ClosedEngine& closed_;
    OpenEngine* open_fallback_;
    bool pointlike_;
    std::unordered_map<OpenKey, Rational, OpenKeyHash> open_table_;
    std::unordered_map<ClosedKey, Rational, ClosedKeyHash> closed_table_;
};

struct ResidualReport {
    std::string relation; // closed_wdvv | open_wdvv_interior | open_wdvv_boundary
    std::vector<int> indices;
    Lattice beta;
    int s_power = 0;
    std::vector<int> t_multiset;
    Rational residual;
    std::vector<std::pair<std::string, Rational>> witness_terms;

    std::string describe() const;
};

// Exact residual of one coefficient of the closed associativity relation.
ResidualReport residual_closed(const Model& m, const ValueSource& src, int a, int b, int c, int d,
                               const Lattice& beta, const std::vector<int>& tset);

// Exact residual of one coefficient of the two open structure relations.
// Indices range over the relative basis (diamond allowed).
ResidualReport residual_open_interior(const Model& m, const ValueSource& src, int a, int b, int c,
                                      const Lattice& beta, int s_power,
                                      const std::vector<int>& tset);
ResidualReport residual_open_boundary(const Model& m, const ValueSource& src, int a, int b,
                                      const Lattice& beta, int s_power,
                                      const std::vector<int>& tset);

struct SweepBounds {
    Rational max_energy{4};
    int max_s = 6;
    int max_t = 6;
};

// All nonzero residual reports within bounds, deterministically ordered.
std::vector<ResidualReport> sweep_closed(const Model& m, const ValueSource& src,
                                         const SweepBounds& bounds, uint64_t* checked = nullptr);
std::vector<ResidualReport> sweep_open(const Model& m, const ValueSource& src,
                                       const SweepBounds& bounds, uint64_t* checked = nullptr);

struct AxiomSuiteReport {
    uint64_t checked = 0;
    uint64_t uncheckable = 0;
    std::vector<std::string> violations;
};

// Re-verifies the pointwise axioms on every stored table entry.
AxiomSuiteReport axiom_suite(const Model& m, const std::vector<std::pair<OpenKey, Rational>>& table,
                             bool pointlike);

struct CampaignReport {
    bool ok = false;
    std::string mode;
    std::string certificate;
    uint64_t initial_candidates = 0;
    uint64_t satisfiable_initial = 0;
    std::vector<std::string> satisfiable_details;
    uint64_t keys_checked = 0;
    uint64_t gate_killed = 0;
    uint64_t keys_nonzero = 0;
    std::vector<std::string> nonzero_details;
    std::vector<std::pair<OpenKey, Rational>> table;
};

// Section-6 style vanishing run on (CP^n1 x CP^n2, RP^n1 x RP^n2):
// eliminates every admissible initial key by the mode's arithmetic and then
// computes all in-range keys, asserting zero.
CampaignReport vanishing_campaign(const Model& m, const std::string& mode,
                                  const Rational& energy_bound, int lmax, int kmax);

} // namespace ogw
