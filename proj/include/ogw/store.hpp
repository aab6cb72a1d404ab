#pragma once

#include "ogw/open_engine.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ogw {

// In-file table of computed invariants. Entries are kept sorted by the
// recursion order (energy, k, ell, degrees), then degree vector, then indices,
// so identical tables serialize to identical bytes.
struct TableFile {
    int format_version = 1;
    std::string kind; // "open" or "closed"
    std::string geometry_digest;
    std::string initial_digest;
    std::string mode; // "theorem_a", "theorem_b", "" for closed
    std::vector<std::pair<OpenKey, Rational>> open_entries;
    std::vector<std::pair<ClosedKey, Rational>> closed_entries;
    std::vector<std::pair<OpenKey, Relation>> traces;
};

// Canonicalizes entry order in place.
void sort_table(const Model& m, TableFile& t);

std::string table_to_text(const Model& m, TableFile t);
void save_table(const Model& m, TableFile t, const std::string& path);

// Digest checks are strict: a mismatch aborts the load.
TableFile load_table_text(const std::string& text, const Model& expected);
TableFile load_table(const std::string& path, const Model& expected);

using OpenLookup = std::function<Rational(const OpenKey&)>;
using ClosedLookup = std::function<Rational(const ClosedKey&)>;

// Recomputes a derivation record from its children. Lookups throw on missing
// children; the caller compares against the stored parent value.
Rational replay_trace(const Relation& rel, const OpenLookup& open_lookup,
                      const ClosedLookup& closed_lookup);

} // namespace ogw
