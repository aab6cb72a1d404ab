#pragma once

#include "ogw/open_engine.hpp"

#include <vector>

namespace ogw {

struct TableBounds {
    Rational max_energy{3};
    int max_ell = 3;
    int max_k = 6;
};

// All canonical keys within bounds that satisfy the degree equation, computed
// and returned with their values (zeros included). Results are independent of
// the job count.
std::vector<std::pair<OpenKey, Rational>> build_open_table(OpenEngine& engine,
                                                           const TableBounds& bounds,
                                                           int jobs = 1);
std::vector<std::pair<ClosedKey, Rational>> build_closed_table(ClosedEngine& engine,
                                                               const TableBounds& bounds,
                                                               int jobs = 1);

} // namespace ogw
