#pragma once

#include "ogw/cohomology.hpp"
#include "ogw/geometry.hpp"
#include "ogw/initial_data.hpp"

#include <string>

namespace ogw {

// Everything a run needs: the pair's topology, the cohomology model and the
// declared initial values, plus stable digests for cache validation.
struct Model {
    std::string name;
    Geometry geom;
    CohomologyModel coh;
    ClosedInitialSet closed_init;
    OpenInitialSet open_init;

    std::string geometry_digest;
    std::string initial_digest;

    bool has_open() const { return coh.rel.has_value(); }
    // Parses "pt", "diamond", a basis label, or a numeric index.
    int constraint_index(const std::string& label) const;
    void refresh_digests();
};

// Built-in geometries. "cp:n" is (CP^n, RP^n) for odd n and the closed-only
// CP^n otherwise; "cpxcp:n1,n2" is the product pair for odd n1, n2 > 1.
Model preset_projective(int n);
Model preset_product(int n1, int n2);
// Accepts "cp2", "cp:3", "cpxcp:5,5".
Model preset_by_name(const std::string& name);

} // namespace ogw
