#include "ogw/closed_engine.hpp"
#include "ogw/tables.hpp"

#include <doctest.h>

#include <map>

using namespace ogw;

namespace {

// Independent oracle for plane curve counts: the single-purpose recursion
//   N_d = sum_{d1+d2=d} N_{d1} N_{d2} ( d1^2 d2^2 C(3d-4,3d1-2)
//                                       - d1^3 d2 C(3d-4,3d1-1) ),
// seeded by N_1 = 1.
Rational plane_curve_count(int d) {
    static std::map<int, Rational> memo{{1, Rational(1)}};
    auto it = memo.find(d);
    if (it != memo.end())
        return it->second;
    Rational acc = 0;
    for (int d1 = 1; d1 < d; ++d1) {
        int d2 = d - d1;
        acc += plane_curve_count(d1) * plane_curve_count(d2) *
               (Rational(d1) * d1 * d2 * d2 * binomial(3 * d - 4, 3 * d1 - 2) -
                Rational(d1) * d1 * d1 * d2 * binomial(3 * d - 4, 3 * d1 - 1));
    }
    memo[d] = acc;
    return acc;
}

} // namespace

TEST_CASE("closed axioms on CP^2") {
    Model m = preset_projective(2);
    ClosedEngine eng(m);
    int pt = m.constraint_index("pt");
    int H = m.constraint_index("H");
    int one = m.constraint_index("1");
    // zero axiom: GW_0(1,H,H) = int H^2 = 1
    CHECK(eng.compute({0}, {one, H, H}) == 1);
    // degree axiom: mismatched dimensions vanish
    CHECK(eng.compute({2}, {pt, pt, pt}) == 0);
    // divisor axiom: GW_d(..., H) = d GW_d(...)
    CHECK(eng.compute({1}, {pt, pt, H}) == 1);
    CHECK(eng.compute({1}, {pt, pt, H, H}) == 1);
}

TEST_CASE("CP^2 reconstruction matches the independent plane-count recursion") {
    CHECK(plane_curve_count(1) == 1);
    CHECK(plane_curve_count(2) == 1);
    CHECK(plane_curve_count(3) == 12);
    CHECK(plane_curve_count(4) == 620);

    Model m = preset_projective(2);
    ClosedEngine eng(m);
    int pt = m.constraint_index("pt");
    for (int d = 1; d <= 4; ++d) {
        std::vector<int> cons(3 * d - 1, pt);
        CHECK(eng.compute({d}, cons) == plane_curve_count(d));
    }
}

TEST_CASE("memoization returns identical values on repeated calls") {
    Model m = preset_projective(2);
    ClosedEngine eng(m);
    int pt = m.constraint_index("pt");
    std::vector<int> cons(8, pt);
    Rational first = eng.compute({3}, cons);
    size_t entries = eng.memo_size();
    Rational second = eng.compute({3}, cons);
    CHECK(first == second);
    CHECK(eng.memo_size() == entries);
}

TEST_CASE("closed invariants on the quadric surface") {
    Model m = preset_product(1, 1);
    ClosedEngine eng(m);
    int pt = m.constraint_index("pt");
    // the ruling through one generic point
    CHECK(eng.compute({1, 0}, {pt}) == 1);
    CHECK(eng.compute({0, 1}, {pt}) == 1);
    // two generic points do not lie on a common ruling line: degree gate
    CHECK(eng.compute({1, 0}, {pt, pt}) == 0);
    // the graph of the unique Moebius map through three points
    CHECK(eng.compute({1, 1}, {pt, pt, pt}) == 1);
    // symmetry of the two factors
    CHECK(eng.compute({2, 1}, std::vector<int>(5, pt)) ==
          eng.compute({1, 2}, std::vector<int>(5, pt)));
}

TEST_CASE("constraint order does not change closed values") {
    Model m = preset_projective(2);
    ClosedEngine eng(m);
    int pt = m.constraint_index("pt");
    int H = m.constraint_index("H");
    CHECK(eng.compute({1}, {pt, H, pt}) == eng.compute({1}, {H, pt, pt}));
}

TEST_CASE("missing seed is reported with the key") {
    Model m = preset_projective(2);
    m.closed_init.values.clear();
    m.refresh_digests();
    ClosedEngine eng(m);
    int pt = m.constraint_index("pt");
    CHECK_THROWS_AS(eng.compute({1}, {pt, pt}), Error);
}

TEST_CASE("closed table builder finds the plane counts") {
    Model m = preset_projective(2);
    ClosedEngine eng(m);
    TableBounds bounds{Rational(3), 8, 0};
    auto table = build_closed_table(eng, bounds, 2);
    int pt = m.constraint_index("pt");
    bool found = false;
    for (const auto& [key, value] : table) {
        if (key.beta == Lattice{3} && key.cons == std::vector<int>(8, pt)) {
            CHECK(value == 12);
            found = true;
        }
    }
    CHECK(found);
}
