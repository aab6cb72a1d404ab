#include "ogw/descriptor.hpp"
#include "ogw/model.hpp"

#include <doctest.h>

using namespace ogw;

TEST_CASE("energy normalization on the product preset") {
    Model m = preset_product(3, 3);
    CHECK(m.geom.energy({1, 0}, LatticeKind::rel) == 1);
    CHECK(m.geom.energy({0, 0}, LatticeKind::rel) == 0);
    // omega o varpi = omega: the line class has twice the disk energy
    CHECK(m.geom.energy(m.geom.varpi({1, 0}), LatticeKind::rel) ==
          m.geom.energy({1, 0}, LatticeKind::abs));
    CHECK(m.geom.energy({1, 0}, LatticeKind::abs) == 2);
}

TEST_CASE("maslov and chern covectors") {
    Model m33 = preset_product(3, 3);
    CHECK(m33.geom.maslov({1, 0}) == 4);
    CHECK(m33.geom.maslov({0, 0}) == 0);
    Model m55 = preset_product(5, 5);
    CHECK(m55.geom.chern({1, 1}) == 12);
    // additivity
    CHECK(m55.geom.maslov({2, 3}) == m55.geom.maslov({1, 1}) + m55.geom.maslov({1, 2}));
}

TEST_CASE("varpi doubles preset coordinates") {
    Model m = preset_product(3, 3);
    CHECK(m.geom.varpi({1, 1}) == Lattice{2, 2});
    CHECK(m.geom.varpi({0, 0}) == Lattice{0, 0});
    Model cp3 = preset_projective(3);
    CHECK(cp3.geom.varpi({4}) == Lattice{8});
}

TEST_CASE("relative splits are complete and duplicate-free") {
    Model m = preset_product(3, 3);
    auto splits = splits_rel_rel(m.geom, {1, 1});
    CHECK(splits.size() == 4);
    for (const auto& sp : splits)
        CHECK(lattice_add(sp.first, sp.second) == Lattice{1, 1});
    for (size_t i = 0; i < splits.size(); ++i)
        for (size_t j = i + 1; j < splits.size(); ++j)
            CHECK(splits[i].first != splits[j].first);

    auto zero = splits_rel_rel(m.geom, {0, 0});
    REQUIRE(zero.size() == 1);
    CHECK(is_zero(zero[0].first));

    // count matches the closed-form product of (coordinate+1)
    auto big = splits_rel_rel(m.geom, {2, 3});
    CHECK(big.size() == 3 * 4);
}

TEST_CASE("mixed splits solve the varpi preimage") {
    Model m = preset_product(3, 3);
    auto splits = splits_rel_abs(m.geom, {1, 0});
    // only the trivial preimage: varpi doubles, so (1,0) admits no odd parts
    REQUIRE(splits.size() == 1);
    CHECK(splits[0].first == Lattice{1, 0});
    CHECK(is_zero(splits[0].second));

    auto splits2 = splits_rel_abs(m.geom, {2, 2});
    CHECK(splits2.size() == 4); // abs part in {0,1}^2
    for (const auto& sp : splits2)
        CHECK(lattice_add(sp.first, m.geom.varpi(sp.second)) == Lattice{2, 2});
}

TEST_CASE("enumerated effective classes respect the energy gap") {
    Model m = preset_product(5, 5);
    for (const auto& beta : enumerate_rel_upto(m.geom, Rational(3)))
        if (!is_zero(beta))
            CHECK(m.geom.energy(beta, LatticeKind::rel) >= m.geom.hbar);
}

TEST_CASE("divisor pairing on degree vectors") {
    Model m = preset_product(3, 3);
    int h1 = m.constraint_index("H1");
    int h2 = m.constraint_index("H2");
    CHECK(m.geom.divisor_integral({2, 3}, LatticeKind::rel, h1) == 1);
    CHECK(m.geom.divisor_integral({2, 3}, LatticeKind::rel, h2) == Rational(3, 2));
    CHECK(m.geom.divisor_integral({0, 0}, LatticeKind::rel, h1) == 0);
    CHECK(m.geom.divisor_integral({2, 3}, LatticeKind::rel, h1) +
              m.geom.divisor_integral({2, 3}, LatticeKind::rel, h2) ==
          Rational(5, 2));
}

TEST_CASE("preset shapes") {
    Model m33 = preset_product(3, 3);
    CHECK(m33.coh.basis.size() == 16);
    CHECK(m33.coh.rel->N == 16);
    CHECK(m33.coh.rel->diamond == 16);
    Model m55 = preset_product(5, 5);
    CHECK(m55.geom.n == 10);
    CHECK(m55.coh.basis.top_degree == 20);
    Model cp3 = preset_projective(3);
    CHECK(cp3.geom.maslov({1}) == 4);
    CHECK(cp3.has_open());
    Model cp2 = preset_projective(2);
    CHECK(!cp2.has_open());
    CHECK_THROWS_AS(preset_product(2, 3), Error);
    CHECK_THROWS_AS(preset_product(3, 0), Error);
}

TEST_CASE("descriptor file round-trip preserves the model") {
    Model m = preset_product(3, 3);
    std::string text = save_descriptor(m);
    Model back = load_descriptor_text(text, "roundtrip");
    CHECK(back.geometry_digest == m.geometry_digest);
    CHECK(back.initial_digest == m.initial_digest);
    CHECK(save_descriptor(back) == text);
}
