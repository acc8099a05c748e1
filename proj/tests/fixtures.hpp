#pragma once

// Shared test fixtures: the three standard surfaces used across the suite.

#include "sctk/surface.hpp"

namespace fixtures {

inline sctk::Origami torus(sctk::MarkedPolicy policy = sctk::MarkedPolicy::all_vertices) {
    return {1, sctk::Perm::identity(1), sctk::Perm::identity(1), policy};
}

inline sctk::Origami l3() {
    return {3, sctk::Perm::from_cycles(3, {{1, 2}}), sctk::Perm::from_cycles(3, {{1, 3}}),
            sctk::MarkedPolicy::cone_points_only};
}

/** Theta-group model over Q: T^2 = [[1,2],[0,1]], S = [[0,-1],[1,0]]. */
inline sctk::GroupOrbitModel theta_lattice_model() {
    using namespace sctk;
    FieldDescriptor Q = FieldDescriptor::rational();
    auto fe = [&](long v) { return FieldElement::rational(v); };
    Mat2 T2{fe(1), fe(2), fe(0), fe(1)};
    Mat2 S{fe(0), fe(-1), fe(1), fe(0)};
    GroupOrbitModel m;
    m.field = Q;
    m.generators = {T2, S};
    m.seeds = {{fe(1), fe(0), 1}, {fe(0), fe(1), 1}, {fe(1), fe(1), 1}};
    m.volume = FieldElement::rational(3);
    return m;
}

/**
 * Golden L model: the L-shaped surface with both legs of golden-ratio length,
 * area sqrt(5).  Veech group generated by the horizontal multitwist
 * [[1, phi], [0, 1]] and the order-4 rotation [[0, -1], [1, 0]]; horizontal
 * saddle connections have lengths 1 and phi - 1, each with two parallel
 * copies, and every saddle direction is group-equivalent to horizontal.
 */
inline sctk::GroupOrbitModel golden_l_model() {
    using namespace sctk;
    FieldDescriptor Q5 = FieldDescriptor::quadratic(5);
    auto fe = [&](const mpq_class& a, const mpq_class& b) {
        return FieldElement::make(Q5, a, b);
    };
    FieldElement phi = fe(mpq_class(1, 2), mpq_class(1, 2));
    FieldElement zero = FieldElement::zero(Q5), one = FieldElement::one(Q5);
    Mat2 T{one, phi, zero, one};
    Mat2 S{zero, -one, one, zero};
    GroupOrbitModel m;
    m.field = Q5;
    m.generators = {T, S};
    m.seeds = {{one, zero, 2}, {phi - one, zero, 2}};
    m.volume = fe(0, 1); // sqrt(5)
    return m;
}

} // namespace fixtures
