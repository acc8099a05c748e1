#pragma once

#include <limits>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "sctk/field.hpp"
#include "sctk/interval.hpp"
#include "sctk/surface.hpp"

namespace sctk {

enum class BodyShape { square, disk };

/**
 * Origin-symmetric OPEN convex body: scale * [[a, b], [0, 1/a]] * (unit shape),
 * where the unit shapes are the open square (-1,1)^2 and the open unit disk.
 * The transform has determinant 1, so area = scale^2 * (4 or pi).  Rational
 * parameters keep every membership test exact; scale == 0 is the empty body.
 *
 * Open semantics let boundary witnesses attain the supremum exactly: the open
 * unit square avoids the integer lattice even though (1,0) lies on its edge.
 */
struct ConvexBodyParam {
    BodyShape shape = BodyShape::square;
    mpq_class a{1};      // shear-diagonal parameters, a > 0
    mpq_class b{0};
    mpq_class scale{1};  // s >= 0

    /** area(body)/4 as an enclosure; a point interval for squares. */
    RatInterval quarter_area(int bits = 96) const;

    /** Rational upper bound on the squared circumradius of the body. */
    mpq_class circumradius_sq_upper(int bits = 96) const;
};

struct MinkReport {
    double lower_bound = 0;  // area/4 of the best body found (rounded down)
    double upper_bound = std::numeric_limits<double>::infinity();
    ConvexBodyParam witness;
};

/** Enclosure of pi * vol(S), the upper bound for the Minkowski constant of the
 *  saddle-connection vectors of S. */
RatInterval mink_upper_bound(const SurfaceModel& S, int bits = 96);

/**
 * Exact Minkowski constant of the primitive integer vectors: 1.  Restricting
 * the full lattice to primitive vectors changes nothing: if k*v lies in an
 * open convex 0-symmetric body then so does v = (1/k)(k*v) by convexity.
 */
mpq_class mink_exact_lattice();

/**
 * True iff no vector of Z lies in the OPEN body.  Exact: membership reduces to
 * sign tests of field elements with rational coefficients.
 *
 * When enumeration_radius is given it must certify Z (every saddle vector of
 * norm <= radius is listed); throws if the body's circumradius can exceed it,
 * since vectors beyond the enumerated ball could then meet the body unseen.
 */
bool body_avoids(const ConvexBodyParam& body, const std::vector<SaddleVector>& Z,
                 const std::optional<mpq_class>& enumeration_radius = std::nullopt);

/**
 * True iff no vector of Z lies in the open image A * body (det(A) must be 1).
 * Tested exactly via A^{-1}; for Z' = {A z : z in Z} this agrees with
 * body_avoids(body, Z) vector for vector, which makes the SL2-invariance of
 * the Minkowski constant assertable exactly.  The caller certifies that Z
 * covers the image body; no radius check is made here.
 */
bool body_avoids_image(const Mat2& A, const ConvexBodyParam& body,
                       const std::vector<SaddleVector>& Z);

struct MinkSearchOptions {
    int grid = 13;           // points per axis in the initial grid (forced odd,
                             // so a = 1 and b = 0 are always covered)
    int refine_rounds = 24;  // step-halving rounds of hill climbing afterwards
    double a_span = 4.0;     // a ranges over [1/a_span, a_span], log-spaced
    double b_span = 2.0;     // b ranges over [-b_span, b_span]
    bool squares = true;
    bool disks = true;
    /** When set: the report's upper bound becomes pi*vol, and the search
     *  asserts lower <= upper (throws check_failed otherwise). */
    std::optional<FieldElement> volume;
    /** When set: every candidate body is A * (shear-diagonal body) and Z is
     *  expected to be A * Z0.  Scores equal the unconjugated search on Z0
     *  exactly; the circumradius cap R is interpreted in the pre-image frame. */
    std::optional<Mat2> conjugate;
    int bits = 192;          // precision for enclosure endpoints in the report
};

/**
 * Grid + refinement search for the largest area/4 of an origin-symmetric open
 * sheared square or disk avoiding Z, restricted to bodies of circumradius <= R
 * (so the truncation of Z at radius R can never be exploited).  This is an
 * inner approximation of the Minkowski-constant supremum over all convex
 * bodies, reported as such.
 *
 * For each candidate (shape, a, b) the optimal scale against Z is computed
 * exactly (minimum of the body gauge over Z), then rounded down to a rational,
 * so the returned witness always passes body_avoids against the full Z.
 * Floating point is used only to pick search cells, never for correctness.
 */
MinkReport mink_lower_bound_search(const std::vector<SaddleVector>& Z, const mpq_class& R,
                                   const MinkSearchOptions& opts = {});

} // namespace sctk
