#pragma once

#include <optional>
#include <vector>

#include "sctk/direction.hpp"
#include "sctk/field.hpp"
#include "sctk/interval.hpp"
#include "sctk/stream.hpp"
#include "sctk/surface.hpp"

namespace sctk {

/** Precision ladder and stopping limits for the expansion. */
struct ZExpOptions {
    int start_bits = 96;
    int max_bits = 16384;
    /** Stop once this many records have been emitted (ties may round up). */
    std::optional<int> max_terms;
    /** Do not pull stream elements of height beyond this bound. */
    std::optional<mpq_class> max_height;
};

/** One convergent: a vector minimizing hor among all heights up to its own. */
struct ConvergentRecord {
    int index = 0;
    SaddleVector vector;
    /** Rigorous enclosure of hor; a point interval in exact mode. */
    RatInterval hor;
    /** Present when theta and the vector components live in one field. */
    std::optional<FieldElement> hor_exact;
    /** Set when the stream could not certify the record's height group. */
    bool provisional = false;
    /** hor is exactly zero: the vector lies on the ray and the expansion ends. */
    bool terminating = false;
};

/**
 * Enclosure of hor_theta(v) = |y*theta - x| at the given precision.
 * Exact-field cases yield a point interval.
 */
RatInterval hor_theta(const SaddleVector& v, const Direction& theta, int bits = 96);

/** Exact hor value when v and theta share a field (after promotion), else nullopt. */
std::optional<FieldElement> hor_theta_exact(const SaddleVector& v, const Direction& theta);

/**
 * True iff theta*x + y > 0 (v lies in the open half-plane on the ray's side).
 * Undecided enclosures trigger refinement up to max_bits; a vector exactly on
 * the boundary raises an error.
 */
bool in_positive_half_plane(const SaddleVector& v, const Direction& theta, int start_bits = 96,
                            int max_bits = 16384);

/**
 * The Z-convergents of theta, in height order, computed from a height-sorted
 * stream.  A vector is a record iff its hor is minimal among all yielded
 * vectors of equal or lesser height; equal-hor ties at one height are all
 * emitted, ordered lexicographically.  Stops at a terminating (on-ray) record,
 * at the configured limits, or at stream end.
 */
std::vector<ConvergentRecord> z_expansion(VectorStream& stream, const Direction& theta,
                                          const ZExpOptions& opts = {});

struct TerminationReport {
    bool terminating = false;
    std::optional<SaddleVector> element;
    mpq_class height_bound;
};

/**
 * Scans the stream for an element exactly on the ray, up to the height bound.
 * Requires the stream to open with a height-0 group (an x-axis element of Z).
 */
TerminationReport termination_check(VectorStream& stream, const Direction& theta,
                                    const mpq_class& height_bound,
                                    const ZExpOptions& opts = {});

struct SandwichStep {
    int left_index = 0;
    SaddleVector left, right;
    bool pass_lower = false;
    bool pass_upper = false;
    /** Certified slack in each inequality (lower bounds; positive = pass). */
    double lower_margin = 0;
    double upper_margin = 0;
};

struct SandwichReport {
    bool ok = true;
    int pairs = 0;
    std::vector<SandwichStep> steps;
};

/**
 * Verifies, for each consecutive pair of positive-height records (p,q), (P,Q):
 *   |pQ - Pq| / (2 q Q)  <  |theta - p/q|  <=  mu / (q Q)
 * with rigorous enclosures.  Height-0 records are skipped, only the last
 * record of each height group is kept, and provisional or terminating records
 * are excluded from pairing.  mu must enclose (an upper bound for) the
 * Minkowski constant of Z; pi * vol(S) is the standard choice.
 */
SandwichReport sandwich_check(const std::vector<ConvergentRecord>& records,
                              const Direction& theta, const RatInterval& mu,
                              const ZExpOptions& opts = {});

} // namespace sctk
