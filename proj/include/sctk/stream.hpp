#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <vector>

#include "sctk/direction.hpp"
#include "sctk/field.hpp"
#include "sctk/surface.hpp"

namespace sctk {

/**
 * Source of candidate vectors for the expansion, yielded in nondecreasing
 * height (|y|) order.  Contract: for any height h the stream has moved past,
 * every element of Z with height <= h whose horizontal component is small
 * enough to matter (at most the running minimum at the time h was current)
 * has been yielded.  The consumer applies the half-plane filter.
 */
class VectorStream {
  public:
    virtual ~VectorStream() = default;

    /** Next vector, or nullopt when the stream is done. */
    virtual std::optional<SaddleVector> next() = 0;

    /** True when the stream ended at an enumeration bound, not a natural end. */
    virtual bool truncated() const = 0;

    /**
     * Valid after next() returned nullopt: false when the stream cannot
     * certify that the last height group it yielded was complete (records at
     * that height stay provisional).
     */
    virtual bool last_group_complete() const { return true; }
};

/**
 * Stream over an explicit finite vector list (typically an enumeration by
 * norm), re-ordered by height; half-plane filtering happens in the consumer.
 * When certified_height is supplied, only vectors with height <= that bound
 * are yielded and every yielded group counts as complete (the caller asserts
 * the list contains all of Z up to the bound); otherwise the final group is
 * reported incomplete, since a norm-ball cuts large heights mid-group.
 */
class SortedVectorStream final : public VectorStream {
  public:
    explicit SortedVectorStream(std::vector<SaddleVector> vectors,
                                std::optional<mpq_class> certified_height = std::nullopt);

    std::optional<SaddleVector> next() override;
    bool truncated() const override { return truncated_; }
    bool last_group_complete() const override { return certified_; }

  private:
    std::vector<SaddleVector> vs_;
    std::size_t i_ = 0;
    bool truncated_ = true;
    bool certified_ = false;
};

/**
 * Z = primitive integer vectors, streamed in height order against theta.
 * For each height q only the integers x adjacent to theta*q are candidates for
 * new records or for disqualifying one, once (1,0) (horizontal component 1)
 * has been yielded; heights whose fractional distance provably exceeds the
 * running minimum are skipped wholesale.  The fast scan runs in long-double
 * arithmetic with a directed error bound; when the floor of theta*q cannot be
 * certified the candidate window is widened by one on both sides, so no
 * qualifying vector is ever missed.  Exactness of all later comparisons lives
 * downstream in the expansion.
 */
class PrimitiveLatticeStream final : public VectorStream {
  public:
    PrimitiveLatticeStream(const Direction& theta, std::int64_t height_cap);

    std::optional<SaddleVector> next() override;
    bool truncated() const override { return done_ && truncated_; }
    bool last_group_complete() const override { return true; }

  private:
    void advance();

    Direction theta_;
    std::int64_t cap_;
    std::int64_t q_ = 0;
    long double t_lo_ = 0, t_hi_ = 0; // directed long-double bracket of theta
    long double min_upper_ = 2.0L;    // upper bound on the running hor minimum
    std::deque<SaddleVector> out_;
    bool done_ = false;
    bool truncated_ = false;
};

/** Options for the orbit ray-strip enumeration. */
struct RayStripOptions {
    /** Vectors with horizontal component possibly <= hor_cap are kept. */
    mpq_class hor_cap{1};
    /** Everything within this norm is kept regardless of horizontal component. */
    mpq_class hub_radius{5};
    /**
     * Hyperbola taper: when an upper bound mu for the Minkowski constant of Z
     * is supplied, the strip cap at heights >= h tightens to
     * min(hor_cap, 2*mu/h).  Records and their disqualifiers above height h
     * all have horizontal component <= mu/h, so the taper cannot affect the
     * expansion, and it keeps the enumerated area logarithmic in height_cap.
     */
    std::optional<mpq_class> taper_mu;
    /** Budgets for the per-band ball enumerations. */
    OrbitOptions ball{};
    /** Word-length cap for the per-band renormalization search. */
    int max_frame_length = 64;
};

/**
 * Orbit vectors inside the region {|y| <= height_cap, horizontal component
 * against theta possibly <= hor_cap}, together with the full hub ball, sorted
 * by height.  The strip is cut into doubling height bands; each band's
 * quadrilateral P is enumerated in a renormalized frame: the orbit is
 * group-invariant, so Z n P = A (Z n A^-1 P) for any group element A, and A is
 * chosen (by greedy word search) to shrink P into a small ball that the
 * breadth-first fixpoint enumerates completely.  The ball radius is certified
 * from the exact images of P's corners, so completeness reduces to that of
 * orbit_vectors; theta enters as a rational bracket and all membership tests
 * are exact.
 */
std::vector<SaddleVector> orbit_ray_vectors(const GroupOrbitModel& m, const RatInterval& theta,
                                            const mpq_class& height_cap,
                                            const RayStripOptions& opts = {});

/**
 * Saddle connections of an origami with height <= height_cap and horizontal
 * component against theta possibly <= hor_cap, via a full trace out to the
 * norm radius that provably covers that region.  Complete but quadratic in
 * theta*height_cap; intended for moderate caps.
 */
std::vector<SaddleVector> origami_ray_vectors(const Origami& o, const RatInterval& theta,
                                              const mpq_class& height_cap,
                                              const mpq_class& hor_cap, int threads = 0);

} // namespace sctk
