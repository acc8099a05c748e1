#include "sctk/mink.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sctk/errors.hpp"

namespace sctk {

namespace {

// Consistent precision for every circumradius cap comparison: scales chosen by
// the search satisfy scale^2 * bound(96) <= R^2 with the same 96-bit bound the
// validity re-check uses, so capped witnesses can never trip the radius guard.
constexpr int kCapBits = 96;

void validate_body(const ConvexBodyParam& body) {
    if (sgn(body.a) <= 0) throw validation_error("convex body needs a > 0 in its transform");
    if (sgn(body.scale) < 0) throw validation_error("convex body scale must be >= 0");
}

/** Rational lower bound on a nonnegative field value (exact when rational). */
mpq_class nonneg_lower(const FieldElement& v, int bits) {
    if (v.is_rational_value()) return v.rational_value();
    mpq_class lo = v.enclosure(bits).lo();
    if (sgn(lo) < 0) lo = 0;
    return lo;
}

/** Rational lower bound on sqrt(q); exact when q is a rational square. */
mpq_class sqrt_lower(const mpq_class& q, int bits) {
    if (sgn(q) <= 0) return 0;
    mpz_class num = q.get_num(), den = q.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) != 0 && mpz_perfect_square_p(den.get_mpz_t()) != 0) {
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
        return mpq_class(rn, rd);
    }
    mpq_class lo = sqrt_enclosure(q, bits).lo();
    if (sgn(lo) < 0) lo = 0;
    return lo;
}

/** Exact body-local coordinates u = T^{-1} z with T = [[a, b], [0, 1/a]];
 *  membership compares u against scale * (unit shape). */
struct BodyFrame {
    FieldElement inv_a, neg_b, diag_a, scale;

    BodyFrame(const ConvexBodyParam& body, const FieldDescriptor& field)
        : inv_a(FieldElement::rational(mpq_class(1) / body.a).promoted(field)),
          neg_b(FieldElement::rational(-body.b).promoted(field)),
          diag_a(FieldElement::rational(body.a).promoted(field)),
          scale(FieldElement::rational(body.scale).promoted(field)) {}

    std::pair<FieldElement, FieldElement> local(const SaddleVector& z) const {
        return {z.x * inv_a + z.y * neg_b, z.y * diag_a};
    }

    /** Squared gauge of z for the unit shape: sup-norm^2 (square) or |.|^2 (disk).
     *  z lies in the open body iff gauge^2 < scale^2. */
    FieldElement gauge_sq(const SaddleVector& z, BodyShape shape) const {
        auto [e1, e2] = local(z);
        FieldElement s1 = e1 * e1, s2 = e2 * e2;
        if (shape == BodyShape::square) return s1.compare(s2) >= 0 ? s1 : s2;
        return s1 + s2;
    }

    bool contains_open(const SaddleVector& z, BodyShape shape) const {
        return (scale * scale - gauge_sq(z, shape)).sign() > 0;
    }
};

} // namespace

RatInterval ConvexBodyParam::quarter_area(int bits) const {
    mpq_class s2 = scale * scale;
    if (shape == BodyShape::square) return RatInterval::point(s2);
    return (s2 / 4) * pi_enclosure(bits);
}

mpq_class ConvexBodyParam::circumradius_sq_upper(int bits) const {
    validate_body(*this);
    mpq_class s2 = scale * scale;
    mpq_class inv_a2 = mpq_class(1) / (a * a);
    if (shape == BodyShape::square) {
        // Farthest image of a corner (+-1, +-1): (a +- b, 1/a) up to signs.
        mpq_class p = (a + b) * (a + b) + inv_a2;
        mpq_class q = (a - b) * (a - b) + inv_a2;
        return s2 * std::max(p, q);
    }
    // Largest singular value of the transform: with t = a^2 + b^2 + 1/a^2 and
    // det 1, sigma_max^2 = (t + sqrt(t^2 - 4)) / 2; t >= 2 so the root is real.
    mpq_class t = a * a + b * b + inv_a2;
    mpq_class disc = t * t - 4;
    if (sgn(disc) < 0) disc = 0;
    mpq_class sigma2 = (t + sqrt_enclosure(disc, bits).hi()) / 2;
    return s2 * sigma2;
}

RatInterval mink_upper_bound(const SurfaceModel& S, int bits) {
    RatInterval vol = S.volume().enclosure(bits);
    if (!vol.certainly_gt(RatInterval::point(0))) {
        throw validation_error("surface volume must be positive");
    }
    return pi_enclosure(bits) * vol;
}

mpq_class mink_exact_lattice() { return mpq_class(1); }

bool body_avoids(const ConvexBodyParam& body, const std::vector<SaddleVector>& Z,
                 const std::optional<mpq_class>& enumeration_radius) {
    validate_body(body);
    if (enumeration_radius) {
        if (sgn(*enumeration_radius) <= 0) {
            throw validation_error("enumeration radius must be positive");
        }
        if (body.circumradius_sq_upper(kCapBits) > (*enumeration_radius) * (*enumeration_radius)) {
            throw validation_error(
                "body circumradius exceeds the enumeration radius of Z; "
                "vectors outside the enumerated ball could meet the body unseen");
        }
    }
    if (Z.empty() || sgn(body.scale) == 0) return true;
    BodyFrame frame(body, Z.front().x.descriptor());
    for (const auto& z : Z) {
        if (frame.contains_open(z, body.shape)) return false;
    }
    return true;
}

bool body_avoids_image(const Mat2& A, const ConvexBodyParam& body,
                       const std::vector<SaddleVector>& Z) {
    validate_body(body);
    if (A.det().compare(FieldElement::one(A.a.descriptor())) != 0) {
        throw validation_error("image body test needs a determinant-1 matrix");
    }
    if (Z.empty() || sgn(body.scale) == 0) return true;
    Mat2 inv = A.inverse();
    BodyFrame frame(body, Z.front().x.descriptor());
    for (const auto& z : Z) {
        if (frame.contains_open(inv.apply(z), body.shape)) return false;
    }
    return true;
}

namespace {

struct CellResult {
    ConvexBodyParam body;  // rational witness; scale rounded down, never up
    mpq_class area4_lo;    // exact rational lower bound on area(body)/4
    double score = -1;     // deterministic selection key: double(area4_lo)
};

/**
 * Best admissible scale for (shape, a, b): the largest s with s^2 <= gauge^2
 * of every z (so the open body avoids Z) and s^2 * circumradius^2(unit) <= R^2.
 * prune_area4: a cell whose exact optimum cannot exceed this is abandoned early.
 */
CellResult evaluate_cell(BodyShape shape, const mpq_class& a, const mpq_class& b,
                         const std::vector<SaddleVector>& Z, const mpq_class& R,
                         const mpq_class& prune_area4, int bits) {
    ConvexBodyParam unit{shape, a, b, 1};
    mpq_class s2_cap = R * R / unit.circumradius_sq_upper(kCapBits);

    std::optional<FieldElement> min_gauge2;
    if (!Z.empty()) {
        FieldDescriptor field = Z.front().x.descriptor();
        BodyFrame frame(unit, field);
        FieldElement prune = FieldElement::rational(prune_area4).promoted(field);
        for (const auto& z : Z) {
            FieldElement g2 = frame.gauge_sq(z, shape);
            if (!min_gauge2 || g2.compare(*min_gauge2) < 0) {
                min_gauge2 = std::move(g2);
                // area/4 <= scale^2 <= min gauge^2, so the cell is dead once
                // the running minimum drops to the best value already found.
                if (min_gauge2->compare(prune) <= 0) {
                    return CellResult{ConvexBodyParam{shape, a, b, 0}, 0, -1};
                }
            }
        }
    }

    mpq_class s2 = s2_cap;
    if (min_gauge2) s2 = std::min(s2, nonneg_lower(*min_gauge2, bits));
    mpq_class scale = sqrt_lower(s2, bits);

    CellResult out;
    out.body = ConvexBodyParam{shape, a, b, scale};
    mpq_class scale2 = scale * scale;
    out.area4_lo = (shape == BodyShape::square) ? scale2
                                                : mpq_class((scale2 / 4) * pi_enclosure(bits).lo());
    out.score = out.area4_lo.get_d();
    return out;
}

} // namespace

MinkReport mink_lower_bound_search(const std::vector<SaddleVector>& Z, const mpq_class& R,
                                   const MinkSearchOptions& opts) {
    if (sgn(R) <= 0) throw validation_error("search radius must be positive");
    if (opts.grid < 3) throw validation_error("search grid needs at least 3 points per axis");
    if (opts.a_span < 1.0 || opts.b_span < 0.0) {
        throw validation_error("search spans: need a_span >= 1 and b_span >= 0");
    }

    std::vector<SaddleVector> zs = Z;
    if (opts.conjugate) {
        const Mat2& A = *opts.conjugate;
        if (A.det().compare(FieldElement::one(A.a.descriptor())) != 0) {
            throw validation_error("conjugating matrix must have determinant 1");
        }
        Mat2 inv = A.inverse();
        for (auto& z : zs) z = inv.apply(z);
    }

    std::vector<BodyShape> shapes;
    if (opts.squares) shapes.push_back(BodyShape::square);
    if (opts.disks) shapes.push_back(BodyShape::disk);

    struct Best {
        BodyShape shape;
        double ta, bv;  // log-grid coordinate for a; raw value for b
        CellResult cell;
    };
    std::optional<Best> best;

    // Snap search coordinates to exact rationals; all scoring from here on is
    // exact, so a conjugated run (same options, Z = A * Z0) follows the same path.
    auto consider = [&](BodyShape shape, double ta, double bv) {
        mpq_class a(std::pow(opts.a_span, ta));
        mpq_class b(bv);
        mpq_class prune = best ? best->cell.area4_lo : mpq_class(0);
        CellResult cell = evaluate_cell(shape, a, b, zs, R, prune, opts.bits);
        if (!best || cell.score > best->cell.score) best = Best{shape, ta, bv, cell};
    };

    const int n = opts.grid | 1;
    for (BodyShape shape : shapes) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double ta = -1.0 + 2.0 * i / (n - 1);
                double tb = -1.0 + 2.0 * j / (n - 1);
                consider(shape, ta, opts.b_span * tb);
            }
        }
    }

    if (best) {
        double dta = 2.0 / (n - 1);
        double dbv = 2.0 * opts.b_span / (n - 1);
        for (int round = 0; round < opts.refine_rounds; ++round) {
            // Hill-climb at the current resolution, then halve the steps.
            for (int moves = 0; moves < 16; ++moves) {
                Best before = *best;
                for (int di = -1; di <= 1; ++di) {
                    for (int dj = -1; dj <= 1; ++dj) {
                        if (di == 0 && dj == 0) continue;
                        consider(before.shape, before.ta + di * dta, before.bv + dj * dbv);
                    }
                }
                if (best->cell.score <= before.cell.score) break;
            }
            dta /= 2;
            dbv /= 2;
        }
    }

    MinkReport rep;
    mpq_class area4_lo = 0;
    if (best && best->cell.score > 0) {
        rep.witness = best->cell.body;
        area4_lo = best->cell.area4_lo;
        rep.lower_bound = area4_lo.get_d();
    } else {
        rep.witness = ConvexBodyParam{BodyShape::square, 1, 0, 0};
        rep.lower_bound = 0;
    }

    if (opts.volume) {
        RatInterval pivol = pi_enclosure(opts.bits) * opts.volume->enclosure(opts.bits);
        rep.upper_bound = pivol.hi_double();
        if (area4_lo > pivol.hi()) {
            throw check_error("lower-bound search exceeded the pi*vol upper bound");
        }
    }

    // The witness must avoid the supplied list (in the image frame when
    // conjugated, where the R cap was applied).
    if (!body_avoids(rep.witness, zs, R)) {
        throw check_error("search produced a witness that does not avoid Z");
    }
    return rep;
}

} // namespace sctk
