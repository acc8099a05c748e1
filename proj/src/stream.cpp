#include "sctk/stream.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sctk/errors.hpp"

namespace sctk {

// ---------------------------------------------------------------------------
// SortedVectorStream

SortedVectorStream::SortedVectorStream(std::vector<SaddleVector> vectors,
                                       std::optional<mpq_class> certified_height) {
    std::sort(vectors.begin(), vectors.end(), height_lex_less);
    if (certified_height) {
        certified_ = true;
        std::optional<FieldElement> bound;
        for (auto& v : vectors) {
            FieldElement h = v.height();
            if (!bound || bound->descriptor() != h.descriptor()) {
                bound = FieldElement::rational(*certified_height).promoted(h.descriptor());
            }
            if ((h - *bound).sign() <= 0) vs_.push_back(std::move(v));
        }
    } else {
        vs_ = std::move(vectors);
    }
}

std::optional<SaddleVector> SortedVectorStream::next() {
    if (i_ >= vs_.size()) return std::nullopt;
    return vs_[i_++];
}

// ---------------------------------------------------------------------------
// PrimitiveLatticeStream

namespace {

/** Directed long-double bracket of a positive rational interval. */
std::pair<long double, long double> ld_bracket(const RatInterval& iv) {
    // Round through doubles with a relative inflation that dominates both the
    // rational-to-float conversion error and the interval width.
    long double lo = static_cast<long double>(iv.lo_double());
    long double hi = static_cast<long double>(iv.hi_double());
    long double pad = std::max(fabsl(hi), fabsl(lo)) * 1e-17L + 1e-300L;
    return {lo - pad, hi + pad};
}

} // namespace

PrimitiveLatticeStream::PrimitiveLatticeStream(const Direction& theta, std::int64_t height_cap)
    : theta_(theta), cap_(height_cap) {
    if (height_cap < 0) throw validation_error("height cap must be nonnegative");
    auto [lo, hi] = ld_bracket(theta.enclosure(128));
    t_lo_ = lo;
    t_hi_ = hi;
    if (!(t_lo_ > 0)) throw validation_error("direction bracket must be positive");
    // Height-0 group: (1,0) is the only primitive x-axis vector in the open
    // positive half-plane; its hor is exactly 1.
    out_.push_back(SaddleVector{FieldElement::rational(1), FieldElement::rational(0), 1});
    min_upper_ = 1.0L + 1e-12L;
}

void PrimitiveLatticeStream::advance() {
    while (out_.empty()) {
        if (q_ >= cap_) {
            done_ = true;
            truncated_ = true; // Z continues beyond any finite cap
            return;
        }
        ++q_;
        long double qd = static_cast<long double>(q_);
        long double t = t_lo_ * qd;
        long double err = (t_hi_ - t_lo_) * qd + fabsl(t) * 0x1p-60L + 1e-300L;
        long double fl = floorl(t);
        long double frac = t - fl;
        long double dist = std::min(frac, 1.0L - frac);
        if (dist > min_upper_ + err + 1e-12L) continue; // no candidate can matter here

        // Candidate x around theta*q.  floor is certain to within +-1 given
        // err < 1; widen by one more on each side when err is not small.
        std::int64_t f = static_cast<std::int64_t>(fl);
        int spread = err < 0.25L ? 1 : 2;
        for (std::int64_t x = f - spread; x <= f + 1 + spread; ++x) {
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), mpz_class(x).get_mpz_t(), mpz_class(q_).get_mpz_t());
            if (g != 1) continue; // not primitive, not an element of Z
            long double hor_approx = fabsl(t - static_cast<long double>(x));
            min_upper_ = std::min(min_upper_, hor_approx + err + 1e-12L);
            out_.push_back(SaddleVector{FieldElement::rational(mpq_class(x)),
                                        FieldElement::rational(mpq_class(q_)), 1});
        }
    }
}

std::optional<SaddleVector> PrimitiveLatticeStream::next() {
    if (out_.empty() && !done_) advance();
    if (out_.empty()) return std::nullopt;
    SaddleVector v = std::move(out_.front());
    out_.pop_front();
    return v;
}

// ---------------------------------------------------------------------------
// Orbit ray strip

namespace {

/**
 * Exact membership test for the working region: the hub ball union the strip
 * {|y| <= y_cap, hor possibly <= hor_cap}, with hor ranged over the rational
 * theta bracket.  A fast double-precision pre-filter rejects far-outside
 * points without any exact arithmetic.
 */
class RegionTest {
  public:
    RegionTest(const FieldDescriptor& field, const RatInterval& theta, const mpq_class& y_cap,
               const mpq_class& hor_cap, const mpq_class& hub_radius)
        : t_lo_(FieldElement::rational(theta.lo()).promoted(field)),
          t_hi_(FieldElement::rational(theta.hi()).promoted(field)),
          y_cap_(FieldElement::rational(y_cap).promoted(field)),
          hor_cap_(FieldElement::rational(hor_cap).promoted(field)),
          hub_sq_(FieldElement::rational(hub_radius * hub_radius).promoted(field)),
          sqrt_d_(field.kind == FieldKind::quadratic ? std::sqrt(double(field.d)) : 0.0),
          t_lo_d_(theta.lo_double()), t_hi_d_(theta.hi_double()),
          y_cap_d_(mpq_class(y_cap).get_d()), hor_cap_d_(mpq_class(hor_cap).get_d()),
          hub_d_(std::sqrt(mpq_class(hub_radius * hub_radius).get_d())) {}

    bool contains(const SaddleVector& v) const {
        // Pre-filter with a generous absolute slack; only near-boundary points
        // fall through to exact arithmetic.
        double xd = v.x.a().get_d() + v.x.b().get_d() * sqrt_d_;
        double yd = v.y.a().get_d() + v.y.b().get_d() * sqrt_d_;
        double slack = 1e-6 * (std::fabs(xd) + std::fabs(yd) + 1.0);
        double r = std::hypot(xd, yd);
        bool maybe_hub = r <= hub_d_ + slack;
        double h1 = yd * t_lo_d_ - xd, h2 = yd * t_hi_d_ - xd;
        double hor_min_d = (h1 < 0) != (h2 < 0) ? 0.0 : std::min(std::fabs(h1), std::fabs(h2));
        bool maybe_strip = std::fabs(yd) <= y_cap_d_ + slack && hor_min_d <= hor_cap_d_ + slack;
        if (!maybe_hub && !maybe_strip) return false;

        if (maybe_hub && (v.norm_sq() - hub_sq_).sign() <= 0) return true;
        if (!maybe_strip) return false;
        FieldElement ay = v.y.sign() < 0 ? -v.y : v.y;
        if ((ay - y_cap_).sign() > 0) return false;
        FieldElement m1 = v.y * t_lo_ - v.x;
        FieldElement m2 = v.y * t_hi_ - v.x;
        int s1 = m1.sign(), s2 = m2.sign();
        if (s1 * s2 <= 0) return true; // hor range includes 0
        FieldElement a1 = s1 < 0 ? -m1 : m1;
        FieldElement a2 = s2 < 0 ? -m2 : m2;
        const FieldElement& hor_lo = (a1 - a2).sign() <= 0 ? a1 : a2;
        return (hor_lo - hor_cap_).sign() <= 0;
    }

  private:
    FieldElement t_lo_, t_hi_, y_cap_, hor_cap_, hub_sq_;
    double sqrt_d_;
    double t_lo_d_, t_hi_d_, y_cap_d_, hor_cap_d_, hub_d_;
};

} // namespace

namespace {

double fe_approx(const FieldElement& e, double sqrt_d) {
    return e.a().get_d() + e.b().get_d() * sqrt_d;
}

/**
 * Greedy word search for a group element M shrinking the mapped corners
 * toward the origin.  Scoring is floating-point: a suboptimal word only costs
 * enumeration time, never correctness, since the ball radius is re-derived
 * exactly from the chosen M.  When no single letter improves, letter pairs
 * are tried before giving up, which gets past rotate-then-shear saddle points.
 */
Mat2 contract_frame(const GroupOrbitModel& m,
                    const std::vector<std::pair<mpq_class, mpq_class>>& corners, int max_len) {
    double sqrt_d = m.field.kind == FieldKind::quadratic ? std::sqrt(double(m.field.d)) : 0.0;
    std::vector<Mat2> letters;
    for (const auto& g : m.generators) {
        letters.push_back(g);
        letters.push_back(g.inverse());
    }
    auto score = [&](const Mat2& M) {
        double ma = fe_approx(M.a, sqrt_d), mb = fe_approx(M.b, sqrt_d);
        double mc = fe_approx(M.c, sqrt_d), md = fe_approx(M.d, sqrt_d);
        double worst = 0;
        for (const auto& [cx, cy] : corners) {
            double x = cx.get_d(), y = cy.get_d();
            double ix = ma * x + mb * y, iy = mc * x + md * y;
            worst = std::max(worst, ix * ix + iy * iy);
        }
        return worst;
    };
    Mat2 M = Mat2::identity(m.field);
    double cur = score(M);
    for (int len = 0; len < max_len; ++len) {
        Mat2 best = M;
        double best_score = cur;
        for (const auto& l : letters) {
            Mat2 cand = l * M;
            double s = score(cand);
            if (s < best_score) {
                best_score = s;
                best = cand;
            }
            for (const auto& l2 : letters) {
                Mat2 cand2 = l2 * cand;
                double s2 = score(cand2);
                if (s2 < best_score) {
                    best_score = s2;
                    best = cand2;
                }
            }
        }
        if (best_score >= cur * 0.999) break;
        M = best;
        cur = best_score;
    }
    return M;
}

} // namespace

std::vector<SaddleVector> orbit_ray_vectors(const GroupOrbitModel& m, const RatInterval& theta,
                                            const mpq_class& height_cap,
                                            const RayStripOptions& opts) {
    validate_orbit_model(m);
    if (height_cap <= 0) throw validation_error("height cap must be positive");
    if (theta.certain_sign().value_or(0) != 1) {
        throw validation_error("theta bracket must be strictly positive");
    }
    if (opts.hor_cap <= 0) throw validation_error("hor cap must be positive");
    if (sgn(opts.hub_radius) < 0) throw validation_error("hub radius must be nonnegative");
    if (opts.taper_mu && *opts.taper_mu <= 0) {
        throw validation_error("taper bound must be positive");
    }

    std::unordered_map<std::string, SaddleVector> found;
    auto note = [&](SaddleVector v) {
        auto [it, fresh] = found.try_emplace(v.key(), v);
        if (!fresh) it->second.multiplicity = std::max(it->second.multiplicity, v.multiplicity);
    };

    // Hub ball: everything short, independent of the direction.
    FieldElement y_bound = FieldElement::rational(height_cap).promoted(m.field);
    if (sgn(opts.hub_radius) > 0) {
        for (auto& v : orbit_vectors(m, opts.hub_radius, opts.ball)) {
            if ((v.height() - y_bound).sign() <= 0) note(std::move(v));
        }
    }

    FieldElement e_tlo = FieldElement::rational(theta.lo()).promoted(m.field);
    FieldElement e_thi = FieldElement::rational(theta.hi()).promoted(m.field);

    // Doubling height bands.  Each band quadrilateral P (the strip piece with
    // lo <= y <= hi, widened to the theta bracket) is pulled back by the frame
    // M = A^-1, enumerated inside the certified corner ball, and mapped
    // forward; negative heights come along because both the ball and the
    // filter are symmetric under v -> -v.
    mpq_class lo = 0, hi = 4;
    while (lo < height_cap) {
        if (hi > height_cap) hi = height_cap;
        mpq_class cap = opts.hor_cap;
        if (opts.taper_mu && lo > 0) {
            mpq_class tapered = 2 * *opts.taper_mu / lo;
            if (tapered < cap) cap = tapered;
        }
        std::vector<std::pair<mpq_class, mpq_class>> corners = {{theta.lo() * lo - cap, lo},
                                                                {theta.hi() * lo + cap, lo},
                                                                {theta.lo() * hi - cap, hi},
                                                                {theta.hi() * hi + cap, hi}};
        Mat2 M = contract_frame(m, corners, opts.max_frame_length);
        mpq_class r2 = 0;
        for (const auto& [cx, cy] : corners) {
            SaddleVector img = M.apply(
                {FieldElement::make(m.field, cx, 0), FieldElement::make(m.field, cy, 0), 1});
            mpq_class bound = img.norm_sq().enclosure(64).hi();
            if (bound > r2) r2 = bound;
        }
        Mat2 A = M.inverse();
        FieldElement f_lo = FieldElement::rational(lo).promoted(m.field);
        FieldElement f_hi = FieldElement::rational(hi).promoted(m.field);
        FieldElement f_cap = FieldElement::rational(cap).promoted(m.field);
        for (const auto& w : orbit_vectors(m, sqrt_enclosure(r2, 24).hi(), opts.ball)) {
            SaddleVector v = A.apply(w);
            FieldElement ay = v.y.sign() < 0 ? -v.y : v.y;
            if ((ay - f_lo).sign() < 0 || (ay - f_hi).sign() > 0) continue;
            FieldElement m1 = v.y * e_tlo - v.x;
            FieldElement m2 = v.y * e_thi - v.x;
            int s1 = m1.sign(), s2 = m2.sign();
            if (s1 * s2 > 0) {
                FieldElement a1 = s1 < 0 ? -m1 : m1;
                FieldElement a2 = s2 < 0 ? -m2 : m2;
                const FieldElement& hor_lo = (a1 - a2).sign() <= 0 ? a1 : a2;
                if ((hor_lo - f_cap).sign() > 0) continue;
            }
            note(std::move(v));
        }
        lo = hi;
        hi = 2 * hi;
    }

    std::vector<SaddleVector> out;
    out.reserve(found.size());
    for (auto& [k, v] : found) out.push_back(std::move(v));
    std::sort(out.begin(), out.end(), height_lex_less);
    return out;
}

// ---------------------------------------------------------------------------
// Origami ray strip by full trace

std::vector<SaddleVector> origami_ray_vectors(const Origami& o, const RatInterval& theta,
                                              const mpq_class& height_cap,
                                              const mpq_class& hor_cap, int threads) {
    if (height_cap <= 0) throw validation_error("height cap must be positive");
    if (theta.certain_sign().value_or(0) != 1) {
        throw validation_error("theta bracket must be strictly positive");
    }
    // Everything with |y| <= Y and hor <= H has |x| <= theta_hi*Y + H, so a
    // trace to norm radius sqrt((theta_hi*Y + H)^2 + Y^2) covers the region.
    mpq_class xmax = theta.hi() * height_cap + hor_cap;
    mpq_class r2 = xmax * xmax + height_cap * height_cap;
    mpz_class num_root, den_root;
    mpz_sqrt(num_root.get_mpz_t(), r2.get_num().get_mpz_t());
    mpz_sqrt(den_root.get_mpz_t(), r2.get_den().get_mpz_t());
    mpq_class radius(num_root + 1, den_root > 1 ? den_root - 1 : den_root);
    radius.canonicalize();

    auto traced = trace_saddle_connections(o, radius, threads);
    RegionTest target(FieldDescriptor::rational(), theta, height_cap, hor_cap, mpq_class(0));
    std::vector<SaddleVector> out;
    for (auto& v : traced) {
        if (target.contains(v)) out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), height_lex_less);
    return out;
}

} // namespace sctk
