#include "sctk/zexp.hpp"

#include <algorithm>

#include "sctk/errors.hpp"

namespace sctk {
namespace {

/** Common field of theta and the vector components, when one exists. */
std::optional<FieldDescriptor> common_field(const Direction& theta, const FieldDescriptor& vf) {
    if (!theta.is_exact()) return std::nullopt;
    FieldDescriptor tf = theta.exact_value().descriptor();
    if (tf == vf) return tf;
    if (tf.kind == FieldKind::rational) return vf;
    if (vf.kind == FieldKind::rational) return tf;
    return std::nullopt; // two distinct quadratic fields: fall back to intervals
}

/**
 * Adaptive comparator for hor values.  Exact field arithmetic when theta and
 * the vectors share a field; otherwise interval refinement up to a bit cap.
 * Two distinct half-plane vectors can only tie when theta lies in the vector
 * field, which is exactly the exact-mode case, so interval refinement always
 * terminates for honest inputs; the cap converts the remaining cases into a
 * precision error instead of a wrong answer.
 */
class HorCmp {
  public:
    HorCmp(const Direction& theta, const FieldDescriptor& vf, int start_bits, int max_bits)
        : theta_(&theta), start_(start_bits), cap_(max_bits), common_(common_field(theta, vf)) {}

    bool exact_mode() const { return common_.has_value(); }

    FieldElement exact_hor(const SaddleVector& v) const {
        FieldElement t = theta_->exact_value().promoted(*common_);
        return (v.y.promoted(*common_) * t - v.x.promoted(*common_)).abs();
    }

    RatInterval encl(const SaddleVector& v, int bits) const {
        if (common_) return exact_hor(v).enclosure(bits);
        RatInterval t = theta_->enclosure(bits);
        return (v.y.enclosure(bits) * t - v.x.enclosure(bits)).abs();
    }

    /** Sign of hor(a) - hor(b); throws when undecidable at the cap. */
    int compare(const SaddleVector& a, const SaddleVector& b) const {
        if (common_) return (exact_hor(a) - exact_hor(b)).sign();
        for (int bits = start_;; bits *= 2) {
            RatInterval ia = encl(a, bits), ib = encl(b, bits);
            if (ia.certainly_lt(ib)) return -1;
            if (ib.certainly_lt(ia)) return 1;
            if (bits >= cap_) break;
        }
        throw precision_error("hor comparison undecided at the precision cap; theta may "
                              "coincide with an element of the vector field");
    }

    /** Sign of hor(a) (0 or +1); throws when undecidable at the cap. */
    int compare_zero(const SaddleVector& a) const {
        if (common_) return exact_hor(a).sign();
        for (int bits = start_;; bits *= 2) {
            RatInterval ia = encl(a, bits);
            if (auto s = ia.certain_sign(); s && *s > 0) return 1;
            if (bits >= cap_) break;
        }
        throw precision_error("cannot decide whether a vector lies exactly on the ray at the "
                              "precision cap");
    }

  private:
    const Direction* theta_;
    int start_, cap_;
    std::optional<FieldDescriptor> common_;
};

bool lex_less(const SaddleVector& a, const SaddleVector& b) {
    int cx = a.x.compare(b.x);
    if (cx != 0) return cx < 0;
    return a.y.compare(b.y) < 0;
}

/** Sign of theta*x + y; 0 only when exactly decidable (shared-field case). */
int half_plane_sign(const SaddleVector& v, const Direction& theta, int start_bits,
                    int max_bits) {
    if (auto cf = common_field(theta, v.x.descriptor())) {
        FieldElement t = theta.exact_value().promoted(*cf);
        return (t * v.x.promoted(*cf) + v.y.promoted(*cf)).sign();
    }
    for (int bits = start_bits;; bits *= 2) {
        RatInterval dot = theta.enclosure(bits) * v.x.enclosure(bits) + v.y.enclosure(bits);
        if (auto s = dot.certain_sign()) return *s;
        if (bits >= max_bits) break;
    }
    throw precision_error("half-plane test undecided at the precision cap");
}

} // namespace

RatInterval hor_theta(const SaddleVector& v, const Direction& theta, int bits) {
    return HorCmp(theta, v.x.descriptor(), bits, bits).encl(v, bits);
}

std::optional<FieldElement> hor_theta_exact(const SaddleVector& v, const Direction& theta) {
    HorCmp cmp(theta, v.x.descriptor(), 64, 64);
    if (!cmp.exact_mode()) return std::nullopt;
    return cmp.exact_hor(v);
}

bool in_positive_half_plane(const SaddleVector& v, const Direction& theta, int start_bits,
                            int max_bits) {
    int s = half_plane_sign(v, theta, start_bits, max_bits);
    if (s == 0) throw validation_error("vector lies exactly on the half-plane boundary");
    return s > 0;
}

std::vector<ConvergentRecord> z_expansion(VectorStream& stream, const Direction& theta,
                                          const ZExpOptions& opts) {
    if (opts.start_bits < 8 || opts.max_bits < opts.start_bits) {
        throw validation_error("invalid precision ladder");
    }
    if (opts.max_terms && *opts.max_terms <= 0) throw validation_error("max_terms must be >= 1");

    std::vector<ConvergentRecord> records;
    std::optional<HorCmp> cmp;

    std::vector<SaddleVector> group;
    std::optional<FieldElement> group_h;
    std::optional<SaddleVector> best; // representative of the running hor minimum
    bool stop = false;

    auto process_group = [&](bool provisional) {
        if (group.empty() || stop) return;
        std::vector<SaddleVector> tie{group.front()};
        for (std::size_t i = 1; i < group.size(); ++i) {
            int c = cmp->compare(group[i], tie.front());
            if (c < 0) {
                tie.assign(1, group[i]);
            } else if (c == 0) {
                tie.push_back(group[i]);
            }
        }
        if (best && cmp->compare(tie.front(), *best) > 0) return; // beaten at a lower height
        std::sort(tie.begin(), tie.end(), lex_less);
        bool on_ray = cmp->compare_zero(tie.front()) == 0;
        for (const auto& v : tie) {
            ConvergentRecord rec;
            rec.index = static_cast<int>(records.size());
            rec.vector = v;
            rec.hor = cmp->encl(v, opts.start_bits);
            if (cmp->exact_mode()) rec.hor_exact = cmp->exact_hor(v);
            rec.provisional = provisional;
            rec.terminating = on_ray;
            records.push_back(std::move(rec));
        }
        best = tie.front();
        if (on_ray) stop = true;
        if (opts.max_terms && static_cast<int>(records.size()) >= *opts.max_terms) stop = true;
    };

    std::optional<FieldElement> prev_h;
    while (!stop) {
        std::optional<SaddleVector> v = stream.next();
        if (!v) {
            process_group(!stream.last_group_complete());
            break;
        }
        // The half-plane is open: boundary vectors are simply not candidates.
        if (half_plane_sign(*v, theta, opts.start_bits, opts.max_bits) <= 0) continue;
        if (!cmp) cmp.emplace(theta, v->x.descriptor(), opts.start_bits, opts.max_bits);
        FieldElement h = v->height();
        if (prev_h && (h - *prev_h).sign() < 0) {
            throw check_error("vector stream is not sorted by height");
        }
        prev_h = h;
        if (opts.max_height) {
            FieldElement bound =
                FieldElement::rational(*opts.max_height).promoted(h.descriptor());
            if ((h - bound).sign() > 0) {
                process_group(false); // a taller vector arrived: the group is complete
                break;
            }
        }
        if (group_h && (h - *group_h).sign() == 0) {
            group.push_back(*v);
        } else {
            process_group(false);
            group.assign(1, *v);
            group_h = h;
        }
    }
    return records;
}

TerminationReport termination_check(VectorStream& stream, const Direction& theta,
                                    const mpq_class& height_bound, const ZExpOptions& opts) {
    TerminationReport rep;
    rep.height_bound = height_bound;
    std::optional<HorCmp> cmp;
    bool first = true;
    while (true) {
        std::optional<SaddleVector> v = stream.next();
        if (!v) break;
        if (half_plane_sign(*v, theta, opts.start_bits, opts.max_bits) <= 0) continue;
        FieldElement h = v->height();
        if (first) {
            if (h.sign() != 0) {
                throw validation_error("termination check requires Z to contain a nonzero "
                                       "x-axis element (no height-0 vector in the stream)");
            }
            first = false;
        }
        FieldElement bound = FieldElement::rational(height_bound).promoted(h.descriptor());
        if ((h - bound).sign() > 0) break;
        if (!cmp) cmp.emplace(theta, v->x.descriptor(), opts.start_bits, opts.max_bits);
        if (cmp->compare_zero(*v) == 0) {
            rep.terminating = true;
            rep.element = *v;
            break;
        }
    }
    return rep;
}

SandwichReport sandwich_check(const std::vector<ConvergentRecord>& records,
                              const Direction& theta, const RatInterval& mu,
                              const ZExpOptions& opts) {
    SandwichReport rep;
    if (mu.certain_sign().value_or(0) != 1) {
        throw validation_error("mu must be a strictly positive enclosure");
    }

    // Last record of each positive-height group, excluding provisional and
    // terminating records.
    std::vector<const ConvergentRecord*> kept;
    for (const auto& r : records) {
        if (r.provisional || r.terminating) continue;
        if (r.vector.height().sign() == 0) continue;
        if (!kept.empty() &&
            (kept.back()->vector.height() - r.vector.height()).sign() == 0) {
            kept.back() = &r;
        } else {
            kept.push_back(&r);
        }
    }
    if (kept.size() < 2) return rep;

    HorCmp cmp(theta, kept.front()->vector.x.descriptor(), opts.start_bits, opts.max_bits);

    for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
        const ConvergentRecord& ra = *kept[i];
        const ConvergentRecord& rb = *kept[i + 1];
        // Canonical (p, q) with q > 0 (p/q is invariant under negating both).
        auto canon = [](const SaddleVector& v) {
            if (v.y.sign() < 0) return SaddleVector{-v.x, -v.y, v.multiplicity};
            return v;
        };
        SaddleVector a = canon(ra.vector), b = canon(rb.vector);

        SandwichStep step;
        step.left_index = ra.index;
        step.left = a;
        step.right = b;

        FieldElement cross = (a.x * b.y - b.x * a.y).abs();
        FieldElement qq = a.y * b.y;
        FieldElement two = FieldElement::rational(2).promoted(qq.descriptor());
        FieldElement lower = cross / (two * qq); // |pQ-Pq|/(2qQ)

        bool lower_done = false, upper_done = false;
        for (int bits = opts.start_bits;; bits *= 2) {
            // mid = |theta - p/q| = hor(a) / q
            RatInterval mid = cmp.encl(a, bits) / a.y.enclosure(bits);
            if (!lower_done) {
                RatInterval lo = lower.enclosure(bits);
                if (lo.certainly_lt(mid)) {
                    step.pass_lower = true;
                    step.lower_margin = (mid - lo).lo_double();
                    lower_done = true;
                } else if (mid.certainly_lt(lo)) {
                    step.pass_lower = false;
                    step.lower_margin = -(lo - mid).lo_double();
                    lower_done = true;
                }
            }
            if (!upper_done) {
                RatInterval bound = mu / qq.enclosure(bits);
                if (mid.certainly_le(bound)) {
                    step.pass_upper = true;
                    step.upper_margin = (bound - mid).lo_double();
                    upper_done = true;
                } else if (bound.certainly_lt(mid)) {
                    step.pass_upper = false;
                    step.upper_margin = -(mid - bound).lo_double();
                    upper_done = true;
                }
            }
            if (lower_done && upper_done) break;
            if (bits >= opts.max_bits) {
                throw precision_error("sandwich inequality undecided at the precision cap");
            }
        }
        rep.ok = rep.ok && step.pass_lower && step.pass_upper;
        rep.steps.push_back(std::move(step));
    }
    rep.pairs = static_cast<int>(rep.steps.size());
    return rep;
}

} // namespace sctk
