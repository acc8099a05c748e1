#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "sctk/errors.hpp"

namespace sctk {

/**
 * Closed interval with exact rational endpoints.  All arithmetic is exact,
 * so an interval computed from enclosures of its inputs rigorously contains
 * the true value; no rounding-mode reasoning is needed anywhere.
 */
class RatInterval {
public:
    RatInterval() : lo_(0), hi_(0) {}
    RatInterval(mpq_class lo, mpq_class hi);

    static RatInterval point(const mpq_class& v) { return RatInterval(v, v); }

    const mpq_class& lo() const { return lo_; }
    const mpq_class& hi() const { return hi_; }
    mpq_class width() const { return hi_ - lo_; }
    mpq_class mid() const { return (lo_ + hi_) / 2; }

    bool contains(const mpq_class& v) const { return lo_ <= v && v <= hi_; }
    bool contains_zero() const { return sgn(lo_) <= 0 && sgn(hi_) >= 0; }
    bool is_point() const { return lo_ == hi_; }

    /** Sign if provable from the enclosure alone, nullopt when it straddles. */
    std::optional<int> certain_sign() const;

    bool certainly_lt(const RatInterval& o) const { return hi_ < o.lo_; }
    bool certainly_le(const RatInterval& o) const { return hi_ <= o.lo_; }
    bool certainly_gt(const RatInterval& o) const { return lo_ > o.hi_; }
    bool disjoint_from(const RatInterval& o) const { return hi_ < o.lo_ || o.hi_ < lo_; }

    RatInterval operator-() const { return RatInterval(-hi_, -lo_); }
    RatInterval operator+(const RatInterval& o) const { return RatInterval(lo_ + o.lo_, hi_ + o.hi_); }
    RatInterval operator-(const RatInterval& o) const { return *this + (-o); }
    RatInterval operator*(const RatInterval& o) const;
    /** Division; throws if the divisor encloses zero. */
    RatInterval operator/(const RatInterval& o) const;

    RatInterval abs() const;
    RatInterval square() const;

    double lo_double() const; // rounded toward -inf
    double hi_double() const; // rounded toward +inf
    double mid_double() const;

    std::string str() const;

private:
    mpq_class lo_, hi_;
};

RatInterval operator*(const mpq_class& s, const RatInterval& iv);
RatInterval operator+(const mpq_class& s, const RatInterval& iv);

/** Hull of two intervals (smallest interval containing both). */
RatInterval hull(const RatInterval& a, const RatInterval& b);

/** max(point 1, |iv|), used for Mahler measure factors. */
RatInterval max_one_abs(const RatInterval& iv);

/**
 * Enclosure of sqrt(x) for x >= 0 of width <= 2^-bits, by integer square
 * root on a scaled numerator; exact point interval when x is a square.
 */
RatInterval sqrt_enclosure(const mpq_class& x, int bits);

/** Enclosure of ln(x); requires a strictly positive input interval. */
RatInterval log_enclosure(const RatInterval& x, int bits);
RatInterval log_enclosure(const mpq_class& x, int bits);

/** log^+ x = max(0, ln x); defined as 0 on enclosures reaching below 1. */
RatInterval log_plus_enclosure(const RatInterval& x, int bits);

RatInterval pi_enclosure(int bits);
RatInterval e_enclosure(int bits);

} // namespace sctk
