#include "sctk/interval.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>

namespace sctk {

RatInterval::RatInterval(mpq_class lo, mpq_class hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_ > hi_) throw validation_error("interval endpoints out of order");
}

std::optional<int> RatInterval::certain_sign() const {
    if (sgn(lo_) > 0) return 1;
    if (sgn(hi_) < 0) return -1;
    if (sgn(lo_) == 0 && sgn(hi_) == 0) return 0;
    return std::nullopt;
}

RatInterval RatInterval::operator*(const RatInterval& o) const {
    std::array<mpq_class, 4> p = {lo_ * o.lo_, lo_ * o.hi_, hi_ * o.lo_, hi_ * o.hi_};
    auto [mn, mx] = std::minmax_element(p.begin(), p.end());
    return RatInterval(*mn, *mx);
}

RatInterval RatInterval::operator/(const RatInterval& o) const {
    if (o.contains_zero()) throw validation_error("interval division by an interval containing zero");
    std::array<mpq_class, 4> p = {lo_ / o.lo_, lo_ / o.hi_, hi_ / o.lo_, hi_ / o.hi_};
    auto [mn, mx] = std::minmax_element(p.begin(), p.end());
    return RatInterval(*mn, *mx);
}

RatInterval RatInterval::abs() const {
    if (sgn(lo_) >= 0) return *this;
    if (sgn(hi_) <= 0) return -*this;
    return RatInterval(mpq_class(0), std::max(mpq_class(-lo_), hi_));
}

RatInterval RatInterval::square() const {
    RatInterval a = abs();
    return RatInterval(a.lo_ * a.lo_, a.hi_ * a.hi_);
}

namespace {

double directed_double(const mpq_class& q, mpfr_rnd_t rnd) {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_set_q(t, q.get_mpq_t(), rnd);
    double d = mpfr_get_d(t, rnd);
    mpfr_clear(t);
    return d;
}

/** Every finite mpfr value is dyadic; recover it exactly as a rational. */
mpq_class mpfr_to_rational(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return mpq_class(0);
    mpz_class mant;
    mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), x);
    mpq_class q(mant);
    if (e >= 0) {
        mpz_class p2;
        mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(e));
        q *= p2;
    } else {
        mpz_class p2;
        mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(-e));
        q /= p2;
    }
    return q;
}

template <class F>
RatInterval mpfr_enclosure(int bits, F&& eval) {
    if (bits < 8) bits = 8;
    mpfr_t lo, hi;
    mpfr_init2(lo, bits + 16);
    mpfr_init2(hi, bits + 16);
    eval(lo, MPFR_RNDD);
    eval(hi, MPFR_RNDU);
    RatInterval r(mpfr_to_rational(lo), mpfr_to_rational(hi));
    mpfr_clear(lo);
    mpfr_clear(hi);
    return r;
}

} // namespace

double RatInterval::lo_double() const { return directed_double(lo_, MPFR_RNDD); }
double RatInterval::hi_double() const { return directed_double(hi_, MPFR_RNDU); }
double RatInterval::mid_double() const { return mid().get_d(); }

std::string RatInterval::str() const {
    return "[" + lo_.get_str() + ", " + hi_.get_str() + "]";
}

RatInterval operator*(const mpq_class& s, const RatInterval& iv) {
    if (sgn(s) >= 0) return RatInterval(s * iv.lo(), s * iv.hi());
    return RatInterval(s * iv.hi(), s * iv.lo());
}

RatInterval operator+(const mpq_class& s, const RatInterval& iv) {
    return RatInterval(s + iv.lo(), s + iv.hi());
}

RatInterval hull(const RatInterval& a, const RatInterval& b) {
    return RatInterval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

RatInterval max_one_abs(const RatInterval& iv) {
    RatInterval a = iv.abs();
    return RatInterval(std::max(mpq_class(1), a.lo()), std::max(mpq_class(1), a.hi()));
}

RatInterval sqrt_enclosure(const mpq_class& x, int bits) {
    if (sgn(x) < 0) throw validation_error("sqrt_enclosure of a negative rational");
    if (sgn(x) == 0) return RatInterval::point(mpq_class(0));
    if (bits < 1) bits = 1;
    // sqrt(n/d) = sqrt(n*d)/d; scale by 4^bits so the integer sqrt carries
    // `bits` fractional bits.
    mpz_class nd = x.get_num() * x.get_den();
    mpz_class scaled;
    mpz_ui_pow_ui(scaled.get_mpz_t(), 2, static_cast<unsigned long>(2 * bits));
    scaled *= nd;
    mpz_class root, rem;
    mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t());
    mpz_class den2;
    mpz_ui_pow_ui(den2.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    den2 *= x.get_den();
    mpq_class lo(root, den2);
    lo.canonicalize();
    if (sgn(rem) == 0) return RatInterval::point(lo);
    mpq_class hi(root + 1, den2);
    hi.canonicalize();
    return RatInterval(lo, hi);
}

RatInterval log_enclosure(const RatInterval& x, int bits) {
    if (sgn(x.lo()) <= 0) throw validation_error("log_enclosure requires a positive interval");
    return mpfr_enclosure(bits, [&](mpfr_ptr out, mpfr_rnd_t rnd) {
        mpfr_t arg;
        mpfr_init2(arg, mpfr_get_prec(out));
        const mpq_class& q = (rnd == MPFR_RNDD) ? x.lo() : x.hi();
        mpfr_set_q(arg, q.get_mpq_t(), rnd);
        mpfr_log(out, arg, rnd);
        mpfr_clear(arg);
    });
}

RatInterval log_enclosure(const mpq_class& x, int bits) {
    return log_enclosure(RatInterval::point(x), bits);
}

RatInterval log_plus_enclosure(const RatInterval& x, int bits) {
    if (x.hi() <= 1) return RatInterval::point(mpq_class(0));
    RatInterval clamped(std::max(mpq_class(1), x.lo()), x.hi());
    RatInterval lg = log_enclosure(clamped, bits);
    return RatInterval(std::max(mpq_class(0), lg.lo()), std::max(mpq_class(0), lg.hi()));
}

RatInterval pi_enclosure(int bits) {
    return mpfr_enclosure(bits, [](mpfr_ptr out, mpfr_rnd_t rnd) { mpfr_const_pi(out, rnd); });
}

RatInterval e_enclosure(int bits) {
    return mpfr_enclosure(bits, [](mpfr_ptr out, mpfr_rnd_t rnd) {
        mpfr_t one;
        mpfr_init2(one, mpfr_get_prec(out));
        mpfr_set_ui(one, 1, MPFR_RNDN);
        mpfr_exp(out, one, rnd);
        mpfr_clear(one);
    });
}

} // namespace sctk
