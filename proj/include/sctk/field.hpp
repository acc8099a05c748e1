#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "sctk/errors.hpp"
#include "sctk/interval.hpp"

namespace sctk {

enum class FieldKind { rational, quadratic };

/**
 * Describes the ambient number field: either Q, or a real quadratic field
 * Q(sqrt(d)) with d square-free and >= 2.
 */
struct FieldDescriptor {
    FieldKind kind = FieldKind::rational;
    long d = 0;

    static FieldDescriptor rational() { return {FieldKind::rational, 0}; }
    static FieldDescriptor quadratic(long d);

    int degree() const { return kind == FieldKind::rational ? 1 : 2; }
    bool operator==(const FieldDescriptor& o) const { return kind == o.kind && d == o.d; }
    bool operator!=(const FieldDescriptor& o) const { return !(*this == o); }
    std::string str() const;
};

/**
 * Element a + b*sqrt(d) with rational a, b kept in canonical (reduced) form.
 * Rational-field elements always have b == 0.  Arithmetic requires matching
 * descriptors; promote() lifts a rational element into a quadratic field.
 */
class FieldElement {
public:
    FieldElement() : desc_(FieldDescriptor::rational()), a_(0), b_(0) {}

    static FieldElement rational(mpq_class v);
    static FieldElement rational(long num, long den = 1);
    static FieldElement make(const FieldDescriptor& desc, mpq_class a, mpq_class b);
    static FieldElement zero(const FieldDescriptor& desc) { return make(desc, 0, 0); }
    static FieldElement one(const FieldDescriptor& desc) { return make(desc, 1, 0); }
    static FieldElement sqrt_of(long d) { return make(FieldDescriptor::quadratic(d), 0, 1); }

    const FieldDescriptor& descriptor() const { return desc_; }
    const mpq_class& a() const { return a_; }
    const mpq_class& b() const { return b_; }

    bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
    bool is_rational_value() const { return sgn(b_) == 0; }
    /** The rational value; throws unless b == 0. */
    const mpq_class& rational_value() const;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const;
    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    /** Exact sign, decided by comparing a^2 against b^2 d when signs mix. */
    int sign() const;
    FieldElement abs() const { return sign() < 0 ? -*this : *this; }
    /** The nontrivial Galois conjugate a - b*sqrt(d) (identity on Q). */
    FieldElement conjugate() const;
    /** Field norm a^2 - b^2 d as a rational. */
    mpq_class norm() const { return a_ * a_ - b_ * b_ * mpq_class(desc_.d); }
    /** Field trace 2a as a rational. */
    mpq_class trace() const { return 2 * a_; }

    /** Lift into `target`; throws unless compatible (Q -> Q(sqrt d), or same field). */
    FieldElement promoted(const FieldDescriptor& target) const;

    /**
     * Enclosure of the real value under the identity embedding, of width
     * <= 2^-bits * max(1, |x|).
     */
    RatInterval enclosure(int bits) const;
    /** Enclosures of all real embeddings, identity embedding first. */
    std::vector<RatInterval> embeddings(int bits) const;
    double approx() const { return enclosure(64).mid_double(); }

    /** Total order matching the real embedding; returns sign(*this - o). */
    int compare(const FieldElement& o) const { return (*this - o).sign(); }

    /** Stable structural key for hashing and deterministic dedup. */
    std::string key() const;
    std::string str() const;

private:
    FieldElement(FieldDescriptor desc, mpq_class a, mpq_class b)
        : desc_(desc), a_(std::move(a)), b_(std::move(b)) {}
    void require_same_field(const FieldElement& o) const;

    FieldDescriptor desc_;
    mpq_class a_, b_;
};

/** True if x lies in the ring of integers of its field. */
bool is_algebraic_integer(const FieldElement& x);

/**
 * Primitive integer polynomial (content 1, positive leading coefficient),
 * stored low degree first; degree <= 2 here.
 */
class IntegerPolynomial {
public:
    explicit IntegerPolynomial(std::vector<mpz_class> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const mpz_class& coeff(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
    const std::vector<mpz_class>& coeffs() const { return coeffs_; }

    FieldElement evaluate(const FieldElement& x) const;
    std::string str() const;

private:
    std::vector<mpz_class> coeffs_;
};

/** Minimal polynomial over Z of x; degree 1 when x is rational-valued. */
IntegerPolynomial minimal_polynomial(const FieldElement& x);

/** Naive height: max |coefficient| of the minimal polynomial. */
mpz_class naive_height(const FieldElement& x);

/**
 * Logarithmic Weil height via the Mahler measure of the minimal polynomial:
 * h = log M(f) / deg.  The enclosure variant is rigorous at the given bits.
 */
RatInterval weil_height_enclosure(const FieldElement& x, int bits);
double weil_height(const FieldElement& x);

} // namespace sctk
