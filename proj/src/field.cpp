#include "sctk/field.hpp"

#include <algorithm>

namespace sctk {

namespace {

bool is_square_free(long d) {
    if (d < 2) return false;
    for (long p = 2; p * p <= d; ++p) {
        if (d % (p * p) == 0) return false;
    }
    return true;
}

int mpq_bit_size(const mpq_class& q) {
    std::size_t n = mpz_sizeinbase(q.get_num().get_mpz_t(), 2);
    std::size_t d = mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
    return static_cast<int>(n > d ? n - d : 0) + 1;
}

} // namespace

FieldDescriptor FieldDescriptor::quadratic(long d) {
    if (!is_square_free(d)) {
        throw validation_error("quadratic field parameter must be square-free and >= 2, got " +
                               std::to_string(d));
    }
    return {FieldKind::quadratic, d};
}

std::string FieldDescriptor::str() const {
    return kind == FieldKind::rational ? "Q" : "Q(sqrt(" + std::to_string(d) + "))";
}

FieldElement FieldElement::rational(mpq_class v) {
    v.canonicalize();
    return FieldElement(FieldDescriptor::rational(), std::move(v), mpq_class(0));
}

FieldElement FieldElement::rational(long num, long den) {
    mpq_class v(num, den);
    v.canonicalize();
    return rational(v);
}

FieldElement FieldElement::make(const FieldDescriptor& desc, mpq_class a, mpq_class b) {
    a.canonicalize();
    b.canonicalize();
    if (desc.kind == FieldKind::rational && sgn(b) != 0) {
        throw validation_error("rational field element with nonzero sqrt part");
    }
    return FieldElement(desc, std::move(a), std::move(b));
}

const mpq_class& FieldElement::rational_value() const {
    if (sgn(b_) != 0) throw validation_error("field element is irrational: " + str());
    return a_;
}

void FieldElement::require_same_field(const FieldElement& o) const {
    if (desc_ != o.desc_) {
        throw validation_error("field descriptor mismatch: " + desc_.str() + " vs " + o.desc_.str());
    }
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    require_same_field(o);
    return FieldElement(desc_, a_ + o.a_, b_ + o.b_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    require_same_field(o);
    return FieldElement(desc_, a_ - o.a_, b_ - o.b_);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    require_same_field(o);
    mpq_class d(desc_.d);
    return FieldElement(desc_, a_ * o.a_ + b_ * o.b_ * d, a_ * o.b_ + b_ * o.a_);
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    require_same_field(o);
    if (o.is_zero()) throw validation_error("field division by zero");
    // Multiply by the conjugate; the norm vanishes only at zero since d is
    // square-free.
    mpq_class n = o.norm();
    FieldElement num = *this * o.conjugate();
    return FieldElement(desc_, num.a_ / n, num.b_ / n);
}

FieldElement FieldElement::operator-() const { return FieldElement(desc_, -a_, -b_); }

bool FieldElement::operator==(const FieldElement& o) const {
    return desc_ == o.desc_ && a_ == o.a_ && b_ == o.b_;
}

int FieldElement::sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Signs differ; compare |a| against |b| sqrt(d) by squaring (exact: d is
    // not a perfect square, so equality cannot occur for b != 0).
    mpq_class lhs = a_ * a_, rhs = b_ * b_ * mpq_class(desc_.d);
    int c = cmp(lhs, rhs);
    if (c == 0) throw validation_error("non-square-free field parameter detected in sign()");
    return c > 0 ? sa : sb;
}

FieldElement FieldElement::conjugate() const { return FieldElement(desc_, a_, -b_); }

FieldElement FieldElement::promoted(const FieldDescriptor& target) const {
    if (desc_ == target) return *this;
    if (desc_.kind == FieldKind::rational) return FieldElement(target, a_, mpq_class(0));
    throw validation_error("cannot promote " + desc_.str() + " element into " + target.str());
}

RatInterval FieldElement::enclosure(int bits) const {
    if (sgn(b_) == 0) return RatInterval::point(a_);
    // Widen the sqrt precision so b * width stays below 2^-bits.
    int extra = std::max(0, mpq_bit_size(b_)) + 2;
    RatInterval root = sqrt_enclosure(mpq_class(desc_.d), bits + extra);
    return a_ + b_ * root;
}

std::vector<RatInterval> FieldElement::embeddings(int bits) const {
    std::vector<RatInterval> out;
    out.push_back(enclosure(bits));
    if (desc_.kind == FieldKind::quadratic) out.push_back(conjugate().enclosure(bits));
    return out;
}

std::string FieldElement::key() const {
    return a_.get_str() + "|" + b_.get_str() + "|" + std::to_string(desc_.d);
}

std::string FieldElement::str() const {
    if (sgn(b_) == 0) return a_.get_str();
    std::string sq = "sqrt(" + std::to_string(desc_.d) + ")";
    std::string bs = (sgn(b_) < 0 ? " - " : " + ");
    mpq_class babs = ::abs(b_);
    std::string bterm = (babs == 1 ? sq : babs.get_str() + "*" + sq);
    return a_.get_str() + bs + bterm;
}

bool is_algebraic_integer(const FieldElement& x) {
    if (x.is_rational_value()) return x.a().get_den() == 1;
    // a + b sqrt(d) is integral iff trace 2a and norm a^2 - b^2 d are integers.
    mpq_class tr = x.trace(), nm = x.norm();
    return tr.get_den() == 1 && nm.get_den() == 1;
}

IntegerPolynomial::IntegerPolynomial(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) {
    while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
    if (coeffs_.empty() || (coeffs_.size() == 1 && coeffs_[0] == 0)) {
        throw validation_error("zero polynomial");
    }
    if (degree() > 2) throw validation_error("polynomial degree above 2 not supported");
    mpz_class content(0);
    for (const auto& c : coeffs_) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
    if (sgn(coeffs_.back()) < 0) content = -content;
    if (content != 1) {
        for (auto& c : coeffs_) c /= content;
    }
}

FieldElement IntegerPolynomial::evaluate(const FieldElement& x) const {
    FieldElement acc = FieldElement::zero(x.descriptor());
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + FieldElement::make(x.descriptor(), mpq_class(*it), 0);
    }
    return acc;
}

std::string IntegerPolynomial::str() const {
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        const mpz_class& c = coeff(i);
        if (c == 0 && degree() > 0) continue;
        if (!out.empty()) out += sgn(c) < 0 ? " - " : " + ";
        else if (sgn(c) < 0) out += "-";
        mpz_class cab = ::abs(c);
        if (i == 0 || cab != 1) out += cab.get_str();
        if (i >= 1) out += "x";
        if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
}

IntegerPolynomial minimal_polynomial(const FieldElement& x) {
    if (x.is_rational_value()) {
        // q x - p for x = p/q in lowest terms.
        const mpq_class& v = x.a();
        return IntegerPolynomial({-v.get_num(), v.get_den()});
    }
    // x = a + b sqrt(d) with b != 0 satisfies X^2 - 2a X + (a^2 - b^2 d).
    mpq_class c1 = -x.trace(), c0 = x.norm();
    mpz_class lcm;
    mpz_lcm(lcm.get_mpz_t(), c1.get_den().get_mpz_t(), c0.get_den().get_mpz_t());
    mpq_class l(lcm);
    mpq_class C1 = c1 * l, C0 = c0 * l;
    return IntegerPolynomial({C0.get_num(), C1.get_num(), lcm});
}

mpz_class naive_height(const FieldElement& x) {
    IntegerPolynomial f = minimal_polynomial(x);
    mpz_class h(0);
    for (const auto& c : f.coeffs()) h = std::max(h, mpz_class(::abs(c)));
    return h;
}

RatInterval weil_height_enclosure(const FieldElement& x, int bits) {
    if (x.is_zero()) throw validation_error("weil height of zero is undefined");
    IntegerPolynomial f = minimal_polynomial(x);
    if (f.degree() == 1) {
        // f = q X - p: M(f) = max(|p|, q).
        mpz_class m = std::max(mpz_class(::abs(f.coeff(0))), mpz_class(f.coeff(1)));
        if (m == 1) return RatInterval::point(mpq_class(0));
        return log_enclosure(mpq_class(m), bits);
    }
    // M(f) = |c2| * max(1,|x|) * max(1,|conj x|), both roots real here.
    RatInterval m = RatInterval::point(mpq_class(::abs(f.coeff(2))));
    m = m * max_one_abs(x.enclosure(bits + 8));
    m = m * max_one_abs(x.conjugate().enclosure(bits + 8));
    RatInterval lg = log_enclosure(m, bits);
    RatInterval half = lg * RatInterval::point(mpq_class(1, 2));
    // Heights are nonnegative; tighten enclosures that dip below zero.
    return RatInterval(std::max(mpq_class(0), half.lo()), std::max(mpq_class(0), half.hi()));
}

double weil_height(const FieldElement& x) { return weil_height_enclosure(x, 96).mid_double(); }

} // namespace sctk
