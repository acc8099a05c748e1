#include "sctk/direction.hpp"

#include <cctype>
#include <vector>

#include "sctk/errors.hpp"

namespace sctk {

Direction Direction::exact(FieldElement value) {
    if (value.sign() <= 0) throw validation_error("direction must be strictly positive");
    Direction d;
    d.label_ = value.str();
    d.exact_ = std::move(value);
    return d;
}

Direction Direction::refinable(std::string label, Refiner refiner) {
    if (!refiner) throw validation_error("refinable direction needs a refinement callback");
    Direction d;
    d.label_ = std::move(label);
    d.refiner_ = std::move(refiner);
    if (d.refiner_(64).certain_sign().value_or(0) != 1) {
        throw validation_error("direction must be strictly positive");
    }
    return d;
}

Direction Direction::pi() {
    return refinable("pi", [](int bits) { return pi_enclosure(bits); });
}

Direction Direction::euler() {
    return refinable("e", [](int bits) { return e_enclosure(bits); });
}

const FieldElement& Direction::exact_value() const {
    if (!exact_) throw validation_error("direction '" + label_ + "' has no exact value");
    return *exact_;
}

RatInterval Direction::enclosure(int bits) const {
    if (exact_) return exact_->enclosure(bits);
    return refiner_(bits);
}

namespace {

struct Lexer {
    std::string s;
    std::size_t i = 0;

    explicit Lexer(const std::string& text) {
        s.reserve(text.size());
        for (char c : text) {
            if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
        }
    }

    bool done() const { return i >= s.size(); }
    char peek() const { return done() ? '\0' : s[i]; }
    bool eat(char c) {
        if (peek() != c) return false;
        ++i;
        return true;
    }
    bool eat_word(const char* w) {
        std::size_t n = std::char_traits<char>::length(w);
        if (s.compare(i, n, w) != 0) return false;
        i += n;
        return true;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw usage_error("cannot parse '" + s + "' at position " + std::to_string(i) +
                          ": " + why);
    }

    mpz_class digits() {
        std::string d;
        while (std::isdigit(static_cast<unsigned char>(peek()))) d.push_back(s[i++]);
        if (d.empty()) fail("expected digits");
        return mpz_class(d);
    }

    // int | int "/" uint | decimal, with an optional leading sign.
    mpq_class rational(bool allow_sign) {
        int sign = 1;
        if (allow_sign) {
            if (eat('-')) sign = -1;
            else eat('+');
        }
        mpz_class whole = digits();
        if (eat('.')) {
            std::string frac;
            while (std::isdigit(static_cast<unsigned char>(peek()))) frac.push_back(s[i++]);
            if (frac.empty()) fail("expected digits after the decimal point");
            mpz_class scale;
            mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
            mpq_class q(whole * scale + mpz_class(frac), scale);
            q.canonicalize();
            return sign * q;
        }
        if (eat('/')) {
            mpz_class den = digits();
            if (den == 0) fail("zero denominator");
            mpq_class q(whole, den);
            q.canonicalize();
            return sign * q;
        }
        return mpq_class(sign * whole);
    }
};

struct Term {
    mpq_class coeff;  // rational factor
    mpz_class index;  // radicand after extraction of square factors; 1 for rational terms
};

// Splits n = square * d with d square-free; returns {sqrt(square), d}.
std::pair<mpz_class, mpz_class> extract_square(const mpz_class& n) {
    mpz_class root = 1, rest = n, f = 2;
    while (f * f <= rest) {
        while (mpz_divisible_p(rest.get_mpz_t(), mpz_class(f * f).get_mpz_t())) {
            rest /= f * f;
            root *= f;
        }
        ++f;
    }
    return {root, rest};
}

Term parse_term(Lexer& lx, bool allow_sign) {
    if (lx.eat_word("sqrt(")) {
        mpz_class n = lx.digits();
        if (!lx.eat(')')) lx.fail("expected ')' closing sqrt");
        if (n <= 0) lx.fail("sqrt index must be positive");
        auto [root, rest] = extract_square(n);
        return {mpq_class(root), rest};
    }
    mpq_class coeff = lx.rational(allow_sign);
    if (lx.eat('*')) {
        if (!lx.eat_word("sqrt(")) lx.fail("expected sqrt(...) after '*'");
        mpz_class n = lx.digits();
        if (!lx.eat(')')) lx.fail("expected ')' closing sqrt");
        if (n <= 0) lx.fail("sqrt index must be positive");
        auto [root, rest] = extract_square(n);
        return {coeff * root, rest};
    }
    return {coeff, mpz_class(1)};
}

FieldElement assemble(const std::vector<Term>& terms, const mpz_class& divisor, Lexer& lx) {
    mpq_class a = 0, b = 0;
    mpz_class d = 1;
    for (const auto& t : terms) {
        if (t.index == 1) {
            a += t.coeff;
        } else if (d == 1 || d == t.index) {
            d = t.index;
            b += t.coeff;
        } else {
            lx.fail("only one square-free radical may appear");
        }
    }
    a /= mpq_class(divisor);
    b /= mpq_class(divisor);
    if (d == 1 || b == 0) return FieldElement::rational(a);
    if (!d.fits_slong_p()) lx.fail("radical index too large");
    FieldDescriptor k = FieldDescriptor::quadratic(d.get_si());
    return FieldElement::make(k, a, b);
}

} // namespace

FieldElement parse_field_literal(const std::string& text) {
    Lexer lx(text);
    if (lx.done()) lx.fail("empty input");

    std::vector<Term> terms;
    mpz_class divisor = 1;
    if (lx.eat('(')) {
        terms.push_back(parse_term(lx, true));
        while (lx.peek() == '+' || lx.peek() == '-') {
            bool neg = lx.eat('-');
            if (!neg) lx.eat('+');
            Term t = parse_term(lx, false);
            if (neg) t.coeff = -t.coeff;
            terms.push_back(t);
        }
        if (!lx.eat(')')) lx.fail("expected ')'");
        if (!lx.eat('/')) lx.fail("expected '/' after ')'");
        divisor = lx.digits();
        if (divisor == 0) lx.fail("zero denominator");
    } else {
        terms.push_back(parse_term(lx, true));
        while (lx.peek() == '+' || lx.peek() == '-') {
            bool neg = lx.eat('-');
            if (!neg) lx.eat('+');
            Term t = parse_term(lx, false);
            if (neg) t.coeff = -t.coeff;
            terms.push_back(t);
        }
        if (lx.peek() == '/') {
            lx.fail("division must wrap a parenthesized sum: write (a+b*sqrt(d))/m");
        }
    }
    if (!lx.done()) lx.fail("unexpected trailing input");
    return assemble(terms, divisor, lx);
}

Direction parse_direction(const std::string& text) {
    Lexer probe(text);
    if (probe.eat_word("pi") && probe.done()) return Direction::pi();
    Lexer probe2(text);
    if (probe2.eat_word("e") && probe2.done()) return Direction::euler();
    return Direction::exact(parse_field_literal(text));
}

} // namespace sctk
