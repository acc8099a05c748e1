#pragma once

#include <functional>
#include <optional>
#include <string>

#include "sctk/field.hpp"
#include "sctk/interval.hpp"

namespace sctk {

/**
 * A positive ray direction theta.  Either an exact element of Q or a real
 * quadratic field, or a non-algebraic constant known only through a refinement
 * callback that yields rigorous enclosures at any requested precision.
 */
class Direction {
  public:
    using Refiner = std::function<RatInterval(int bits)>;

    /** Exact theta; throws unless the value is strictly positive. */
    static Direction exact(FieldElement value);

    /**
     * Interval-valued theta.  The refiner must return enclosures of width at
     * most 2^-bits * max(1, |theta|); positivity is verified on construction.
     */
    static Direction refinable(std::string label, Refiner refiner);

    static Direction pi();
    static Direction euler();

    bool is_exact() const { return exact_.has_value(); }
    const FieldElement& exact_value() const;
    const std::string& label() const { return label_; }
    RatInterval enclosure(int bits) const;

  private:
    Direction() = default;
    std::optional<FieldElement> exact_;
    std::string label_;
    Refiner refiner_;
};

/**
 * Parses a field-element literal.  Accepted forms (whitespace ignored):
 *   integers and fractions      "3", "-7/2"
 *   decimals (exact rationals)  "3.14159"
 *   radicals                    "sqrt(5)", "2*sqrt(2)", "-1/2*sqrt(3)"
 *   two-term sums               "1+2*sqrt(5)", "3/2-sqrt(2)"
 *   quotient of a sum           "(1+sqrt(5))/2"
 * The radical index is reduced (sqrt(8) -> 2*sqrt(2), sqrt(9) -> 3); only one
 * square-free radical may appear.  Division applies to a parenthesized sum
 * only: "1+sqrt(5)/2" is rejected with a pointer to the "(...)/m" form.
 */
FieldElement parse_field_literal(const std::string& text);

/** Parses theta: "pi", "e", or any field-element literal; must be positive. */
Direction parse_direction(const std::string& text);

} // namespace sctk
