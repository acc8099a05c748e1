#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "sctk/field.hpp"
#include "sctk/surface.hpp"
#include "sctk/zexp.hpp"

namespace sctk {

/** A determinant-1 matrix over the working field (validated exactly). */
class GroupElement {
public:
    explicit GroupElement(Mat2 m);

    const Mat2& mat() const { return m_; }
    FieldElement trace() const { return m_.a + m_.d; }
    GroupElement operator*(const GroupElement& o) const { return GroupElement(m_ * o.m_); }
    GroupElement inverse() const { return GroupElement(m_.inverse()); }
    std::string key() const { return m_.key(); }

private:
    Mat2 m_;
};

/** Exact classification by |trace| vs 2. */
enum class TraceClass { hyperbolic, parabolic, elliptic };

struct TraceDominationReport {
    FieldElement trace;
    TraceClass cls;
    double trace_abs = 0;      // |tr|
    double conjugate_abs = 0;  // max |sigma(tr)| over non-identity embeddings
                               // (equals |tr| over Q, where there are none)
    bool dominates = false;    // |tr| >= |sigma(tr)| for every embedding, exact
    bool pass = false;         // dominates, or vacuous for non-hyperbolic elements
};

/**
 * Does the trace dominate its Galois conjugates in absolute value?  The
 * comparison is exact; always true over Q.  The domination property is a
 * statement about HYPERBOLIC elements (|tr| > 2): parabolic and elliptic
 * elements pass vacuously but are classified in the report, and the raw
 * comparison is still available as `dominates`.  (A group can contain
 * elliptic elements whose conjugate trace is genuinely larger: an order-5
 * rotation has trace 2cos(72deg) = phi - 1 with conjugate -phi.)
 */
TraceDominationReport trace_domination(const GroupElement& M);

/**
 * Contraction constant of a parabolic translation length: the minimum of
 * |sigma(lambda)/lambda| over the non-identity embeddings (1 over Q).
 * For the golden ratio this is phi^-2 = (3 - sqrt(5))/2, exactly.
 */
FieldElement parabolic_contraction(const FieldElement& lambda);

struct EntryDominationReport {
    bool pass = false;    // every entry dominates with the required factor
    int checked = 0;      // nonzero entries tested (zero entries pass vacuously)
    double worst_margin = std::numeric_limits<double>::infinity();
                          // min over entries of |a| - factor * |sigma(a)|
};

/**
 * Entry-wise conjugate domination for a determinant-1 matrix: off-diagonal
 * entries must satisfy |a_ij| >= c1 |sigma(a_ij)| and diagonal entries
 * |a_ii| >= c1^2 |sigma(a_ii)|, with c1 the parabolic contraction constant of
 * the group.  All comparisons are exact field arithmetic.
 */
EntryDominationReport entry_domination(const GroupElement& A, const FieldElement& c1);

struct DominationReport {
    /** Exact minimum of |component| / |sigma(component)| (the empirical
     *  uniform constant); absent when no nonzero components were seen. */
    std::optional<FieldElement> c_emp_exact;
    double c_emp = std::numeric_limits<double>::infinity();
    double worst_conjugate_ratio = 0;  // max |sigma(component)| / |component|
    long samples = 0;
    bool pass = false;  // some component was usable and the minimum is positive
};

/**
 * Empirical component-domination constant over a saddle-vector sample: the
 * smallest |v_i| / |sigma(v_i)| over all vectors, components, and non-identity
 * embeddings.  Zero components are skipped (0 dominates vacuously).  Over Q
 * the constant is exactly 1.  Stability under enlarging the sample is the
 * caller's check: compare reports for radius R and 2R.
 */
DominationReport vector_domination(const std::vector<SaddleVector>& vectors);

struct HeightCheckReport {
    double c2 = 0;               // fitted constant: max H(p/q) / q^degree (head)
    std::size_t fitted_count = 0;
    std::size_t tail_count = 0;
    bool tail_pass = false;      // held-out records satisfy the fitted bound,
                                 // decided exactly
    std::vector<double> ratios;  // H(p/q) / q^degree per record, in order
};

/**
 * Height bound for convergents: fits the minimal c2 with
 * naive_height(p_n/q_n) <= c2 * q_n^degree over the leading records, then
 * verifies the held-out tail against that c2 exactly.
 *
 * degree must equal the field degree of the record components (1 for Q, 2 for
 * a quadratic field).  m is the integrality denominator: m*x and m*y must be
 * algebraic integers for every record (validated).  Records of height 0
 * (horizontal vectors) are rejected: the ratio p/q is undefined there.
 */
HeightCheckReport convergent_height_check(const std::vector<ConvergentRecord>& records,
                                          int degree, const mpz_class& m = mpz_class(1),
                                          std::size_t tail = 5);

struct GrowthReport {
    std::vector<std::pair<int, double>> sequence;  // (n, log log q_n / n), usable terms
    double running_max = -std::numeric_limits<double>::infinity();
    double tail_max = -std::numeric_limits<double>::infinity();
    int argmax_index = 0;        // last n attaining the global max (within 1e-12)
    bool argmax_in_tail = false;
    double threshold = 0;        // log(2*degree - 1)
    double margin = 0;
    bool flagged = false;        // argmax_in_tail && tail_max > threshold + margin
    std::vector<double> step_exponents;  // log q_{n+1} / log q_n, usable terms
};

/**
 * Growth-rate detector for the transcendence criterion
 * limsup_n (log log q_n) / n > log(2*degree - 1).
 *
 * The limsup is approximated over the observed window: the flag requires both
 * that the maximum over the tail third exceeds threshold + margin and that the
 * global maximum is attained in that tail, so a decaying transient (fast early
 * growth that levels off, as for quadratic irrationals) never flags.  Reports
 * the window; makes no asymptotic claim.  Heights may exceed double range;
 * logs are taken with exact rational inputs.
 */
GrowthReport growth_indicator(const std::vector<mpq_class>& heights, int degree,
                              double margin = 0.05);

/**
 * All distinct elements expressible as words of length <= max_word_length in
 * the generators and their inverses (identity included), deduplicated exactly.
 */
std::vector<GroupElement> group_ball(const std::vector<GroupElement>& generators,
                                     int max_word_length,
                                     std::size_t max_elements = 200000);

} // namespace sctk
