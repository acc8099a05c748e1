#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sctk/dioph.hpp"
#include "sctk/direction.hpp"
#include "sctk/errors.hpp"
#include "sctk/stream.hpp"

using namespace sctk;

namespace {

const FieldDescriptor kQ = FieldDescriptor::rational();
const FieldDescriptor kQ5 = FieldDescriptor::quadratic(5);

FieldElement q5(const mpq_class& a, const mpq_class& b) { return FieldElement::make(kQ5, a, b); }

FieldElement phi() { return q5(mpq_class(1, 2), mpq_class(1, 2)); }

GroupElement gel(long a, long b, long c, long d) {
    auto fe = [](long v) { return FieldElement::rational(v); };
    return GroupElement(Mat2{fe(a), fe(b), fe(c), fe(d)});
}

/** Record with just the fields the height check consumes. */
ConvergentRecord rec(FieldElement x, FieldElement y) {
    return ConvergentRecord{0, SaddleVector{std::move(x), std::move(y), 1},
                            RatInterval::point(0), std::nullopt, false, false};
}

std::vector<ConvergentRecord> pi_records_above_height_zero() {
    PrimitiveLatticeStream stream(Direction::pi(), 40000);
    ZExpOptions opts;
    opts.max_terms = 6;
    auto records = z_expansion(stream, Direction::pi(), opts);
    REQUIRE(records.size() == 6);
    records.erase(records.begin()); // (1, 0) has height zero
    return records;
}

} // namespace

TEST_CASE("group elements enforce determinant 1") {
    CHECK_NOTHROW(gel(1, 0, 0, 1));
    CHECK_NOTHROW(gel(2, 1, 1, 1));
    CHECK_THROWS_AS(gel(2, 0, 0, 1), Error);

    GroupElement g = gel(2, 1, 1, 1);
    CHECK(g.trace().rational_value() == 3);
    CHECK((g * g.inverse()).trace().rational_value() == 2);
}

TEST_CASE("trace domination: golden hyperbolic product and degenerate classes") {
    FieldElement one = FieldElement::one(kQ5), zero = FieldElement::zero(kQ5);
    GroupElement T(Mat2{one, phi(), zero, one});
    GroupElement U(Mat2{one, zero, phi(), one});
    GroupElement M = T * U;

    auto repM = trace_domination(M);
    // tr = 2 + phi^2 = 3 + phi = (7 + sqrt(5)) / 2
    CHECK(repM.trace.compare(q5(mpq_class(7, 2), mpq_class(1, 2))) == 0);
    CHECK(repM.cls == TraceClass::hyperbolic);
    CHECK(repM.pass);
    CHECK(repM.dominates);
    CHECK(repM.trace_abs == doctest::Approx(4.6180339887).epsilon(1e-9));
    CHECK(repM.conjugate_abs == doctest::Approx(2.3819660112).epsilon(1e-9));

    auto repT = trace_domination(T);
    CHECK(repT.cls == TraceClass::parabolic);
    CHECK(repT.pass); // equality counts as a pass

    GroupElement S(Mat2{zero, -one, one, zero});
    auto repS = trace_domination(S);
    CHECK(repS.cls == TraceClass::elliptic);
    CHECK(repS.pass);
    CHECK(repS.dominates); // |0| >= |0|

    // Order-5 rotation conjugacy class: trace phi - 1 = 2cos(72deg), whose
    // Galois conjugate -phi is LARGER in absolute value.  The domination
    // property only concerns hyperbolic elements, so this passes vacuously.
    GroupElement R5(Mat2{phi(), phi(), -phi(), -one});
    auto repR = trace_domination(R5);
    CHECK(repR.trace.compare(phi() - one) == 0);
    CHECK(repR.cls == TraceClass::elliptic);
    CHECK(repR.pass);
    CHECK(!repR.dominates);

    auto repQ = trace_domination(gel(2, 1, 1, 1)); // over Q: no nontrivial embedding
    CHECK(repQ.cls == TraceClass::hyperbolic);
    CHECK(repQ.pass);
    CHECK(repQ.trace_abs == repQ.conjugate_abs);
}

TEST_CASE("parabolic contraction constant") {
    // Golden ratio: |sigma(phi)/phi| = (phi - 1)/phi = phi^-2 = (3 - sqrt(5))/2.
    FieldElement c1 = parabolic_contraction(phi());
    CHECK(c1.compare(q5(mpq_class(3, 2), mpq_class(-1, 2))) == 0);
    CHECK(c1.enclosure(96).mid_double() == doctest::Approx(0.3819660112).epsilon(1e-9));

    CHECK(parabolic_contraction(FieldElement::rational(2)).rational_value() == 1);
    CHECK_THROWS_AS(parabolic_contraction(FieldElement::zero(kQ5)), Error);
}

TEST_CASE("entry domination with the parabolic constant") {
    FieldElement one = FieldElement::one(kQ5), zero = FieldElement::zero(kQ5);
    FieldElement c1 = parabolic_contraction(phi());

    GroupElement M = GroupElement(Mat2{one, phi(), zero, one}) *
                     GroupElement(Mat2{one, zero, phi(), one});
    auto repM = entry_domination(M, c1);
    CHECK(repM.pass);
    CHECK(repM.checked == 4);
    CHECK(repM.worst_margin > 0);

    GroupElement T(Mat2{one, phi(), zero, one});
    auto repT = entry_domination(T, c1);
    CHECK(repT.pass);
    CHECK(repT.checked == 3); // the zero entry passes vacuously

    // |1 - phi| = phi^-1 equals c1 * |sigma(1 - phi)| = phi^-2 * phi exactly:
    // the boundary case must pass with margin exactly zero.
    GroupElement B(Mat2{one, one - phi(), zero, one});
    auto repB = entry_domination(B, c1);
    CHECK(repB.pass);
    CHECK(repB.worst_margin == 0.0);

    // A larger factor breaks the same entry.
    auto repBad = entry_domination(B, FieldElement::rational(mpq_class(1, 2)));
    CHECK(!repBad.pass);
    CHECK(repBad.worst_margin < 0);

    // Over Q with c1 = 1 every entry dominates itself.
    auto repQ = entry_domination(gel(2, 1, 1, 1), FieldElement::rational(1));
    CHECK(repQ.pass);
    CHECK(repQ.worst_margin == 0.0);

    CHECK_THROWS_AS(entry_domination(T, FieldElement::rational(0)), Error);
}

TEST_CASE("trace and entry domination hold across a golden word ball") {
    auto m = fixtures::golden_l_model();
    std::vector<GroupElement> gens;
    for (const auto& g : m.generators) gens.emplace_back(g);
    auto ball = group_ball(gens, 5);
    CHECK(ball.size() > 100);

    FieldElement c1 = parabolic_contraction(phi());
    int hyperbolic = 0;
    for (const auto& g : ball) {
        auto rep = trace_domination(g);
        CAPTURE(g.key());
        CHECK(rep.pass);
        if (rep.cls == TraceClass::hyperbolic) {
            ++hyperbolic;
            CHECK(rep.dominates); // the substantive case: not a vacuous pass
        }
        CHECK(entry_domination(g, c1).pass);
    }
    CHECK(hyperbolic > 20);
}

TEST_CASE("vector domination constants") {
    auto repQ = vector_domination(primitive_lattice(5));
    REQUIRE(repQ.c_emp_exact.has_value());
    CHECK(repQ.c_emp_exact->rational_value() == 1); // identity embedation only
    CHECK(repQ.pass);
    CHECK(repQ.worst_conjugate_ratio == doctest::Approx(1.0));

    // Single vector (phi, 1): ratios are phi/|sigma(phi)| = phi^2 and 1.
    std::vector<SaddleVector> one_vec{{phi(), FieldElement::one(kQ5), 1}};
    auto rep1 = vector_domination(one_vec);
    REQUIRE(rep1.c_emp_exact.has_value());
    CHECK(rep1.c_emp_exact->compare(FieldElement::one(kQ5)) == 0);
    CHECK(rep1.samples == 2);

    // (1 - phi, 0): the zero component is skipped; ratio is phi^-2.
    std::vector<SaddleVector> skew{{FieldElement::one(kQ5) - phi(), FieldElement::zero(kQ5), 1}};
    auto rep2 = vector_domination(skew);
    CHECK(rep2.samples == 1);
    CHECK(rep2.c_emp_exact->compare(q5(mpq_class(3, 2), mpq_class(-1, 2))) == 0);
    CHECK(rep2.worst_conjugate_ratio == doctest::Approx(2.6180339887).epsilon(1e-9));

    auto empty = vector_domination({});
    CHECK(!empty.pass);
    CHECK(empty.samples == 0);
}

TEST_CASE("vector domination is monotone under enlarging the golden orbit sample") {
    auto m = fixtures::golden_l_model();
    auto z10 = orbit_vectors(m, mpq_class(10));
    auto z20 = orbit_vectors(m, mpq_class(20));
    REQUIRE(z10.size() > 10);
    REQUIRE(z20.size() > z10.size());

    auto r10 = vector_domination(z10);
    auto r20 = vector_domination(z20);
    REQUIRE(r10.c_emp_exact.has_value());
    REQUIRE(r20.c_emp_exact.has_value());
    CHECK(r10.pass);
    CHECK(r20.pass);
    // Enlarging the sample can only lower the minimum.
    CHECK(r20.c_emp_exact->compare(*r10.c_emp_exact) <= 0);
    CHECK(r20.c_emp > 0);
    MESSAGE("golden c_emp at R=10: ", r10.c_emp, "  R=20: ", r20.c_emp);
}

TEST_CASE("convergent height check on the torus pi expansion") {
    auto records = pi_records_above_height_zero();
    auto rep = convergent_height_check(records, 1, 1, 2);

    REQUIRE(rep.ratios.size() == 5);
    CHECK(rep.fitted_count == 3);
    CHECK(rep.tail_count == 2);
    // Head ratios: 3/1, 22/7, 333/106 -> the fit is 22/7.
    CHECK(rep.c2 == doctest::Approx(22.0 / 7.0).epsilon(1e-12));
    CHECK(rep.tail_pass);
    // For any torus expansion the fitted constant stays below theta + 1.
    CHECK(rep.c2 < 3.14159265358979 + 1.0);
    CHECK(rep.ratios.front() == doctest::Approx(3.0).epsilon(1e-12));

    // Height-zero records are rejected.
    std::vector<ConvergentRecord> with_zero{rec(FieldElement::rational(1), FieldElement::rational(0))};
    CHECK_THROWS_AS(convergent_height_check(with_zero, 1), Error);

    // Degree must match the field.
    CHECK_THROWS_AS(convergent_height_check(records, 2), Error);
}

TEST_CASE("height check: integrality denominator and integer ratios") {
    // (3/2, 1): m = 1 does not clear the half-integer, m = 2 does.
    std::vector<ConvergentRecord> half{rec(FieldElement::rational(mpq_class(3, 2)),
                                           FieldElement::rational(1))};
    CHECK_THROWS_AS(convergent_height_check(half, 1, 1, 0), Error);
    auto rep = convergent_height_check(half, 1, 2, 0);
    CHECK(rep.c2 == doctest::Approx(3.0)); // H(3/2) = 3, q = 1

    // Integer ratio p/q = 3 with q = 2: H = 3, ratio 3/2.
    std::vector<ConvergentRecord> integral{rec(FieldElement::rational(6), FieldElement::rational(2))};
    auto rep2 = convergent_height_check(integral, 1, 1, 0);
    CHECK(rep2.c2 == doctest::Approx(1.5));
    CHECK(rep2.tail_pass);
}

TEST_CASE("height check over a quadratic field") {
    // p/q = phi has minimal polynomial x^2 - x - 1: H = 1, q^2 = 1.
    // p/q = phi + 1 = phi^2 over q = phi: H(x^2 - 3x + 1) = 3, q^2 = phi^2.
    std::vector<ConvergentRecord> recs{
        rec(phi(), FieldElement::one(kQ5)),
        rec(FieldElement::one(kQ5) + phi() + phi(), phi()),
    };
    auto rep = convergent_height_check(recs, 2, 1, 0);
    REQUIRE(rep.ratios.size() == 2);
    CHECK(rep.ratios[0] == doctest::Approx(1.0));
    CHECK(rep.ratios[1] == doctest::Approx(3.0 / 2.6180339887).epsilon(1e-9));
    CHECK(rep.c2 == doctest::Approx(3.0 / 2.6180339887).epsilon(1e-9));
    CHECK(rep.tail_pass);
}

TEST_CASE("growth indicator: Pell heights stay quiet, Liouville heights flag") {
    auto pell = oracles::pell_denominators(20);
    std::vector<mpq_class> qn(pell.begin(), pell.end());
    auto quiet = growth_indicator(qn, 1);
    CHECK(quiet.threshold == 0.0);
    CHECK(!quiet.flagged);
    CHECK(!quiet.argmax_in_tail); // the early transient peaks, then decays
    CHECK(quiet.running_max > 0.2);
    CHECK(quiet.sequence.size() == 19); // q_1 = 1 is skipped
    // Pell: log q_{n+1} / log q_n -> 1.
    CHECK(quiet.step_exponents.back() == doctest::Approx(1.0).epsilon(0.1));

    std::vector<mpq_class> liouville;
    unsigned long fact = 1;
    for (unsigned long n = 1; n <= 8; ++n) {
        fact *= n;
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 10, fact);
        liouville.emplace_back(p);
    }
    auto loud = growth_indicator(liouville, 1);
    CHECK(loud.flagged);
    CHECK(loud.argmax_in_tail);
    CHECK(loud.argmax_index == 8);
    CHECK(loud.tail_max > 1.4);
    // log q_{n+1} / log q_n = (n+1)! / n! = n + 1.
    CHECK(loud.step_exponents.back() == doctest::Approx(8.0).epsilon(1e-6));

    auto d2 = growth_indicator(qn, 2);
    CHECK(d2.threshold == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(!d2.flagged);
}

TEST_CASE("growth indicator: scaling the heights does not change the flag") {
    auto pell = oracles::pell_denominators(25);
    std::vector<mpq_class> qn(pell.begin(), pell.end()), scaled;
    for (const auto& q : qn) scaled.push_back(q * 7);
    CHECK(growth_indicator(qn, 1).flagged == growth_indicator(scaled, 1).flagged);

    std::vector<mpq_class> liouville, liouville3;
    unsigned long fact = 1;
    for (unsigned long n = 1; n <= 8; ++n) {
        fact *= n;
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 10, fact);
        liouville.emplace_back(p);
        liouville3.emplace_back(mpq_class(p) * 3);
    }
    CHECK(growth_indicator(liouville, 1).flagged == growth_indicator(liouville3, 1).flagged);
}

TEST_CASE("growth indicator input validation") {
    std::vector<mpq_class> ones{1, 1, 1, 1};
    CHECK_THROWS_AS(growth_indicator(ones, 1), Error);

    std::vector<mpq_class> two{2, 3};
    CHECK_THROWS_AS(growth_indicator(two, 1), Error);

    std::vector<mpq_class> down{5, 4, 3};
    CHECK_THROWS_AS(growth_indicator(down, 1), Error);

    std::vector<mpq_class> ok{2, 3, 5, 8};
    CHECK_THROWS_AS(growth_indicator(ok, 0), Error);
    CHECK_THROWS_AS(growth_indicator(ok, 1, -0.1), Error);
    CHECK_NOTHROW(growth_indicator(ok, 1));
}

TEST_CASE("group ball enumerates distinct words deterministically") {
    auto m = fixtures::theta_lattice_model();
    std::vector<GroupElement> gens;
    for (const auto& g : m.generators) gens.emplace_back(g);

    auto ball = group_ball(gens, 2);
    CHECK(ball.size() >= 10);

    // S^2 = -identity is a length-2 word.
    auto fe = [](long v) { return FieldElement::rational(v); };
    Mat2 neg_id{fe(-1), fe(0), fe(0), fe(-1)};
    bool found = std::any_of(ball.begin(), ball.end(), [&](const GroupElement& g) {
        return g.key() == neg_id.key();
    });
    CHECK(found);

    auto again = group_ball(gens, 2);
    REQUIRE(again.size() == ball.size());
    for (std::size_t i = 0; i < ball.size(); ++i) CHECK(again[i].key() == ball[i].key());

    CHECK_THROWS_AS(group_ball(gens, 3, 3), Error);
    CHECK_THROWS_AS(group_ball({}, 2), Error);
}
