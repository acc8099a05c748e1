#include "sctk/dioph.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sctk/errors.hpp"
#include "sctk/interval.hpp"

namespace sctk {

GroupElement::GroupElement(Mat2 m) : m_(std::move(m)) {
    if (m_.det().compare(FieldElement::one(m_.a.descriptor())) != 0) {
        throw validation_error("group element must have determinant exactly 1");
    }
}

TraceDominationReport trace_domination(const GroupElement& M) {
    FieldElement t = M.trace();
    FieldElement t_abs = t.abs();
    FieldElement two = FieldElement::rational(2).promoted(t.descriptor());
    FieldElement sigma_abs = t.conjugate().abs();

    TraceDominationReport rep{t, TraceClass::elliptic, 0, 0, false, false};
    int c = t_abs.compare(two);
    rep.cls = c > 0   ? TraceClass::hyperbolic
              : c == 0 ? TraceClass::parabolic
                       : TraceClass::elliptic;
    rep.dominates = t_abs.compare(sigma_abs) >= 0;
    rep.pass = rep.cls == TraceClass::hyperbolic ? rep.dominates : true;
    rep.trace_abs = t_abs.enclosure(96).mid_double();
    rep.conjugate_abs = sigma_abs.enclosure(96).mid_double();
    return rep;
}

FieldElement parabolic_contraction(const FieldElement& lambda) {
    if (lambda.sign() == 0) {
        throw validation_error("parabolic translation length must be nonzero");
    }
    return (lambda.conjugate() / lambda).abs();
}

EntryDominationReport entry_domination(const GroupElement& A, const FieldElement& c1) {
    if (c1.sign() <= 0) throw validation_error("domination factor c1 must be positive");
    const Mat2& m = A.mat();
    FieldElement off = c1.promoted(m.a.descriptor());
    FieldElement diag = off * off;

    EntryDominationReport rep;
    rep.pass = true;
    auto check = [&](const FieldElement& e, const FieldElement& factor) {
        if (e.sign() == 0) return; // |0| >= factor * |sigma(0)| vacuously
        FieldElement margin = e.abs() - factor * e.conjugate().abs();
        rep.checked += 1;
        rep.worst_margin = std::min(rep.worst_margin, margin.enclosure(96).lo_double());
        if (margin.sign() < 0) rep.pass = false;
    };
    check(m.a, diag);
    check(m.d, diag);
    check(m.b, off);
    check(m.c, off);
    return rep;
}

DominationReport vector_domination(const std::vector<SaddleVector>& vectors) {
    DominationReport rep;
    for (const auto& v : vectors) {
        for (const FieldElement* comp : {&v.x, &v.y}) {
            if (comp->sign() == 0) continue;
            // A nonzero element has a nonzero Galois conjugate.
            FieldElement ratio = comp->abs() / comp->conjugate().abs();
            rep.samples += 1;
            if (!rep.c_emp_exact || ratio.compare(*rep.c_emp_exact) < 0) {
                rep.c_emp_exact = std::move(ratio);
            }
        }
    }
    if (rep.c_emp_exact) {
        rep.c_emp = rep.c_emp_exact->enclosure(96).mid_double();
        FieldElement inv = FieldElement::one(rep.c_emp_exact->descriptor()) / *rep.c_emp_exact;
        rep.worst_conjugate_ratio = inv.enclosure(96).mid_double();
        rep.pass = rep.c_emp_exact->sign() > 0;
    }
    return rep;
}

HeightCheckReport convergent_height_check(const std::vector<ConvergentRecord>& records,
                                          int degree, const mpz_class& m, std::size_t tail) {
    if (records.empty()) throw validation_error("height check needs at least one record");
    if (degree < 1) throw validation_error("degree must be >= 1");
    if (sgn(m) <= 0) throw validation_error("integrality denominator must be positive");

    FieldDescriptor desc = records.front().vector.x.descriptor();
    int field_degree = desc.kind == FieldKind::rational ? 1 : 2;
    if (degree != field_degree) {
        throw validation_error("degree must equal the field degree of the record components");
    }
    FieldElement scale = FieldElement::rational(mpq_class(m)).promoted(desc);

    HeightCheckReport rep;
    std::vector<FieldElement> ratios;
    ratios.reserve(records.size());
    for (const auto& r : records) {
        const SaddleVector& v = r.vector;
        if (v.y.sign() == 0) {
            throw validation_error("height check: record with height zero has no ratio p/q");
        }
        if (!is_algebraic_integer(scale * v.x) || !is_algebraic_integer(scale * v.y)) {
            throw validation_error(
                "integrality denominator does not clear the record components");
        }
        mpz_class h = naive_height(v.x / v.y);
        FieldElement q_abs = v.y.abs();
        FieldElement q_pow = q_abs;
        for (int k = 1; k < degree; ++k) q_pow = q_pow * q_abs;
        FieldElement ratio = FieldElement::rational(mpq_class(h)).promoted(desc) / q_pow;
        rep.ratios.push_back(ratio.enclosure(96).hi_double());
        ratios.push_back(std::move(ratio));
    }

    std::size_t head = records.size() > tail ? records.size() - tail : records.size();
    rep.fitted_count = head;
    rep.tail_count = records.size() - head;

    FieldElement c2 = ratios.front();
    for (std::size_t i = 1; i < head; ++i) {
        if (ratios[i].compare(c2) > 0) c2 = ratios[i];
    }
    rep.c2 = c2.enclosure(96).hi_double();
    rep.tail_pass = true;
    for (std::size_t i = head; i < ratios.size(); ++i) {
        if (ratios[i].compare(c2) > 0) rep.tail_pass = false;
    }
    return rep;
}

GrowthReport growth_indicator(const std::vector<mpq_class>& heights, int degree,
                              double margin) {
    if (degree < 1) throw validation_error("degree must be >= 1");
    if (margin < 0) throw validation_error("margin must be >= 0");
    for (std::size_t i = 0; i < heights.size(); ++i) {
        if (sgn(heights[i]) <= 0) throw validation_error("heights must be positive");
        if (i > 0 && heights[i] < heights[i - 1]) {
            throw validation_error("heights must be nondecreasing");
        }
    }

    GrowthReport rep;
    rep.threshold = std::log(2.0 * degree - 1.0);
    rep.margin = margin;

    std::vector<mpq_class> logs; // log q_n for the usable terms, as rationals
    for (std::size_t i = 0; i < heights.size(); ++i) {
        if (heights[i] <= 1) continue; // log log undefined
        mpq_class lg = log_enclosure(heights[i], 128).mid();
        double g = log_enclosure(lg, 128).mid_double() / static_cast<double>(i + 1);
        rep.sequence.emplace_back(static_cast<int>(i + 1), g);
        logs.push_back(std::move(lg));
    }
    if (rep.sequence.size() < 3) {
        throw validation_error("growth indicator needs at least 3 heights above 1");
    }
    for (std::size_t j = 0; j + 1 < logs.size(); ++j) {
        rep.step_exponents.push_back(mpq_class(logs[j + 1] / logs[j]).get_d());
    }

    for (const auto& [n, g] : rep.sequence) rep.running_max = std::max(rep.running_max, g);
    std::size_t count = rep.sequence.size();
    std::size_t tail_len = std::max<std::size_t>(1, count / 3);
    std::size_t tail_start = count - tail_len;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < count; ++j) {
        if (rep.sequence[j].second >= rep.running_max - 1e-12) arg = j; // last near-max
    }
    rep.argmax_index = rep.sequence[arg].first;
    rep.argmax_in_tail = arg >= tail_start;
    for (std::size_t j = tail_start; j < count; ++j) {
        rep.tail_max = std::max(rep.tail_max, rep.sequence[j].second);
    }
    rep.flagged = rep.argmax_in_tail && rep.tail_max > rep.threshold + rep.margin;
    return rep;
}

std::vector<GroupElement> group_ball(const std::vector<GroupElement>& generators,
                                     int max_word_length, std::size_t max_elements) {
    if (generators.empty()) throw validation_error("group ball needs a generator");
    if (max_word_length < 0) throw validation_error("word length must be >= 0");

    FieldDescriptor desc = generators.front().mat().a.descriptor();
    std::vector<Mat2> letters;
    for (const auto& g : generators) {
        letters.push_back(g.mat());
        letters.push_back(g.inverse().mat());
    }

    std::unordered_map<std::string, Mat2> seen;
    Mat2 id = Mat2::identity(desc);
    seen.emplace(id.key(), id);
    std::vector<Mat2> frontier{id};
    for (int len = 1; len <= max_word_length && !frontier.empty(); ++len) {
        std::vector<Mat2> next;
        for (const auto& w : frontier) {
            for (const auto& l : letters) {
                Mat2 prod = l * w;
                if (seen.size() >= max_elements) {
                    throw validation_error("group ball exceeded the element budget");
                }
                auto [it, fresh] = seen.try_emplace(prod.key(), prod);
                (void)it;
                if (fresh) next.push_back(std::move(prod));
            }
        }
        frontier = std::move(next);
    }

    std::vector<GroupElement> out;
    out.reserve(seen.size());
    for (auto& [key, m2] : seen) out.emplace_back(std::move(m2));
    std::sort(out.begin(), out.end(),
              [](const GroupElement& x, const GroupElement& y) { return x.key() < y.key(); });
    return out;
}

} // namespace sctk
