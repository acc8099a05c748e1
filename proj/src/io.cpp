#include "sctk/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "sctk/dioph.hpp"
#include "sctk/direction.hpp"
#include "sctk/errors.hpp"
#include "sctk/mink.hpp"
#include "sctk/stream.hpp"
#include "sctk/util.hpp"
#include "sctk/zexp.hpp"

namespace sctk {
namespace {

using njson = nlohmann::json;
using ojson = nlohmann::ordered_json;

/** Exact tracing cost grows roughly quadratically with the norm radius. */
constexpr long kTraceRadiusCap = 300;

std::string q_str(const mpq_class& v) { return v.get_str(); }

// --- config parsing -------------------------------------------------------

const njson& require_field(const njson& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        throw usage_error(std::string("surface config: missing field \"") + key + "\"");
    return *it;
}

int require_int(const njson& j, const char* key) {
    const njson& v = require_field(j, key);
    if (!v.is_number_integer())
        throw usage_error(std::string("surface config: field \"") + key +
                          "\" must be an integer");
    return v.get<int>();
}

std::string require_string(const njson& j, const char* key) {
    const njson& v = require_field(j, key);
    if (!v.is_string())
        throw usage_error(std::string("surface config: field \"") + key +
                          "\" must be a string");
    return v.get<std::string>();
}

Perm parse_cycles(const njson& j, int n, const char* key) {
    const njson& v = require_field(j, key);
    if (!v.is_array())
        throw usage_error(std::string("surface config: field \"") + key +
                          "\" must be a list of cycles (1-based square labels)");
    std::vector<std::vector<int>> cycles;
    for (const njson& c : v) {
        if (!c.is_array())
            throw usage_error(std::string("surface config: field \"") + key +
                              "\": each cycle must be a list of 1-based square labels");
        std::vector<int> cyc;
        for (const njson& e : c) {
            if (!e.is_number_integer())
                throw usage_error(std::string("surface config: field \"") + key +
                                  "\": cycle entries must be integers");
            cyc.push_back(e.get<int>());
        }
        cycles.push_back(std::move(cyc));
    }
    try {
        return Perm::from_cycles(n, cycles);
    } catch (const Error& e) {
        throw usage_error(std::string("surface config: field \"") + key + "\": " + e.what());
    }
}

/** Exact entry: a JSON integer or a field-literal string; floats are refused. */
FieldElement parse_entry(const njson& v, const FieldDescriptor& desc, const std::string& key) {
    FieldElement e = FieldElement::rational(0);
    if (v.is_number_integer()) {
        e = FieldElement::rational(mpq_class(v.get<long>()));
    } else if (v.is_string()) {
        try {
            e = parse_field_literal(v.get<std::string>());
        } catch (const Error& err) {
            throw usage_error("surface config: field \"" + key + "\": " + err.what());
        }
    } else {
        throw usage_error("surface config: field \"" + key +
                          "\" must be an integer or an exact literal string "
                          "(non-integer numbers lose exactness; write \"7/2\")");
    }
    try {
        return e.promoted(desc);
    } catch (const Error& err) {
        throw usage_error("surface config: field \"" + key + "\": " + err.what());
    }
}

LoadedSurface parse_origami_config(const njson& j, const std::string& name) {
    Origami o;
    o.n = require_int(j, "n");
    if (o.n <= 0) throw usage_error("surface config: field \"n\" must be positive");
    o.h = parse_cycles(j, o.n, "h");
    o.v = parse_cycles(j, o.n, "v");
    if (j.contains("marked_policy")) {
        std::string p = require_string(j, "marked_policy");
        if (p == "cone_points_only")
            o.policy = MarkedPolicy::cone_points_only;
        else if (p == "all_vertices")
            o.policy = MarkedPolicy::all_vertices;
        else
            throw usage_error("surface config: field \"marked_policy\" must be "
                              "\"cone_points_only\" or \"all_vertices\"");
    }
    LoadedSurface ls;
    if (j.contains("lattice")) {
        const njson& l = j.at("lattice");
        if (!l.is_boolean())
            throw usage_error("surface config: field \"lattice\" must be a boolean");
        ls.lattice_vectors = l.get<bool>();
    }
    validate_origami(o);
    ls.model = SurfaceModel{name.empty() ? "origami" : name, o};
    return ls;
}

LoadedSurface parse_orbit_config(const njson& j, const std::string& name) {
    FieldDescriptor desc = FieldDescriptor::rational();
    if (j.contains("field")) {
        const njson& f = j.at("field");
        if (!f.is_object())
            throw usage_error("surface config: field \"field\" must be an object {\"d\": k}");
        long d = f.contains("d") ? require_int(f, "d") : 0;
        if (d < 0)
            throw usage_error("surface config: field \"field.d\" must be nonnegative");
        if (d >= 2) {
            try {
                desc = FieldDescriptor::quadratic(d);
            } catch (const Error& e) {
                throw usage_error(std::string("surface config: field \"field.d\": ") + e.what());
            }
        }
    }

    const njson& gv = require_field(j, "generators");
    if (!gv.is_array() || gv.empty())
        throw usage_error("surface config: field \"generators\" must be a nonempty list");
    std::vector<Mat2> gens;
    for (std::size_t i = 0; i < gv.size(); ++i) {
        const njson& g = gv[i];
        std::string key = "generators[" + std::to_string(i) + "]";
        std::vector<const njson*> cells;
        if (g.is_array() && g.size() == 4) {
            for (const njson& c : g) cells.push_back(&c);
        } else if (g.is_array() && g.size() == 2 && g[0].is_array() && g[0].size() == 2 &&
                   g[1].is_array() && g[1].size() == 2) {
            cells = {&g[0][0], &g[0][1], &g[1][0], &g[1][1]};
        } else {
            throw usage_error("surface config: field \"" + key +
                              "\" must be [[a,b],[c,d]] or [a,b,c,d]");
        }
        gens.push_back(Mat2{parse_entry(*cells[0], desc, key), parse_entry(*cells[1], desc, key),
                            parse_entry(*cells[2], desc, key), parse_entry(*cells[3], desc, key)});
    }

    const njson& sv = require_field(j, "seeds");
    if (!sv.is_array() || sv.empty())
        throw usage_error("surface config: field \"seeds\" must be a nonempty list of [x, y]");
    std::vector<SaddleVector> seeds;
    for (std::size_t i = 0; i < sv.size(); ++i) {
        const njson& s = sv[i];
        std::string key = "seeds[" + std::to_string(i) + "]";
        if (!s.is_array() || s.size() < 2 || s.size() > 3)
            throw usage_error("surface config: field \"" + key +
                              "\" must be [x, y] or [x, y, multiplicity]");
        SaddleVector v{parse_entry(s[0], desc, key), parse_entry(s[1], desc, key)};
        if (s.size() == 3) {
            if (!s[2].is_number_integer() || s[2].get<long>() <= 0)
                throw usage_error("surface config: field \"" + key +
                                  "\": multiplicity must be a positive integer");
            v.multiplicity = s[2].get<long>();
        }
        seeds.push_back(std::move(v));
    }

    GroupOrbitModel m{desc, std::move(gens), std::move(seeds),
                      parse_entry(require_field(j, "volume"), desc, "volume")};
    validate_orbit_model(m);
    LoadedSurface ls;
    ls.model = SurfaceModel{name.empty() ? "orbit" : name, std::move(m)};
    return ls;
}

// --- enumeration selection ------------------------------------------------

void guard_trace_radius(const mpq_class& radius) {
    if (radius > kTraceRadiusCap)
        throw usage_error("tracing saddle connections to norm radius " + q_str(radius) +
                          " exceeds the enumeration budget (cap " +
                          std::to_string(kTraceRadiusCap) +
                          "); lower --radius, or set \"lattice\": true in the config if the "
                          "surface's saddle vectors are the primitive integer vectors");
}

/** Vector family used by the bound commands; the lattice shortcut is allowed. */
std::vector<SaddleVector> bound_vectors(const LoadedSurface& ls, const mpq_class& radius,
                                        int threads) {
    if (!ls.model.is_origami()) return orbit_vectors(ls.model.orbit(), radius);
    if (ls.lattice_vectors) return primitive_lattice(radius);
    guard_trace_radius(radius);
    return trace_saddle_connections(ls.model.origami(), radius,
                                    static_cast<unsigned>(threads));
}

struct ExpansionRun {
    std::vector<ConvergentRecord> records;
    RatInterval mu; // Minkowski-constant upper bound, for the sandwich
    bool truncated = false;
};

ExpansionRun run_expansion(const LoadedSurface& ls, const Direction& theta,
                           const RunConfig& cfg) {
    ExpansionRun run{{}, mink_upper_bound(ls.model, cfg.bits), false};
    ZExpOptions zo;
    zo.start_bits = cfg.bits;
    zo.max_bits = std::max(zo.max_bits, cfg.bits);
    zo.max_terms = cfg.terms;
    zo.max_height = cfg.height_cap;

    std::unique_ptr<VectorStream> stream;
    if (ls.model.is_origami() && ls.lattice_vectors) {
        mpz_class cap = cfg.height_cap.get_num() / cfg.height_cap.get_den();
        if (!cap.fits_slong_p())
            throw usage_error("--height-cap is too large for the lattice stream");
        stream = std::make_unique<PrimitiveLatticeStream>(theta, cap.get_si());
    } else if (ls.model.is_origami()) {
        RatInterval th = theta.enclosure(cfg.bits);
        mpq_class reach = th.hi() * cfg.height_cap + cfg.hor_cap;
        mpq_class rad_sq = reach * reach + cfg.height_cap * cfg.height_cap;
        if (rad_sq > mpq_class(kTraceRadiusCap) * kTraceRadiusCap)
            throw usage_error(
                "the record stream to height " + q_str(cfg.height_cap) +
                " needs a trace of norm radius beyond " + std::to_string(kTraceRadiusCap) +
                "; lower --height-cap, or set \"lattice\": true in the config if the "
                "surface's saddle vectors are the primitive integer vectors");
        auto vs = origami_ray_vectors(ls.model.origami(), th, cfg.height_cap, cfg.hor_cap,
                                      cfg.threads);
        stream = std::make_unique<SortedVectorStream>(std::move(vs), cfg.height_cap);
    } else {
        RayStripOptions so;
        so.hor_cap = cfg.hor_cap;
        so.taper_mu = run.mu.hi();
        auto vs = orbit_ray_vectors(ls.model.orbit(), theta.enclosure(cfg.bits),
                                    cfg.height_cap, so);
        stream = std::make_unique<SortedVectorStream>(std::move(vs), cfg.height_cap);
    }
    run.records = z_expansion(*stream, theta, zo);
    run.truncated = stream->truncated();
    return run;
}

// --- report emission ------------------------------------------------------

void write_csv_preamble(std::ostream& out, const RunConfig& cfg, const LoadedSurface& ls) {
    out << "# sctk-format v1\n";
    out << "# command " << cfg.command << '\n';
    out << "# surface " << ls.model.name << '\n';
}

ojson json_preamble(const RunConfig& cfg, const LoadedSurface& ls) {
    ojson doc;
    doc["format"] = "sctk-format v1";
    doc["command"] = cfg.command;
    doc["surface"] = ls.model.name;
    return doc;
}

void emit(std::ostream& out, const ojson& doc) { out << doc.dump(2) << '\n'; }

int cmd_expand(const LoadedSurface& ls, const RunConfig& cfg, std::ostream& out) {
    Direction theta = parse_direction(cfg.theta);
    ExpansionRun run = run_expansion(ls, theta, cfg);
    ZExpOptions zo;
    zo.start_bits = cfg.bits;
    zo.max_bits = std::max(zo.max_bits, cfg.bits);
    SandwichReport sw = sandwich_check(run.records, theta, run.mu, zo);

    if (cfg.format == ReportFormat::csv) {
        write_csv_preamble(out, cfg, ls);
        out << "# theta " << cfg.theta << '\n';
        out << "# mu_hi " << q_str(run.mu.hi()) << '\n';
        out << "n,p,q,hor_lo,hor_hi,q_float\n";
        for (const ConvergentRecord& r : run.records)
            out << r.index << ',' << r.vector.x.str() << ',' << r.vector.y.str() << ','
                << q_str(r.hor.lo()) << ',' << q_str(r.hor.hi()) << ','
                << format_double(r.vector.y.approx()) << '\n';
        out << "# sandwich pairs=" << sw.pairs << " ok=" << (sw.ok ? 1 : 0) << '\n';
    } else {
        ojson doc = json_preamble(cfg, ls);
        doc["theta"] = cfg.theta;
        doc["mu"] = ojson{{"lo", q_str(run.mu.lo())}, {"hi", q_str(run.mu.hi())}};
        doc["truncated"] = run.truncated;
        ojson rows = ojson::array();
        for (const ConvergentRecord& r : run.records) {
            ojson rec;
            rec["n"] = r.index;
            rec["p"] = r.vector.x.str();
            rec["q"] = r.vector.y.str();
            rec["hor_lo"] = q_str(r.hor.lo());
            rec["hor_hi"] = q_str(r.hor.hi());
            rec["q_float"] = r.vector.y.approx();
            rec["provisional"] = r.provisional;
            rec["terminating"] = r.terminating;
            rows.push_back(std::move(rec));
        }
        doc["records"] = std::move(rows);
        doc["sandwich"] = ojson{{"ok", sw.ok}, {"pairs", sw.pairs}};
        emit(out, doc);
    }
    return sw.ok ? 0 : static_cast<int>(ErrorKind::check_failed);
}

int cmd_enumerate(const LoadedSurface& ls, const RunConfig& cfg, std::ostream& out) {
    std::vector<SaddleVector> zs;
    if (ls.model.is_origami()) {
        guard_trace_radius(cfg.radius);
        zs = trace_saddle_connections(ls.model.origami(), cfg.radius,
                                      static_cast<unsigned>(cfg.threads));
    } else {
        zs = orbit_vectors(ls.model.orbit(), cfg.radius);
    }

    if (cfg.format == ReportFormat::csv) {
        write_csv_preamble(out, cfg, ls);
        out << "# radius " << q_str(cfg.radius) << '\n';
        out << "x_a,x_b,y_a,y_b,norm_approx,multiplicity\n";
        for (const SaddleVector& v : zs)
            out << q_str(v.x.a()) << ',' << q_str(v.x.b()) << ',' << q_str(v.y.a()) << ','
                << q_str(v.y.b()) << ',' << format_double(v.norm_approx()) << ','
                << v.multiplicity << '\n';
    } else {
        ojson doc = json_preamble(cfg, ls);
        doc["radius"] = q_str(cfg.radius);
        doc["count"] = zs.size();
        ojson rows = ojson::array();
        for (const SaddleVector& v : zs) {
            ojson rec;
            rec["x"] = v.x.str();
            rec["y"] = v.y.str();
            rec["norm_approx"] = v.norm_approx();
            rec["multiplicity"] = v.multiplicity;
            rows.push_back(std::move(rec));
        }
        doc["vectors"] = std::move(rows);
        emit(out, doc);
    }
    return 0;
}

int cmd_mink(const LoadedSurface& ls, const RunConfig& cfg, std::ostream& out) {
    std::vector<SaddleVector> zs = bound_vectors(ls, cfg.radius, cfg.threads);
    MinkSearchOptions opts;
    opts.grid = cfg.grid;
    opts.refine_rounds = cfg.refine_rounds;
    opts.bits = cfg.bits;
    opts.volume = ls.model.volume();
    MinkReport rep = mink_lower_bound_search(zs, cfg.radius, opts);
    RatInterval ub = mink_upper_bound(ls.model, cfg.bits);
    const char* shape = rep.witness.shape == BodyShape::square ? "square" : "disk";

    if (cfg.format == ReportFormat::csv) {
        write_csv_preamble(out, cfg, ls);
        out << "key,value\n";
        out << "radius," << q_str(cfg.radius) << '\n';
        out << "vectors," << zs.size() << '\n';
        out << "lower_bound," << format_double(rep.lower_bound) << '\n';
        out << "upper_bound," << format_double(ub.hi_double()) << '\n';
        out << "upper_bound_exact," << q_str(ub.hi()) << '\n';
        out << "witness_shape," << shape << '\n';
        out << "witness_a," << q_str(rep.witness.a) << '\n';
        out << "witness_b," << q_str(rep.witness.b) << '\n';
        out << "witness_s," << q_str(rep.witness.scale) << '\n';
    } else {
        ojson doc = json_preamble(cfg, ls);
        doc["radius"] = q_str(cfg.radius);
        doc["vectors"] = zs.size();
        doc["lower_bound"] = rep.lower_bound;
        doc["upper_bound"] = ub.hi_double();
        doc["upper_bound_exact"] = q_str(ub.hi());
        doc["witness"] = ojson{{"shape", shape},
                               {"a", q_str(rep.witness.a)},
                               {"b", q_str(rep.witness.b)},
                               {"s", q_str(rep.witness.scale)}};
        emit(out, doc);
    }
    return 0;
}

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail; // comma-free: CSV cells stay unquoted
};

int cmd_verify(const LoadedSurface& ls, const RunConfig& cfg, std::ostream& out) {
    std::vector<CheckLine> checks;
    auto add = [&checks](std::string name, bool pass, std::string detail) {
        checks.push_back(CheckLine{std::move(name), pass, std::move(detail)});
    };
    const SurfaceModel& m = ls.model;
    std::vector<SaddleVector> zs;

    if (m.is_origami()) {
        const Origami& o = m.origami();
        SingularityData sd = validate_origami(o);
        add("structure", true,
            std::to_string(o.n) + " squares; genus " + std::to_string(sd.genus) + "; " +
                std::to_string(sd.classes.size()) + " vertex classes; " +
                std::to_string(sd.marked_count) + " marked");
        guard_trace_radius(cfg.radius);
        zs = trace_saddle_connections(o, cfg.radius, static_cast<unsigned>(cfg.threads));
        add("enumeration", !zs.empty(),
            std::to_string(zs.size()) + " vectors within norm " + q_str(cfg.radius));
        auto traces = trace_saddle_connections_detailed(o, cfg.radius,
                                                        static_cast<unsigned>(cfg.threads));
        std::size_t bad = 0;
        for (const TracedConnection& c : traces)
            if (!replay_trace(o, c)) ++bad;
        add("replay", bad == 0,
            std::to_string(traces.size()) + " traces; " + std::to_string(bad) + " replay failures");
        if (ls.lattice_vectors) {
            std::vector<SaddleVector> lat = primitive_lattice(cfg.radius);
            auto keys = [](const std::vector<SaddleVector>& vs) {
                std::vector<std::string> ks;
                ks.reserve(vs.size());
                for (const SaddleVector& v : vs) ks.push_back(v.key());
                std::sort(ks.begin(), ks.end());
                ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
                return ks;
            };
            bool eq = keys(zs) == keys(lat);
            add("lattice_match", eq,
                "traced " + std::to_string(zs.size()) + " vs lattice " +
                    std::to_string(lat.size()) + (eq ? "; equal" : "; DIFFER"));
        }
    } else {
        const GroupOrbitModel& gm = m.orbit();
        validate_orbit_model(gm);
        add("structure", true,
            std::to_string(gm.generators.size()) + " generators; " +
                std::to_string(gm.seeds.size()) + " seeds; volume " + gm.volume.str());
        zs = orbit_vectors(gm, cfg.radius);
        add("enumeration", !zs.empty(),
            std::to_string(zs.size()) + " vectors within norm " + q_str(cfg.radius));
        ClosureReport cr = orbit_closure_check(gm, zs, cfg.radius);
        add("closure", cr.closed,
            cr.closed ? std::string("generator images closed under the radius")
                      : std::to_string(cr.missing) + " images missing");
        DominationReport dr = vector_domination(zs);
        add("conjugate_ratio", dr.pass,
            "c_emp " + format_double(dr.c_emp) + " over " + std::to_string(dr.samples) +
                " components");
    }

    if (zs.empty()) {
        add("shortest_vector", false, "no vectors to check");
        add("mink_bounds", false, "no vectors to check");
    } else {
        ShortestVectorReport sv = shortest_vector_check(m.volume(), zs);
        add("shortest_vector", sv.ok,
            "min |v|^2 = " + sv.min_norm_sq.str() + "; bound 2*vol = " + sv.bound_sq.str());
        MinkSearchOptions qo;
        qo.grid = 7;
        qo.refine_rounds = 6;
        qo.bits = cfg.bits;
        qo.volume = m.volume();
        bool ok = true;
        std::string detail;
        try {
            MinkReport mr = mink_lower_bound_search(zs, cfg.radius, qo);
            RatInterval ub = mink_upper_bound(m, cfg.bits);
            ok = mr.lower_bound <= ub.hi_double();
            detail = "lower " + format_double(mr.lower_bound) + " <= upper " +
                     format_double(ub.hi_double());
        } catch (const Error& e) {
            ok = false;
            detail = e.what();
            std::replace(detail.begin(), detail.end(), ',', ';');
        }
        add("mink_bounds", ok, detail);
    }

    bool all = std::all_of(checks.begin(), checks.end(),
                           [](const CheckLine& c) { return c.pass; });
    if (cfg.format == ReportFormat::csv) {
        write_csv_preamble(out, cfg, ls);
        out << "check,status,detail\n";
        for (const CheckLine& c : checks)
            out << c.name << ',' << (c.pass ? "pass" : "FAIL") << ',' << c.detail << '\n';
        out << "# verify ok=" << (all ? 1 : 0) << '\n';
    } else {
        ojson doc = json_preamble(cfg, ls);
        ojson rows = ojson::array();
        for (const CheckLine& c : checks)
            rows.push_back(ojson{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        doc["checks"] = std::move(rows);
        doc["pass"] = all;
        emit(out, doc);
    }
    return all ? 0 : static_cast<int>(ErrorKind::check_failed);
}

int cmd_growth(const LoadedSurface& ls, const RunConfig& cfg, std::ostream& out) {
    Direction theta = parse_direction(cfg.theta);
    ExpansionRun run = run_expansion(ls, theta, cfg);
    std::vector<mpq_class> heights;
    for (const ConvergentRecord& r : run.records) {
        if (r.terminating) break;
        FieldElement h = r.vector.height();
        if (h.sign() == 0) continue;
        heights.push_back(h.descriptor().kind == FieldKind::rational ? h.rational_value()
                                                                     : h.enclosure(128).mid());
    }
    int degree = ls.model.field().degree();
    GrowthReport gr = growth_indicator(heights, degree, cfg.margin);

    if (cfg.format == ReportFormat::csv) {
        write_csv_preamble(out, cfg, ls);
        out << "# theta " << cfg.theta << '\n';
        out << "# degree " << degree << " threshold " << format_double(gr.threshold)
            << " margin " << format_double(gr.margin) << '\n';
        out << "# tail_max " << format_double(gr.tail_max) << " argmax " << gr.argmax_index
            << " argmax_in_tail " << (gr.argmax_in_tail ? 1 : 0) << '\n';
        out << "# flagged " << (gr.flagged ? 1 : 0) << '\n';
        out << "n,q,loglog_q_over_n\n";
        for (const auto& [n, g] : gr.sequence)
            out << n << ',' << format_double(heights[static_cast<std::size_t>(n) - 1].get_d())
                << ',' << format_double(g) << '\n';
    } else {
        ojson doc = json_preamble(cfg, ls);
        doc["theta"] = cfg.theta;
        doc["degree"] = degree;
        doc["threshold"] = gr.threshold;
        doc["margin"] = gr.margin;
        doc["running_max"] = gr.running_max;
        doc["tail_max"] = gr.tail_max;
        doc["argmax_index"] = gr.argmax_index;
        doc["argmax_in_tail"] = gr.argmax_in_tail;
        doc["flagged"] = gr.flagged;
        ojson rows = ojson::array();
        for (const auto& [n, g] : gr.sequence) {
            const mpq_class& q = heights[static_cast<std::size_t>(n) - 1];
            rows.push_back(ojson{{"n", n},
                                 {"q", q.get_d()},
                                 {"q_exact", q_str(q)},
                                 {"ratio", g}});
        }
        doc["sequence"] = std::move(rows);
        emit(out, doc);
    }
    return 0; // the flag is a finding, not a failure
}

void validate_run_config(const RunConfig& cfg) {
    if (cfg.surface_path.empty()) throw usage_error("--surface is required");
    if (cfg.radius <= 0) throw usage_error("--radius must be positive");
    if (cfg.height_cap <= 0) throw usage_error("--height-cap must be positive");
    if (cfg.hor_cap <= 0) throw usage_error("--hor-cap must be positive");
    if (cfg.terms <= 0) throw usage_error("--terms must be positive");
    if (cfg.bits < 16) throw usage_error("--bits must be at least 16");
    if (cfg.grid < 3) throw usage_error("--grid must be at least 3");
    if (cfg.refine_rounds < 0) throw usage_error("--refine-rounds must be nonnegative");
    if (cfg.margin < 0) throw usage_error("--margin must be nonnegative");
    if (cfg.threads < 0) throw usage_error("--threads must be nonnegative");
}

} // namespace

LoadedSurface parse_surface_config(const std::string& text) {
    njson j;
    try {
        j = njson::parse(text);
    } catch (const njson::exception& e) {
        throw usage_error(std::string("surface config: ") + e.what());
    }
    if (!j.is_object()) throw usage_error("surface config: top level must be an object");
    std::string kind = require_string(j, "kind");
    std::string name;
    if (j.contains("name")) name = require_string(j, "name");

    if (kind == "torus") {
        Origami o{1, Perm::identity(1), Perm::identity(1), MarkedPolicy::all_vertices};
        validate_origami(o);
        LoadedSurface ls;
        ls.model = SurfaceModel{name.empty() ? "torus" : name, o};
        ls.lattice_vectors = true;
        return ls;
    }
    if (kind == "origami") return parse_origami_config(j, name);
    if (kind == "orbit") return parse_orbit_config(j, name);
    throw usage_error("surface config: field \"kind\" must be \"torus\", \"origami\" or "
                      "\"orbit\" (got \"" + kind + "\")");
}

LoadedSurface load_surface(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open surface config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw io_error("failed reading surface config: " + path);
    return parse_surface_config(ss.str());
}

int run_command(const RunConfig& cfg, std::ostream& out) {
    validate_run_config(cfg);
    LoadedSurface ls = load_surface(cfg.surface_path);
    if (cfg.command == "expand") return cmd_expand(ls, cfg, out);
    if (cfg.command == "enumerate") return cmd_enumerate(ls, cfg, out);
    if (cfg.command == "mink") return cmd_mink(ls, cfg, out);
    if (cfg.command == "verify") return cmd_verify(ls, cfg, out);
    if (cfg.command == "growth") return cmd_growth(ls, cfg, out);
    throw usage_error("unknown command \"" + cfg.command +
                      "\" (expand | enumerate | mink | verify | growth)");
}

} // namespace sctk
