#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>

#include "sctk/surface.hpp"

namespace sctk {

enum class ReportFormat { csv, json };

/** A parsed surface config: the model plus config-level modeling assertions. */
struct LoadedSurface {
    SurfaceModel model;
    /**
     * Origami option "lattice": the config asserts that the surface's saddle
     * vectors are exactly the primitive integer vectors.  Enumeration then
     * uses the closed form (tracing cost grows quadratically with the radius,
     * so record streams to large heights need this), and `verify` cross-checks
     * the assertion against the tracer up to the configured radius.  Implied
     * by kind "torus".
     */
    bool lattice_vectors = false;
};

/** One invocation: a command, a surface, and report options. */
struct RunConfig {
    std::string command;          // expand | enumerate | mink | verify | growth
    std::string surface_path;
    std::string theta = "pi";     // "pi", "e", "sqrt(2)", "3.14159", "(1+sqrt(5))/2", ...
    mpq_class radius{20};         // norm cap for enumerate / mink / verify
    mpq_class height_cap{1000000}; // height cap for the expand / growth streams
    mpq_class hor_cap{1};         // horizontal-component cap for the record stream
    int terms = 10;               // record cap for expand / growth
    int bits = 96;                // working precision for enclosures
    int grid = 13;                // lower-bound search: coarse grid side (odd)
    int refine_rounds = 24;       //   and hill-climb refinement rounds
    double margin = 0.05;         // growth-detector margin over the threshold
    int threads = 0;              // worker cap; 0 = hardware concurrency
    ReportFormat format = ReportFormat::csv;
};

/**
 * Parses a surface config document (JSON).  Schema, common to all kinds:
 *   { "kind": "torus" | "origami" | "orbit", "name": optional string, ... }
 * origami: "n" squares, "h" and "v" as 1-based disjoint cycle lists,
 *   "marked_policy": "cone_points_only" (default) | "all_vertices",
 *   "lattice": optional bool (see LoadedSurface).
 * torus: shorthand for the one-square origami with identity gluings and
 *   all_vertices marking; implies the lattice property.
 * orbit: "field": {"d": k} (omit, 0 or 1 for the rationals),
 *   "generators": list of 2x2 matrices (nested rows or flat [a,b,c,d]),
 *   "seeds": list of [x, y], "volume": a positive element.
 * Matrix entries, seeds and volume are exact literals: integers, or strings
 * in the field-literal grammar ("3/2", "sqrt(5)", "(1+sqrt(5))/2").
 * Malformed documents raise usage errors naming the offending field;
 * structurally invalid surfaces surface the validation module's message.
 */
LoadedSurface parse_surface_config(const std::string& text);

/** Reads the file at path and parses it; io errors on filesystem problems. */
LoadedSurface load_surface(const std::string& path);

/**
 * Validates cfg, loads the surface, runs the command, and writes exactly one
 * report to out.  Reports are deterministic: byte-identical across runs for
 * identical inputs.  Returns 0 when every performed check passes, or the
 * check_failed exit code when the report was produced but some verification
 * predicate did not hold.  Conditions that prevent producing a report at all
 * (bad arguments, invalid surfaces, I/O, exhausted precision) throw Error.
 */
int run_command(const RunConfig& cfg, std::ostream& out);

} // namespace sctk
