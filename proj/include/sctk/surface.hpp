#pragma once

#include <gmpxx.h>

#include <string>
#include <variant>
#include <vector>

#include "sctk/field.hpp"

namespace sctk {

/** Permutation of {0, ..., n-1} stored as an image table. */
class Perm {
public:
    Perm() = default;
    explicit Perm(std::vector<int> images);
    static Perm identity(int n);
    /** Build from 1-based disjoint cycles, e.g. {{1,2}} on n symbols. */
    static Perm from_cycles(int n, const std::vector<std::vector<int>>& cycles);

    int size() const { return static_cast<int>(img_.size()); }
    int operator()(int i) const { return img_[static_cast<std::size_t>(i)]; }
    Perm inverse() const;
    bool operator==(const Perm& o) const { return img_ == o.img_; }

private:
    std::vector<int> img_;
};

enum class MarkedPolicy { cone_points_only, all_vertices };

/**
 * Square-tiled surface: n unit squares, square i glued to h(i) on the right
 * and v(i) on top.
 */
struct Origami {
    int n = 0;
    Perm h, v;
    MarkedPolicy policy = MarkedPolicy::cone_points_only;
};

/** Corner positions of a unit square. */
enum Corner : int { BL = 0, BR = 1, TL = 2, TR = 3 };

struct VertexClass {
    std::vector<std::pair<int, int>> corners; // (square, Corner)
    int k = 0;                                // cone angle = 2 pi k
    bool marked = false;
};

struct SingularityData {
    std::vector<VertexClass> classes;
    std::vector<int> class_of;   // indexed by 4*square + corner
    int genus = 0;
    int marked_count = 0;
};

/** Validates gluing data and computes the vertex structure; throws on invalid input. */
SingularityData validate_origami(const Origami& o);

/** Holonomy vector of a saddle connection (or orbit/lattice vector). */
struct SaddleVector {
    FieldElement x, y;
    long multiplicity = 1;

    FieldElement height() const { return y.abs(); }
    FieldElement norm_sq() const { return x * x + y * y; }
    double norm_approx() const;
    std::string key() const { return x.key() + "#" + y.key(); }
};

/** Sort key: height ascending, then x, then y (exact comparisons). */
bool height_lex_less(const SaddleVector& a, const SaddleVector& b);

/** One traced geodesic germ; kept so traces can be replayed independently. */
struct TracedConnection {
    long x = 0, y = 0;       // holonomy
    long dir_p = 0, dir_q = 0; // primitive direction actually walked (y >= 0 frame)
    long multiple = 0;
    int start_square = 0;
    bool reflected = false;  // walked on the vertically flipped surface
};

/**
 * All saddle connections of holonomy norm <= radius starting and ending at
 * marked points, by exact square-by-square tracing.  Output is closed under
 * v -> -v and sorted; multiplicities count distinct geodesic segments.
 */
std::vector<SaddleVector> trace_saddle_connections(const Origami& o, const mpq_class& radius,
                                                   unsigned threads = 0);
std::vector<TracedConnection> trace_saddle_connections_detailed(const Origami& o,
                                                                const mpq_class& radius,
                                                                unsigned threads = 0);

/** Re-walk a traced connection and confirm no marked point sits strictly inside. */
bool replay_trace(const Origami& o, const TracedConnection& c);

/** Primitive integer vectors with 0 < |v| <= radius, sorted canonically. */
std::vector<SaddleVector> primitive_lattice(const mpq_class& radius);

/** Column-major free 2x2 matrix over a field; group elements have det 1. */
struct Mat2 {
    FieldElement a, b, c, d; // [[a, b], [c, d]]

    static Mat2 identity(const FieldDescriptor& desc);
    FieldElement det() const { return a * d - b * c; }
    Mat2 operator*(const Mat2& o) const;
    Mat2 inverse() const; // valid for det 1
    SaddleVector apply(const SaddleVector& v) const;
    FieldElement trace() const { return a + d; }
    std::string key() const;
};

/** User-supplied Veech-group data: generators, seed vectors, surface volume. */
struct GroupOrbitModel {
    FieldDescriptor field;
    std::vector<Mat2> generators;
    std::vector<SaddleVector> seeds;
    FieldElement volume;
};

/** Checks determinants, seed sanity, and volume positivity; throws on failure. */
void validate_orbit_model(const GroupOrbitModel& m);

struct OrbitOptions {
    /** Intermediate vectors are kept while |v| <= radius * work_margin. */
    mpq_class work_margin{3, 2};
    /** Abort (with an error) if the working set outgrows this many vectors. */
    std::size_t max_vectors = 2'000'000;
    /** Abort if the breadth-first frontier is still growing after this many rounds. */
    int max_rounds = 256;
};

/**
 * Distinct orbit vectors g * seed with norm <= radius, closed under negation,
 * sorted canonically.  Runs a breadth-first fixpoint over vectors: each
 * generator (and its inverse) is applied repeatedly along chains that stay
 * inside the working ball of radius radius * work_margin.  Completeness inside
 * the target ball rests on the group acting discretely; the budget options
 * abort enumeration of non-discrete inputs with a diagnostic.
 */
std::vector<SaddleVector> orbit_vectors(const GroupOrbitModel& m, const mpq_class& radius,
                                        const OrbitOptions& opts = {});

struct ClosureReport {
    bool closed = true;
    long missing = 0;
    std::vector<SaddleVector> examples; // up to a handful
};

/**
 * Applies every generator (and inverse) to each reported vector; any image
 * inside the radius must already be present, else the enumeration stopped
 * short of the fixpoint.
 */
ClosureReport orbit_closure_check(const GroupOrbitModel& m,
                                  const std::vector<SaddleVector>& vectors,
                                  const mpq_class& radius);

struct ShortestVectorReport {
    bool ok = false;
    FieldElement min_norm_sq;
    FieldElement bound_sq; // 2 * volume
};

/** Shortest enumerated vector obeys |v|^2 <= 2 * volume (exact comparison). */
ShortestVectorReport shortest_vector_check(const FieldElement& volume,
                                           const std::vector<SaddleVector>& vectors);

/** A configured surface: either an origami or a group-orbit model. */
struct SurfaceModel {
    std::string name;
    std::variant<Origami, GroupOrbitModel> data;

    bool is_origami() const { return std::holds_alternative<Origami>(data); }
    const Origami& origami() const { return std::get<Origami>(data); }
    const GroupOrbitModel& orbit() const { return std::get<GroupOrbitModel>(data); }
    FieldDescriptor field() const;
    FieldElement volume() const;
};

} // namespace sctk
