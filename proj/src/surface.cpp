#include "sctk/surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "sctk/util.hpp"

namespace sctk {

Perm::Perm(std::vector<int> images) : img_(std::move(images)) {
    std::vector<char> seen(img_.size(), 0);
    for (int x : img_) {
        if (x < 0 || x >= size() || seen[static_cast<std::size_t>(x)]) {
            throw validation_error("permutation image table is not a bijection");
        }
        seen[static_cast<std::size_t>(x)] = 1;
    }
}

Perm Perm::identity(int n) {
    std::vector<int> img(static_cast<std::size_t>(n));
    std::iota(img.begin(), img.end(), 0);
    return Perm(std::move(img));
}

Perm Perm::from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
    if (n <= 0) throw validation_error("permutation size must be positive");
    std::vector<int> img(static_cast<std::size_t>(n));
    std::iota(img.begin(), img.end(), 0);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    for (const auto& cyc : cycles) {
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            int from = cyc[i], to = cyc[(i + 1) % cyc.size()];
            if (from < 1 || from > n || to < 1 || to > n) {
                throw validation_error("cycle entry out of range 1.." + std::to_string(n));
            }
            if (used[static_cast<std::size_t>(from - 1)]) {
                throw validation_error("cycles are not disjoint at symbol " + std::to_string(from));
            }
            used[static_cast<std::size_t>(from - 1)] = 1;
            img[static_cast<std::size_t>(from - 1)] = to - 1;
        }
    }
    return Perm(std::move(img));
}

Perm Perm::inverse() const {
    std::vector<int> inv(img_.size());
    for (int i = 0; i < size(); ++i) inv[static_cast<std::size_t>(img_[static_cast<std::size_t>(i)])] = i;
    return Perm(std::move(inv));
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a); b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

int corner_id(int square, int corner) { return 4 * square + corner; }

} // namespace

SingularityData validate_origami(const Origami& o) {
    if (o.n <= 0) throw validation_error("origami needs at least one square");
    if (o.h.size() != o.n || o.v.size() != o.n) {
        throw validation_error("permutation size disagrees with square count");
    }
    // Connectivity under <h, v>.
    {
        std::vector<char> seen(static_cast<std::size_t>(o.n), 0);
        std::queue<int> bfs;
        bfs.push(0);
        seen[0] = 1;
        int reached = 1;
        Perm hi = o.h.inverse(), vi = o.v.inverse();
        while (!bfs.empty()) {
            int s = bfs.front();
            bfs.pop();
            for (int t : {o.h(s), o.v(s), hi(s), vi(s)}) {
                if (!seen[static_cast<std::size_t>(t)]) {
                    seen[static_cast<std::size_t>(t)] = 1;
                    ++reached;
                    bfs.push(t);
                }
            }
        }
        if (reached != o.n) throw validation_error("origami is disconnected");
    }

    // Vertex classes: identify corners along the edge gluings.
    UnionFind uf(4 * o.n);
    for (int s = 0; s < o.n; ++s) {
        uf.unite(corner_id(s, BR), corner_id(o.h(s), BL));
        uf.unite(corner_id(s, TR), corner_id(o.h(s), TL));
        uf.unite(corner_id(s, TL), corner_id(o.v(s), BL));
        uf.unite(corner_id(s, TR), corner_id(o.v(s), BR));
    }
    std::map<int, int> root_to_class;
    SingularityData data;
    data.class_of.assign(static_cast<std::size_t>(4 * o.n), -1);
    for (int c = 0; c < 4 * o.n; ++c) {
        int r = uf.find(c);
        auto [it, fresh] = root_to_class.try_emplace(r, static_cast<int>(data.classes.size()));
        if (fresh) data.classes.emplace_back();
        data.class_of[static_cast<std::size_t>(c)] = it->second;
        data.classes[static_cast<std::size_t>(it->second)].corners.emplace_back(c / 4, c % 4);
    }
    int total_k = 0;
    for (auto& cls : data.classes) {
        if (cls.corners.size() % 4 != 0) {
            throw validation_error("vertex class with angle not a multiple of 2 pi");
        }
        cls.k = static_cast<int>(cls.corners.size() / 4);
        total_k += cls.k;
        cls.marked = (o.policy == MarkedPolicy::all_vertices) || cls.k >= 2;
        if (cls.marked) ++data.marked_count;
    }
    if (total_k != o.n) throw validation_error("corner count inconsistency");
    // V - E + F = 2 - 2g with E = 2n, F = n.
    int V = static_cast<int>(data.classes.size());
    int two_minus_2g = V - o.n;
    if ((2 - two_minus_2g) % 2 != 0) throw validation_error("odd Euler characteristic");
    data.genus = (2 - two_minus_2g) / 2;
    // Cone angle bookkeeping: sum (k_i - 1) = 2g - 2.
    if (total_k - V != 2 * data.genus - 2) {
        throw validation_error("cone angles inconsistent with genus");
    }
    return data;
}

double SaddleVector::norm_approx() const {
    double xa = x.approx(), ya = y.approx();
    return std::sqrt(xa * xa + ya * ya);
}

bool height_lex_less(const SaddleVector& a, const SaddleVector& b) {
    int c = a.height().compare(b.height());
    if (c != 0) return c < 0;
    c = a.x.compare(b.x);
    if (c != 0) return c < 0;
    return a.y.compare(b.y) < 0;
}

namespace {

/** Precomputed tracing tables for one origami. */
struct TraceCtx {
    const Origami* o;
    SingularityData sing;
    std::vector<int> unique_bl; // class -> square whose BL corner realizes it (k == 1 only)
    std::vector<int> start_squares; // squares whose BL corner lies in a marked class

    explicit TraceCtx(const Origami& ori) : o(&ori), sing(validate_origami(ori)) {
        unique_bl.assign(sing.classes.size(), -1);
        for (int s = 0; s < ori.n; ++s) {
            int cls = sing.class_of[static_cast<std::size_t>(corner_id(s, BL))];
            if (sing.classes[static_cast<std::size_t>(cls)].k == 1) {
                unique_bl[static_cast<std::size_t>(cls)] = s;
            }
            if (sing.classes[static_cast<std::size_t>(cls)].marked) start_squares.push_back(s);
        }
    }

    bool marked_class(int cls) const { return sing.classes[static_cast<std::size_t>(cls)].marked; }
    int cls_at(int square, int corner) const {
        return sing.class_of[static_cast<std::size_t>(corner_id(square, corner))];
    }
};

/**
 * Walk the open segment from the BL corner of `s0` in primitive direction
 * (p, q) with p, q >= 1, returning the first multiple hitting a marked vertex
 * (0 if none within max_mult).
 */
long walk_interior(const TraceCtx& ctx, int s0, long p, long q, long max_mult) {
    const Origami& o = *ctx.o;
    int cur = s0;
    for (long m = 1; m <= max_mult; ++m) {
        // Crossings with the unit grid between consecutive lattice multiples,
        // merged by exact parameter comparison j/p vs i/q (no ties: (p,q)
        // primitive).
        long j = 1, i = 1;
        while (j <= p - 1 || i <= q - 1) {
            if (i > q - 1 || (j <= p - 1 && j * q < i * p)) {
                cur = o.h(cur);
                ++j;
            } else {
                cur = o.v(cur);
                ++i;
            }
        }
        int cls = ctx.cls_at(cur, TR);
        if (ctx.marked_class(cls)) return m;
        int next = ctx.unique_bl[static_cast<std::size_t>(cls)];
        if (next < 0) throw validation_error("trace passed through an unmarked cone point");
        cur = next;
    }
    return 0;
}

/** Same along the positive x axis (bottom edges). */
long walk_axis_x(const TraceCtx& ctx, int s0, long max_mult) {
    const Origami& o = *ctx.o;
    int cur = s0;
    for (long m = 1; m <= max_mult; ++m) {
        int cls = ctx.cls_at(cur, BR);
        cur = o.h(cur);
        if (ctx.marked_class(cls)) return m;
    }
    return 0;
}

/** Same along the positive y axis (left edges). */
long walk_axis_y(const TraceCtx& ctx, int s0, long max_mult) {
    const Origami& o = *ctx.o;
    int cur = s0;
    for (long m = 1; m <= max_mult; ++m) {
        int cls = ctx.cls_at(cur, TL);
        cur = o.v(cur);
        if (ctx.marked_class(cls)) return m;
    }
    return 0;
}

long isqrt_floor(const mpq_class& r2) {
    // Largest integer m with m^2 <= r2.
    mpz_class num = r2.get_num(), den = r2.get_den();
    mpz_class f = num / den;
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), f.get_mpz_t());
    while (mpq_class((root + 1) * (root + 1)) <= r2) ++root;
    while (root > 0 && mpq_class(root * root) > r2) --root;
    return root.get_si();
}

long max_multiple(long p, long q, const mpq_class& r2) {
    // Largest m with m^2 (p^2 + q^2) <= r2.
    mpq_class unit(p * p + q * q);
    return isqrt_floor(mpq_class(r2 / unit));
}

std::vector<std::pair<long, long>> primitive_directions_q1(long R) {
    // Interior first-quadrant primitive directions with p, q >= 1.
    std::vector<std::pair<long, long>> dirs;
    for (long p = 1; p <= R; ++p) {
        for (long q = 1; p * p + q * q <= R * R; ++q) {
            if (std::gcd(p, q) == 1) dirs.emplace_back(p, q);
        }
    }
    return dirs;
}

} // namespace

std::vector<TracedConnection> trace_saddle_connections_detailed(const Origami& o,
                                                                const mpq_class& radius,
                                                                unsigned threads) {
    if (sgn(radius) <= 0) throw validation_error("trace radius must be positive");
    TraceCtx fwd(o);
    if (fwd.start_squares.empty()) {
        throw validation_error("surface has no marked points under the chosen policy");
    }
    Origami refl{o.n, o.h, o.v.inverse(), o.policy};
    TraceCtx bwd(refl);

    mpq_class r2 = radius * radius;
    long R = isqrt_floor(r2);
    std::vector<TracedConnection> out;

    // Axis directions (walked on the forward surface only; negatives come from
    // the closing-under-negation step).
    long axis_max = R;
    if (axis_max >= 1) {
        for (int s : fwd.start_squares) {
            if (long m = walk_axis_x(fwd, s, axis_max)) out.push_back({m, 0, 1, 0, m, s, false});
            if (long m = walk_axis_y(fwd, s, axis_max)) out.push_back({0, m, 0, 1, m, s, false});
        }
    }

    auto dirs = primitive_directions_q1(R);
    std::vector<std::vector<TracedConnection>> chunks;
    unsigned nthreads = resolve_threads(threads);
    chunks.resize(std::min<std::size_t>(nthreads, dirs.empty() ? 1 : dirs.size()));
    parallel_chunks(dirs.size(), nthreads, [&](std::size_t ci, std::size_t b, std::size_t e) {
        auto& local = chunks[ci];
        for (std::size_t k = b; k < e; ++k) {
            auto [p, q] = dirs[k];
            long mm = max_multiple(p, q, r2);
            if (mm < 1) continue;
            for (int s : fwd.start_squares) {
                if (long m = walk_interior(fwd, s, p, q, mm)) {
                    local.push_back({m * p, m * q, p, q, m, s, false});
                }
            }
            for (int s : bwd.start_squares) {
                if (long m = walk_interior(bwd, s, p, q, mm)) {
                    local.push_back({m * p, -m * q, p, q, m, s, true});
                }
            }
        }
    });
    for (auto& c : chunks) out.insert(out.end(), c.begin(), c.end());
    std::sort(out.begin(), out.end(), [](const TracedConnection& a, const TracedConnection& b) {
        return std::tie(a.x, a.y, a.reflected, a.start_square) <
               std::tie(b.x, b.y, b.reflected, b.start_square);
    });
    return out;
}

std::vector<SaddleVector> trace_saddle_connections(const Origami& o, const mpq_class& radius,
                                                   unsigned threads) {
    auto traced = trace_saddle_connections_detailed(o, radius, threads);
    std::map<std::pair<long, long>, long> mult;
    for (const auto& t : traced) ++mult[{t.x, t.y}];
    std::vector<SaddleVector> out;
    out.reserve(mult.size() * 2);
    for (const auto& [hol, m] : mult) {
        SaddleVector v{FieldElement::rational(hol.first), FieldElement::rational(hol.second), m};
        SaddleVector neg{FieldElement::rational(-hol.first), FieldElement::rational(-hol.second), m};
        out.push_back(v);
        out.push_back(neg);
    }
    std::sort(out.begin(), out.end(), height_lex_less);
    return out;
}

bool replay_trace(const Origami& o, const TracedConnection& c) {
    Origami surf = c.reflected ? Origami{o.n, o.h, o.v.inverse(), o.policy} : o;
    TraceCtx ctx(surf);
    int start_cls = ctx.cls_at(c.start_square, BL);
    if (!ctx.marked_class(start_cls)) return false;
    long first;
    if (c.dir_q == 0) first = walk_axis_x(ctx, c.start_square, c.multiple);
    else if (c.dir_p == 0) first = walk_axis_y(ctx, c.start_square, c.multiple);
    else first = walk_interior(ctx, c.start_square, c.dir_p, c.dir_q, c.multiple);
    // The first marked hit must be exactly the recorded multiple: no marked
    // point lies strictly inside the segment.
    return first == c.multiple;
}

std::vector<SaddleVector> primitive_lattice(const mpq_class& radius) {
    if (sgn(radius) <= 0) throw validation_error("lattice radius must be positive");
    mpq_class r2 = radius * radius;
    long R = isqrt_floor(r2);
    std::vector<SaddleVector> out;
    for (long x = -R; x <= R; ++x) {
        for (long y = -R; y <= R; ++y) {
            if (x == 0 && y == 0) continue;
            if (mpq_class(x * x + y * y) > r2) continue;
            if (std::gcd(std::labs(x), std::labs(y)) != 1) continue;
            out.push_back({FieldElement::rational(x), FieldElement::rational(y), 1});
        }
    }
    std::sort(out.begin(), out.end(), height_lex_less);
    return out;
}

Mat2 Mat2::identity(const FieldDescriptor& desc) {
    return {FieldElement::one(desc), FieldElement::zero(desc), FieldElement::zero(desc),
            FieldElement::one(desc)};
}

Mat2 Mat2::operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Mat2 Mat2::inverse() const {
    FieldElement dt = det();
    if (!(dt == FieldElement::one(a.descriptor()))) {
        throw validation_error("matrix inverse expects determinant exactly 1");
    }
    return {d, -b, -c, a};
}

SaddleVector Mat2::apply(const SaddleVector& v) const {
    return {a * v.x + b * v.y, c * v.x + d * v.y, v.multiplicity};
}

std::string Mat2::key() const {
    return a.key() + "#" + b.key() + "#" + c.key() + "#" + d.key();
}

void validate_orbit_model(const GroupOrbitModel& m) {
    if (m.generators.empty()) throw validation_error("orbit model needs at least one generator");
    if (m.seeds.empty()) throw validation_error("orbit model needs at least one seed vector");
    FieldElement one = FieldElement::one(m.field);
    for (const auto& g : m.generators) {
        if (!(g.det() == one)) {
            throw validation_error("orbit generator must have determinant exactly 1");
        }
    }
    for (const auto& s : m.seeds) {
        if (s.x.is_zero() && s.y.is_zero()) throw validation_error("zero seed vector");
    }
    if (m.volume.sign() <= 0) throw validation_error("surface volume must be positive");
}

std::vector<SaddleVector> orbit_vectors(const GroupOrbitModel& m, const mpq_class& radius,
                                        const OrbitOptions& opts) {
    validate_orbit_model(m);
    if (radius <= 0) throw validation_error("orbit radius must be positive");
    if (opts.work_margin < 1) throw validation_error("orbit work margin must be >= 1");
    mpq_class work_radius = radius * opts.work_margin;
    FieldElement r2 = FieldElement::rational(radius * radius).promoted(m.field);
    FieldElement w2 = FieldElement::rational(work_radius * work_radius).promoted(m.field);

    std::vector<Mat2> letters;
    for (const auto& g : m.generators) {
        letters.push_back(g);
        letters.push_back(g.inverse());
    }

    std::unordered_map<std::string, SaddleVector> found;
    std::vector<SaddleVector> frontier;
    // Adds v to the working set if inside the working ball; returns whether it
    // was both inside and new (i.e. the chain walk should continue from it).
    auto note = [&](const SaddleVector& v) {
        if ((v.norm_sq() - w2).sign() > 0) return false;
        auto [it, fresh] = found.try_emplace(v.key(), v);
        if (!fresh) {
            it->second.multiplicity = std::max(it->second.multiplicity, v.multiplicity);
            return false;
        }
        if (found.size() > opts.max_vectors) {
            throw check_error("orbit enumeration exceeded its vector budget; "
                              "the generators may not span a discrete group");
        }
        frontier.push_back(v);
        return true;
    };
    for (const auto& s : m.seeds) {
        note(s);
        note({-s.x, -s.y, s.multiplicity});
    }

    int round = 0;
    while (!frontier.empty()) {
        if (++round > opts.max_rounds) {
            throw check_error("orbit enumeration did not reach a fixpoint within the round "
                              "budget; the generators may not span a discrete group");
        }
        std::vector<SaddleVector> current = std::move(frontier);
        frontier.clear();
        for (const auto& v : current) {
            for (const auto& l : letters) {
                // Walk the whole chain l*v, l^2*v, ... inline so parabolic
                // generators do not cost one breadth-first round per step.
                SaddleVector w = l.apply(v);
                while (note(w)) w = l.apply(w);
            }
        }
    }

    std::vector<SaddleVector> out;
    out.reserve(found.size());
    for (auto& [k, v] : found) {
        if ((v.norm_sq() - r2).sign() <= 0) out.push_back(v);
    }
    std::sort(out.begin(), out.end(), height_lex_less);
    return out;
}

ClosureReport orbit_closure_check(const GroupOrbitModel& m,
                                  const std::vector<SaddleVector>& vectors,
                                  const mpq_class& radius) {
    FieldElement r2 = FieldElement::rational(radius * radius).promoted(m.field);
    std::unordered_set<std::string> have;
    for (const auto& v : vectors) have.insert(v.key());
    ClosureReport rep;
    std::vector<Mat2> letters;
    for (const auto& g : m.generators) {
        letters.push_back(g);
        letters.push_back(g.inverse());
    }
    for (const auto& v : vectors) {
        for (const auto& l : letters) {
            SaddleVector w = l.apply(v);
            if ((w.norm_sq() - r2).sign() > 0) continue;
            if (!have.count(w.key())) {
                rep.closed = false;
                ++rep.missing;
                if (rep.examples.size() < 5) rep.examples.push_back(w);
            }
        }
    }
    return rep;
}

ShortestVectorReport shortest_vector_check(const FieldElement& volume,
                                           const std::vector<SaddleVector>& vectors) {
    if (vectors.empty()) throw validation_error("shortest vector check needs a nonempty set");
    ShortestVectorReport rep;
    rep.min_norm_sq = vectors.front().norm_sq();
    for (const auto& v : vectors) {
        FieldElement n2 = v.norm_sq();
        if (n2.compare(rep.min_norm_sq) < 0) rep.min_norm_sq = n2;
    }
    rep.bound_sq = volume + volume;
    rep.ok = rep.min_norm_sq.compare(rep.bound_sq) <= 0;
    return rep;
}

FieldDescriptor SurfaceModel::field() const {
    if (is_origami()) return FieldDescriptor::rational();
    return orbit().field;
}

FieldElement SurfaceModel::volume() const {
    if (is_origami()) return FieldElement::rational(origami().n);
    return orbit().volume;
}

} // namespace sctk
