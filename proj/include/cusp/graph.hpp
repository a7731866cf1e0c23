#pragma once

#include "cusp/group.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace cusp {

using Rational = boost::rational<std::int64_t>;
using VertexId = std::uint32_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr int kUnreachable = -1;

enum class VertexKind : std::uint8_t { element, horoball, apex };

/// Declared in tie-break rank order.
enum class EdgeKind : std::uint8_t { cayley, cone, vertical, horizontal };

std::string_view to_string(VertexKind k);
std::string_view to_string(EdgeKind k);

struct Vertex {
    VertexKind kind = VertexKind::element;
    /// The element itself, or the base element of a horoball vertex; identity for apices.
    GroupElement element;
    /// Present on horoball vertices and apices that belong to a coset.
    std::optional<CosetId> coset;
    /// Horoball depth; apices of coned-off horoballs sit at cone depth + 1.
    int depth = 0;

    bool operator==(const Vertex &) const = default;
};

struct VertexHash {
    std::size_t operator()(const Vertex &v) const noexcept;
};

struct Arc {
    VertexId target = kNoVertex;
    EdgeKind kind = EdgeKind::cayley;
    /// Index into SpaceGraph::labels() for Cayley edges, 0 otherwise.
    std::uint32_t label = 0;
};

/// Bookkeeping for one (possibly coned-off) horoball inside a graph.
struct Horoball {
    std::optional<CosetId> coset;
    std::vector<VertexId> base;                   ///< depth-0 vertices
    std::vector<std::vector<int>> base_distance;  ///< distances in the base graph
    std::vector<std::vector<VertexId>> layer;     ///< layer[d][i] is base vertex i at depth d
    VertexId apex = kNoVertex;
    int max_depth = 0;
    int cone_depth = -1; ///< -1 for a plain horoball

    bool coned() const { return cone_depth >= 0; }
    std::optional<std::uint32_t> base_index(VertexId v) const;

    std::unordered_map<VertexId, std::uint32_t> index_of;
};

enum class SpaceKind : std::uint8_t { generic, coned_cayley, cusped, horoball };

/// Immutable finite graph with basepoint, truncation radius, and horoball bookkeeping.
class SpaceGraph {
public:
    std::size_t size() const { return vertices_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    const Vertex &vertex(VertexId v) const { return vertices_.at(v); }
    std::span<const Arc> neighbors(VertexId v) const
    {
        return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
    }
    VertexId basepoint() const { return basepoint_; }
    int truncation_radius() const { return radius_; }
    SpaceKind kind() const { return kind_; }
    /// Cone depth r for cusped spaces and coned-off horoballs, -1 otherwise.
    int cone_depth() const { return cone_depth_; }
    const std::optional<GroupSpec> &group() const { return group_; }
    const std::vector<std::string> &labels() const { return labels_; }
    /// Generator element behind each Cayley label, when the graph has a group.
    const std::vector<GroupElement> &label_elements() const { return label_elements_; }

    std::optional<VertexId> find(const Vertex &v) const;
    std::optional<VertexId> find_element(const GroupElement &g) const;
    std::optional<VertexId> find_apex(const CosetId &c) const;
    std::optional<VertexId> find_horo(const GroupElement &g, const CosetId &c, int depth) const;

    const Arc *edge_between(VertexId u, VertexId v) const;
    bool adjacent(VertexId u, VertexId v) const { return edge_between(u, v) != nullptr; }

    const std::vector<Horoball> &horoballs() const { return horoballs_; }
    /// Horoball owning a horoball vertex or apex; -1 for element vertices and coned-graph apices.
    int horoball_of(VertexId v) const { return owner_[v]; }
    /// Horoballs containing v, including those whose base contains a depth-0 vertex.
    std::vector<int> horoballs_containing(VertexId v) const;
    std::optional<int> horoball_for_coset(const CosetId &c) const;

    /// Distance from the basepoint within the truncation.
    int base_distance(VertexId v) const { return base_dist_[v]; }

    /// A copy with the edge {u, v} removed; used for negative controls.
    SpaceGraph without_edge(VertexId u, VertexId v) const;

private:
    friend class GraphBuilder;

    std::vector<Vertex> vertices_;
    std::unordered_map<Vertex, VertexId, VertexHash> lookup_;
    std::vector<std::size_t> offsets_;
    std::vector<Arc> arcs_;
    std::size_t edge_count_ = 0;
    std::vector<std::string> labels_;
    std::vector<GroupElement> label_elements_;
    std::vector<Horoball> horoballs_;
    std::vector<int> owner_;
    std::unordered_map<VertexId, std::vector<int>> base_members_;
    std::unordered_map<CosetId, int, CosetIdHash> coset_horoball_;
    std::vector<int> base_dist_;
    std::optional<GroupSpec> group_;
    VertexId basepoint_ = 0;
    int radius_ = 0;
    int cone_depth_ = -1;
    SpaceKind kind_ = SpaceKind::generic;

    void finalize();
};

class GraphBuilder {
public:
    /// Adds a vertex or returns the existing id of an equal vertex.
    VertexId add_vertex(const Vertex &v);
    std::optional<VertexId> find(const Vertex &v) const;
    /// Adds an undirected edge; an existing edge keeps the smaller (kind, label).
    void add_edge(VertexId u, VertexId v, EdgeKind kind, std::uint32_t label = 0);
    std::uint32_t intern_label(const std::string &symbol, const GroupElement &element = {});
    /// Registers a horoball; owner and membership indices are derived from it.
    int add_horoball(Horoball h);
    std::size_t size() const { return vertices_.size(); }
    const Vertex &vertex(VertexId v) const { return vertices_[v]; }

    SpaceGraph build(VertexId basepoint, int radius, SpaceKind kind, int cone_depth,
                     std::optional<GroupSpec> group);

private:
    struct PendingArc {
        EdgeKind kind;
        std::uint32_t label;
    };
    std::vector<Vertex> vertices_;
    std::unordered_map<Vertex, VertexId, VertexHash> lookup_;
    std::unordered_map<std::uint64_t, PendingArc> edges_;
    std::vector<std::string> labels_;
    std::vector<GroupElement> label_elements_;
    std::vector<Horoball> horoballs_;
};

/// Rewrites a built graph; negative controls pass one that removes an edge.
using GraphTransform = std::function<SpaceGraph(const SpaceGraph &)>;

/// A point of the graph: a vertex, or a point at exact distance t in (0,1) from
/// `from` along the edge {from, to}. Stored canonically (from < to when interior).
struct Point {
    VertexId from = kNoVertex;
    VertexId to = kNoVertex;
    Rational t{0};

    static Point at(VertexId v) { return {v, v, Rational(0)}; }
    static Point on_edge(VertexId a, VertexId b, Rational t);

    bool is_vertex() const { return t.numerator() == 0; }
    VertexId vertex() const { return from; }
    bool operator==(const Point &) const = default;
};

/// A path as a sequence of points, consecutive points lying on one closed edge.
struct Path {
    std::vector<Point> points;

    bool empty() const { return points.empty(); }
    const Point &front() const { return points.front(); }
    const Point &back() const { return points.back(); }
    bool operator==(const Path &) const = default;
};

Path edge_path(const std::vector<VertexId> &vertices);
/// Distance between two points on a common closed edge; nullopt if they share none.
std::optional<Rational> step_length(const SpaceGraph &g, const Point &p, const Point &q);
bool is_valid_path(const SpaceGraph &g, const Path &p);
/// Sum of step lengths; throws PreconditionError on an invalid path.
Rational length(const SpaceGraph &g, const Path &p);
bool is_edge_path(const Path &p);
std::vector<VertexId> vertex_sequence(const Path &p);
/// Vertices of the path plus endpoints of partially traversed edges.
std::vector<VertexId> closure_vertices(const Path &p);
Path concatenate(const Path &a, const Path &b);
Path reversed(const Path &p);
/// Removes repeated consecutive points.
Path simplified(const Path &p);

struct AngleValue {
    enum class Kind : std::uint8_t { exact, at_least };
    Kind kind = Kind::exact;
    std::uint32_t value = 0;

    static AngleValue exact(std::uint32_t n) { return {Kind::exact, n}; }
    static AngleValue at_least(std::uint32_t c) { return {Kind::at_least, c}; }
    bool is_exact() const { return kind == Kind::exact; }
    bool operator==(const AngleValue &) const = default;
    std::string str() const;
};

std::vector<int> bfs_distances(const SpaceGraph &g, VertexId src);
std::vector<int> bfs_distances(const SpaceGraph &g, const std::vector<VertexId> &sources);
/// BFS in the graph with `forbidden` deleted, stopping after depth `cutoff`.
std::vector<int> punctured_distances(const SpaceGraph &g, VertexId src, VertexId forbidden, int cutoff);

/// Deterministic shortest edge path, choosing the least (kind, symbol, target) arc at each step.
std::optional<Path> geodesic(const SpaceGraph &g, VertexId x, VertexId y);
/// Same walk, given precomputed distances to y.
std::vector<VertexId> geodesic_toward(const SpaceGraph &g, VertexId x, const std::vector<int> &dist_to_y);

struct GeodesicSet {
    std::vector<std::vector<VertexId>> paths;
    std::uint64_t count = 0; ///< saturates at cap + 1
    bool overflow = false;
};

/// All geodesics x → y unless there are more than `cap`, in which case only the flag is set.
GeodesicSet enumerate_geodesics(const SpaceGraph &g, VertexId x, VertexId y, std::uint64_t cap = 10000);
GeodesicSet enumerate_geodesics(const SpaceGraph &g, VertexId x, VertexId y, const std::vector<int> &dist_to_y,
                                std::uint64_t cap = 10000);

/// Largest cutoff a punctured search between x and y may use in this truncation.
int safe_cutoff(const SpaceGraph &g, VertexId x, VertexId y);
AngleValue dist_avoiding(const SpaceGraph &g, VertexId x, VertexId y, VertexId forbidden, int cutoff);

int hausdorff(const SpaceGraph &g, const std::vector<VertexId> &a, const std::vector<VertexId> &b);

/// Distance rows by source vertex, e.g. a cache of bfs_distances.
using DistanceRows = std::function<const std::vector<int> &(VertexId)>;

struct GeodesicSpread {
    int hausdorff = 0;          ///< max over all geodesics x → y of their Hausdorff distance to `set`
    std::uint64_t geodesics = 0; ///< number of geodesics, saturating
};

/// Exact over every geodesic without listing them: dynamic programming over the geodesic DAG.
GeodesicSpread geodesic_spread(const SpaceGraph &g, VertexId x, VertexId y, const std::vector<int> &dist_to_y,
                               const std::vector<VertexId> &set, const DistanceRows &rows);

bool certified(const SpaceGraph &g, VertexId x, VertexId y);
/// Vertices that occur in at least one certified pair.
std::vector<VertexId> certified_region(const SpaceGraph &g);

std::string vertex_name(const SpaceGraph &g, VertexId v);
void write_dot(std::ostream &out, const SpaceGraph &g);

} // namespace cusp
