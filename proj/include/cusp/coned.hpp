#pragma once

#include "cusp/graph.hpp"
#include "cusp/horoball.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace cusp {

struct ConedCayleySpec {
    GroupSpec group;
    int radius = 1;
};

struct CuspedSpec {
    GroupSpec group;
    int cone_depth = 1;
    int radius = 1;
    /// Depth of the retained horoball layers; defaults to the cone depth.
    std::optional<int> max_depth;
};

/// The alphabet used to truncate balls: X, the X_i, and the generator of any
/// peripheral factor that has no letters.
std::vector<GroupElement> truncation_alphabet(const GroupSpec &spec);
/// Copy of spec with X replaced by X ∪ (union of the X_i).
GroupSpec with_full_alphabet(const GroupSpec &spec);
/// Word length of the exponent m in the cyclic group of the given order over the letter exponents.
int cyclic_word_length(std::uint64_t order, const std::vector<std::int64_t> &letters, std::int64_t m);

SpaceGraph build_coned_cayley(const ConedCayleySpec &spec);
SpaceGraph build_cusped(const CuspedSpec &spec);

AngleValue angle_at(const SpaceGraph &g, VertexId apex, VertexId x, VertexId y, int cutoff);
/// Angle of two paths leaving the apex, read at their first vertices adjacent to it.
AngleValue angle_between_paths(const SpaceGraph &g, VertexId apex, const Path &c1, const Path &c2, int cutoff);
/// Shortest u–v path meeting the horoball only at depth 0.
AngleValue horoball_angle(const SpaceGraph &g, int horoball, VertexId u, VertexId v, int cutoff);

struct PenetrationReport {
    std::map<int, int> depth; ///< horoball index → deepest depth reached
    bool trivial() const { return depth.empty(); }
    int max_depth() const;
};

PenetrationReport penetration(const SpaceGraph &g, const Path &path);
PenetrationReport penetration(const SpaceGraph &g, const std::vector<VertexId> &walk);

/// Horoball index of the edge {u, v}, or -1 for edges outside every horoball.
int edge_horoball(const SpaceGraph &g, VertexId u, VertexId v);

/// Replaces every irregular maximal horoball run of a geodesic by the closed-form route.
std::vector<VertexId> regularize(const SpaceGraph &g, const std::vector<VertexId> &geodesic_walk);
Path regularize(const SpaceGraph &g, const Path &geodesic_path);

/// Deterministic geodesic followed by regularization; dist_to_y must come from y.
std::vector<VertexId> regular_geodesic(const SpaceGraph &g, VertexId x, const std::vector<int> &dist_to_y);

struct FinenessProbe {
    std::vector<std::pair<VertexId, VertexId>> pairs;
    std::size_t region_size = 0;
};

/// Pairs (x, y) in the apex link with angle at most `angle_bound`, x ranging over
/// link vertices within angle `region` of base_point.
FinenessProbe fineness_probe(const SpaceGraph &g, VertexId apex, int angle_bound, VertexId base_point,
                             int region = 0);

/// Relative distance between h, k in P: X-edges and coset cliques, with the clique on P itself removed.
AngleValue hat_distance(const SpaceGraph &coned, std::uint32_t peripheral, VertexId h, VertexId k, int cutoff);

struct ConeEdgeCheck {
    std::size_t checked = 0;
    std::vector<std::pair<VertexId, VertexId>> missing; ///< apex, vertex
    bool pass() const { return missing.empty(); }
};

/// Every vertex at or above the cone depth of a coned-off horoball is adjacent to its apex,
/// and in a coned-off Cayley graph every element is adjacent to the apex of each of its
/// peripheral cosets present in the ball.
ConeEdgeCheck check_cone_edges(const SpaceGraph &g);

/// The cone edge at the basepoint: its apex and the cone-depth vertex above it in a
/// cusped space, or its coset apex in a coned-off Cayley graph.
std::pair<VertexId, VertexId> basepoint_cone_edge(const SpaceGraph &g);
/// The graph without its basepoint cone edge.
SpaceGraph remove_cone_edge(const SpaceGraph &g);

struct DeltaEstimate {
    int delta = 0;
    std::size_t triples = 0;
    bool exhaustive = false;
    std::vector<VertexId> witness; ///< x, y, z of a slimmest-failing triangle
};

/// Maximum slimness over certified triples of regularized geodesics; samples when
/// there are more than `budget` triples.
DeltaEstimate estimate_delta(const SpaceGraph &g, std::size_t budget, std::uint64_t seed = 1);

struct QuasiconvexityEstimate {
    int lambda = 0;
    std::size_t pairs = 0;
    std::size_t overflow_pairs = 0;
    std::pair<VertexId, VertexId> witness{kNoVertex, kNoVertex};
};

QuasiconvexityEstimate measure_quasiconvexity(const SpaceGraph &g, const std::vector<VertexId> &subset,
                                              std::uint64_t cap = 10000);

struct ConvexityResult {
    bool pass = true;
    std::size_t pairs = 0;
    std::vector<VertexId> violation;
};

ConvexityResult check_convexity(const SpaceGraph &g, int horoball, int L, int delta, std::uint64_t cap = 10000);

} // namespace cusp
