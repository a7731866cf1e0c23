#pragma once

#include "cusp/graph.hpp"

#include <optional>
#include <vector>

namespace cusp {

struct HoroballSpec {
    SpaceGraph base;
    int max_depth = 0;
    /// Present for coned-off horoballs.
    std::optional<int> cone_depth;
};

/// Builds a standalone horoball; its single Horoball record is index 0.
SpaceGraph build_horoball(const HoroballSpec &spec);

/// Adds layers 1..max_depth above `base`, the vertical and horizontal edges, and
/// (when cone_depth >= 0) an apex coned to every vertex of depth at least cone_depth.
Horoball attach_horoball(GraphBuilder &builder, const std::vector<VertexId> &base,
                         std::vector<std::vector<int>> base_distance, int max_depth, int cone_depth,
                         std::optional<CosetId> coset);

/// Position inside one horoball.
struct HoroPosition {
    std::uint32_t base = 0;
    int depth = 0;
    bool apex = false;
};

std::optional<HoroPosition> horoball_position(const SpaceGraph &g, int horoball, VertexId v);

/// A shortest route inside one horoball: up or down to depth `level`, `horizontal`
/// steps there, then vertical again; or through the apex.
struct HoroballRoute {
    int length = 0;
    int level = 0;
    int horizontal = 0;
    bool via_apex = false;
};

/// Closed-form route; `depth_cap` bounds the level (defaults to the horoball's max depth).
HoroballRoute horoball_route(const Horoball &hb, const HoroPosition &x, const HoroPosition &y,
                             std::optional<int> depth_cap = std::nullopt);

/// Regular geodesic between two vertices of the same horoball, built from the closed form.
Path horoball_geodesic(const SpaceGraph &g, int horoball, VertexId x, VertexId y);

/// Length L of the vertical segments of a regular geodesic between depth-0 vertices.
int vertical_length_witness(const SpaceGraph &g, int horoball, const Path &path);

/// True when the path stays in the horoball and is two vertical segments around at
/// most three horizontal edges at one depth, or two vertical segments around at
/// most two cone edges.
bool has_regular_shape(const SpaceGraph &g, int horoball, const std::vector<VertexId> &path);

/// For a standalone horoball: the capped closed form equals the uncapped one, so the
/// truncated distance is the distance in the full horoball.
bool horoball_pair_certified(const SpaceGraph &g, int horoball, VertexId x, VertexId y);

} // namespace cusp
