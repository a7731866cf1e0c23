#include "cusp/horoball.hpp"

#include "cusp/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace cusp {

namespace {

constexpr int kMaxLevel = 60;

std::int64_t span_at(int level)
{
    return std::int64_t{1} << std::min(level, kMaxLevel);
}

int up_to_cone(const Horoball &hb, const HoroPosition &p)
{
    return p.depth >= hb.cone_depth ? 0 : hb.cone_depth - p.depth;
}

std::vector<std::vector<int>> all_pairs(const SpaceGraph &g)
{
    std::vector<std::vector<int>> out;
    out.reserve(g.size());
    for (VertexId v = 0; v < g.size(); ++v) out.push_back(bfs_distances(g, v));
    return out;
}

} // namespace

Horoball attach_horoball(GraphBuilder &builder, const std::vector<VertexId> &base,
                         std::vector<std::vector<int>> base_distance, int max_depth, int cone_depth,
                         std::optional<CosetId> coset)
{
    if (base.empty()) throw PreconditionError("horoball base is empty");
    if (cone_depth >= 0 && max_depth < cone_depth) throw PreconditionError("max depth below cone depth");
    Horoball hb;
    hb.coset = coset;
    hb.base = base;
    hb.base_distance = std::move(base_distance);
    hb.max_depth = max_depth;
    hb.cone_depth = cone_depth;
    hb.layer.push_back(base);
    const auto n = base.size();
    for (int d = 1; d <= max_depth; ++d) {
        std::vector<VertexId> layer(n);
        for (std::size_t i = 0; i < n; ++i) {
            Vertex v{VertexKind::horoball, builder.vertex(base[i]).element, coset, d};
            layer[i] = builder.add_vertex(v);
            builder.add_edge(hb.layer.back()[i], layer[i], EdgeKind::vertical);
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const int dist = hb.base_distance[i][j];
                if (dist > 0 && dist <= span_at(d)) builder.add_edge(layer[i], layer[j], EdgeKind::horizontal);
            }
        hb.layer.push_back(std::move(layer));
    }
    if (cone_depth >= 0) {
        hb.apex = builder.add_vertex(Vertex{VertexKind::apex, {}, coset, cone_depth + 1});
        for (int d = cone_depth; d <= max_depth; ++d)
            for (auto v : hb.layer[d]) builder.add_edge(v, hb.apex, EdgeKind::cone);
    }
    return hb;
}

SpaceGraph build_horoball(const HoroballSpec &spec)
{
    const auto &base = spec.base;
    if (base.size() == 0) throw PreconditionError("horoball base is empty");
    if (spec.max_depth < 0) throw PreconditionError("negative max depth");
    GraphBuilder b;
    std::vector<VertexId> ids;
    for (VertexId v = 0; v < base.size(); ++v) {
        Vertex copy = base.vertex(v);
        copy.depth = 0;
        ids.push_back(b.add_vertex(copy));
    }
    for (VertexId v = 0; v < base.size(); ++v)
        for (const auto &a : base.neighbors(v))
            if (a.target > v) b.add_edge(ids[v], ids[a.target], EdgeKind::horizontal);
    auto hb = attach_horoball(b, ids, all_pairs(base), spec.max_depth, spec.cone_depth.value_or(-1), std::nullopt);
    b.add_horoball(std::move(hb));
    return b.build(ids[base.basepoint()], spec.max_depth, SpaceKind::horoball, spec.cone_depth.value_or(-1),
                   base.group());
}

std::optional<HoroPosition> horoball_position(const SpaceGraph &g, int horoball, VertexId v)
{
    const auto &hb = g.horoballs().at(horoball);
    if (v == hb.apex) return HoroPosition{0, hb.cone_depth + 1, true};
    auto i = hb.base_index(v);
    if (!i) return std::nullopt;
    return HoroPosition{*i, g.vertex(v).depth, false};
}

HoroballRoute horoball_route(const Horoball &hb, const HoroPosition &x, const HoroPosition &y,
                             std::optional<int> depth_cap)
{
    const bool coned = hb.coned();
    if (x.apex || y.apex) {
        if (!coned) throw PreconditionError("apex position in a plain horoball");
        if (x.apex && y.apex) return {0, hb.cone_depth + 1, 0, true};
        const auto &other = x.apex ? y : x;
        return {1 + up_to_cone(hb, other), hb.cone_depth, 0, true};
    }
    const int cap = std::min(depth_cap.value_or(hb.max_depth), kMaxLevel);
    const int d = hb.base_distance[x.base][y.base];
    std::optional<HoroballRoute> best;
    if (d >= 0) {
        for (int level = 0; level <= cap; ++level) {
            const int h = d == 0 ? 0 : static_cast<int>((d + span_at(level) - 1) / span_at(level));
            const HoroballRoute cand{std::abs(level - x.depth) + std::abs(level - y.depth) + h, level, h, false};
            if (!best) {
                best = cand;
                continue;
            }
            // Prefer shorter, then a horizontal run of at most 3, then the smaller level.
            const bool shorter = cand.length < best->length;
            const bool fixes_run = cand.length == best->length && best->horizontal > 3 && cand.horizontal <= 3;
            if (shorter || fixes_run) best = cand;
        }
    }
    if (coned) {
        const HoroballRoute cone{up_to_cone(hb, x) + up_to_cone(hb, y) + 2, hb.cone_depth, 0, true};
        if (!best || cone.length < best->length) best = cone;
    }
    if (!best) throw PreconditionError("horoball positions are not connected");
    return *best;
}

Path horoball_geodesic(const SpaceGraph &g, int horoball, VertexId x, VertexId y)
{
    const auto &hb = g.horoballs().at(horoball);
    auto px = horoball_position(g, horoball, x);
    auto py = horoball_position(g, horoball, y);
    if (!px || !py) throw PreconditionError("vertices are not in the same horoball");
    const auto route = horoball_route(hb, *px, *py);
    std::vector<VertexId> walk;
    auto vertical = [&](std::uint32_t i, int from, int to) {
        const int step = from <= to ? 1 : -1;
        for (int d = from; d != to; d += step) walk.push_back(hb.layer[d + step][i]);
    };
    walk.push_back(x);
    if (route.via_apex) {
        if (!px->apex && px->depth < hb.cone_depth) vertical(px->base, px->depth, hb.cone_depth);
        if (!px->apex) walk.push_back(hb.apex);
        if (!py->apex) {
            const int top = std::max(py->depth, hb.cone_depth);
            walk.push_back(hb.layer[top][py->base]);
            vertical(py->base, top, py->depth);
        }
    } else {
        const int level = route.level;
        vertical(px->base, px->depth, level);
        auto cur = px->base;
        const auto target = py->base;
        const auto span = span_at(level);
        while (cur != target) {
            const int rem = hb.base_distance[cur][target];
            const int step = static_cast<int>(std::min<std::int64_t>(span, rem));
            std::optional<std::uint32_t> next;
            for (std::uint32_t k = 0; k < hb.base.size() && !next; ++k)
                if (hb.base_distance[cur][k] == step && hb.base_distance[k][target] == rem - step) next = k;
            if (!next) throw PreconditionError("base graph lacks an intermediate vertex on a geodesic");
            cur = *next;
            walk.push_back(hb.layer[level][cur]);
        }
        vertical(target, level, py->depth);
    }
    return edge_path(walk);
}

bool has_regular_shape(const SpaceGraph &g, int horoball, const std::vector<VertexId> &path)
{
    std::vector<HoroPosition> pos;
    for (auto v : path) {
        auto p = horoball_position(g, horoball, v);
        if (!p) return false;
        pos.push_back(*p);
    }
    std::size_t i = 0;
    auto vertical_run = [&]() {
        int dir = 0;
        while (i + 1 < pos.size() && !pos[i].apex && !pos[i + 1].apex && pos[i].base == pos[i + 1].base) {
            const int step = pos[i + 1].depth - pos[i].depth;
            if (std::abs(step) != 1 || (dir != 0 && step != dir)) break;
            dir = step;
            ++i;
        }
    };
    vertical_run();
    int horizontal = 0;
    int cone = 0;
    while (i + 1 < pos.size()) {
        const auto &a = pos[i];
        const auto &b = pos[i + 1];
        if (a.apex || b.apex) {
            ++cone;
            ++i;
            continue;
        }
        if (a.depth == b.depth && a.base != b.base) {
            ++horizontal;
            ++i;
            continue;
        }
        break;
    }
    vertical_run();
    if (i + 1 != pos.size() && !pos.empty()) return false;
    if (cone > 0) return horizontal == 0 && cone <= 2;
    return horizontal <= 3;
}

int vertical_length_witness(const SpaceGraph &g, int horoball, const Path &path)
{
    if (!is_edge_path(path)) throw PreconditionError("witness requires an edge path");
    const auto walk = vertex_sequence(path);
    if (!has_regular_shape(g, horoball, walk)) throw PreconditionError("path is not a regular horoball geodesic");
    if (g.vertex(walk.front()).depth != 0 || g.vertex(walk.back()).depth != 0)
        throw PreconditionError("witness requires depth-0 endpoints");
    int top = 0;
    for (auto v : walk) {
        if (g.vertex(v).kind == VertexKind::apex) throw PreconditionError("witness is undefined for cone routes");
        top = std::max(top, g.vertex(v).depth);
    }
    return top;
}

bool horoball_pair_certified(const SpaceGraph &g, int horoball, VertexId x, VertexId y)
{
    const auto &hb = g.horoballs().at(horoball);
    auto px = horoball_position(g, horoball, x);
    auto py = horoball_position(g, horoball, y);
    if (!px || !py) return false;
    return horoball_route(hb, *px, *py).length == horoball_route(hb, *px, *py, kMaxLevel).length;
}

} // namespace cusp
