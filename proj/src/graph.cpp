#include "cusp/graph.hpp"

#include "cusp/errors.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <tuple>
#include <unordered_map>

namespace cusp {

namespace {

std::uint64_t edge_key(VertexId u, VertexId v)
{
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

bool arc_less(const Arc &a, const Arc &b)
{
    return std::tie(a.kind, a.label, a.target) < std::tie(b.kind, b.label, b.target);
}

} // namespace

std::string_view to_string(VertexKind k)
{
    switch (k) {
    case VertexKind::element: return "element";
    case VertexKind::horoball: return "horoball";
    case VertexKind::apex: return "apex";
    }
    return "?";
}

std::string_view to_string(EdgeKind k)
{
    switch (k) {
    case EdgeKind::cayley: return "cayley";
    case EdgeKind::cone: return "cone";
    case EdgeKind::vertical: return "vertical";
    case EdgeKind::horizontal: return "horizontal";
    }
    return "?";
}

std::size_t VertexHash::operator()(const Vertex &v) const noexcept
{
    std::size_t h = GroupElementHash{}(v.element);
    h = h * 1000003u + static_cast<std::size_t>(v.kind);
    h = h * 1000003u + static_cast<std::size_t>(v.depth);
    if (v.coset) h = h * 1000003u + CosetIdHash{}(*v.coset);
    return h;
}

std::optional<std::uint32_t> Horoball::base_index(VertexId v) const
{
    auto it = index_of.find(v);
    if (it == index_of.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------- SpaceGraph

std::optional<VertexId> SpaceGraph::find(const Vertex &v) const
{
    auto it = lookup_.find(v);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<VertexId> SpaceGraph::find_element(const GroupElement &g) const
{
    return find(Vertex{VertexKind::element, g, std::nullopt, 0});
}

std::optional<VertexId> SpaceGraph::find_apex(const CosetId &c) const
{
    if (auto h = horoball_for_coset(c)) {
        const auto apex = horoballs_[*h].apex;
        if (apex != kNoVertex) return apex;
    }
    for (int depth : {0, cone_depth_ + 1})
        if (auto v = find(Vertex{VertexKind::apex, {}, c, depth})) return v;
    return std::nullopt;
}

std::optional<VertexId> SpaceGraph::find_horo(const GroupElement &g, const CosetId &c, int depth) const
{
    if (depth == 0) return find_element(g);
    return find(Vertex{VertexKind::horoball, g, c, depth});
}

const Arc *SpaceGraph::edge_between(VertexId u, VertexId v) const
{
    if (u >= size() || v >= size()) return nullptr;
    if (offsets_[u + 1] - offsets_[u] > offsets_[v + 1] - offsets_[v]) std::swap(u, v);
    for (const auto &a : neighbors(u))
        if (a.target == v) return &a;
    return nullptr;
}

std::vector<int> SpaceGraph::horoballs_containing(VertexId v) const
{
    if (owner_[v] >= 0) return {owner_[v]};
    auto it = base_members_.find(v);
    if (it == base_members_.end()) return {};
    return it->second;
}

std::optional<int> SpaceGraph::horoball_for_coset(const CosetId &c) const
{
    auto it = coset_horoball_.find(c);
    if (it == coset_horoball_.end()) return std::nullopt;
    return it->second;
}

SpaceGraph SpaceGraph::without_edge(VertexId u, VertexId v) const
{
    if (!adjacent(u, v)) throw PreconditionError("edge to remove is not present");
    SpaceGraph out = *this;
    out.arcs_.clear();
    out.offsets_.assign(size() + 1, 0);
    for (VertexId w = 0; w < size(); ++w) {
        for (const auto &a : neighbors(w)) {
            if ((w == u && a.target == v) || (w == v && a.target == u)) continue;
            out.arcs_.push_back(a);
        }
        out.offsets_[w + 1] = out.arcs_.size();
    }
    out.edge_count_ = edge_count_ - 1;
    out.base_dist_ = bfs_distances(out, basepoint_);
    return out;
}

void SpaceGraph::finalize()
{
    owner_.assign(size(), -1);
    base_members_.clear();
    coset_horoball_.clear();
    for (int h = 0; h < static_cast<int>(horoballs_.size()); ++h) {
        const auto &hb = horoballs_[h];
        for (std::size_t d = 1; d < hb.layer.size(); ++d)
            for (auto v : hb.layer[d]) owner_[v] = h;
        if (hb.apex != kNoVertex) owner_[hb.apex] = h;
        for (auto v : hb.base) base_members_[v].push_back(h);
        if (hb.coset) coset_horoball_.emplace(*hb.coset, h);
    }
    base_dist_ = bfs_distances(*this, basepoint_);
}

// -------------------------------------------------------------- GraphBuilder

VertexId GraphBuilder::add_vertex(const Vertex &v)
{
    auto [it, fresh] = lookup_.emplace(v, static_cast<VertexId>(vertices_.size()));
    if (fresh) vertices_.push_back(v);
    return it->second;
}

std::optional<VertexId> GraphBuilder::find(const Vertex &v) const
{
    auto it = lookup_.find(v);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

void GraphBuilder::add_edge(VertexId u, VertexId v, EdgeKind kind, std::uint32_t label)
{
    if (u == v) return;
    if (u >= vertices_.size() || v >= vertices_.size()) throw PreconditionError("edge endpoint out of range");
    const PendingArc arc{kind, label};
    auto [it, fresh] = edges_.emplace(edge_key(u, v), arc);
    if (!fresh) {
        const auto &old = it->second;
        const bool smaller = kind != old.kind ? kind < old.kind
                                             : kind == EdgeKind::cayley && labels_[label] < labels_[old.label];
        if (smaller) it->second = arc;
    }
}

std::uint32_t GraphBuilder::intern_label(const std::string &symbol, const GroupElement &element)
{
    for (std::uint32_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == symbol) return i;
    labels_.push_back(symbol);
    label_elements_.push_back(element);
    return static_cast<std::uint32_t>(labels_.size() - 1);
}

int GraphBuilder::add_horoball(Horoball h)
{
    h.index_of.clear();
    for (const auto &layer : h.layer)
        for (std::uint32_t i = 0; i < layer.size(); ++i) h.index_of.emplace(layer[i], i);
    horoballs_.push_back(std::move(h));
    return static_cast<int>(horoballs_.size() - 1);
}

SpaceGraph GraphBuilder::build(VertexId basepoint, int radius, SpaceKind kind, int cone_depth,
                               std::optional<GroupSpec> group)
{
    if (labels_.empty()) labels_.push_back("");
    if (label_elements_.size() < labels_.size()) label_elements_.resize(labels_.size());
    std::vector<std::uint32_t> order(labels_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return labels_[a] < labels_[b]; });
    std::vector<std::uint32_t> remap(labels_.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) remap[order[i]] = i;

    SpaceGraph g;
    g.kind_ = kind;
    g.radius_ = radius;
    g.cone_depth_ = cone_depth;
    g.group_ = std::move(group);
    g.basepoint_ = basepoint;
    for (auto i : order) {
        g.labels_.push_back(labels_[i]);
        g.label_elements_.push_back(label_elements_[i]);
    }

    std::vector<std::vector<Arc>> adj(vertices_.size());
    for (const auto &[key, arc] : edges_) {
        const auto u = static_cast<VertexId>(key >> 32);
        const auto v = static_cast<VertexId>(key & 0xffffffffu);
        const auto label = arc.kind == EdgeKind::cayley ? remap[arc.label] : 0;
        adj[u].push_back({v, arc.kind, label});
        adj[v].push_back({u, arc.kind, label});
    }
    g.offsets_.assign(vertices_.size() + 1, 0);
    for (std::size_t v = 0; v < adj.size(); ++v) {
        std::sort(adj[v].begin(), adj[v].end(), arc_less);
        g.arcs_.insert(g.arcs_.end(), adj[v].begin(), adj[v].end());
        g.offsets_[v + 1] = g.arcs_.size();
    }
    g.edge_count_ = edges_.size();
    g.vertices_ = std::move(vertices_);
    g.lookup_ = std::move(lookup_);
    g.horoballs_ = std::move(horoballs_);
    if (basepoint >= g.vertices_.size()) throw PreconditionError("basepoint out of range");
    g.finalize();

    *this = GraphBuilder{};
    return g;
}

// --------------------------------------------------------------------- paths

Point Point::on_edge(VertexId a, VertexId b, Rational t)
{
    if (t < Rational(0) || t > Rational(1)) throw PreconditionError("edge position outside [0,1]");
    if (t == Rational(0)) return at(a);
    if (t == Rational(1)) return at(b);
    if (a > b) return {b, a, 1 - t};
    return {a, b, t};
}

Path edge_path(const std::vector<VertexId> &vertices)
{
    Path p;
    p.points.reserve(vertices.size());
    for (auto v : vertices) p.points.push_back(Point::at(v));
    return p;
}

std::optional<Rational> step_length(const SpaceGraph &g, const Point &p, const Point &q)
{
    auto interior_ok = [&](const Point &x) { return x.is_vertex() || g.adjacent(x.from, x.to); };
    if (!interior_ok(p) || !interior_ok(q)) return std::nullopt;
    if (p == q) return Rational(0);
    if (p.is_vertex() && q.is_vertex()) {
        if (g.adjacent(p.from, q.from)) return Rational(1);
        return std::nullopt;
    }
    if (p.is_vertex() || q.is_vertex()) {
        const auto &v = p.is_vertex() ? p : q;
        const auto &e = p.is_vertex() ? q : p;
        if (v.from == e.from) return e.t;
        if (v.from == e.to) return 1 - e.t;
        return std::nullopt;
    }
    if (p.from == q.from && p.to == q.to) return p.t > q.t ? p.t - q.t : q.t - p.t;
    return std::nullopt;
}

bool is_valid_path(const SpaceGraph &g, const Path &p)
{
    if (p.points.empty()) return false;
    for (const auto &pt : p.points)
        if (pt.from >= g.size() || pt.to >= g.size()) return false;
    for (std::size_t i = 0; i + 1 < p.points.size(); ++i)
        if (!step_length(g, p.points[i], p.points[i + 1])) return false;
    return p.points.size() > 1 || step_length(g, p.points[0], p.points[0]).has_value();
}

Rational length(const SpaceGraph &g, const Path &p)
{
    Rational total(0);
    for (std::size_t i = 0; i + 1 < p.points.size(); ++i) {
        auto s = step_length(g, p.points[i], p.points[i + 1]);
        if (!s) throw PreconditionError("path has a step that does not lie on one edge");
        total += *s;
    }
    return total;
}

bool is_edge_path(const Path &p)
{
    return std::all_of(p.points.begin(), p.points.end(), [](const Point &x) { return x.is_vertex(); });
}

std::vector<VertexId> vertex_sequence(const Path &p)
{
    std::vector<VertexId> out;
    for (const auto &x : p.points)
        if (x.is_vertex()) out.push_back(x.from);
    return out;
}

std::vector<VertexId> closure_vertices(const Path &p)
{
    std::vector<VertexId> out;
    auto add = [&](VertexId v) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    for (const auto &x : p.points) {
        add(x.from);
        if (!x.is_vertex()) add(x.to);
    }
    return out;
}

Path concatenate(const Path &a, const Path &b)
{
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (!(a.back() == b.front())) throw PreconditionError("concatenated paths do not meet");
    Path out = a;
    out.points.insert(out.points.end(), b.points.begin() + 1, b.points.end());
    return out;
}

Path reversed(const Path &p)
{
    Path out = p;
    std::reverse(out.points.begin(), out.points.end());
    return out;
}

Path simplified(const Path &p)
{
    Path out;
    for (const auto &x : p.points)
        if (out.points.empty() || !(out.points.back() == x)) out.points.push_back(x);
    return out;
}

std::string AngleValue::str() const
{
    return (is_exact() ? "Exact(" : "AtLeast(") + std::to_string(value) + ")";
}

// ----------------------------------------------------------------- searches

std::vector<int> bfs_distances(const SpaceGraph &g, VertexId src)
{
    return bfs_distances(g, std::vector<VertexId>{src});
}

std::vector<int> bfs_distances(const SpaceGraph &g, const std::vector<VertexId> &sources)
{
    std::vector<int> dist(g.size(), kUnreachable);
    std::vector<VertexId> queue;
    queue.reserve(g.size());
    for (auto s : sources) {
        if (s >= g.size()) throw PreconditionError("source vertex out of range");
        if (dist[s] == kUnreachable) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto u = queue[head];
        for (const auto &a : g.neighbors(u)) {
            if (dist[a.target] != kUnreachable) continue;
            dist[a.target] = dist[u] + 1;
            queue.push_back(a.target);
        }
    }
    return dist;
}

std::vector<int> punctured_distances(const SpaceGraph &g, VertexId src, VertexId forbidden, int cutoff)
{
    std::vector<int> dist(g.size(), kUnreachable);
    if (src == forbidden) return dist;
    std::vector<VertexId> queue{src};
    dist[src] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto u = queue[head];
        if (dist[u] >= cutoff) continue;
        for (const auto &a : g.neighbors(u)) {
            if (a.target == forbidden || dist[a.target] != kUnreachable) continue;
            dist[a.target] = dist[u] + 1;
            queue.push_back(a.target);
        }
    }
    return dist;
}

std::vector<VertexId> geodesic_toward(const SpaceGraph &g, VertexId x, const std::vector<int> &dist_to_y)
{
    if (dist_to_y[x] == kUnreachable) return {};
    std::vector<VertexId> walk{x};
    auto cur = x;
    while (dist_to_y[cur] > 0) {
        for (const auto &a : g.neighbors(cur)) {
            if (dist_to_y[a.target] == dist_to_y[cur] - 1) {
                cur = a.target;
                break;
            }
        }
        walk.push_back(cur);
    }
    return walk;
}

std::optional<Path> geodesic(const SpaceGraph &g, VertexId x, VertexId y)
{
    const auto dy = bfs_distances(g, y);
    if (dy[x] == kUnreachable) return std::nullopt;
    return edge_path(geodesic_toward(g, x, dy));
}

GeodesicSet enumerate_geodesics(const SpaceGraph &g, VertexId x, VertexId y, std::uint64_t cap)
{
    return enumerate_geodesics(g, x, y, bfs_distances(g, y), cap);
}

GeodesicSet enumerate_geodesics(const SpaceGraph &g, VertexId x, VertexId y, const std::vector<int> &dist_to_y,
                                std::uint64_t cap)
{
    GeodesicSet out;
    if (dist_to_y[x] == kUnreachable) return out;
    std::unordered_map<VertexId, std::uint64_t> memo;
    std::function<std::uint64_t(VertexId)> count = [&](VertexId v) -> std::uint64_t {
        if (v == y) return 1;
        if (auto it = memo.find(v); it != memo.end()) return it->second;
        std::uint64_t total = 0;
        for (const auto &a : g.neighbors(v)) {
            if (dist_to_y[a.target] != dist_to_y[v] - 1) continue;
            total = std::min<std::uint64_t>(cap + 1, total + count(a.target));
        }
        memo.emplace(v, total);
        return total;
    };
    out.count = count(x);
    if (out.count > cap) {
        out.overflow = true;
        return out;
    }
    std::vector<VertexId> stack{x};
    std::function<void()> walk = [&]() {
        const auto v = stack.back();
        if (v == y) {
            out.paths.push_back(stack);
            return;
        }
        for (const auto &a : g.neighbors(v)) {
            if (dist_to_y[a.target] != dist_to_y[v] - 1) continue;
            stack.push_back(a.target);
            walk();
            stack.pop_back();
        }
    };
    walk();
    return out;
}

int safe_cutoff(const SpaceGraph &g, VertexId x, VertexId y)
{
    const int dx = g.base_distance(x);
    const int dy = g.base_distance(y);
    if (dx == kUnreachable || dy == kUnreachable) return 0;
    return std::max(0, 4 * g.truncation_radius() - dx - dy);
}

AngleValue dist_avoiding(const SpaceGraph &g, VertexId x, VertexId y, VertexId forbidden, int cutoff)
{
    if (x == forbidden || y == forbidden) throw PreconditionError("endpoint equals the forbidden vertex");
    if (cutoff < 0) throw PreconditionError("negative cutoff");
    if (cutoff > safe_cutoff(g, x, y))
        throw TruncationError("cutoff " + std::to_string(cutoff) + " exceeds the safe bound " +
                              std::to_string(safe_cutoff(g, x, y)) + " of this truncation");
    if (x == y) return AngleValue::exact(0);
    const auto dist = punctured_distances(g, x, forbidden, cutoff);
    if (dist[y] != kUnreachable) return AngleValue::exact(static_cast<std::uint32_t>(dist[y]));
    return AngleValue::at_least(static_cast<std::uint32_t>(cutoff));
}

int hausdorff(const SpaceGraph &g, const std::vector<VertexId> &a, const std::vector<VertexId> &b)
{
    if (a.empty() || b.empty()) throw PreconditionError("hausdorff distance of an empty set");
    int best = 0;
    for (int pass = 0; pass < 2; ++pass) {
        const auto &from = pass == 0 ? a : b;
        const auto &to = pass == 0 ? b : a;
        const auto dist = bfs_distances(g, from);
        for (auto v : to) {
            if (dist[v] == kUnreachable) throw PreconditionError("vertex sets lie in different components");
            best = std::max(best, dist[v]);
        }
    }
    return best;
}

GeodesicSpread geodesic_spread(const SpaceGraph &g, VertexId x, VertexId y, const std::vector<int> &dist_to_y,
                               const std::vector<VertexId> &set, const DistanceRows &rows)
{
    if (set.empty()) throw PreconditionError("hausdorff distance of an empty set");
    if (dist_to_y[x] == kUnreachable) throw PreconditionError("vertex sets lie in different components");

    // Geodesic DAG in BFS order from x, with predecessor lists in CSR form.
    thread_local std::vector<std::uint32_t> slot;
    thread_local std::vector<std::uint32_t> stamp;
    thread_local std::uint32_t epoch = 0;
    if (slot.size() < g.size()) {
        slot.assign(g.size(), 0);
        stamp.assign(g.size(), 0);
    }
    if (++epoch == 0) {
        std::fill(stamp.begin(), stamp.end(), 0);
        epoch = 1;
    }
    auto index = [&](VertexId v) { return stamp[v] == epoch ? static_cast<std::int64_t>(slot[v]) : -1; };
    std::vector<VertexId> order{x};
    stamp[x] = epoch;
    slot[x] = 0;
    std::vector<std::uint32_t> pred_start{0, 0}, preds;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto v = order[i];
        if (i > 0) {
            for (const auto &a : g.neighbors(v)) {
                const auto p = index(a.target);
                if (p < 0 || dist_to_y[a.target] != dist_to_y[v] + 1) continue;
                if (std::find(preds.begin() + pred_start[i], preds.end(), static_cast<std::uint32_t>(p)) == preds.end())
                    preds.push_back(static_cast<std::uint32_t>(p));
            }
            pred_start.push_back(static_cast<std::uint32_t>(preds.size()));
        }
        for (const auto &a : g.neighbors(v))
            if (dist_to_y[a.target] == dist_to_y[v] - 1 && stamp[a.target] != epoch) {
                stamp[a.target] = epoch;
                slot[a.target] = static_cast<std::uint32_t>(order.size());
                order.push_back(a.target);
            }
    }
    const auto n = order.size();
    const auto last = static_cast<std::size_t>(index(y));

    std::vector<const std::vector<int> *> set_rows;
    for (auto w : set) set_rows.push_back(&rows(w));
    auto at = [](const std::vector<int> &row, VertexId v) {
        if (row[v] == kUnreachable) throw PreconditionError("vertex sets lie in different components");
        return row[v];
    };

    GeodesicSpread out;
    std::vector<std::uint64_t> count(n, 0);
    count[0] = 1;
    for (std::size_t i = 1; i < n; ++i)
        for (auto k = pred_start[i]; k < pred_start[i + 1]; ++k) {
            const auto c = count[preds[k]];
            count[i] = c > UINT64_MAX - count[i] ? UINT64_MAX : count[i] + c;
        }
    out.geodesics = count[last];

    for (auto v : order) {
        int m = std::numeric_limits<int>::max();
        for (const auto *r : set_rows) {
            m = std::min(m, at(*r, v));
            if (m <= out.hausdorff) break;
        }
        out.hausdorff = std::max(out.hausdorff, m);
    }
    std::vector<int> best(n);
    for (const auto *r : set_rows) {
        // Every geodesic contains x and y, so this vertex cannot raise the maximum.
        if (at(*r, x) <= out.hausdorff || at(*r, y) <= out.hausdorff) continue;
        best[0] = (*r)[x];
        for (std::size_t i = 1; i < n; ++i) {
            int through = 0;
            for (auto k = pred_start[i]; k < pred_start[i + 1]; ++k) through = std::max(through, best[preds[k]]);
            best[i] = std::min(through, at(*r, order[i]));
        }
        out.hausdorff = std::max(out.hausdorff, best[last]);
    }
    return out;
}

bool certified(const SpaceGraph &g, VertexId x, VertexId y)
{
    const int dx = g.base_distance(x);
    const int dy = g.base_distance(y);
    if (dx == kUnreachable || dy == kUnreachable) return false;
    const int R = g.truncation_radius();
    return 2 * dx + dy <= R && 2 * dy + dx <= R;
}

std::vector<VertexId> certified_region(const SpaceGraph &g)
{
    std::vector<VertexId> out;
    for (VertexId v = 0; v < g.size(); ++v)
        if (g.base_distance(v) != kUnreachable && 2 * g.base_distance(v) <= g.truncation_radius()) out.push_back(v);
    return out;
}

// -------------------------------------------------------------------- export

std::string vertex_name(const SpaceGraph &g, VertexId v)
{
    const auto &x = g.vertex(v);
    auto elem = [&](const GroupElement &e) {
        return g.group() ? to_string(*g.group(), e) : std::to_string(e.syllables.empty() ? 0 : e.syllables[0].exponent);
    };
    auto coset = [&](const CosetId &c) { return g.group() ? to_string(*g.group(), c) : std::string("coset"); };
    switch (x.kind) {
    case VertexKind::element: return elem(x.element);
    case VertexKind::horoball:
        return "(" + elem(x.element) + (x.coset ? " | " + coset(*x.coset) : std::string()) + " | " +
               std::to_string(x.depth) + ")";
    case VertexKind::apex: return "apex(" + (x.coset ? coset(*x.coset) : std::string()) + ")";
    }
    return "?";
}

void write_dot(std::ostream &out, const SpaceGraph &g)
{
    auto quote = [](const std::string &s) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') q += '\\';
            q += c;
        }
        return q + "\"";
    };
    out << "graph space {\n";
    for (VertexId v = 0; v < g.size(); ++v) {
        const auto &x = g.vertex(v);
        out << "  v" << v << " [label=" << quote(vertex_name(g, v)) << ", kind=" << to_string(x.kind)
            << ", depth=" << x.depth << "];\n";
    }
    for (VertexId v = 0; v < g.size(); ++v) {
        for (const auto &a : g.neighbors(v)) {
            if (a.target < v) continue;
            out << "  v" << v << " -- v" << a.target << " [kind=" << to_string(a.kind);
            if (a.kind == EdgeKind::cayley) out << ", label=" << quote(g.labels()[a.label]);
            out << "];\n";
        }
    }
    out << "}\n";
}

} // namespace cusp
