#include "cusp/coned.hpp"

#include "cusp/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace cusp {

namespace {

void require_connected(const SpaceGraph &g)
{
    for (VertexId v = 0; v < g.size(); ++v)
        if (g.base_distance(v) == kUnreachable)
            throw SpecError("vertex " + vertex_name(g, v) + " is not reachable from the identity inside the ball");
}

std::int64_t peripheral_exponent(const GroupElement &g, std::uint32_t factor)
{
    if (g.syllables.empty() || g.syllables.back().factor != factor) return 0;
    return g.syllables.back().exponent;
}

std::vector<std::int64_t> letter_exponents(const GroupSpec &spec, std::uint32_t factor)
{
    std::vector<std::int64_t> out;
    auto it = spec.peripheral_letters.find(factor);
    if (it == spec.peripheral_letters.end()) return out;
    for (const auto &x : it->second) out.push_back(x.syllables.at(0).exponent);
    return out;
}

// Word lengths in a cyclic group over fixed letters, tabulated for |m| <= window.
class CyclicMetric {
public:
    CyclicMetric(std::uint64_t order, const std::vector<std::int64_t> &letters, std::int64_t window)
        : order_(order)
    {
        std::int64_t reach = 0;
        for (auto e : letters) reach = std::max(reach, std::abs(e));
        if (order_ != kInfiniteOrder) {
            offset_ = 0;
            dist_.assign(order_, kUnreachable);
        } else {
            offset_ = window + reach;
            dist_.assign(static_cast<std::size_t>(2 * offset_ + 1), kUnreachable);
        }
        std::vector<std::int64_t> queue{0};
        dist_[slot(0)] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const auto m = queue[head];
            for (auto e : letters)
                for (auto s : {e, -e}) {
                    auto next = m + s;
                    if (order_ != kInfiniteOrder) {
                        const auto n = static_cast<std::int64_t>(order_);
                        next = ((next % n) + n) % n;
                    } else if (std::abs(next) > offset_) {
                        continue;
                    }
                    if (dist_[slot(next)] != kUnreachable) continue;
                    dist_[slot(next)] = dist_[slot(m)] + 1;
                    queue.push_back(next);
                }
        }
    }

    int operator()(std::int64_t m) const
    {
        if (order_ != kInfiniteOrder) {
            const auto n = static_cast<std::int64_t>(order_);
            return dist_[slot(((m % n) + n) % n)];
        }
        if (std::abs(m) > offset_) throw PreconditionError("cyclic distance outside the tabulated window");
        return dist_[slot(m)];
    }

private:
    std::size_t slot(std::int64_t m) const { return static_cast<std::size_t>(m + offset_); }
    std::uint64_t order_;
    std::int64_t offset_ = 0;
    std::vector<int> dist_;
};

// Reusable stamp-marked BFS for many small searches on one graph.
class LocalSearch {
public:
    explicit LocalSearch(const SpaceGraph &g) : g_(g), seen_(g.size(), 0), target_(g.size(), 0), dist_(g.size(), 0) {}

    void mark_targets(const std::vector<VertexId> &vs)
    {
        ++target_stamp_;
        for (auto v : vs) target_[v] = target_stamp_;
    }

    // Distance from src to the nearest marked target.
    int distance_to_targets(VertexId src)
    {
        ++seen_stamp_;
        queue_.clear();
        queue_.push_back(src);
        seen_[src] = seen_stamp_;
        dist_[src] = 0;
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            const auto u = queue_[head];
            if (target_[u] == target_stamp_) return dist_[u];
            for (const auto &a : g_.neighbors(u)) {
                if (seen_[a.target] == seen_stamp_) continue;
                seen_[a.target] = seen_stamp_;
                dist_[a.target] = dist_[u] + 1;
                queue_.push_back(a.target);
            }
        }
        return kUnreachable;
    }

private:
    const SpaceGraph &g_;
    std::vector<std::uint32_t> seen_;
    std::vector<std::uint32_t> target_;
    std::vector<int> dist_;
    std::vector<VertexId> queue_;
    std::uint32_t seen_stamp_ = 0;
    std::uint32_t target_stamp_ = 0;
};

int side_slimness(LocalSearch &search, const std::vector<VertexId> &side, const std::vector<VertexId> &other1,
                  const std::vector<VertexId> &other2)
{
    std::vector<VertexId> rest = other1;
    rest.insert(rest.end(), other2.begin(), other2.end());
    search.mark_targets(rest);
    int worst = 0;
    for (auto p : side) worst = std::max(worst, search.distance_to_targets(p));
    return worst;
}

} // namespace

std::vector<GroupElement> truncation_alphabet(const GroupSpec &spec)
{
    auto gens = alphabet(spec);
    std::vector<GroupElement> extra;
    for (auto i : spec.peripheral_indices) {
        auto it = spec.peripheral_letters.find(i);
        if (it == spec.peripheral_letters.end() || it->second.empty()) extra.push_back(spec.generator(i));
    }
    gens.insert(gens.end(), extra.begin(), extra.end());
    return symmetrize(spec, gens);
}

GroupSpec with_full_alphabet(const GroupSpec &spec)
{
    GroupSpec out = spec;
    out.gen_set = alphabet(spec);
    return out;
}

int cyclic_word_length(std::uint64_t order, const std::vector<std::int64_t> &letters, std::int64_t m)
{
    return CyclicMetric(order, letters, std::abs(m))(m);
}

SpaceGraph build_coned_cayley(const ConedCayleySpec &spec)
{
    const auto &G = spec.group;
    G.validate();
    if (spec.radius < 1) throw PreconditionError("coned-off Cayley graph needs R >= 1");
    const Ball ball = enumerate_ball(G, truncation_alphabet(G), spec.radius);
    GraphBuilder b;
    for (const auto &g : ball.elements) b.add_vertex(Vertex{VertexKind::element, g, std::nullopt, 0});
    const auto xs = symmetrize(G, G.gen_set);
    std::vector<std::uint32_t> labels;
    for (const auto &x : xs) labels.push_back(b.intern_label(to_string(G, x), x));
    for (std::size_t k = 0; k < ball.size(); ++k) {
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (auto t = ball.find(multiply(G, ball.elements[k], xs[j])))
                b.add_edge(static_cast<VertexId>(k), static_cast<VertexId>(*t), EdgeKind::cayley, labels[j]);
        for (auto i : G.peripheral_indices) {
            const auto apex = b.add_vertex(Vertex{VertexKind::apex, {}, coset_rep(G, ball.elements[k], i), 0});
            b.add_edge(static_cast<VertexId>(k), apex, EdgeKind::cone);
        }
    }
    auto g = b.build(0, spec.radius, SpaceKind::coned_cayley, -1, G);
    require_connected(g);
    return g;
}

SpaceGraph build_cusped(const CuspedSpec &spec)
{
    const auto &G = spec.group;
    G.validate();
    if (spec.radius < 1) throw PreconditionError("cusped space needs R >= 1");
    if (spec.cone_depth < 1) throw PreconditionError("cusped space needs r >= 1");
    const int max_depth = spec.max_depth.value_or(spec.cone_depth);
    if (max_depth < spec.cone_depth) throw PreconditionError("max depth below cone depth");
    for (auto i : G.peripheral_indices) {
        auto it = G.peripheral_letters.find(i);
        if (it == G.peripheral_letters.end() || it->second.empty())
            throw SpecError("peripheral factor '" + G.factors[i].symbol + "' has no letters X_i");
    }
    const auto letters = alphabet(G);
    const Ball ball = enumerate_ball(G, letters, spec.radius);
    GraphBuilder b;
    for (const auto &g : ball.elements) b.add_vertex(Vertex{VertexKind::element, g, std::nullopt, 0});
    std::vector<std::uint32_t> labels;
    for (const auto &x : letters) labels.push_back(b.intern_label(to_string(G, x), x));
    for (std::size_t k = 0; k < ball.size(); ++k)
        for (std::size_t j = 0; j < letters.size(); ++j)
            if (auto t = ball.find(multiply(G, ball.elements[k], letters[j])))
                b.add_edge(static_cast<VertexId>(k), static_cast<VertexId>(*t), EdgeKind::cayley, labels[j]);

    for (auto i : G.peripheral_indices) {
        std::map<CosetId, std::vector<VertexId>> cosets;
        for (std::size_t k = 0; k < ball.size(); ++k)
            cosets[coset_rep(G, ball.elements[k], i)].push_back(static_cast<VertexId>(k));
        std::int64_t widest = 0;
        for (const auto &[c, members] : cosets)
            for (auto v : members) widest = std::max(widest, std::abs(peripheral_exponent(ball.elements[v], i)));
        const CyclicMetric metric(G.factors[i].order, letter_exponents(G, i), 2 * widest + 2);
        for (auto &[c, members] : cosets) {
            std::sort(members.begin(), members.end(), [&](VertexId u, VertexId v) {
                return peripheral_exponent(ball.elements[u], i) < peripheral_exponent(ball.elements[v], i);
            });
            const auto n = members.size();
            std::vector<std::vector<int>> dist(n, std::vector<int>(n, 0));
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = 0; q < n; ++q)
                    dist[p][q] = metric(peripheral_exponent(ball.elements[members[q]], i) -
                                        peripheral_exponent(ball.elements[members[p]], i));
            b.add_horoball(attach_horoball(b, members, std::move(dist), max_depth, spec.cone_depth, c));
        }
    }
    auto g = b.build(0, spec.radius, SpaceKind::cusped, spec.cone_depth, G);
    require_connected(g);
    return g;
}

AngleValue angle_at(const SpaceGraph &g, VertexId apex, VertexId x, VertexId y, int cutoff)
{
    if (g.vertex(apex).kind != VertexKind::apex) throw PreconditionError("angle vertex is not an apex");
    if (!g.adjacent(apex, x) || !g.adjacent(apex, y)) throw PreconditionError("angle arguments must be adjacent to the apex");
    return dist_avoiding(g, x, y, apex, cutoff);
}

AngleValue angle_between_paths(const SpaceGraph &g, VertexId apex, const Path &c1, const Path &c2, int cutoff)
{
    auto first_adjacent = [&](const Path &c) {
        const auto walk = vertex_sequence(c);
        if (walk.empty() || walk.front() != apex) throw PreconditionError("paths must start at the apex");
        for (std::size_t i = 1; i < walk.size(); ++i)
            if (g.adjacent(apex, walk[i])) return walk[i];
        throw PreconditionError("path never returns next to the apex");
    };
    return angle_at(g, apex, first_adjacent(c1), first_adjacent(c2), cutoff);
}

AngleValue horoball_angle(const SpaceGraph &g, int horoball, VertexId u, VertexId v, int cutoff)
{
    const auto &hb = g.horoballs().at(horoball);
    if (!hb.base_index(u) || !hb.base_index(v) || g.vertex(u).depth != 0 || g.vertex(v).depth != 0)
        throw PreconditionError("horoball angle arguments must lie in the coset's depth-0 layer");
    if (cutoff > safe_cutoff(g, u, v)) throw TruncationError("cutoff exceeds the safe bound of this truncation");
    if (u == v) return AngleValue::exact(0);
    std::vector<int> dist(g.size(), kUnreachable);
    std::vector<VertexId> queue{u};
    dist[u] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto w = queue[head];
        if (w == v) return AngleValue::exact(static_cast<std::uint32_t>(dist[w]));
        if (dist[w] >= cutoff) continue;
        for (const auto &a : g.neighbors(w)) {
            if (g.horoball_of(a.target) == horoball || dist[a.target] != kUnreachable) continue;
            dist[a.target] = dist[w] + 1;
            queue.push_back(a.target);
        }
    }
    return AngleValue::at_least(static_cast<std::uint32_t>(cutoff));
}

int PenetrationReport::max_depth() const
{
    int out = 0;
    for (const auto &[h, d] : depth) out = std::max(out, d);
    return out;
}

PenetrationReport penetration(const SpaceGraph &g, const std::vector<VertexId> &walk)
{
    PenetrationReport rep;
    for (auto v : walk) {
        const int h = g.horoball_of(v);
        if (h < 0) continue;
        auto &d = rep.depth[h];
        d = std::max(d, g.vertex(v).depth);
    }
    return rep;
}

PenetrationReport penetration(const SpaceGraph &g, const Path &path)
{
    return penetration(g, closure_vertices(path));
}

int edge_horoball(const SpaceGraph &g, VertexId u, VertexId v)
{
    const int hu = g.horoball_of(u);
    const int hv = g.horoball_of(v);
    if (hu >= 0 || hv >= 0) return std::max(hu, hv);
    const auto a = g.horoballs_containing(u);
    const auto b = g.horoballs_containing(v);
    for (int h : a)
        if (std::find(b.begin(), b.end(), h) != b.end()) return h;
    return -1;
}

std::vector<VertexId> regularize(const SpaceGraph &g, const std::vector<VertexId> &walk)
{
    if (walk.empty()) throw PreconditionError("empty path");
    const auto dist = bfs_distances(g, walk.front());
    if (dist[walk.back()] != static_cast<int>(walk.size()) - 1)
        throw PreconditionError("regularize requires a geodesic");
    for (std::size_t i = 0; i + 1 < walk.size(); ++i)
        if (!g.adjacent(walk[i], walk[i + 1])) throw PreconditionError("regularize requires an edge path");
    std::vector<VertexId> out = walk;
    std::size_t i = 0;
    while (i + 1 < out.size()) {
        const int h = edge_horoball(g, out[i], out[i + 1]);
        if (h < 0) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j + 1 < out.size() && edge_horoball(g, out[j], out[j + 1]) == h) ++j;
        const std::vector<VertexId> run(out.begin() + static_cast<long>(i), out.begin() + static_cast<long>(j) + 1);
        if (!has_regular_shape(g, h, run)) {
            const auto repl = vertex_sequence(horoball_geodesic(g, h, run.front(), run.back()));
            if (repl.size() != run.size()) throw PreconditionError("horoball run of a geodesic is not geodesic");
            std::copy(repl.begin(), repl.end(), out.begin() + static_cast<long>(i));
        }
        i = j;
    }
    return out;
}

Path regularize(const SpaceGraph &g, const Path &geodesic_path)
{
    if (!is_edge_path(geodesic_path)) throw PreconditionError("regularize requires an edge path");
    return edge_path(regularize(g, vertex_sequence(geodesic_path)));
}

std::vector<VertexId> regular_geodesic(const SpaceGraph &g, VertexId x, const std::vector<int> &dist_to_y)
{
    auto walk = geodesic_toward(g, x, dist_to_y);
    if (walk.empty()) return walk;
    std::vector<VertexId> out = walk;
    std::size_t i = 0;
    while (i + 1 < out.size()) {
        const int h = edge_horoball(g, out[i], out[i + 1]);
        if (h < 0) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j + 1 < out.size() && edge_horoball(g, out[j], out[j + 1]) == h) ++j;
        const std::vector<VertexId> run(out.begin() + static_cast<long>(i), out.begin() + static_cast<long>(j) + 1);
        if (!has_regular_shape(g, h, run)) {
            const auto repl = vertex_sequence(horoball_geodesic(g, h, run.front(), run.back()));
            if (repl.size() == run.size()) std::copy(repl.begin(), repl.end(), out.begin() + static_cast<long>(i));
        }
        i = j;
    }
    return out;
}

FinenessProbe fineness_probe(const SpaceGraph &g, VertexId apex, int angle_bound, VertexId base_point, int region)
{
    if (g.vertex(apex).kind != VertexKind::apex) throw PreconditionError("fineness probe needs an apex");
    if (!g.adjacent(apex, base_point)) throw PreconditionError("base point must be adjacent to the apex");
    std::vector<VertexId> link;
    for (const auto &a : g.neighbors(apex)) link.push_back(a.target);
    std::sort(link.begin(), link.end());
    FinenessProbe out;
    const auto around = punctured_distances(g, base_point, apex, region);
    for (auto x : link) {
        if (around[x] == kUnreachable) continue;
        ++out.region_size;
        const auto dist = punctured_distances(g, x, apex, angle_bound);
        for (auto y : link)
            if (dist[y] != kUnreachable) out.pairs.emplace_back(x, y);
    }
    return out;
}

AngleValue hat_distance(const SpaceGraph &coned, std::uint32_t peripheral, VertexId h, VertexId k, int cutoff)
{
    if (coned.kind() != SpaceKind::coned_cayley || !coned.group())
        throw PreconditionError("relative distance needs a coned-off Cayley graph");
    const auto &G = *coned.group();
    if (!G.is_peripheral(peripheral)) throw SpecError("index is not peripheral");
    for (auto v : {h, k}) {
        const auto &x = coned.vertex(v);
        if (x.kind != VertexKind::element || !in_factor(x.element, peripheral))
            throw PreconditionError("relative distance arguments must lie in the peripheral subgroup");
    }
    if (cutoff > safe_cutoff(coned, h, k)) throw TruncationError("cutoff exceeds the safe bound of this truncation");
    if (h == k) return AngleValue::exact(0);
    const auto own_apex = coned.find_apex(CosetId{peripheral, {}});
    std::vector<int> dist(coned.size(), kUnreachable);
    std::vector<char> expanded(coned.size(), 0);
    std::vector<VertexId> queue{h};
    dist[h] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto u = queue[head];
        if (u == k) return AngleValue::exact(static_cast<std::uint32_t>(dist[u]));
        if (dist[u] >= cutoff) continue;
        for (const auto &a : coned.neighbors(u)) {
            if (a.kind == EdgeKind::cayley) {
                if (dist[a.target] != kUnreachable) continue;
                dist[a.target] = dist[u] + 1;
                queue.push_back(a.target);
            } else if (a.kind == EdgeKind::cone) {
                if ((own_apex && a.target == *own_apex) || expanded[a.target]) continue;
                expanded[a.target] = 1;
                for (const auto &b : coned.neighbors(a.target)) {
                    if (dist[b.target] != kUnreachable) continue;
                    dist[b.target] = dist[u] + 1;
                    queue.push_back(b.target);
                }
            }
        }
    }
    return AngleValue::at_least(static_cast<std::uint32_t>(cutoff));
}

ConeEdgeCheck check_cone_edges(const SpaceGraph &g)
{
    ConeEdgeCheck out;
    auto expect = [&](VertexId apex, VertexId v) {
        ++out.checked;
        if (!g.adjacent(apex, v)) out.missing.emplace_back(apex, v);
    };
    for (const auto &hb : g.horoballs()) {
        if (!hb.coned()) continue;
        for (std::size_t d = static_cast<std::size_t>(hb.cone_depth); d < hb.layer.size(); ++d)
            for (auto v : hb.layer[d]) expect(hb.apex, v);
    }
    if (g.kind() == SpaceKind::coned_cayley && g.group()) {
        const auto &G = *g.group();
        for (VertexId v = 0; v < g.size(); ++v) {
            const auto &x = g.vertex(v);
            if (x.kind != VertexKind::element) continue;
            for (auto i : G.peripheral_indices)
                if (const auto apex = g.find_apex(coset_rep(G, x.element, i))) expect(*apex, v);
        }
    }
    return out;
}

std::pair<VertexId, VertexId> basepoint_cone_edge(const SpaceGraph &g)
{
    const auto v = g.basepoint();
    for (int h : g.horoballs_containing(v)) {
        const auto &hb = g.horoballs()[h];
        if (!hb.coned()) continue;
        const auto i = hb.base_index(v).value();
        return {hb.apex, hb.layer.at(hb.cone_depth).at(i)};
    }
    for (const auto &a : g.neighbors(v))
        if (a.kind == EdgeKind::cone) return {a.target, v};
    throw PreconditionError("no cone edge at the basepoint");
}

SpaceGraph remove_cone_edge(const SpaceGraph &g)
{
    const auto [apex, v] = basepoint_cone_edge(g);
    return g.without_edge(apex, v);
}

DeltaEstimate estimate_delta(const SpaceGraph &g, std::size_t budget, std::uint64_t seed)
{
    if (budget < 1) throw PreconditionError("triple budget must be positive");
    const auto region = certified_region(g);
    const auto n = region.size();
    std::vector<std::array<VertexId, 3>> triples;
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!certified(g, region[i], region[j])) continue;
            for (std::size_t k = j + 1; k < n; ++k) {
                if (!certified(g, region[i], region[k]) || !certified(g, region[j], region[k])) continue;
                ++total;
                if (total <= budget) triples.push_back({region[i], region[j], region[k]});
            }
        }
    DeltaEstimate out;
    out.exhaustive = total <= budget;
    if (!out.exhaustive) {
        triples.clear();
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t attempts = 0; triples.size() < budget && attempts < 200 * budget; ++attempts) {
            std::array<VertexId, 3> t{region[pick(rng)], region[pick(rng)], region[pick(rng)]};
            if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
            if (certified(g, t[0], t[1]) && certified(g, t[1], t[2]) && certified(g, t[0], t[2])) triples.push_back(t);
        }
    }
    out.triples = triples.size();

    std::unordered_map<VertexId, std::vector<int>> rows;
    auto row = [&](VertexId y) -> const std::vector<int> & {
        auto it = rows.find(y);
        if (it == rows.end()) it = rows.emplace(y, bfs_distances(g, y)).first;
        return it->second;
    };
    std::unordered_map<std::uint64_t, std::vector<VertexId>> sides;
    auto side = [&](VertexId x, VertexId y) -> const std::vector<VertexId> & {
        if (x > y) std::swap(x, y);
        const auto key = (static_cast<std::uint64_t>(x) << 32) | y;
        auto it = sides.find(key);
        if (it == sides.end()) it = sides.emplace(key, regular_geodesic(g, x, row(y))).first;
        return it->second;
    };
    LocalSearch search(g);
    for (const auto &t : triples) {
        const auto &a = side(t[0], t[1]);
        const auto &b = side(t[1], t[2]);
        const auto &c = side(t[0], t[2]);
        const int slim = std::max({side_slimness(search, a, b, c), side_slimness(search, b, a, c),
                                   side_slimness(search, c, a, b)});
        if (slim > out.delta) {
            out.delta = slim;
            out.witness = {t[0], t[1], t[2]};
        }
    }
    return out;
}

QuasiconvexityEstimate measure_quasiconvexity(const SpaceGraph &g, const std::vector<VertexId> &subset,
                                              std::uint64_t cap)
{
    if (subset.empty()) throw PreconditionError("quasiconvexity of an empty subset");
    const auto to_subset = bfs_distances(g, subset);
    std::vector<VertexId> cand;
    for (auto v : subset)
        if (g.base_distance(v) != kUnreachable && 2 * g.base_distance(v) <= g.truncation_radius()) cand.push_back(v);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    QuasiconvexityEstimate out;
    auto spread = [&](const std::vector<VertexId> &walk) {
        int worst = 0;
        for (auto v : walk) worst = std::max(worst, to_subset[v]);
        return worst;
    };
    for (std::size_t j = 0; j < cand.size(); ++j) {
        const auto y = cand[j];
        const auto dy = bfs_distances(g, y);
        for (std::size_t i = 0; i < j; ++i) {
            const auto x = cand[i];
            if (!certified(g, x, y)) continue;
            ++out.pairs;
            int value = 0;
            const auto geos = enumerate_geodesics(g, x, y, dy, cap);
            if (geos.overflow) {
                ++out.overflow_pairs;
                value = spread(regular_geodesic(g, x, dy)) + 5;
            } else {
                for (const auto &walk : geos.paths) value = std::max(value, spread(walk));
            }
            if (value > out.lambda || out.witness.first == kNoVertex) {
                if (value > out.lambda) out.lambda = value;
                out.witness = {x, y};
            }
        }
    }
    return out;
}

ConvexityResult check_convexity(const SpaceGraph &g, int horoball, int L, int delta, std::uint64_t cap)
{
    if (L <= delta) throw PreconditionError("convexity needs L greater than the hyperbolicity constant");
    const auto &hb = g.horoballs().at(horoball);
    std::vector<VertexId> deep;
    for (int d = std::max(L, 0); d < static_cast<int>(hb.layer.size()); ++d)
        deep.insert(deep.end(), hb.layer[d].begin(), hb.layer[d].end());
    if (hb.apex != kNoVertex) deep.push_back(hb.apex);
    auto inside = [&](VertexId v) {
        if (v == hb.apex) return true;
        return hb.base_index(v).has_value() && g.vertex(v).depth >= L;
    };
    ConvexityResult out;
    for (std::size_t j = 0; j < deep.size(); ++j) {
        const auto y = deep[j];
        std::optional<std::vector<int>> dy;
        for (std::size_t i = 0; i < j; ++i) {
            const auto x = deep[i];
            if (!certified(g, x, y)) continue;
            if (!dy) dy = bfs_distances(g, y);
            ++out.pairs;
            const auto geos = enumerate_geodesics(g, x, y, *dy, cap);
            std::vector<std::vector<VertexId>> walks = geos.paths;
            if (geos.overflow) walks.push_back(regular_geodesic(g, x, *dy));
            for (const auto &walk : walks)
                if (!std::all_of(walk.begin(), walk.end(), inside)) {
                    out.pass = false;
                    out.violation = walk;
                    return out;
                }
        }
    }
    return out;
}

} // namespace cusp
