#include "cusp/transfer.hpp"

#include "cusp/errors.hpp"

#include <algorithm>
#include <mutex>
#include <random>
#include <unordered_map>

namespace cusp {

namespace {

using Row = std::shared_ptr<const std::vector<int>>;

// An endpoint option of a point: a vertex and the distance to reach it.
struct End {
    VertexId vertex;
    Rational offset;
};

std::vector<End> ends_of(const Point &p)
{
    if (p.is_vertex()) return {{p.from, Rational(0)}};
    return {{p.from, p.t}, {p.to, 1 - p.t}};
}

bool same_edge(const Point &x, const Point &y)
{
    return !x.is_vertex() && !y.is_vertex() && x.from == y.from && x.to == y.to;
}

const Arc &edge_of(const SpaceGraph &g, const Point &p, const Point &q)
{
    VertexId a = p.from, b = q.from;
    if (!p.is_vertex()) {
        a = p.from;
        b = p.to;
    } else if (!q.is_vertex()) {
        a = q.from;
        b = q.to;
    }
    const auto *arc = g.edge_between(a, b);
    if (!arc) throw PreconditionError("consecutive points do not share an edge");
    return *arc;
}

Path joined(const std::vector<Path> &parts)
{
    Path out;
    for (const auto &p : parts) {
        if (p.empty()) continue;
        if (out.empty()) {
            out = p;
            continue;
        }
        if (!(out.back() == p.front())) throw PreconditionError("path pieces do not meet");
        out.points.insert(out.points.end(), p.points.begin() + 1, p.points.end());
    }
    return simplified(out);
}

Rational max_of(Rational a, Rational b)
{
    return a < b ? b : a;
}

template <class RowFn>
Rational routed_distance(const Point &x, const Point &y, RowFn &&row)
{
    if (x == y) return Rational(0);
    std::optional<Rational> best;
    if (same_edge(x, y)) best = x.t < y.t ? y.t - x.t : x.t - y.t;
    for (const auto &ey : ends_of(y)) {
        const auto r = row(ey.vertex);
        for (const auto &ex : ends_of(x)) {
            const int d = (*r)[ex.vertex];
            if (d == kUnreachable) continue;
            const Rational total = ex.offset + Rational(d) + ey.offset;
            if (!best || total < *best) best = total;
        }
    }
    if (!best) throw PreconditionError("points are not connected in this truncation");
    return *best;
}

template <class RowFn>
std::vector<Path> routed_geodesics(const SpaceGraph &g, const Point &x, const Point &y, std::uint64_t cap,
                                   bool first_only, RowFn &&row)
{
    if (x == y) return {Path{{x}}};
    if (same_edge(x, y) || (x.is_vertex() != y.is_vertex() && step_length(g, x, y)))
        return {Path{{x, y}}};
    const Rational best = routed_distance(x, y, row);
    std::vector<Path> out;
    for (const auto &ex : ends_of(x))
        for (const auto &ey : ends_of(y)) {
            const auto r = row(ey.vertex);
            const int d = (*r)[ex.vertex];
            if (d == kUnreachable || ex.offset + Rational(d) + ey.offset != best) continue;
            std::vector<std::vector<VertexId>> walks;
            if (first_only) {
                walks.push_back(geodesic_toward(g, ex.vertex, *r));
            } else {
                auto set = enumerate_geodesics(g, ex.vertex, ey.vertex, *r, cap);
                if (set.overflow) set.paths = {geodesic_toward(g, ex.vertex, *r)};
                walks = std::move(set.paths);
            }
            for (const auto &w : walks) {
                Path p{{x}};
                for (auto v : w) p.points.push_back(Point::at(v));
                p.points.push_back(y);
                out.push_back(simplified(p));
                if (first_only || out.size() >= cap) return out;
            }
        }
    return out;
}

class RowCache {
public:
    RowCache(const SpaceGraph &g, std::size_t capacity) : g_(g), capacity_(capacity) {}

    Row get(VertexId target)
    {
        {
            std::lock_guard lock(mutex_);
            if (auto it = rows_.find(target); it != rows_.end()) return it->second;
        }
        auto row = std::make_shared<const std::vector<int>>(bfs_distances(g_, target));
        std::lock_guard lock(mutex_);
        if (rows_.size() >= capacity_) rows_.clear();
        rows_.emplace(target, row);
        return row;
    }

private:
    const SpaceGraph &g_;
    std::size_t capacity_;
    std::mutex mutex_;
    std::unordered_map<VertexId, Row> rows_;
};

Rational path_ratio(Rational len, Rational dist)
{
    return len / dist;
}

} // namespace

struct TransferMap::Caches {
    RowCache cusped;
    RowCache coned;
    Caches(const TransferSpaces &s) : cusped(s.cusped(), 256), coned(s.coned(), 2048) {}
};

void MapSpec::validate() const
{
    if (q < 1 || q > r - 1)
        throw PreconditionError("q = " + std::to_string(q) + " outside [1, r-1] for r = " + std::to_string(r));
}

// ------------------------------------------------------------------ spaces

TransferSpaces::TransferSpaces(const GroupSpec &spec, int r, int R, const GraphTransform &tamper)
    : cusped_([&] {
          auto g = build_cusped({spec, r, R, std::nullopt});
          return tamper ? tamper(g) : g;
      }()),
      coned_(build_coned_cayley({with_full_alphabet(spec), R}))
{
    to_coned_.assign(cusped_.size(), kNoVertex);
    to_cusped_.assign(coned_.size(), kNoVertex);
    horoball_of_.assign(coned_.size(), -1);
    for (VertexId v = 0; v < cusped_.size(); ++v) {
        const auto &x = cusped_.vertex(v);
        if (x.kind != VertexKind::element) continue;
        const auto w = coned_.find_element(x.element);
        if (!w) throw SpecError("coned graph lacks " + vertex_name(cusped_, v));
        to_coned_[v] = *w;
        to_cusped_[*w] = v;
    }
    for (std::size_t h = 0; h < cusped_.horoballs().size(); ++h) {
        const auto apex = coned_.find_apex(*cusped_.horoballs()[h].coset);
        if (!apex) throw SpecError("coned graph lacks the apex of horoball " + std::to_string(h));
        apex_of_.push_back(*apex);
        horoball_of_[*apex] = static_cast<int>(h);
    }
    for (VertexId v = 0; v < coned_.size(); ++v) {
        const auto kind = coned_.vertex(v).kind;
        if ((kind == VertexKind::element && to_cusped_[v] == kNoVertex) ||
            (kind == VertexKind::apex && horoball_of_[v] < 0))
            throw SpecError("cusped space lacks " + vertex_name(coned_, v));
    }
}

VertexId TransferSpaces::coned_element(VertexId v) const
{
    if (to_coned_.at(v) == kNoVertex) throw PreconditionError("not a depth-0 vertex");
    return to_coned_[v];
}

VertexId TransferSpaces::cusped_element(VertexId v) const
{
    if (to_cusped_.at(v) == kNoVertex) throw PreconditionError("not an element vertex");
    return to_cusped_[v];
}

VertexId TransferSpaces::coned_apex(int horoball) const
{
    return apex_of_.at(static_cast<std::size_t>(horoball));
}

int TransferSpaces::horoball_of_apex(VertexId v) const
{
    return horoball_of_.at(v);
}

// ------------------------------------------------------------------ points

Rational point_depth(const SpaceGraph &g, const Point &p)
{
    const Rational a(g.vertex(p.from).depth);
    if (p.is_vertex()) return a;
    const Rational b(g.vertex(p.to).depth);
    return a * (1 - p.t) + b * p.t;
}

Rational point_distance(const SpaceGraph &g, const Point &x, const Point &y)
{
    return routed_distance(x, y, [&](VertexId v) { return std::make_shared<const std::vector<int>>(bfs_distances(g, v)); });
}

std::vector<Path> point_geodesics(const SpaceGraph &g, const Point &x, const Point &y, std::uint64_t cap)
{
    return routed_geodesics(g, x, y, cap, false,
                            [&](VertexId v) { return std::make_shared<const std::vector<int>>(bfs_distances(g, v)); });
}

Path point_geodesic(const SpaceGraph &g, const Point &x, const Point &y)
{
    return routed_geodesics(g, x, y, 1, true, [&](VertexId v) {
        return std::make_shared<const std::vector<int>>(bfs_distances(g, v));
    }).front();
}

// -------------------------------------------------------------------- maps

TransferMap::TransferMap(const TransferSpaces &spaces, int q)
    : spaces_(spaces), q_(q), caches_(std::make_unique<Caches>(spaces))
{
    MapSpec{spaces.r(), q}.validate();
}

TransferMap::~TransferMap() = default;
TransferMap::TransferMap(TransferMap &&) noexcept = default;

Row TransferMap::cusped_row(VertexId target) const
{
    return caches_->cusped.get(target);
}

Row TransferMap::coned_row(VertexId target) const
{
    return caches_->coned.get(target);
}

Rational TransferMap::coned_distance(const Point &x, const Point &y) const
{
    return routed_distance(x, y, [&](VertexId v) { return coned_row(v); });
}

std::vector<VertexId> TransferMap::cusped_geodesic(VertexId x, VertexId y) const
{
    return regular_geodesic(spaces_.cusped(), x, *cusped_row(y));
}

VertexId TransferMap::layer_vertex(int horoball, VertexId element, int depth) const
{
    const auto &hb = spaces_.cusped().horoballs().at(horoball);
    const auto i = hb.base_index(element);
    if (!i || depth < 0 || depth > hb.max_depth) throw PreconditionError("no such horoball vertex");
    return hb.layer[depth][*i];
}

Point TransferMap::cone_point(VertexId element, int horoball, Rational position) const
{
    return Point::on_edge(spaces_.coned_element(element), spaces_.coned_apex(horoball), position);
}

// Points of one vertical line from depth `from` to depth `to`: every integer depth
// strictly between, then the end point.
std::vector<VertexId> TransferMap::vertical(int horoball, VertexId element, Rational from, Rational to) const
{
    std::vector<VertexId> out;
    if (from < to) {
        for (auto d = from.numerator() / from.denominator() + 1; Rational(d) < to; ++d)
            out.push_back(layer_vertex(horoball, element, static_cast<int>(d)));
    } else {
        auto d = from.numerator() / from.denominator();
        if (Rational(d) == from) --d;
        for (; Rational(d) > to; --d) out.push_back(layer_vertex(horoball, element, static_cast<int>(d)));
    }
    return out;
}

Point TransferMap::pi(const Point &p) const
{
    const auto &K = spaces_.cusped();
    auto base_element = [&](VertexId v, int h) {
        const auto &hb = K.horoballs()[h];
        return hb.base[*hb.base_index(v)];
    };
    if (p.is_vertex()) {
        const auto v = p.from;
        const auto &x = K.vertex(v);
        if (x.kind == VertexKind::element) return Point::at(spaces_.coned_element(v));
        const int h = K.horoball_of(v);
        if (x.kind == VertexKind::apex || x.depth >= q_) return Point::at(spaces_.coned_apex(h));
        return cone_point(base_element(v, h), h, Rational(x.depth, q_));
    }
    const auto &arc = *K.edge_between(p.from, p.to);
    switch (arc.kind) {
    case EdgeKind::cayley:
        return Point::on_edge(spaces_.coned_element(p.from), spaces_.coned_element(p.to), p.t);
    case EdgeKind::cone:
        return Point::at(spaces_.coned_apex(edge_horoball(K, p.from, p.to)));
    case EdgeKind::horizontal: {
        const int h = edge_horoball(K, p.from, p.to);
        if (K.vertex(p.from).depth >= q_) return Point::at(spaces_.coned_apex(h));
        return pi(Point::at(p.from));
    }
    case EdgeKind::vertical: {
        const int h = edge_horoball(K, p.from, p.to);
        const auto depth = point_depth(K, p);
        if (depth >= Rational(q_)) return Point::at(spaces_.coned_apex(h));
        const auto lower = K.vertex(p.from).depth < K.vertex(p.to).depth ? p.from : p.to;
        const auto g = K.vertex(lower).kind == VertexKind::element ? lower : base_element(lower, h);
        return cone_point(g, h, depth / Rational(q_));
    }
    }
    throw PreconditionError("unknown edge kind");
}

Point TransferMap::iota(const Point &p) const
{
    const auto &C = spaces_.coned();
    const auto &K = spaces_.cusped();
    auto image_vertex = [&](VertexId v) {
        if (C.vertex(v).kind == VertexKind::element) return Point::at(spaces_.cusped_element(v));
        return Point::at(K.horoballs().at(spaces_.horoball_of_apex(v)).apex);
    };
    if (p.is_vertex()) return image_vertex(p.from);
    const auto &arc = *C.edge_between(p.from, p.to);
    if (arc.kind == EdgeKind::cayley)
        return Point::on_edge(spaces_.cusped_element(p.from), spaces_.cusped_element(p.to), p.t);
    const bool from_is_element = C.vertex(p.from).kind == VertexKind::element;
    const auto g = from_is_element ? p.from : p.to;
    const auto apex = from_is_element ? p.to : p.from;
    const int h = spaces_.horoball_of_apex(apex);
    const Rational depth = (from_is_element ? p.t : 1 - p.t) * Rational(q_);
    const auto element = spaces_.cusped_element(g);
    const auto floor = depth.numerator() / depth.denominator();
    if (Rational(floor) == depth) return Point::at(layer_vertex(h, element, static_cast<int>(floor)));
    return Point::on_edge(layer_vertex(h, element, static_cast<int>(floor)),
                          layer_vertex(h, element, static_cast<int>(floor) + 1), depth - Rational(floor));
}

Path TransferMap::push_forward(const Path &c) const
{
    const auto &K = spaces_.cusped();
    const auto &C = spaces_.coned();
    const auto pts = simplified(c).points;
    if (pts.empty()) throw PreconditionError("empty path");
    for (std::size_t i = 1; i + 1 < pts.size(); ++i)
        if (!pts[i].is_vertex()) throw PreconditionError("push-forward needs vertices between the end points");
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (!step_length(K, pts[i], pts[i + 1])) throw PreconditionError("push-forward needs a continuous path");

    auto at_depth0 = [&](const Point &p) {
        if (p.is_vertex()) return K.vertex(p.from).kind == VertexKind::element;
        return K.edge_between(p.from, p.to)->kind == EdgeKind::cayley;
    };
    auto owner = [&](const Point &p) {
        return p.is_vertex() ? K.horoball_of(p.from) : edge_horoball(K, p.from, p.to);
    };
    const std::size_t n = pts.size();
    std::size_t iu = n - 1, iv = n - 1;
    bool found = false;
    for (std::size_t i = 0; i < n; ++i)
        if (at_depth0(pts[i])) {
            if (!found) iu = i;
            iv = i;
            found = true;
        }

    // The end piece between a horoball point and the depth-0 point next to it.
    auto end_piece = [&](const Point &deep, const Point &shallow) {
        const auto a = pi(deep);
        const auto b = pi(shallow);
        if (step_length(C, a, b)) return Path{{a, b}};
        const auto apex = Point::at(spaces_.coned_apex(owner(deep)));
        return Path{{a, apex, b}};
    };
    const Path hat_x = iu == 0 ? Path{{pi(pts[0])}} : end_piece(pts[0], pts[iu]);
    const Path hat_y = iv == n - 1 ? Path{{pi(pts[n - 1])}} : reversed(end_piece(pts[n - 1], pts[iv]));

    Path hat_0{{pi(pts[iu])}};
    std::size_t k = iu;
    while (k < iv) {
        const auto &arc = edge_of(K, pts[k], pts[k + 1]);
        if (arc.kind == EdgeKind::cayley) {
            hat_0.points.push_back(pi(pts[k + 1]));
            ++k;
            continue;
        }
        const int h = edge_horoball(K, pts[k].from, pts[k + 1].from);
        std::size_t j = k + 1;
        while (j < iv) {
            const auto &next = edge_of(K, pts[j], pts[j + 1]);
            if (next.kind == EdgeKind::cayley || edge_horoball(K, pts[j].from, pts[j + 1].from) != h) break;
            ++j;
        }
        hat_0.points.push_back(Point::at(spaces_.coned_apex(h)));
        hat_0.points.push_back(pi(pts[j]));
        k = j;
    }
    return joined({hat_x, simplified(hat_0), hat_y});
}

Path TransferMap::pullback(const Path &c) const
{
    const auto &C = spaces_.coned();
    const auto &K = spaces_.cusped();
    const auto pts = simplified(c).points;
    if (pts.empty()) throw PreconditionError("empty path");
    if (pts.size() == 1) return Path{{iota(pts[0])}};

    Path out;
    auto emit = [&](const Point &p) {
        if (out.empty() || !(out.back() == p)) out.points.push_back(p);
    };
    auto emit_vertical = [&](int h, VertexId element, Rational from, Rational to) {
        for (auto v : vertical(h, element, from, to)) emit(Point::at(v));
        const auto floor = to.numerator() / to.denominator();
        if (Rational(floor) == to)
            emit(Point::at(layer_vertex(h, element, static_cast<int>(floor))));
        else
            emit(Point::on_edge(layer_vertex(h, element, static_cast<int>(floor)),
                                layer_vertex(h, element, static_cast<int>(floor) + 1), to - Rational(floor)));
    };
    // Position of a point on the cone edge {g, apex}, measured from g.
    auto position = [&](const Point &p, VertexId g) {
        if (p.is_vertex()) return p.from == g ? Rational(0) : Rational(1);
        return p.from == g ? p.t : 1 - p.t;
    };
    const Rational q(q_);
    VertexId arrival = kNoVertex;
    int open = -1;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const auto &a = pts[k];
        const auto &b = pts[k + 1];
        if (!step_length(C, a, b)) throw PreconditionError("pullback needs a continuous path");
        const auto &arc = edge_of(C, a, b);
        if (arc.kind == EdgeKind::cayley) {
            if (out.empty()) emit(iota(a));
            emit(iota(b));
            continue;
        }
        VertexId g = kNoVertex, apex = kNoVertex;
        for (const auto *p : {&a, &b})
            for (auto v : {p->from, p->to}) (C.vertex(v).kind == VertexKind::apex ? apex : g) = v;
        const int h = spaces_.horoball_of_apex(apex);
        const auto element = spaces_.cusped_element(g);
        const auto s0 = position(a, g);
        const auto s1 = position(b, g);
        if (s1 == Rational(1)) {
            if (out.empty()) emit(iota(a));
            emit_vertical(h, element, s0 * q, q);
            arrival = layer_vertex(h, element, q_);
            open = h;
        } else if (s0 == Rational(1)) {
            const auto departure = layer_vertex(h, element, q_);
            if (open == h) {
                for (const auto &p : horoball_geodesic(K, h, arrival, departure).points) emit(p);
            } else {
                emit(Point::at(departure));
            }
            open = -1;
            emit_vertical(h, element, q, s1 * q);
        } else {
            if (out.empty()) emit(iota(a));
            emit_vertical(h, element, s0 * q, s1 * q);
        }
    }
    return out;
}

int TransferMap::extended_pullback_case(VertexId x, VertexId y) const
{
    const auto &K = spaces_.cusped();
    const bool dx = K.vertex(x).depth >= q_;
    const bool dy = K.vertex(y).depth >= q_;
    if (!dx && !dy) return 1;
    if (dx && dy) return K.horoball_of(x) == K.horoball_of(y) ? 2 : 3;
    return 4;
}

Path TransferMap::extended_pullback(VertexId x, VertexId y, const Choice &choice) const
{
    const auto &K = spaces_.cusped();
    const auto &C = spaces_.coned();
    if (!certified(K, x, y)) throw PreconditionError("extended pullback needs a certified pair");
    auto pick = [&](std::vector<Path> options) {
        if (options.empty()) throw PreconditionError("no geodesic");
        return options[choice.variant % options.size()];
    };
    auto coned_geodesic = [&](const Point &a, const Point &b) {
        return pick(routed_geodesics(C, a, b, choice.cap, false, [&](VertexId v) { return coned_row(v); }));
    };
    auto cusped_geodesic_variant = [&](VertexId a, VertexId b) {
        const auto row = cusped_row(b);
        auto set = enumerate_geodesics(K, a, b, *row, choice.cap);
        if (set.overflow || set.paths.empty()) return regular_geodesic(K, a, *row);
        return regularize(K, set.paths[choice.variant % set.paths.size()]);
    };
    auto sub = [](const std::vector<VertexId> &w, std::size_t i, std::size_t j) {
        return edge_path(std::vector<VertexId>(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(j) + 1));
    };

    switch (extended_pullback_case(x, y)) {
    case 1:
        return pullback(coned_geodesic(pi(Point::at(x)), pi(Point::at(y))));
    case 2:
        return edge_path(cusped_geodesic_variant(x, y));
    case 4:
        if (K.vertex(x).depth < q_) return reversed(extended_pullback(y, x, choice));
        [[fallthrough]];
    case 3: {
        const auto gamma = cusped_geodesic_variant(x, y);
        const int hx = K.horoball_of(x);
        const int hy = K.horoball_of(y);
        auto at_q = [&](VertexId v, int h) { return K.horoball_of(v) == h && K.vertex(v).depth == q_; };
        std::size_t iu = gamma.size();
        for (std::size_t i = 0; i < gamma.size(); ++i)
            if (at_q(gamma[i], hx)) iu = i;
        if (iu == gamma.size()) throw PreconditionError("geodesic misses depth q near x");
        const bool both_deep = K.vertex(y).depth >= q_;
        std::size_t iv = gamma.size() - 1;
        if (both_deep) {
            iv = gamma.size();
            for (std::size_t i = gamma.size(); i-- > 0;)
                if (at_q(gamma[i], hy)) iv = i;
            if (iv == gamma.size()) throw PreconditionError("geodesic misses depth q near y");
        }
        const auto target = both_deep ? Point::at(spaces_.coned_apex(hy)) : pi(Point::at(y));
        const auto eta0 = pullback(coned_geodesic(Point::at(spaces_.coned_apex(hx)), target));
        const auto u = gamma[iu];
        const auto u2 = eta0.front().vertex();
        std::vector<Path> parts{sub(gamma, 0, iu), edge_path(cusped_geodesic(u, u2)), eta0};
        if (both_deep) {
            const auto v = gamma[iv];
            const auto v2 = eta0.back().vertex();
            parts.push_back(edge_path(cusped_geodesic(v2, v)));
            parts.push_back(sub(gamma, iv, gamma.size() - 1));
        }
        return joined(parts);
    }
    }
    throw PreconditionError("unreachable case");
}

// ----------------------------------------------------------------- reports

CompositionReport check_compositions(const TransferMap &map)
{
    const auto &K = map.spaces().cusped();
    const auto &C = map.spaces().coned();
    CompositionReport out;
    for (VertexId v = 0; v < K.size(); ++v) {
        if (K.vertex(v).kind == VertexKind::apex || K.vertex(v).depth >= map.q()) continue;
        ++out.cusped_checked;
        if (!(map.iota(map.pi(Point::at(v))) == Point::at(v))) out.iota_pi_violations.push_back(v);
    }
    auto check = [&](const Point &p) {
        ++out.coned_checked;
        if (!(map.pi(map.iota(p)) == p)) out.pi_iota_violations.push_back(p);
    };
    for (VertexId v = 0; v < C.size(); ++v) {
        check(Point::at(v));
        for (const auto &a : C.neighbors(v)) {
            if (a.target < v) continue;
            for (int k = 1; k < 2 * map.q(); ++k) check(Point::on_edge(v, a.target, Rational(k, 2 * map.q())));
        }
    }
    return out;
}

bool DistortionReport::within_bounds(int r) const
{
    const Rational pi_bound(2 * (r + 1));
    const Rational iota_bound(r + 1);
    return !(pi_bound < pi_expansion) && !(pi_bound < pi_contraction) && pi_collapsed_max <= 2 * (r + 1) &&
           !(iota_bound < iota_expansion) && !(iota_bound < iota_contraction);
}

DistortionReport distortion_report(const TransferMap &map, const std::vector<std::pair<VertexId, VertexId>> &pairs)
{
    const auto &C = map.spaces().coned();
    DistortionReport out;
    auto sorted = pairs;
    std::sort(sorted.begin(), sorted.end(), [](const auto &a, const auto &b) { return a.second < b.second; });
    for (const auto &[x, y] : sorted) {
        if (x == y) continue;
        const int dk = (*map.cusped_row(y))[x];
        if (dk == kUnreachable) throw PreconditionError("pair not connected in the cusped space");
        const auto dc = map.coned_distance(map.pi(Point::at(x)), map.pi(Point::at(y)));
        ++out.pairs;
        const Rational up = dc / Rational(dk);
        if (out.pi_expansion < up) out.pi_expansion = up;
        if (dc == Rational(0)) {
            if (dk > out.pi_collapsed_max) out.pi_collapsed_max = dk;
            continue;
        }
        const Rational down = Rational(dk) / dc;
        if (out.pi_contraction < down) {
            out.pi_contraction = down;
            out.witness = {x, y};
        }
    }
    const auto region = certified_region(C);
    for (auto y : region) {
        const auto iy = map.iota(Point::at(y)).vertex();
        const auto ky = map.cusped_row(iy);
        const auto cy = map.coned_row(y);
        for (auto x : region) {
            if (x >= y || !certified(C, x, y)) continue;
            const int dc = (*cy)[x];
            const int dk = (*ky)[map.iota(Point::at(x)).vertex()];
            ++out.iota_pairs;
            out.iota_expansion = max_of(out.iota_expansion, Rational(dk, dc));
            out.iota_contraction = max_of(out.iota_contraction, Rational(dc, dk));
        }
    }
    return out;
}

LengthReport length_report(const TransferMap &map, const std::vector<std::pair<VertexId, VertexId>> &pairs)
{
    const auto &K = map.spaces().cusped();
    const auto &C = map.spaces().coned();
    LengthReport out;
    const Rational r1(map.r() + 1);
    for (const auto &[x, y] : pairs) {
        if (x == y) continue;
        const auto walk = map.cusped_geodesic(x, y);
        const auto gamma = edge_path(walk);
        const Rational lg(static_cast<std::int64_t>(walk.size()) - 1);
        bool bad_push = false;
        bool bad_pull = false;

        auto check_push = [&](const Path &c, Rational lc, Rational factor) {
            const auto hat = map.push_forward(c);
            ++out.push_samples;
            if (!is_valid_path(C, hat) || !(hat.front() == map.pi(c.front())) || !(hat.back() == map.pi(c.back()))) {
                bad_push = true;
                return;
            }
            const auto lh = length(C, hat);
            out.push_ratio = max_of(out.push_ratio, lh / lc);
            if (factor * lc < lh) bad_push = true;
        };
        check_push(gamma, lg, Rational(2));
        // The same geodesic stopped half way along its last edge, which may be a partial horizontal edge.
        Path partial = gamma;
        partial.points.back() = Point::on_edge(walk[walk.size() - 2], walk.back(), Rational(1, 2));
        check_push(partial, lg - Rational(1, 2), Rational(2));

        const auto px = map.pi(Point::at(x));
        const auto py = map.pi(Point::at(y));
        if (px.is_vertex() && py.is_vertex() && !(px == py)) {
            const auto eta = routed_geodesics(C, px, py, 1, true, [&](VertexId v) { return map.coned_row(v); }).front();
            const auto tilde = map.pullback(eta);
            ++out.pull_samples;
            const auto le = length(C, eta);
            if (!is_valid_path(K, tilde)) {
                bad_pull = true;
            } else {
                const auto lt = length(K, tilde);
                const auto ratio = lt / le;
                if (ratio < out.pull_low) out.pull_low = ratio;
                out.pull_high = max_of(out.pull_high, ratio);
                if (lt < le || r1 * le < lt) bad_pull = true;
            }
            const bool shallow = K.vertex(x).depth < map.q() && K.vertex(y).depth < map.q();
            if (shallow && (!(tilde.front() == Point::at(x)) || !(tilde.back() == Point::at(y)))) bad_pull = true;
        }
        if (bad_push) out.push_violations.emplace_back(x, y);
        if (bad_pull) out.pull_violations.emplace_back(x, y);
        if (bad_push || bad_pull) out.violations.emplace_back(x, y);
    }
    return out;
}

AngleTransferReport angle_transfer_report(const TransferMap &map, int horoball,
                                          const std::vector<std::pair<VertexId, VertexId>> &pairs, int cutoff,
                                          int big_angle)
{
    const auto &K = map.spaces().cusped();
    const auto &C = map.spaces().coned();
    const int bound = 1 << (map.q() + 1);
    if (cutoff <= bound) throw PreconditionError("cutoff must exceed 2^(q+1)");
    const auto apex = map.spaces().coned_apex(horoball);
    AngleTransferReport out;
    int shallow_big = -1;
    int deepest = 0;
    for (const auto &[u, v] : pairs) {
        AngleSample s{u, v, {}, {}, 0, false};
        s.source = horoball_angle(K, horoball, u, v, std::min(cutoff, safe_cutoff(K, u, v)));
        const auto cu = map.spaces().coned_element(u);
        const auto cv = map.spaces().coned_element(v);
        s.image = angle_at(C, apex, cu, cv, std::min(cutoff, safe_cutoff(C, cu, cv)));
        const auto walk = map.cusped_geodesic(u, v);
        const auto pen = penetration(K, walk);
        if (auto it = pen.depth.find(horoball); it != pen.depth.end()) s.penetration = it->second;
        const int d = (*map.coned_row(cv))[cu];
        if (u != v) {
            const auto avoid = dist_avoiding(C, cu, cv, apex, std::min(d, safe_cutoff(C, cu, cv)));
            s.passes_apex = !(avoid.is_exact() && static_cast<int>(avoid.value) <= d);
        }
        const bool image_big = static_cast<int>(s.image.value) > big_angle;
        if (!image_big) shallow_big = std::max(shallow_big, s.penetration);
        deepest = std::max(deepest, s.penetration);
        if (s.penetration <= map.q() && !(s.image.is_exact() && static_cast<int>(s.image.value) <= bound))
            out.shallow_violations.emplace_back(u, v);
        out.samples.push_back(s);
    }
    out.deep_threshold = shallow_big + 1 <= deepest ? shallow_big + 1 : -1;
    return out;
}

ApexPassingReport apex_passing(const SpaceGraph &coned, const std::vector<std::pair<VertexId, VertexId>> &pairs,
                               std::optional<int> threshold)
{
    std::vector<VertexId> apices;
    for (auto v : certified_region(coned))
        if (coned.vertex(v).kind == VertexKind::apex) apices.push_back(v);
    ApexPassingReport out;
    std::unordered_map<VertexId, std::vector<int>> rows;
    auto row = [&](VertexId v) -> const std::vector<int> & {
        auto it = rows.find(v);
        if (it == rows.end()) it = rows.emplace(v, bfs_distances(coned, v)).first;
        return it->second;
    };
    for (const auto &[x, y] : pairs) {
        if (x == y) continue;
        const auto &rx = row(x);
        const auto &ry = row(y);
        const int d = rx[y];
        for (auto a : apices) {
            if (a == x || a == y || rx[a] > d + 1 || ry[a] > d + 1) continue;
            const auto toward_x = geodesic_toward(coned, a, rx);
            const auto toward_y = geodesic_toward(coned, a, ry);
            const auto u = toward_x[1];
            const auto v = toward_y[1];
            const int cutoff = std::min(safe_cutoff(coned, u, v), 4 * coned.truncation_radius());
            const auto angle = angle_at(coned, a, u, v, cutoff);
            bool passes = false;
            if (rx[a] + ry[a] == d) {
                const auto avoid = dist_avoiding(coned, x, y, a, std::min(d, safe_cutoff(coned, x, y)));
                passes = !(avoid.is_exact() && static_cast<int>(avoid.value) <= d);
            }
            ++out.triples;
            if (passes) continue;
            out.max_avoided_angle = std::max(out.max_avoided_angle, static_cast<int>(angle.value));
            if (threshold && static_cast<int>(angle.value) > *threshold) out.violations.push_back({x, y, a});
        }
    }
    return out;
}

std::vector<GeodesicSegment> decompose_geodesic(const SpaceGraph &K, const std::vector<VertexId> &walk, int q)
{
    if (walk.empty()) throw PreconditionError("empty path");
    for (std::size_t i = 0; i + 1 < walk.size(); ++i)
        if (!K.adjacent(walk[i], walk[i + 1])) throw PreconditionError("decomposition needs an edge path");
    if (bfs_distances(K, walk.front())[walk.back()] != static_cast<int>(walk.size()) - 1)
        throw PreconditionError("decomposition needs a geodesic");
    auto deep = [&](VertexId v) { return K.horoball_of(v) >= 0 && K.vertex(v).depth >= q; };
    std::vector<GeodesicSegment> out;
    std::size_t i = 0;
    std::size_t shallow_start = 0;
    while (i < walk.size()) {
        if (!deep(walk[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < walk.size() && deep(walk[j + 1])) ++j;
        if (i > shallow_start)
            out.push_back({false, -1, std::vector<VertexId>(walk.begin() + static_cast<long>(shallow_start),
                                                            walk.begin() + static_cast<long>(i) + 1)});
        out.push_back({true, K.horoball_of(walk[i]),
                       std::vector<VertexId>(walk.begin() + static_cast<long>(i), walk.begin() + static_cast<long>(j) + 1)});
        shallow_start = j;
        i = j + 1;
    }
    if (out.empty() || shallow_start + 1 < walk.size() || !out.back().deep) {
        if (out.empty() || shallow_start + 1 < walk.size())
            out.push_back({false, -1, std::vector<VertexId>(walk.begin() + static_cast<long>(shallow_start), walk.end())});
    }
    return out;
}

std::vector<std::pair<VertexId, VertexId>> certified_pairs(const SpaceGraph &g, std::size_t budget, std::uint64_t seed)
{
    const auto region = certified_region(g);
    std::vector<std::pair<VertexId, VertexId>> all;
    for (std::size_t i = 0; i < region.size(); ++i)
        for (std::size_t j = i + 1; j < region.size(); ++j)
            if (certified(g, region[i], region[j])) all.emplace_back(region[i], region[j]);
    if (all.size() <= budget) return all;
    std::mt19937_64 rng(seed);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(budget);
    std::sort(all.begin(), all.end());
    return all;
}

GuessingReport verify_guessing_family(const TransferMap &map, const GuessingSample &sample)
{
    const auto &K = map.spaces().cusped();
    const auto &C = map.spaces().coned();
    GuessingReport out;
    auto closure = [](const Path &p) { return closure_vertices(p); };

    auto quasi_ratio = [&](const Path &p, const SpaceGraph &g, bool coned, Rational &worst, std::size_t *degenerate,
                           bool all_pairs) {
        std::vector<Rational> arc{Rational(0)};
        for (std::size_t i = 0; i + 1 < p.points.size(); ++i)
            arc.push_back(arc.back() + *step_length(g, p.points[i], p.points[i + 1]));
        const auto n = p.points.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!all_pairs && i != 0 && j != n - 1) continue;
                const Rational len = arc[j] - arc[i];
                Rational d;
                if (coned) {
                    d = map.coned_distance(p.points[i], p.points[j]);
                } else {
                    d = Rational((*map.cusped_row(p.points[j].vertex()))[p.points[i].vertex()]);
                }
                if (d == Rational(0)) {
                    if (len > Rational(0) && degenerate) ++*degenerate;
                    continue;
                }
                worst = max_of(worst, path_ratio(len, d));
            }
    };

    for (const auto &[x, y] : sample.pairs) {
        if (x == y) continue;
        ++out.pairs;
        const auto base = map.extended_pullback(x, y);
        const auto base_set = closure(base);
        for (std::size_t k = 1; k < sample.variants; ++k) {
            const auto other = map.extended_pullback(x, y, TransferMap::Choice{k, 10000});
            const int h = hausdorff(K, base_set, closure(other));
            if (h > out.bigon) {
                out.bigon = h;
                out.bigon_witness = {x, y};
            }
        }
        const auto walk = map.cusped_geodesic(x, y);
        out.closeness = std::max(out.closeness, hausdorff(K, base_set, walk));

        const int depth = std::max(penetration(K, walk).max_depth(), 1);
        if (depth <= map.q()) {
            const auto hat = map.push_forward(edge_path(walk));
            Rational ratio{0};
            quasi_ratio(hat, C, true, ratio, &out.push_degenerate, true);
            ++out.push_samples;
            out.push_distortion = max_of(out.push_distortion, ratio);
            out.push_excess = max_of(out.push_excess, ratio - Rational(depth));
        }

        const auto px = map.pi(Point::at(x));
        const auto py = map.pi(Point::at(y));
        if (!(px == py)) {
            const auto eta = routed_geodesics(C, px, py, 1, true, [&](VertexId v) { return map.coned_row(v); }).front();
            const auto tilde = map.pullback(eta);
            if (is_edge_path(tilde)) {
                Rational pr{0};
                quasi_ratio(tilde, K, false, pr, nullptr, false);
                out.pull_distortion = max_of(out.pull_distortion, pr);
            }
        }
    }
    for (const auto &t : sample.triples) {
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
        ++out.triples;
        const auto main = closure(map.extended_pullback(t[0], t[1]));
        auto rest = closure(map.extended_pullback(t[0], t[2]));
        const auto other = closure(map.extended_pullback(t[2], t[1]));
        rest.insert(rest.end(), other.begin(), other.end());
        const auto dist = bfs_distances(K, rest);
        for (auto v : main) out.thin_union = std::max(out.thin_union, dist[v]);
    }
    return out;
}

} // namespace cusp
