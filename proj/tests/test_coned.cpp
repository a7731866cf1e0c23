#include "doctest.h"
#include "support.hpp"

#include "cusp/errors.hpp"

using namespace cusp;
using namespace testing;

namespace {

GroupSpec tree_spec()
{
    GroupSpec s = free_ab({"a", "b"}, {});
    s.peripheral_indices.clear();
    return s;
}

VertexId apex_p(const SpaceGraph &g)
{
    return g.find_apex(CosetId{1, {}}).value();
}

/// X = {a} together with b^k for 1 <= k <= R.
GroupSpec pathological(int R)
{
    std::vector<std::string> x{"a"};
    for (int k = 1; k <= R; ++k) x.push_back("b^" + std::to_string(k));
    return free_ab(x);
}

std::string strip_trailing_b(std::string w)
{
    while (!w.empty() && (w.back() == 'b' || w.back() == 'B')) w.pop_back();
    return w;
}

} // namespace

TEST_CASE("coned-off Cayley graph vertex set")
{
    const auto s = free_ab();
    const auto g = build_coned_cayley({s, 1});
    CHECK(g.size() == 8);
    std::set<std::string> names;
    for (VertexId v = 0; v < g.size(); ++v) names.insert(vertex_name(g, v));
    CHECK(names == std::set<std::string>{"1", "a", "a^-1", "b", "b^-1", "apex(<b>)", "apex(a <b>)", "apex(a^-1 <b>)"});

    for (int R = 1; R <= 4; ++R) {
        const auto words = word_ball(s, R);
        std::set<std::string> cosets;
        for (const auto &w : words) cosets.insert(strip_trailing_b(w));
        const auto h = build_coned_cayley({s, R});
        REQUIRE(h.size() == words.size() + cosets.size());
        const auto P = apex_p(h);
        for (VertexId v = 0; v < h.size(); ++v) {
            const auto &x = h.vertex(v);
            if (x.kind == VertexKind::element) REQUIRE(h.adjacent(P, v) == in_factor(x.element, 1));
        }
    }
    const auto wide = build_coned_cayley({s, 9});
    CHECK(bfs_distances(wide, wide.basepoint())[element_id(wide, "b^9")] == 2);
}

TEST_CASE("cusped space")
{
    const auto s = free_ab();
    const auto g = build_cusped({s, 3, 8});
    const auto ball = enumerate_ball(s, alphabet(s), 8);
    std::size_t depth0 = 0;
    for (VertexId v = 0; v < g.size(); ++v)
        if (g.vertex(v).kind == VertexKind::element) {
            ++depth0;
            REQUIRE(ball.contains(g.vertex(v).element));
        }
    CHECK(depth0 == ball.size());
    CHECK(g.horoballs().size() == 6561);
    CHECK(bfs_distances(g, g.basepoint())[element_id(g, "b^8")] == 6);

    const auto two = build_cusped({s, 2, 4});
    CHECK(bfs_distances(two, two.basepoint())[apex_p(two)] == 3);

    CHECK_THROWS_AS(build_cusped({free_ab({"a", "b"}, {}), 2, 3}), SpecError);
    CHECK_THROWS_AS(build_cusped({s, 0, 3}), PreconditionError);
}

TEST_CASE("cusped distances agree with the horoball closed form inside one coset")
{
    const auto g = build_cusped({free_ab(), 3, 8});
    const auto h = *g.horoball_for_coset(CosetId{1, {}});
    const auto &hb = g.horoballs()[h];
    const auto one = g.basepoint();
    const auto d = bfs_distances(g, one);
    for (auto v : hb.base) {
        if (!certified(g, one, v)) continue;
        const auto route = horoball_route(hb, *horoball_position(g, h, one), *horoball_position(g, h, v));
        REQUIRE(route.length == d[v]);
    }
}

TEST_CASE("cyclic word length")
{
    CHECK(cyclic_word_length(kInfiniteOrder, {1}, -7) == 7);
    CHECK(cyclic_word_length(kInfiniteOrder, {2, 3}, 7) == 3);
    CHECK(cyclic_word_length(5, {1}, 3) == 2);
    CHECK(cyclic_word_length(5, {1}, 5) == 0);
}

TEST_CASE("angles in the coned-off Cayley graph")
{
    const auto g = build_coned_cayley({free_ab(), 9});
    const auto P = apex_p(g);
    const auto b = element_id(g, "b");
    CHECK(angle_at(g, P, b, b, 5) == AngleValue::exact(0));
    CHECK(angle_at(g, P, b, element_id(g, "b^3"), 10) == AngleValue::exact(2));
    CHECK_THROWS_AS(angle_at(g, P, b, element_id(g, "a"), 5), PreconditionError);
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j) {
            const auto x = element_id(g, "b^" + std::to_string(i));
            const auto y = element_id(g, "b^" + std::to_string(j));
            REQUIRE(angle_at(g, P, x, y, 12) == AngleValue::exact(static_cast<std::uint32_t>(std::abs(i - j))));
        }

    const auto h = build_coned_cayley({free_ab({"a"}), 6});
    const auto Q = apex_p(h);
    for (int c = 1; c <= safe_cutoff(h, h.basepoint(), element_id(h, "b")); ++c)
        REQUIRE(angle_at(h, Q, h.basepoint(), element_id(h, "b"), c) == AngleValue::at_least(static_cast<std::uint32_t>(c)));

    const Path c1 = edge_path({P, b, element_id(g, "b a")});
    const Path c2 = edge_path({P, element_id(g, "b^3")});
    CHECK(angle_between_paths(g, P, c1, c2, 10) == AngleValue::exact(2));
}

TEST_CASE("angle is a metric on the probed region")
{
    const auto g = build_coned_cayley({free_ab(), 8});
    const auto P = apex_p(g);
    std::vector<VertexId> link;
    for (const auto &a : g.neighbors(P))
        if (2 * g.base_distance(a.target) <= 8) link.push_back(a.target);
    for (auto x : link)
        for (auto y : link) {
            const auto xy = angle_at(g, P, x, y, 8);
            REQUIRE(xy == angle_at(g, P, y, x, 8));
            for (auto z : link) {
                const auto xz = angle_at(g, P, x, z, 8);
                const auto zy = angle_at(g, P, z, y, 8);
                if (xy.is_exact() && xz.is_exact() && zy.is_exact()) REQUIRE(xy.value <= xz.value + zy.value);
            }
        }
}

TEST_CASE("horoball angle")
{
    const auto g = build_cusped({free_ab(), 3, 8});
    const int h = *g.horoball_for_coset(CosetId{1, {}});
    const auto one = g.basepoint();
    CHECK(horoball_angle(g, h, one, one, 4) == AngleValue::exact(0));
    CHECK(horoball_angle(g, h, one, element_id(g, "b^2"), 4) == AngleValue::exact(2));
    const auto far = element_id(g, "b^6");
    CHECK(horoball_angle(g, h, one, far, 10) == AngleValue::exact(6));
    CHECK(bfs_distances(g, one)[far] == 5);
    CHECK_THROWS_AS(horoball_angle(g, h, one, element_id(g, "a"), 4), PreconditionError);
}

TEST_CASE("penetration")
{
    const auto g = build_cusped({free_ab(), 3, 8});
    const auto one = g.basepoint();
    const auto P = apex_p(g);
    const int h = g.horoball_of(P);
    CHECK(penetration(g, edge_path({one, element_id(g, "a")})).trivial());
    const auto walk = vertex_sequence(horoball_geodesic(g, h, one, element_id(g, "b^8")));
    const auto rep = penetration(g, walk);
    CHECK(rep.depth.at(h) == 2);
    const auto up = vertex_sequence(horoball_geodesic(g, h, one, P));
    CHECK(penetration(g, up).max_depth() == 4);
}

TEST_CASE("regularize")
{
    const auto g = build_cusped({free_ab(), 3, 8});
    const auto one = g.basepoint();
    const int h = *g.horoball_for_coset(CosetId{1, {}});
    const auto &hb = g.horoballs()[h];
    auto at = [&](int k, int d) {
        return hb.layer[d][*hb.base_index(element_id(g, k == 0 ? "1" : "b^" + std::to_string(k)))];
    };
    const std::vector<VertexId> flat{one, at(0, 1), at(2, 1), at(4, 1), at(6, 1), at(8, 1), element_id(g, "b^8")};
    REQUIRE(is_valid_path(g, edge_path(flat)));
    const auto fixed = regularize(g, flat);
    CHECK(fixed.size() == flat.size());
    CHECK(fixed.front() == flat.front());
    CHECK(fixed.back() == flat.back());
    CHECK(fixed[2] == at(0, 2));
    CHECK(has_regular_shape(g, h, fixed));
    CHECK(hausdorff(g, flat, fixed) <= 5);

    const auto geo = vertex_sequence(horoball_geodesic(g, h, one, element_id(g, "b^8")));
    CHECK(regularize(g, geo) == geo);
    CHECK_THROWS_AS(regularize(g, std::vector<VertexId>{one, element_id(g, "a"), one}), PreconditionError);

    for (auto x : certified_region(g)) {
        const auto dx = bfs_distances(g, x);
        for (auto y : certified_region(g)) {
            if (!certified(g, x, y) || x >= y) continue;
            const auto set = enumerate_geodesics(g, y, x, dx, 2000);
            for (const auto &p : set.paths) {
                const auto r = regularize(g, p);
                REQUIRE(r.size() == p.size());
                REQUIRE(r.front() == y);
                REQUIRE(r.back() == x);
                REQUIRE(hausdorff(g, p, r) <= 5);
            }
        }
    }
}

TEST_CASE("fineness probe")
{
    {
        const auto g = build_coned_cayley({free_ab(), 6});
        const auto P = apex_p(g);
        const auto probe = fineness_probe(g, P, 3, g.basepoint(), 3);
        CHECK(probe.region_size == 7);
        for (const auto &[x, y] : probe.pairs) {
            const auto i = g.vertex(x).element.syllables;
            const auto j = g.vertex(y).element.syllables;
            const auto ei = i.empty() ? 0 : i[0].exponent;
            const auto ej = j.empty() ? 0 : j[0].exponent;
            REQUIRE(std::abs(ei - ej) <= 3);
        }
        CHECK(fineness_probe(g, P, 2, g.basepoint()).pairs.size() == 5);
    }
    {
        const auto g = build_coned_cayley({free_ab({"a"}), 6});
        const auto probe = fineness_probe(g, apex_p(g), 3, g.basepoint(), 3);
        for (const auto &[x, y] : probe.pairs) REQUIRE(x == y);
    }
    // With X containing b^k for k <= R, angle-2 neighbours of 1 are b^j for |j| <= 2R.
    for (int R = 2; R <= 4; ++R) {
        const auto g = build_coned_cayley({pathological(R), R});
        CHECK(fineness_probe(g, apex_p(g), 2, g.basepoint()).pairs.size() == static_cast<std::size_t>(4 * R + 1));
    }
    const auto g = build_coned_cayley({free_ab(), 3});
    CHECK_THROWS_AS(fineness_probe(g, g.basepoint(), 2, g.basepoint()), PreconditionError);
}

TEST_CASE("relative distance in the peripheral subgroup")
{
    const auto g = build_coned_cayley({free_ab({"a"}), 6});
    const auto one = g.basepoint();
    const auto b = element_id(g, "b");
    CHECK(hat_distance(g, 1, b, b, 4) == AngleValue::exact(0));
    for (int c = 1; c <= safe_cutoff(g, one, b); ++c)
        REQUIRE(hat_distance(g, 1, one, b, c) == AngleValue::at_least(static_cast<std::uint32_t>(c)));
    CHECK_THROWS_AS(hat_distance(g, 1, one, element_id(g, "a"), 4), PreconditionError);
    CHECK_THROWS_AS(hat_distance(g, 0, one, b, 4), SpecError);

    const auto h = build_coned_cayley({free_ab(), 6});
    CHECK(hat_distance(h, 1, h.basepoint(), element_id(h, "b^3"), 8) == AngleValue::exact(3));
}

TEST_CASE("slimness")
{
    const auto tree = build_coned_cayley({tree_spec(), 6});
    const auto est = estimate_delta(tree, 100000);
    CHECK(est.delta == 0);
    CHECK(est.exhaustive);
    CHECK(est.triples > 0);

    const auto g = build_cusped({free_ab(), 3, 6});
    const auto sampled = estimate_delta(g, 50, 7);
    CHECK_FALSE(sampled.exhaustive);
    CHECK(sampled.triples == 50);
    CHECK(sampled.delta <= estimate_delta(g, 1000000).delta);
    CHECK(estimate_delta(g, 50, 7).delta == sampled.delta);
    CHECK_THROWS_AS(estimate_delta(g, 0), PreconditionError);
}

TEST_CASE("quasiconvexity")
{
    const auto g = build_cusped({free_ab(), 3, 6});
    std::vector<VertexId> all(g.size());
    for (VertexId v = 0; v < g.size(); ++v) all[v] = v;
    CHECK(measure_quasiconvexity(g, all).lambda == 0);

    std::vector<VertexId> axis;
    for (VertexId v = 0; v < g.size(); ++v)
        if (g.vertex(v).kind == VertexKind::element && in_factor(g.vertex(v).element, 0)) axis.push_back(v);
    const auto q = measure_quasiconvexity(g, axis);
    CHECK(q.lambda == 0);
    CHECK(q.pairs > 0);
    CHECK_THROWS_AS(measure_quasiconvexity(g, {}), PreconditionError);
}

TEST_CASE("convexity of deep horoballs")
{
    const auto g = build_cusped({free_ab(), 5, 8});
    const int delta = estimate_delta(g, 1000000).delta;
    const int h = *g.horoball_for_coset(CosetId{1, {}});
    const auto res = check_convexity(g, h, delta + 1, delta);
    CHECK(res.pass);
    CHECK(res.pairs > 0);
    CHECK_THROWS_AS(check_convexity(g, h, 0, delta), PreconditionError);
}
