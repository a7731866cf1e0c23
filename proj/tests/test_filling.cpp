#include "doctest.h"
#include "support.hpp"

#include "cusp/errors.hpp"
#include "cusp/filling.hpp"

using namespace cusp;
using namespace testing;

namespace {

FillingSpec kernel_b(std::uint64_t n)
{
    FillingSpec f;
    f.kernels[1] = n;
    return f;
}

/// Element spelled by a letter word: lower case a generator, upper case its inverse.
GroupElement from_letters(const GroupSpec &spec, const std::string &w)
{
    GroupElement g;
    for (char c : w) {
        const auto i = spec.factor_index(std::string(1, static_cast<char>(std::tolower(c)))).value();
        g = multiply(spec, g, generator_power(spec, i, std::isupper(c) ? -1 : 1));
    }
    return g;
}

/// <a> inside F(a, b), meeting no conjugate of <b>.
SubgroupEmbeddingSpec a_only()
{
    auto e = even_b_subgroup();
    e.subgroup.factors = {{"a", kInfiniteOrder}};
    e.subgroup.peripheral_indices.clear();
    e.subgroup.peripheral_letters.clear();
    e.subgroup.gen_set = {parse_element(e.subgroup, "a")};
    e.factor_map = {{0, 1}};
    e.peripherals.clear();
    return e;
}

} // namespace

TEST_CASE("filling quotients")
{
    const auto G = free_ab();
    const auto f = fill(G, kernel_b(5));
    CHECK(f.quotient.factors[1].order == 5);
    CHECK(f.quotient.peripheral_indices == std::vector<std::uint32_t>{1});
    CHECK(f.project(parse_element(G, "b^7")) == parse_element(f.quotient, "b^2"));
    CHECK(f.project(parse_element(G, "a b^5 a")) == parse_element(f.quotient, "a^2"));

    const auto trivial = fill(G, {});
    CHECK(trivial.quotient == G);
    for (const auto &w : word_ball(G, 4)) REQUIRE(trivial.project(from_letters(G, w)) == from_letters(G, w));

    const auto collapsed = fill(G, kernel_b(1));
    CHECK(collapsed.quotient.factors.size() == 1);
    CHECK(collapsed.quotient.peripheral_indices.empty());
    CHECK(collapsed.project(parse_element(G, "a b a")) == parse_element(collapsed.quotient, "a^2"));

    const auto twice = fill(free_ab({"a", "b"}, {"b"}, 6), kernel_b(4));
    CHECK(twice.quotient.factors[1].order == 2);

    FillingSpec bad;
    bad.kernels[0] = 3;
    CHECK_THROWS_AS(fill(G, bad), SpecError);
}

TEST_CASE("projection agrees with word rewriting")
{
    const auto G = free_ab();
    for (std::uint64_t n : {2, 3, 5}) {
        const auto f = fill(G, kernel_b(n));
        const auto Q = free_ab({"a", "b"}, {"b"}, n);
        for (const auto &w : word_ball(G, 6)) {
            const auto reduced = reduce_word(Q, w);
            REQUIRE(f.project(from_letters(G, w)) == from_letters(f.quotient, reduced));
            REQUIRE(f.project(from_letters(G, w)).is_identity() == reduced.empty());
        }
        CHECK(homomorphism_violations(f, 6) == 0);
    }
}

TEST_CASE("induced filling")
{
    const auto e = even_b_subgroup();
    const auto six = induced_filling(e, kernel_b(6));
    CHECK(six.kernel(1) == 3);
    const auto bar_h = fill(e.subgroup, six).quotient;
    CHECK(bar_h.factors[0].order == kInfiniteOrder);
    CHECK(bar_h.factors[1].order == 3);
    CHECK(induced_filling(e, kernel_b(5)).kernel(1) == 5);
    CHECK(induced_filling(e, {}).kernels.empty());

    const auto q = quotient_embedding(e, kernel_b(6));
    CHECK(embed(q, parse_element(q.subgroup, "c^2 a")) == parse_element(q.ambient, "b^4 a"));
    CHECK(parse_element(q.subgroup, "c^3").is_identity());
    CHECK_FALSE(embed(q, parse_element(q.subgroup, "c^2")).is_identity());
}

TEST_CASE("H-filling predicate")
{
    const auto e = even_b_subgroup();
    CHECK(is_H_filling(e, kernel_b(6), 3).holds);
    const auto five = is_H_filling(e, kernel_b(5), 3);
    CHECK_FALSE(five.holds);
    REQUIRE(five.witness.has_value());
    CHECK(five.witness->is_identity());
    CHECK(is_H_filling(a_only(), kernel_b(5), 3).holds);
    CHECK(is_H_filling(e, {}, 3).holds);
}

TEST_CASE("quotient cusped space")
{
    const auto f = fill(free_ab(), kernel_b(5));
    const auto K = build_cusped({f.quotient, 3, 4});
    const auto h = *K.horoball_for_coset(CosetId{1, {}});
    const auto &hb = K.horoballs()[h];
    CHECK(hb.base.size() == 5);
    for (auto v : hb.base) {
        int cayley = 0;
        for (const auto &a : K.neighbors(v))
            if (std::find(hb.base.begin(), hb.base.end(), a.target) != hb.base.end()) ++cayley;
        REQUIRE(cayley == 2);
    }
    CHECK(bfs_distances(K, K.basepoint())[element_id(K, "b^2")] <= 2);

    std::vector<int> deltas;
    for (std::uint64_t n : {5, 7, 9}) {
        const auto Kn = build_cusped({fill(free_ab(), kernel_b(n)).quotient, 3, 5});
        deltas.push_back(estimate_delta(Kn, 1500).delta);
    }
    CHECK(*std::max_element(deltas.begin(), deltas.end()) - *std::min_element(deltas.begin(), deltas.end()) <= 2);
}

TEST_CASE("injectivity radius grows with n")
{
    int previous = 0;
    for (std::uint64_t n = 2; n <= 8; ++n) {
        const int radius = injectivity_radius(fill(free_ab(), kernel_b(n)), 9);
        CHECK(radius == static_cast<int>(n));
        CHECK(radius >= previous);
        previous = radius;
    }
    CHECK(injectivity_radius(fill(free_ab(), {}), 6) == -1);
}

TEST_CASE("filling conclusions")
{
    const auto e = even_b_subgroup();
    FillingChecks checks;
    checks.delta_budget = 500;

    // The radius-2 ball over {a, b, b^2} holds b^-4 .. b^4, so it injects only once n > 8.
    CHECK_FALSE(verify_filling_conclusions(e, 5, 3, 4, checks).set_injective);

    const auto odd = verify_filling_conclusions(e, 9, 3, 4, checks);
    CHECK_FALSE(odd.h_filling.holds);
    CHECK(odd.homomorphism_violations == 0);
    CHECK(odd.peripheral_injective);
    CHECK(odd.set_injective);
    CHECK(odd.separation_checked == 0);
    CHECK(odd.subgroup_injective);

    // For odd n the element b lands in the image of H: b = b^(n+1) with n+1 even.
    const auto f = fill(e.ambient, kernel_b(5));
    CHECK(f.project(parse_element(e.ambient, "b")) == f.project(parse_element(e.ambient, "b^6")));
    CHECK(preimage(e, parse_element(e.ambient, "b^6")).has_value());

    const auto even = verify_filling_conclusions(e, 10, 3, 4, checks);
    CHECK(even.h_filling.holds);
    CHECK(even.separation_checked > 0);
    CHECK(even.separation_violations == 0);
    CHECK(even.subgroup_injective);
    CHECK(even.peripheral_injective);
    CHECK(even.set_injective);

    const auto none = verify_filling_conclusions(e, 0, 3, 4, checks);
    CHECK(none.h_filling.holds);
    CHECK(none.separation_violations == 0);
    CHECK(none.set_injective);
    CHECK(none.subgroup_injective);
    CHECK(none.injectivity_radius == -1);
}

TEST_CASE("sweep")
{
    FillingChecks checks;
    checks.delta_budget = 300;
    const auto rows = sweep(even_b_subgroup(), {5, 6, 7}, 3, 4, checks, 3);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].n == 5);
    CHECK_FALSE(rows[0].h_filling);
    CHECK(rows[1].h_filling);
    CHECK(rows[2].n == 7);
    CHECK(sweep(even_b_subgroup(), {}, 3, 4).empty());
}
