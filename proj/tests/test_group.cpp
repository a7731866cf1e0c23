#include "doctest.h"
#include "support.hpp"

#include "cusp/errors.hpp"

using namespace cusp;
using namespace testing;

TEST_CASE("multiply reduces normal forms")
{
    const auto s = free_ab();
    const auto a = parse_element(s, "a");
    CHECK(multiply(s, a, inverse(s, a)).is_identity());
    CHECK(multiply(s, parse_element(s, "a b"), parse_element(s, "b^-1 a")) == parse_element(s, "a^2"));

    const auto z5 = free_ab({"a", "b"}, {"b"}, 5);
    CHECK(multiply(z5, parse_element(z5, "b^3"), parse_element(z5, "b^4")) == parse_element(z5, "b^2"));
    CHECK(to_string(z5, parse_element(z5, "b^-1")) == "b^4");
}

TEST_CASE("multiply rejects elements of another spec")
{
    const auto z5 = free_ab({"a", "b"}, {"b"}, 5);
    GroupElement big{{{1, 7}}};
    CHECK_THROWS_AS(multiply(z5, big, big), SpecError);
    GroupElement stray{{{4, 1}}};
    CHECK_THROWS_AS(multiply(z5, stray, GroupElement{}), SpecError);
}

TEST_CASE("multiply agrees with the rewriting oracle and is associative")
{
    for (std::uint64_t order : {kInfiniteOrder, std::uint64_t{3}, std::uint64_t{5}}) {
        const auto s = free_ab({"a", "b"}, {"b"}, order);
        const auto ball = enumerate_ball(s, factor_generators(s), 3);
        for (const auto &x : ball.elements)
            for (const auto &y : ball.elements) {
                const auto xy = multiply(s, x, y);
                REQUIRE(letters_of(s, xy) == reduce_word(s, letters_of(s, x) + letters_of(s, y)));
            }
        const auto small = enumerate_ball(s, factor_generators(s), 2);
        for (const auto &x : small.elements)
            for (const auto &y : small.elements)
                for (const auto &z : small.elements)
                    REQUIRE(multiply(s, x, multiply(s, y, z)) == multiply(s, multiply(s, x, y), z));
    }
}

TEST_CASE("coset representatives")
{
    const auto s = free_ab();
    CHECK(coset_rep(s, parse_element(s, "b^3"), 1) == CosetId{1, {}});
    CHECK(coset_rep(s, parse_element(s, "a b^2"), 1) == CosetId{1, parse_element(s, "a")});
    CHECK(coset_rep(s, GroupElement{}, 1) == CosetId{1, {}});
    CHECK_THROWS_AS(coset_rep(s, GroupElement{}, 0), SpecError);
    CHECK(to_string(s, coset_rep(s, parse_element(s, "a b^2"), 1)) == "a <b>");

    const auto ball = enumerate_ball(s, factor_generators(s), 3);
    for (const auto &g : ball.elements)
        for (int k = -3; k <= 3; ++k)
            REQUIRE(coset_rep(s, multiply(s, g, generator_power(s, 1, k)), 1) == coset_rep(s, g, 1));
}

TEST_CASE("ball sizes match brute-force word enumeration")
{
    const auto s = free_ab();
    CHECK(enumerate_ball(s, s.gen_set, 1).size() == 5);
    CHECK(enumerate_ball(s, s.gen_set, 2).size() == 17);
    for (int R = 0; R <= 5; ++R) REQUIRE(enumerate_ball(s, s.gen_set, R).size() == word_ball(s, R).size());
    const auto ball = enumerate_ball(s, s.gen_set, 5);
    for (int k = 1; k <= 5; ++k) {
        const auto sphere = std::count(ball.length.begin(), ball.length.end(), k);
        int expect = 4;
        for (int j = 1; j < k; ++j) expect *= 3;
        REQUIRE(sphere == expect);
    }

    const auto z3 = free_ab({"a", "b"}, {"b"}, 3);
    const auto b1 = enumerate_ball(z3, z3.gen_set, 1);
    CHECK(b1.size() == 5);
    CHECK(b1.contains(parse_element(z3, "b^2")));
    for (int R = 0; R <= 5; ++R) REQUIRE(enumerate_ball(z3, z3.gen_set, R).size() == word_ball(z3, R).size());
}

TEST_CASE("spec validation")
{
    auto s = free_ab();
    CHECK_NOTHROW(s.validate());
    s.peripheral_indices = {4};
    CHECK_THROWS_AS(s.validate(), SpecError);

    auto bad = free_ab();
    bad.peripheral_letters[1] = {parse_element(bad, "a")};
    CHECK_THROWS_AS(bad.validate(), SpecError);

    CHECK_NOTHROW(check_generation(free_ab({"a"}, {"b"}), 3));
    GroupSpec lone = free_ab({"a"}, {"b"});
    lone.peripheral_indices.clear();
    lone.peripheral_letters.clear();
    CHECK_THROWS_AS(check_generation(lone, 3), SpecError);
}

TEST_CASE("parse and print round trip")
{
    const auto s = free_ab();
    for (const auto &g : enumerate_ball(s, s.gen_set, 3).elements) REQUIRE(parse_element(s, to_string(s, g)) == g);
    CHECK_THROWS_AS(parse_element(s, "c"), SpecError);
    CHECK_THROWS_AS(parse_element(s, "a^x"), SpecError);
}
