#pragma once

#include "cusp/coned.hpp"
#include "cusp/group.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace testing {

using namespace cusp;

inline std::vector<GroupElement> elements(const GroupSpec &spec, const std::vector<std::string> &words)
{
    std::vector<GroupElement> out;
    for (const auto &w : words) out.push_back(parse_element(spec, w));
    return out;
}

/// a * b with b of the given order (0 for Z), peripheral ⟨b⟩.
inline GroupSpec free_ab(std::vector<std::string> x = {"a", "b"}, std::vector<std::string> xp = {"b"},
                         std::uint64_t b_order = kInfiniteOrder)
{
    GroupSpec s;
    s.factors = {{"a", kInfiniteOrder}, {"b", b_order}};
    s.peripheral_indices = {1};
    s.gen_set = elements(s, x);
    if (!xp.empty()) s.peripheral_letters[1] = elements(s, xp);
    return s;
}

/// The infinite cyclic group on one letter, with no peripherals.
inline GroupSpec integers()
{
    GroupSpec s;
    s.factors = {{"t", kInfiniteOrder}};
    s.gen_set = elements(s, {"t"});
    return s;
}

// Letter-level words: lower case is the generator, upper case its inverse.
// Finite factors of order n rewrite the inverse letter to n-1 copies.

inline std::string letters_of(const GroupSpec &spec, const GroupElement &g)
{
    std::string w;
    for (const auto &s : g.syllables) {
        const char c = spec.factors[s.factor].symbol[0];
        const char letter = s.exponent > 0 ? c : static_cast<char>(std::toupper(c));
        for (std::int64_t k = 0; k < std::abs(s.exponent); ++k) w += letter;
    }
    return w;
}

/// Rewriting oracle: free cancellation, deletion of g^n, and g^-1 -> g^(n-1).
inline std::string reduce_word(const GroupSpec &spec, const std::string &word)
{
    std::map<char, std::uint64_t> order;
    for (const auto &f : spec.factors) order[f.symbol[0]] = f.order;
    std::string in;
    for (char c : word) {
        const char low = static_cast<char>(std::tolower(c));
        if (std::isupper(c) && order[low] != kInfiniteOrder)
            in.append(order[low] - 1, low);
        else
            in += c;
    }
    std::string out;
    for (char c : in) {
        if (!out.empty() && out.back() != c && std::tolower(out.back()) == std::tolower(c)) {
            out.pop_back();
            continue;
        }
        out += c;
        const auto n = order[static_cast<char>(std::tolower(c))];
        if (n != kInfiniteOrder && out.size() >= n &&
            std::all_of(out.end() - static_cast<long>(n), out.end(), [&](char d) { return d == c; }))
            out.resize(out.size() - n);
    }
    return out;
}

/// Distinct reduced words of length at most R over the letters and their inverses.
inline std::set<std::string> word_ball(const GroupSpec &spec, int R)
{
    std::string alpha;
    for (const auto &f : spec.factors) {
        alpha += f.symbol[0];
        alpha += static_cast<char>(std::toupper(f.symbol[0]));
    }
    std::set<std::string> seen{""};
    std::vector<std::string> frontier{""};
    for (int k = 0; k < R; ++k) {
        std::vector<std::string> next;
        for (const auto &w : frontier)
            for (char c : alpha) {
                auto r = reduce_word(spec, w + c);
                if (seen.insert(r).second) next.push_back(r);
            }
        frontier = std::move(next);
    }
    return seen;
}

/// Plain adjacency-list BFS used as an oracle independent of SpaceGraph.
inline std::vector<int> oracle_bfs(const std::vector<std::vector<int>> &adj, int src)
{
    std::vector<int> dist(adj.size(), -1);
    std::deque<int> q{src};
    dist[src] = 0;
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        for (int v : adj[u])
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
    }
    return dist;
}

/// Horoball over the segment [-w, w] of the integer line, built directly from the edge rule.
/// Vertex (k, d) has index (d * (2w+1) + k + w); the apex, when present, is last.
struct LineHoroball {
    int width;
    int depth;
    int cone;
    std::vector<std::vector<int>> adj;

    LineHoroball(int w, int max_depth, int cone_depth = -1) : width(w), depth(max_depth), cone(cone_depth)
    {
        const int n = 2 * w + 1;
        adj.resize(static_cast<std::size_t>(n * (max_depth + 1) + (cone >= 0 ? 1 : 0)));
        auto link = [&](int u, int v) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        };
        for (int d = 0; d <= max_depth; ++d)
            for (int i = -w; i <= w; ++i) {
                if (d < max_depth) link(id(i, d), id(i, d + 1));
                for (int j = i + 1; j <= w; ++j)
                    if (j - i <= (1LL << d)) link(id(i, d), id(j, d));
                if (cone >= 0 && d >= cone) link(id(i, d), apex());
            }
    }
    int id(int k, int d) const { return d * (2 * width + 1) + k + width; }
    int apex() const { return static_cast<int>(adj.size()) - 1; }
};

inline SpaceGraph line_base(int w)
{
    return build_coned_cayley({integers(), w});
}

inline VertexId element_id(const SpaceGraph &g, const std::string &word)
{
    return g.find_element(parse_element(*g.group(), word)).value();
}

} // namespace testing
