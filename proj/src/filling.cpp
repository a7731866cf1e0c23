#include "cusp/filling.hpp"

#include "cusp/errors.hpp"
#include "cusp/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

namespace cusp {

namespace {

std::uint64_t filled_order(const Factor &f, std::uint64_t n)
{
    if (n == 0) return f.order;
    if (f.infinite()) return n;
    return std::gcd(f.order, n);
}

std::vector<GroupElement> projected_letters(const Filling &f, const std::vector<GroupElement> &letters)
{
    std::vector<GroupElement> out;
    for (const auto &x : letters) {
        const auto y = f.project(x);
        if (!y.is_identity() && std::find(out.begin(), out.end(), y) == out.end()) out.push_back(y);
    }
    return out;
}

// True when x = u d u^-1 in H with d a nontrivial element of one of the given factors.
bool conjugate_into(const GroupSpec &H, const GroupElement &x, const std::set<std::uint32_t> &factors)
{
    const auto &s = x.syllables;
    if (s.empty()) return false;
    std::size_t i = 0, j = s.size() - 1;
    while (i < j && s[i].factor == s[j].factor && GroupElement{{s[i]}} == inverse(H, GroupElement{{s[j]}})) {
        ++i;
        --j;
    }
    return i == j && factors.count(s[i].factor) != 0;
}

std::uint64_t multiplier_lcm(const SubgroupEmbeddingSpec &embed)
{
    std::uint64_t m = 1;
    for (const auto &[j, s] : embed.factor_map) m = std::lcm(m, static_cast<std::uint64_t>(std::abs(s)));
    return m;
}

FillingSpec uniform_filling(const GroupSpec &group, std::uint64_t n)
{
    FillingSpec f;
    for (auto i : group.peripheral_indices) f.kernels[i] = n;
    return f;
}

} // namespace

void FillingSpec::validate(const GroupSpec &group) const
{
    for (const auto &[i, n] : kernels)
        if (!group.is_peripheral(i)) throw SpecError("kernel given for non-peripheral factor " + std::to_string(i));
}

std::uint64_t FillingSpec::kernel(std::uint32_t factor) const
{
    const auto it = kernels.find(factor);
    return it == kernels.end() ? 0 : it->second;
}

GroupElement Filling::project(const GroupElement &g) const
{
    GroupElement out;
    for (const auto &s : g.syllables) {
        const auto j = factor_image.at(s.factor);
        if (!j) continue;
        out = multiply(quotient, out, generator_power(quotient, *j, s.exponent));
    }
    return out;
}

Filling fill(const GroupSpec &group, const FillingSpec &filling)
{
    group.validate();
    filling.validate(group);
    Filling f;
    f.source = group;
    auto &q = f.quotient;
    for (std::uint32_t j = 0; j < group.factors.size(); ++j) {
        const auto order = filled_order(group.factors[j], filling.kernel(j));
        if (order == 1) {
            f.factor_image.push_back(std::nullopt);
            continue;
        }
        f.factor_image.push_back(static_cast<std::uint32_t>(q.factors.size()));
        q.factors.push_back({group.factors[j].symbol, order});
    }
    for (auto i : group.peripheral_indices)
        if (f.factor_image[i]) q.peripheral_indices.push_back(*f.factor_image[i]);
    q.gen_set = projected_letters(f, group.gen_set);
    for (const auto &[i, letters] : group.peripheral_letters) {
        if (!f.factor_image[i]) continue;
        auto projected = projected_letters(f, letters);
        if (!projected.empty()) q.peripheral_letters[*f.factor_image[i]] = std::move(projected);
    }
    q.validate();
    return f;
}

FillingSpec induced_filling(const SubgroupEmbeddingSpec &embed, const FillingSpec &filling)
{
    embed.validate();
    filling.validate(embed.ambient);
    FillingSpec out;
    for (const auto &pe : embed.peripherals) {
        const auto n = filling.kernel(pe.target);
        if (n == 0) continue;
        const auto &f = embed.ambient.factors[pe.target];
        const auto g = f.infinite() ? n : std::gcd(n, f.order);
        const auto s = static_cast<std::uint64_t>(std::abs(embed.factor_map[pe.source].second));
        // D = <x> with x ↦ b^s and N = <b^g>: x^t ∈ N exactly when g divides s t.
        out.kernels[pe.source] = std::lcm(s, g) / s;
    }
    return out;
}

SubgroupEmbeddingSpec quotient_embedding(const SubgroupEmbeddingSpec &embed, const FillingSpec &filling)
{
    const auto G = fill(embed.ambient, filling);
    const auto H = fill(embed.subgroup, induced_filling(embed, filling));
    SubgroupEmbeddingSpec out;
    out.ambient = G.quotient;
    out.subgroup = H.quotient;
    for (std::uint32_t i = 0; i < embed.subgroup.factors.size(); ++i) {
        if (!H.factor_image[i]) continue;
        const auto &[j, s] = embed.factor_map[i];
        if (!G.factor_image[j]) throw SpecError("subgroup factor survives but its ambient factor collapses");
        out.factor_map.push_back({*G.factor_image[j], s});
    }
    for (const auto &pe : embed.peripherals) {
        if (!H.factor_image[pe.source]) continue;
        PeripheralEmbedding q{*H.factor_image[pe.source], *G.factor_image[pe.target], G.project(pe.conjugator), {}};
        for (const auto &x : pe.connector)
            if (const auto y = G.project(x); !y.is_identity()) q.connector.push_back(y);
        out.peripherals.push_back(std::move(q));
    }
    out.validate();
    return out;
}

HFillingVerdict is_H_filling(const SubgroupEmbeddingSpec &embed, const FillingSpec &filling, int R)
{
    embed.validate();
    filling.validate(embed.ambient);
    const auto &G = embed.ambient;
    const auto M = multiplier_lcm(embed);
    const auto ball = enumerate_ball(G, alphabet(G), R);
    HFillingVerdict out;
    for (const auto &g : ball.elements) {
        ++out.conjugators;
        const auto g_inv = inverse(G, g);
        auto conjugate = [&](std::uint32_t j, std::int64_t k) {
            return multiply(G, multiply(G, g, generator_power(G, j, k)), g_inv);
        };
        for (auto j : G.peripheral_indices) {
            const auto n = filling.kernel(j);
            if (n == 0 || !G.factors[j].infinite()) continue;
            bool infinite = false;
            for (std::uint64_t k = 1; k <= M && !infinite; ++k)
                infinite = preimage(embed, conjugate(j, static_cast<std::int64_t>(k))).has_value();
            if (!infinite) continue;
            std::set<std::uint32_t> targets;
            for (const auto &pe : embed.peripherals)
                if (pe.target == j) targets.insert(pe.source);
            const auto x = preimage(embed, conjugate(j, static_cast<std::int64_t>(n)));
            if (!x || !conjugate_into(embed.subgroup, *x, targets)) {
                out.holds = false;
                out.witness = g;
                return out;
            }
        }
    }
    return out;
}

std::size_t homomorphism_violations(const Filling &f, int R)
{
    const auto ball = enumerate_ball(f.source, alphabet(f.source), R);
    std::vector<GroupElement> image;
    image.reserve(ball.size());
    for (const auto &g : ball.elements) image.push_back(f.project(g));
    std::size_t bad = 0;
    for (std::size_t x = 0; x < ball.size(); ++x)
        for (std::size_t y = 0; y < ball.size() && ball.length[x] + ball.length[y] <= R; ++y) {
            const auto xy = multiply(f.source, ball.elements[x], ball.elements[y]);
            if (f.project(xy) != multiply(f.quotient, image[x], image[y])) ++bad;
        }
    return bad;
}

int injectivity_radius(const Filling &f, int R)
{
    const auto ball = enumerate_ball(f.source, alphabet(f.source), R);
    for (std::size_t k = 1; k < ball.size(); ++k)
        if (f.project(ball.elements[k]).is_identity()) return ball.length[k];
    return -1;
}

FillingReport verify_filling_conclusions(const SubgroupEmbeddingSpec &embed, std::uint64_t n, int r, int R,
                                         const FillingChecks &checks)
{
    const auto &G = embed.ambient;
    const auto spec = uniform_filling(G, n);
    const auto f = fill(G, spec);
    FillingReport out;
    out.n = n;
    out.r = r;
    out.R = R;
    out.h_filling = is_H_filling(embed, spec, R);
    out.homomorphism_violations = homomorphism_violations(f, R);
    out.injectivity_radius = injectivity_radius(f, R);

    for (auto j : G.peripheral_indices) {
        const auto period = f.factor_image[j] ? f.quotient.factors[*f.factor_image[j]].order : 1;
        const auto count = period == kInfiniteOrder ? static_cast<std::uint64_t>(2 * R + 1) : period;
        std::set<GroupElement> seen;
        for (std::uint64_t k = 0; k < count; ++k) seen.insert(f.project(generator_power(G, j, static_cast<std::int64_t>(k))));
        if (seen.size() != count) out.peripheral_injective = false;
    }

    const auto small = enumerate_ball(G, alphabet(G), checks.set_radius);
    std::set<GroupElement> images;
    for (const auto &g : small.elements) images.insert(f.project(g));
    out.set_injective = images.size() == small.size();

    if (out.h_filling.holds) {
        const auto ball = enumerate_ball(G, alphabet(G), R);
        std::unordered_set<GroupElement, GroupElementHash> subgroup_image;
        for (const auto &g : ball.elements)
            if (preimage(embed, g)) subgroup_image.insert(f.project(g));
        for (std::size_t k = 0; k < ball.size() && ball.length[k] <= checks.separation_radius; ++k) {
            if (preimage(embed, ball.elements[k])) continue;
            ++out.separation_checked;
            if (subgroup_image.count(f.project(ball.elements[k]))) {
                if (!out.separation_witness) out.separation_witness = ball.elements[k];
                ++out.separation_violations;
            }
        }
    }

    const auto quotient = quotient_embedding(embed, spec);
    const auto hball = enumerate_ball(quotient.subgroup, alphabet(quotient.subgroup), R);
    std::unordered_set<GroupElement, GroupElementHash> mapped;
    for (const auto &h : hball.elements) mapped.insert(cusp::embed(quotient, h));
    out.subgroup_injective = mapped.size() == hball.size();

    const SubgroupEmbedding e(quotient, r, R, checks.tamper);
    out.quotient_cone_edges = check_cone_edges(e.target().cusped());
    if (!out.quotient_cone_edges.pass()) {
        const auto [apex, v] = out.quotient_cone_edges.missing.front();
        out.missing_cone_edge = {vertex_name(e.target().cusped(), apex), vertex_name(e.target().cusped(), v)};
    }
    out.delta = estimate_delta(e.target().cusped(), checks.delta_budget, checks.seed).delta;
    out.lambda = measure_quasiconvexity(e.target().cusped(), e.cusped_image()).lambda;
    return out;
}

std::vector<FillingReport> verify_fillings(const SubgroupEmbeddingSpec &embed, const std::vector<std::uint64_t> &ns,
                                           int r, int R, const FillingChecks &checks, unsigned jobs)
{
    std::vector<FillingReport> reports(ns.size());
    parallel_for(ns.size(), jobs, [&](std::size_t k) { reports[k] = verify_filling_conclusions(embed, ns[k], r, R, checks); });
    return reports;
}

std::vector<SweepRow> sweep(const SubgroupEmbeddingSpec &embed, const std::vector<std::uint64_t> &ns, int r, int R,
                            const FillingChecks &checks, unsigned jobs)
{
    std::vector<SweepRow> rows;
    for (const auto &rep : verify_fillings(embed, ns, r, R, checks, jobs))
        rows.push_back({rep.n, rep.r, rep.R, rep.delta, rep.lambda, rep.injectivity_radius, rep.h_filling.holds});
    return rows;
}

} // namespace cusp
