#include "cusp/group.hpp"

#include "cusp/errors.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace cusp {

namespace {

std::int64_t reduce_exponent(const Factor &f, std::int64_t e)
{
    if (f.infinite()) return e;
    const auto n = static_cast<std::int64_t>(f.order);
    return ((e % n) + n) % n;
}

void require_valid(const GroupSpec &spec, const GroupElement &g)
{
    if (!spec.is_valid(g)) throw SpecError("group element is not a normal form for this group");
}

// Appends one syllable to a normal form, merging and cancelling as needed.
void push_syllable(const GroupSpec &spec, std::vector<Syllable> &out, Syllable s)
{
    if (!out.empty() && out.back().factor == s.factor) {
        const auto e = reduce_exponent(spec.factors[s.factor], out.back().exponent + s.exponent);
        if (e == 0)
            out.pop_back();
        else
            out.back().exponent = e;
        return;
    }
    const auto e = reduce_exponent(spec.factors[s.factor], s.exponent);
    if (e != 0) out.push_back({s.factor, e});
}

std::size_t find_root(std::vector<std::size_t> &parent, std::size_t x)
{
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

} // namespace

std::size_t GroupElementHash::operator()(const GroupElement &g) const noexcept
{
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto &s : g.syllables) {
        h ^= std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(s.factor) << 48) ^
                                         static_cast<std::uint64_t>(s.exponent)) +
             0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

std::size_t CosetIdHash::operator()(const CosetId &c) const noexcept
{
    return GroupElementHash{}(c.representative) * 31 + c.peripheral;
}

void GroupSpec::validate() const
{
    if (factors.empty()) throw SpecError("group has no factors");
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto &f = factors[i];
        if (f.symbol.empty()) throw SpecError("factor " + std::to_string(i) + " has an empty symbol");
        if (!f.infinite() && f.order < 2)
            throw SpecError("factor '" + f.symbol + "' has order below 2");
        for (std::size_t j = 0; j < i; ++j)
            if (factors[j].symbol == f.symbol) throw SpecError("duplicate factor symbol '" + f.symbol + "'");
    }
    for (auto i : peripheral_indices)
        if (i >= factors.size()) throw SpecError("peripheral index " + std::to_string(i) + " is not a factor");
    for (const auto &g : gen_set) require_valid(*this, g);
    for (const auto &[i, letters] : peripheral_letters) {
        if (!is_peripheral(i)) throw SpecError("letters given for non-peripheral factor " + std::to_string(i));
        for (const auto &x : letters) {
            require_valid(*this, x);
            if (x.is_identity() || !in_factor(x, i))
                throw SpecError("peripheral letter must be a nontrivial element of factor '" + factors[i].symbol +
                                "'");
        }
    }
}

bool GroupSpec::is_peripheral(std::uint32_t factor) const
{
    return std::find(peripheral_indices.begin(), peripheral_indices.end(), factor) != peripheral_indices.end();
}

std::optional<std::uint32_t> GroupSpec::factor_index(std::string_view symbol) const
{
    for (std::size_t i = 0; i < factors.size(); ++i)
        if (factors[i].symbol == symbol) return static_cast<std::uint32_t>(i);
    return std::nullopt;
}

bool GroupSpec::is_valid(const GroupElement &g) const
{
    for (std::size_t k = 0; k < g.syllables.size(); ++k) {
        const auto &s = g.syllables[k];
        if (s.factor >= factors.size()) return false;
        if (s.exponent == 0) return false;
        if (reduce_exponent(factors[s.factor], s.exponent) != s.exponent) return false;
        if (k > 0 && g.syllables[k - 1].factor == s.factor) return false;
    }
    return true;
}

GroupElement GroupSpec::generator(std::uint32_t factor) const
{
    return generator_power(*this, factor, 1);
}

GroupElement generator_power(const GroupSpec &spec, std::uint32_t factor, std::int64_t exponent)
{
    if (factor >= spec.factors.size()) throw SpecError("factor index out of range");
    GroupElement g;
    push_syllable(spec, g.syllables, {factor, exponent});
    return g;
}

GroupElement multiply(const GroupSpec &spec, const GroupElement &a, const GroupElement &b)
{
    require_valid(spec, a);
    require_valid(spec, b);
    GroupElement out = a;
    for (const auto &s : b.syllables) push_syllable(spec, out.syllables, s);
    return out;
}

GroupElement inverse(const GroupSpec &spec, const GroupElement &a)
{
    require_valid(spec, a);
    GroupElement out;
    for (auto it = a.syllables.rbegin(); it != a.syllables.rend(); ++it)
        push_syllable(spec, out.syllables, {it->factor, -it->exponent});
    return out;
}

GroupElement power(const GroupSpec &spec, const GroupElement &a, std::int64_t n)
{
    GroupElement base = n < 0 ? inverse(spec, a) : a;
    GroupElement out;
    for (std::int64_t k = 0; k < (n < 0 ? -n : n); ++k) out = multiply(spec, out, base);
    return out;
}

bool in_factor(const GroupElement &g, std::uint32_t factor)
{
    return g.syllables.empty() || (g.syllables.size() == 1 && g.syllables[0].factor == factor);
}

CosetId coset_rep(const GroupSpec &spec, const GroupElement &g, std::uint32_t peripheral)
{
    if (!spec.is_peripheral(peripheral))
        throw SpecError("index " + std::to_string(peripheral) + " is not peripheral");
    require_valid(spec, g);
    CosetId c{peripheral, g};
    if (!c.representative.syllables.empty() && c.representative.syllables.back().factor == peripheral)
        c.representative.syllables.pop_back();
    return c;
}

std::vector<GroupElement> symmetrize(const GroupSpec &spec, const std::vector<GroupElement> &gens)
{
    std::vector<GroupElement> out;
    auto add = [&](const GroupElement &g) {
        if (g.is_identity()) return;
        if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    };
    for (const auto &g : gens) {
        require_valid(spec, g);
        add(g);
        add(inverse(spec, g));
    }
    return out;
}

std::vector<GroupElement> alphabet(const GroupSpec &spec)
{
    std::vector<GroupElement> all = spec.gen_set;
    for (const auto &[i, letters] : spec.peripheral_letters) all.insert(all.end(), letters.begin(), letters.end());
    return symmetrize(spec, all);
}

std::vector<GroupElement> factor_generators(const GroupSpec &spec)
{
    std::vector<GroupElement> gens;
    for (std::uint32_t i = 0; i < spec.factors.size(); ++i) gens.push_back(spec.generator(i));
    return symmetrize(spec, gens);
}

std::optional<std::size_t> Ball::find(const GroupElement &g) const
{
    auto it = index.find(g);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

Ball enumerate_ball(const GroupSpec &spec, const std::vector<GroupElement> &gens, int R)
{
    if (R < 0) throw PreconditionError("ball radius must be nonnegative");
    const auto sym = symmetrize(spec, gens);
    Ball ball;
    ball.elements.push_back(GroupElement{});
    ball.length.push_back(0);
    ball.index.emplace(GroupElement{}, 0);
    for (std::size_t head = 0; head < ball.elements.size(); ++head) {
        const int len = ball.length[head];
        if (len == R) continue;
        for (const auto &x : sym) {
            auto next = multiply(spec, ball.elements[head], x);
            if (ball.index.count(next)) continue;
            ball.index.emplace(next, ball.elements.size());
            ball.elements.push_back(std::move(next));
            ball.length.push_back(len + 1);
        }
    }
    return ball;
}

void check_generation(const GroupSpec &spec, int R)
{
    const Ball ball = enumerate_ball(spec, factor_generators(spec), R);
    std::vector<std::size_t> parent(ball.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto unite = [&](std::size_t a, std::size_t b) { parent[find_root(parent, a)] = find_root(parent, b); };
    const auto xs = symmetrize(spec, spec.gen_set);
    std::unordered_map<CosetId, std::size_t, CosetIdHash> coset_anchor;
    for (std::size_t k = 0; k < ball.size(); ++k) {
        const auto &g = ball.elements[k];
        for (const auto &x : xs)
            if (auto j = ball.find(multiply(spec, g, x))) unite(k, *j);
        for (auto i : spec.peripheral_indices) {
            auto [it, fresh] = coset_anchor.emplace(coset_rep(spec, g, i), k);
            if (!fresh) unite(k, it->second);
        }
    }
    const auto root = find_root(parent, 0);
    for (std::size_t k = 0; k < ball.size(); ++k)
        if (find_root(parent, k) != root)
            throw SpecError("X and the peripherals do not reach " + to_string(spec, ball.elements[k]) +
                            " inside the radius-" + std::to_string(R) + " ball");
}

std::string to_string(const GroupSpec &spec, const GroupElement &g)
{
    if (g.is_identity()) return "1";
    std::string out;
    for (const auto &s : g.syllables) {
        if (!out.empty()) out += ' ';
        out += s.factor < spec.factors.size() ? spec.factors[s.factor].symbol : "?" + std::to_string(s.factor);
        if (s.exponent != 1) out += '^' + std::to_string(s.exponent);
    }
    return out;
}

std::string to_string(const GroupSpec &spec, const CosetId &c)
{
    const auto &sym = c.peripheral < spec.factors.size() ? spec.factors[c.peripheral].symbol : "?";
    if (c.representative.is_identity()) return "<" + sym + ">";
    return to_string(spec, c.representative) + " <" + sym + ">";
}

GroupElement parse_element(const GroupSpec &spec, std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string token;
    GroupElement g;
    while (in >> token) {
        if (token == "1") continue;
        std::string sym = token;
        std::int64_t e = 1;
        if (auto caret = token.find('^'); caret != std::string::npos) {
            sym = token.substr(0, caret);
            const auto rest = token.substr(caret + 1);
            std::size_t used = 0;
            try {
                e = std::stoll(rest, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (rest.empty() || used != rest.size()) throw SpecError("bad exponent in '" + token + "'");
        }
        const auto idx = spec.factor_index(sym);
        if (!idx) throw SpecError("unknown symbol '" + sym + "' in element '" + std::string(text) + "'");
        push_syllable(spec, g.syllables, {*idx, e});
    }
    return g;
}

} // namespace cusp
