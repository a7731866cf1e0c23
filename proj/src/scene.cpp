#include "cusp/scene.hpp"

#include "cusp/coned.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace cusp {

namespace {

using nlohmann::json;

bool known_suite(const std::string &name)
{
    const auto all = available_suites();
    return std::find(all.begin(), all.end(), name) != all.end();
}

std::string suite_list()
{
    std::string out;
    for (const auto &s : available_suites()) out += (out.empty() ? "" : ", ") + s;
    return out;
}

std::string at(const std::string &path, const std::string &key)
{
    return path.empty() ? key : path + "." + key;
}

std::string at(const std::string &path, std::size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

/// Object access that rejects unknown keys.
class Fields {
public:
    Fields(const json &j, std::string path, std::set<std::string> allowed) : j_(j), path_(std::move(path))
    {
        if (!j.is_object()) throw SchemaError(path_.empty() ? "(root)" : path_, "expected an object");
        for (const auto &[k, v] : j.items())
            if (!allowed.count(k)) throw SchemaError(at(path_, k), "unknown field");
    }

    bool has(const std::string &k) const { return j_.contains(k) && !j_.at(k).is_null(); }
    const json &get(const std::string &k) const
    {
        if (!has(k)) throw SchemaError(at(path_, k), "required field is missing");
        return j_.at(k);
    }
    std::string path(const std::string &k) const { return at(path_, k); }

    std::string string(const std::string &k) const
    {
        const auto &v = get(k);
        if (!v.is_string()) throw SchemaError(path(k), "expected a string");
        return v.get<std::string>();
    }
    long long integer(const std::string &k, long long lo, long long hi) const
    {
        return checked_integer(get(k), path(k), lo, hi);
    }
    long long integer(const std::string &k, long long lo, long long hi, long long fallback) const
    {
        return has(k) ? integer(k, lo, hi) : fallback;
    }
    bool boolean(const std::string &k, bool fallback) const
    {
        if (!has(k)) return fallback;
        if (!get(k).is_boolean()) throw SchemaError(path(k), "expected true or false");
        return get(k).get<bool>();
    }
    const json &array(const std::string &k) const
    {
        const auto &v = get(k);
        if (!v.is_array()) throw SchemaError(path(k), "expected an array");
        return v;
    }

    static long long checked_integer(const json &v, const std::string &path, long long lo, long long hi)
    {
        if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
        const auto x = v.get<long long>();
        if (x < lo || x > hi)
            throw SchemaError(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return x;
    }

private:
    const json &j_;
    std::string path_;
};

GroupElement element_at(const GroupSpec &spec, const json &v, const std::string &path)
{
    if (!v.is_string()) throw SchemaError(path, "expected a word such as \"a b^-2\"");
    try {
        return parse_element(spec, v.get<std::string>());
    } catch (const SpecError &e) {
        throw SchemaError(path, e.what());
    }
}

std::uint32_t factor_at(const GroupSpec &spec, const json &v, const std::string &path)
{
    if (!v.is_string()) throw SchemaError(path, "expected a factor symbol");
    const auto i = spec.factor_index(v.get<std::string>());
    if (!i) throw SchemaError(path, "undeclared factor '" + v.get<std::string>() + "'");
    return *i;
}

GroupSpec parse_group(const json &j, const std::string &path)
{
    const Fields f(j, path, {"factors", "generators", "peripherals"});
    GroupSpec g;
    const auto &factors = f.array("factors");
    if (factors.empty()) throw SchemaError(f.path("factors"), "at least one factor is required");
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto p = at(f.path("factors"), i);
        const Fields ff(factors[i], p, {"symbol", "order"});
        Factor factor{ff.string("symbol"), kInfiniteOrder};
        if (factor.symbol.empty() || factor.symbol.find_first_of(" ^") != std::string::npos)
            throw SchemaError(at(p, "symbol"), "symbols are nonempty and contain no spaces or '^'");
        const auto &order = ff.get("order");
        if (order.is_string()) {
            if (order.get<std::string>() != "inf") throw SchemaError(at(p, "order"), "expected \"inf\" or an integer >= 2");
        } else {
            factor.order = static_cast<std::uint64_t>(Fields::checked_integer(order, at(p, "order"), 2, 1 << 20));
        }
        for (const auto &prev : g.factors)
            if (prev.symbol == factor.symbol) throw SchemaError(at(p, "symbol"), "duplicate symbol '" + factor.symbol + "'");
        g.factors.push_back(factor);
    }
    const auto &gens = f.array("generators");
    for (std::size_t i = 0; i < gens.size(); ++i) g.gen_set.push_back(element_at(g, gens[i], at(f.path("generators"), i)));
    if (f.has("peripherals")) {
        const auto &ps = f.array("peripherals");
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const auto p = at(f.path("peripherals"), i);
            const Fields pf(ps[i], p, {"factor", "letters"});
            const auto idx = factor_at(g, pf.get("factor"), at(p, "factor"));
            if (g.is_peripheral(idx)) throw SchemaError(at(p, "factor"), "factor listed twice");
            g.peripheral_indices.push_back(idx);
            if (pf.has("letters")) {
                const auto &ls = pf.array("letters");
                auto &letters = g.peripheral_letters[idx];
                for (std::size_t k = 0; k < ls.size(); ++k) {
                    const auto x = element_at(g, ls[k], at(at(p, "letters"), k));
                    if (x.is_identity() || !in_factor(x, idx))
                        throw SchemaError(at(at(p, "letters"), k), "letter must be a nontrivial element of its factor");
                    letters.push_back(x);
                }
                if (letters.empty()) g.peripheral_letters.erase(idx);
            }
        }
    }
    try {
        g.validate();
    } catch (const SpecError &e) {
        throw SchemaError(path, e.what());
    }
    return g;
}

std::vector<GroupElement> spelled(const GroupSpec &g, const GroupElement &c)
{
    std::vector<GroupElement> out;
    for (const auto &s : c.syllables)
        for (std::int64_t k = 0; k < std::abs(s.exponent); ++k)
            out.push_back(generator_power(g, s.factor, s.exponent > 0 ? 1 : -1));
    return out;
}

SubgroupEmbeddingSpec parse_subgroup(const json &j, const GroupSpec &ambient, const std::string &path)
{
    const Fields f(j, path, {"factors", "generators", "peripherals", "images", "embeddings"});
    json group_part = json::object();
    for (const auto *k : {"factors", "generators", "peripherals"})
        if (j.contains(k)) group_part[k] = j.at(k);
    SubgroupEmbeddingSpec e;
    e.ambient = ambient;
    e.subgroup = parse_group(group_part, path);

    const auto &images = f.get("images");
    if (!images.is_object()) throw SchemaError(f.path("images"), "expected an object from factor symbol to word");
    e.factor_map.resize(e.subgroup.factors.size(), {0, 0});
    for (std::uint32_t i = 0; i < e.subgroup.factors.size(); ++i) {
        const auto &sym = e.subgroup.factors[i].symbol;
        const auto p = at(f.path("images"), sym);
        if (!images.contains(sym)) throw SchemaError(p, "required field is missing");
        const auto x = element_at(ambient, images.at(sym), p);
        if (x.syllable_count() != 1) throw SchemaError(p, "image must be a nontrivial power of one ambient factor");
        e.factor_map[i] = {x.syllables[0].factor, x.syllables[0].exponent};
    }
    for (const auto &[k, v] : images.items())
        if (!e.subgroup.factor_index(k)) throw SchemaError(at(f.path("images"), k), "undeclared subgroup factor");

    if (f.has("embeddings")) {
        const auto &es = f.array("embeddings");
        for (std::size_t i = 0; i < es.size(); ++i) {
            const auto p = at(f.path("embeddings"), i);
            const Fields ef(es[i], p, {"factor", "target", "conjugator", "connector"});
            PeripheralEmbedding pe;
            pe.source = factor_at(e.subgroup, ef.get("factor"), at(p, "factor"));
            pe.target = factor_at(ambient, ef.get("target"), at(p, "target"));
            pe.conjugator = ef.has("conjugator") ? element_at(ambient, ef.get("conjugator"), at(p, "conjugator"))
                                                 : GroupElement{};
            if (ef.has("connector")) {
                const auto &cs = ef.array("connector");
                for (std::size_t k = 0; k < cs.size(); ++k)
                    pe.connector.push_back(element_at(ambient, cs[k], at(at(p, "connector"), k)));
            } else {
                pe.connector = spelled(ambient, pe.conjugator);
            }
            e.peripherals.push_back(std::move(pe));
        }
    }
    try {
        e.validate();
    } catch (const SpecError &err) {
        throw SchemaError(path, err.what());
    }
    return e;
}

FillingScene parse_filling(const json &j, const GroupSpec &g, const std::string &path)
{
    const Fields f(j, path, {"kernels", "sweep", "set_radius", "separation_radius"});
    FillingScene out;
    if (f.has("kernels")) {
        const auto &ks = f.get("kernels");
        if (!ks.is_object()) throw SchemaError(f.path("kernels"), "expected an object from factor symbol to n");
        for (const auto &[sym, n] : ks.items()) {
            const auto p = at(f.path("kernels"), sym);
            const auto idx = factor_at(g, json(sym), p);
            if (!g.is_peripheral(idx)) throw SchemaError(p, "only peripheral factors can be filled");
            out.kernels.kernels[idx] = static_cast<std::uint64_t>(Fields::checked_integer(n, p, 0, 1 << 20));
        }
    }
    if (f.has("sweep")) {
        const auto &s = f.array("sweep");
        for (std::size_t i = 0; i < s.size(); ++i)
            out.sweep.push_back(static_cast<std::uint64_t>(Fields::checked_integer(s[i], at(f.path("sweep"), i), 0, 1 << 20)));
    }
    out.set_radius = static_cast<int>(f.integer("set_radius", 0, 12, out.set_radius));
    out.separation_radius = static_cast<int>(f.integer("separation_radius", 0, 12, out.separation_radius));
    return out;
}

FinenessScene parse_fineness(const json &j, const std::string &path)
{
    const Fields f(j, path, {"radii", "angle_bound", "peripheral_powers"});
    FinenessScene out;
    if (f.has("radii")) {
        out.radii.clear();
        const auto &rs = f.array("radii");
        for (std::size_t i = 0; i < rs.size(); ++i)
            out.radii.push_back(static_cast<int>(Fields::checked_integer(rs[i], at(f.path("radii"), i), 1, 12)));
        if (out.radii.size() < 2) throw SchemaError(f.path("radii"), "at least two radii are needed");
    }
    out.angle_bound = static_cast<int>(f.integer("angle_bound", 1, 12, out.angle_bound));
    out.peripheral_powers = f.boolean("peripheral_powers", false);
    return out;
}

Budgets parse_budgets(const json &j, const std::string &path)
{
    const Fields f(j, path, {"pairs", "delta", "triples", "variants", "geodesic_cap"});
    Budgets b;
    b.pairs = static_cast<std::size_t>(f.integer("pairs", 1, 100000000, static_cast<long long>(b.pairs)));
    b.delta = static_cast<std::size_t>(f.integer("delta", 1, 100000000, static_cast<long long>(b.delta)));
    b.triples = static_cast<std::size_t>(f.integer("triples", 0, 100000, static_cast<long long>(b.triples)));
    b.variants = static_cast<std::size_t>(f.integer("variants", 1, 16, static_cast<long long>(b.variants)));
    b.geodesic_cap = static_cast<std::uint64_t>(f.integer("geodesic_cap", 1, 100000000, static_cast<long long>(b.geodesic_cap)));
    return b;
}

} // namespace

std::vector<std::string> available_suites()
{
    return {"horoball-shape", "transfer", "uniform-qc", "filling", "fineness"};
}

bool needs_q(const std::string &suite)
{
    return suite == "transfer";
}

Scene parse_scene(const json &j)
{
    const Fields f(j, "", {"name", "group", "r", "R", "cone_depths", "seed", "horoball", "subgroup", "filling",
                           "fineness", "suites", "budgets", "output", "corrupt"});
    Scene s;
    s.name = f.has("name") ? f.string("name") : "scene";
    s.group = parse_group(f.get("group"), "group");
    s.r = static_cast<int>(f.integer("r", 1, 16));
    s.R = static_cast<int>(f.integer("R", 1, 16));
    if (f.has("cone_depths")) {
        const auto &cs = f.array("cone_depths");
        for (std::size_t i = 0; i < cs.size(); ++i)
            s.cone_depths.push_back(static_cast<int>(Fields::checked_integer(cs[i], at("cone_depths", i), 1, 16)));
    }
    if (s.cone_depths.empty()) s.cone_depths = {s.r};
    if (f.has("seed")) {
        const auto &v = f.get("seed");
        if (!v.is_number_unsigned()) throw SchemaError("seed", "expected a nonnegative integer");
        s.seed = v.get<std::uint64_t>();
    }
    if (f.has("horoball")) {
        const Fields h(f.get("horoball"), "horoball", {"width", "depth", "cone_depth"});
        LineHoroballScene line;
        line.width = static_cast<int>(h.integer("width", 1, 512));
        line.depth = static_cast<int>(h.integer("depth", 0, 12));
        if (h.has("cone_depth")) line.cone_depth = static_cast<int>(h.integer("cone_depth", 0, line.depth));
        s.horoball = line;
    }
    if (f.has("subgroup")) s.subgroup = parse_subgroup(f.get("subgroup"), s.group, "subgroup");
    if (f.has("filling")) s.filling = parse_filling(f.get("filling"), s.group, "filling");
    if (f.has("fineness")) s.fineness = parse_fineness(f.get("fineness"), "fineness");
    if (f.has("suites")) {
        const auto &ss = f.array("suites");
        for (std::size_t i = 0; i < ss.size(); ++i) {
            if (!ss[i].is_string()) throw SchemaError(at("suites", i), "expected a suite name");
            const auto name = ss[i].get<std::string>();
            if (!known_suite(name))
                throw SchemaError(at("suites", i), "unknown suite '" + name + "'; available: " + suite_list());
            s.suites.push_back(name);
        }
    }
    if (f.has("budgets")) s.budgets = parse_budgets(f.get("budgets"), "budgets");
    if (f.has("output")) {
        const Fields o(f.get("output"), "output", {"dir", "dot"});
        if (o.has("dir")) s.out = o.string("dir");
        s.dot = o.boolean("dot", false);
    }
    if (f.has("corrupt")) {
        const Fields c(f.get("corrupt"), "corrupt", {"remove_cone_edge"});
        s.remove_cone_edge = c.boolean("remove_cone_edge", false);
    }
    for (const auto &suite : s.suites) check_suite_requirements(s, suite);
    return s;
}

Scene load_scene(const std::string &path)
{
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open scene file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw SchemaError("(root)", std::string("invalid JSON: ") + e.what());
    }
    return parse_scene(j);
}

void check_suite_requirements(const Scene &scene, const std::string &suite)
{
    if (!known_suite(suite))
        throw SpecError("unknown suite '" + suite + "'; available: " + suite_list());
    if (needs_q(suite) && scene.r < 2)
        throw SchemaError("r", "suite '" + suite + "' needs r >= 2 so that 1 <= q <= r - 1");
    if ((suite == "uniform-qc" || suite == "filling") && !scene.subgroup)
        throw SchemaError("subgroup", "suite '" + suite + "' needs a subgroup block");
    if (suite == "filling" && !scene.filling) throw SchemaError("filling", "suite 'filling' needs a filling block");
    if ((suite == "transfer" || suite == "fineness") && scene.group.peripheral_indices.empty())
        throw SchemaError("group.peripherals", "suite '" + suite + "' needs a peripheral factor");
}

SpaceGraph build_line_horoball(const LineHoroballScene &line)
{
    GroupSpec z;
    z.factors = {{"t", kInfiniteOrder}};
    z.gen_set = {generator_power(z, 0, 1)};
    return build_horoball({build_coned_cayley({z, line.width}), line.depth, line.cone_depth});
}

GraphTransform scene_tamper(const Scene &scene)
{
    if (!scene.remove_cone_edge) return {};
    return [](const SpaceGraph &g) { return remove_cone_edge(g); };
}

} // namespace cusp
