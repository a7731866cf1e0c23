#include "cusp/suites.hpp"

#include "cusp/coned.hpp"
#include "cusp/horoball.hpp"
#include "cusp/parallel.hpp"
#include "cusp/transfer.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <unordered_map>

namespace cusp {

namespace {

using nlohmann::json;

json rat(Rational x)
{
    if (x.denominator() == 1) return x.numerator();
    return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

json vertex_pair(const SpaceGraph &g, VertexId x, VertexId y)
{
    return json::array({vertex_name(g, x), vertex_name(g, y)});
}

std::string tag(const std::string &key, int v)
{
    return key + "=" + std::to_string(v);
}

std::string tag(int r, int q)
{
    return tag("r", r) + " " + tag("q", q);
}

/// Collects assertions; a check that throws becomes a failed assertion carrying the error.
class Recorder {
public:
    explicit Recorder(SuiteReport &report) : report_(report) {}

    Assertion &add(std::string anchor, std::string instance, bool pass, std::string bound)
    {
        report_.assertions.push_back({std::move(anchor), std::move(instance), pass, std::move(bound), json::object(), nullptr});
        return report_.assertions.back();
    }

    void guard(const std::string &anchor, const std::string &instance, const std::function<void()> &body)
    {
        try {
            body();
        } catch (const std::exception &e) {
            auto &a = add(anchor, instance, false, "check completes");
            a.witness = {{"error", e.what()}};
        }
    }

    void cone_edges(const SpaceGraph &g, const std::string &instance)
    {
        const auto check = check_cone_edges(g);
        auto &a = add("cone-edges-complete", instance, check.pass(), "every cone edge present");
        a.measured = {{"checked", check.checked}, {"missing", check.missing.size()}};
        if (!check.pass()) a.witness = vertex_pair(g, check.missing[0].first, check.missing[0].second);
    }

    void table(const std::string &name, json rows) { report_.tables[name] = std::move(rows); }

private:
    SuiteReport &report_;
};

// ------------------------------------------------------------------ horoball-shape

struct HoroballInstance {
    SpaceGraph graph;
    int horoball = 0;
    std::string name;
    bool standalone = true;
};

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b)
{
    return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

struct HoroballTally {
    std::size_t pairs = 0, distance_bad = 0, shape_bad = 0, vertical_pairs = 0, vertical_bad = 0;
    std::size_t hausdorff_bad = 0;
    std::uint64_t geodesics = 0;
    int worst_hausdorff = 0;
    json distance_witness, shape_witness, vertical_witness, hausdorff_witness;

    void merge(const HoroballTally &o)
    {
        auto first = [](json &mine, std::size_t count, const json &theirs) {
            if (count == 0) mine = theirs;
        };
        first(distance_witness, distance_bad, o.distance_witness);
        first(shape_witness, shape_bad, o.shape_witness);
        first(vertical_witness, vertical_bad, o.vertical_witness);
        first(hausdorff_witness, hausdorff_bad, o.hausdorff_witness);
        pairs += o.pairs;
        distance_bad += o.distance_bad;
        shape_bad += o.shape_bad;
        vertical_pairs += o.vertical_pairs;
        vertical_bad += o.vertical_bad;
        geodesics = saturating_add(geodesics, o.geodesics);
        hausdorff_bad += o.hausdorff_bad;
        worst_hausdorff = std::max(worst_hausdorff, o.worst_hausdorff);
    }
};

void horoball_checks(Recorder &rec, const HoroballInstance &inst, unsigned jobs)
{
    const auto &g = inst.graph;
    const auto &hb = g.horoballs().at(inst.horoball);
    rec.cone_edges(g, inst.name);

    std::vector<VertexId> vs;
    for (const auto &layer : hb.layer) vs.insert(vs.end(), layer.begin(), layer.end());
    if (hb.apex != kNoVertex) vs.push_back(hb.apex);
    std::sort(vs.begin(), vs.end());

    std::vector<std::vector<int>> rows(g.size());
    parallel_for(vs.size(), jobs, [&](std::size_t i) { rows[vs[i]] = bfs_distances(g, vs[i]); });
    const int hausdorff_bound = hb.coned() ? 5 : 4;

    std::vector<HoroballTally> tallies(vs.size());
    parallel_for(vs.size(), jobs, [&](std::size_t iy) {
        const auto y = vs[iy];
        const auto &dy = rows[y];
        auto &t = tallies[iy];
        std::unordered_map<VertexId, std::vector<int>> extra;
        auto row = [&](VertexId v) -> const std::vector<int> & {
            if (!rows[v].empty()) return rows[v];
            auto it = extra.find(v);
            if (it == extra.end()) it = extra.emplace(v, bfs_distances(g, v)).first;
            return it->second;
        };
        for (auto x : vs) {
            if (x > y) break;
            const bool ok = inst.standalone ? horoball_pair_certified(g, inst.horoball, x, y) : certified(g, x, y);
            if (!ok) continue;
            ++t.pairs;
            const auto path = horoball_geodesic(g, inst.horoball, x, y);
            const auto walk = vertex_sequence(path);
            if (!is_valid_path(g, path) || length(g, path) != Rational(dy[x])) {
                if (t.distance_bad++ == 0) t.distance_witness = vertex_pair(g, x, y);
            }
            if (!has_regular_shape(g, inst.horoball, walk)) {
                if (t.shape_bad++ == 0) t.shape_witness = vertex_pair(g, x, y);
            }
            const auto px = horoball_position(g, inst.horoball, x);
            const auto py = horoball_position(g, inst.horoball, y);
            if (px && py && !px->apex && !py->apex && px->depth == 0 && py->depth == 0 && x != y &&
                !horoball_route(hb, *px, *py).via_apex) {
                ++t.vertical_pairs;
                const int L = vertical_length_witness(g, inst.horoball, path);
                const int k = hb.base_distance[px->base][py->base];
                if ((1 << L) > k || k > (1 << (L + 2))) {
                    if (t.vertical_bad++ == 0) t.vertical_witness = {{"pair", vertex_pair(g, x, y)}, {"L", L}, {"base", k}};
                }
            }
            const auto spread = geodesic_spread(g, x, y, dy, walk, row);
            t.geodesics = saturating_add(t.geodesics, spread.geodesics);
            t.worst_hausdorff = std::max(t.worst_hausdorff, spread.hausdorff);
            if (spread.hausdorff > hausdorff_bound && t.hausdorff_bad++ == 0) t.hausdorff_witness = vertex_pair(g, x, y);
        }
    });
    HoroballTally total;
    for (const auto &t : tallies) total.merge(t);
    auto &[pairs, distance_bad, shape_bad, vertical_pairs, vertical_bad, hausdorff_bad, geodesics,
           worst_hausdorff, distance_witness, shape_witness, vertical_witness, hausdorff_witness] = total;

    auto &d = rec.add("horoball-closed-form-distance", inst.name, distance_bad == 0 && pairs > 0,
                      "closed-form length equals BFS distance");
    d.measured = {{"pairs", pairs}, {"mismatches", distance_bad}};
    d.witness = distance_witness;
    auto &s = rec.add("regular-geodesic-shape", inst.name, shape_bad == 0, "two vertical segments around <= 3 horizontal or 2 cone edges");
    s.measured = {{"pairs", pairs}, {"irregular", shape_bad}};
    s.witness = shape_witness;
    auto &v = rec.add("vertical-length-bound", inst.name, vertical_bad == 0, "2^L <= base distance <= 2^(L+2)");
    v.measured = {{"pairs", vertical_pairs}, {"violations", vertical_bad}};
    v.witness = vertical_witness;
    auto &h = rec.add("geodesic-shape-hausdorff", inst.name, hausdorff_bad == 0 && pairs > 0,
                      "every geodesic within Hausdorff " + std::to_string(hausdorff_bound) + " of the regular one");
    h.measured = {{"geodesics", geodesics}, {"max_hausdorff", worst_hausdorff}};
    h.witness = hausdorff_witness;
}

void horoball_shape(Recorder &rec, const Scene &scene, unsigned jobs)
{
    const auto tamper = scene_tamper(scene);
    if (scene.horoball) {
        const auto &line = *scene.horoball;
        const auto name = "line w=" + std::to_string(line.width) + " depth=" + std::to_string(line.depth) +
                          (line.cone_depth ? " cone=" + std::to_string(*line.cone_depth) : "");
        rec.guard("horoball-build", name, [&] {
            auto g = build_line_horoball(line);
            if (tamper) g = tamper(g);
            horoball_checks(rec, {std::move(g), 0, name, true}, jobs);
        });
        return;
    }
    const auto name = tag("r", scene.r) + " " + tag("R", scene.R);
    rec.guard("horoball-build", name, [&] {
        auto g = build_cusped({scene.group, scene.r, scene.R, std::nullopt});
        if (tamper) g = tamper(g);
        const auto hs = g.horoballs_containing(g.basepoint());
        if (hs.empty()) throw PreconditionError("no horoball at the basepoint");
        horoball_checks(rec, {std::move(g), hs.front(), name, false}, jobs);
    });
}

// ------------------------------------------------------------------ transfer

void peripheral_angles(Recorder &rec, const TransferSpaces &spaces, const std::string &instance)
{
    const auto &C = spaces.coned();
    const auto &G = *C.group();
    const auto i = G.peripheral_indices.front();
    const auto apex = C.find_apex(CosetId{i, {}}).value();
    std::vector<std::int64_t> letters;
    for (const auto &x : alphabet(G))
        if (!x.is_identity() && in_factor(x, i)) letters.push_back(x.syllables[0].exponent);
    const auto order = G.factors[i].order;
    const int span = C.truncation_radius() / 3;
    std::size_t checked = 0, bad = 0;
    json witness;
    for (int a = -span; a <= span; ++a)
        for (int b = a; b <= span; ++b) {
            const auto u = C.find_element(generator_power(G, i, a));
            const auto v = C.find_element(generator_power(G, i, b));
            if (!u || !v) continue;
            const int expected = cyclic_word_length(order, letters, b - a);
            const auto angle = angle_at(C, apex, *u, *v, std::min(safe_cutoff(C, *u, *v), expected + 1));
            ++checked;
            if (!(angle == AngleValue::exact(static_cast<std::uint32_t>(expected))) && bad++ == 0)
                witness = {{"pair", vertex_pair(C, *u, *v)}, {"angle", angle.str()}, {"expected", expected}};
        }
    auto &a = rec.add("peripheral-angle-word-metric", instance, bad == 0 && checked > 0,
                      "angle at the coset apex equals the word length in the peripheral subgroup");
    a.measured = {{"pairs", checked}, {"mismatches", bad}, {"span", span}};
    a.witness = witness;
}

void apex_passing_checks(Recorder &rec, const TransferSpaces &spaces, const Scene &scene, const std::string &instance)
{
    const auto &C = spaces.coned();
    const auto pairs = certified_pairs(C, scene.budgets.pairs, scene.seed);
    std::vector<std::pair<VertexId, VertexId>> calibration, validation;
    for (std::size_t k = 0; k < pairs.size(); ++k) (k % 2 ? validation : calibration).push_back(pairs[k]);
    const auto fit = apex_passing(C, calibration, std::nullopt);
    const int D = fit.max_avoided_angle;
    const auto check = apex_passing(C, validation, D);
    auto &a = rec.add("apex-passing-above-angle", instance, check.violations.empty() && check.triples > 0,
                      "every geodesic passes an apex whose angle exceeds the calibrated D");
    a.measured = {{"D", D}, {"calibration_triples", fit.triples}, {"triples", check.triples},
                  {"max_avoided_angle", check.max_avoided_angle}};
    if (!check.violations.empty()) {
        const auto &v = check.violations.front();
        a.witness = {vertex_name(C, v[0]), vertex_name(C, v[1]), vertex_name(C, v[2])};
    }
}

void transfer_q(Recorder &rec, const TransferSpaces &spaces, const Scene &scene, int q, int delta)
{
    const int r = spaces.r();
    const auto instance = tag(r, q);
    const TransferMap map(spaces, q);
    const auto &K = spaces.cusped();
    const auto pairs = certified_pairs(K, scene.budgets.pairs, scene.seed);

    rec.guard("transfer-compositions", instance, [&] {
        const auto c = check_compositions(map);
        auto &a = rec.add("iota-pi-identity-below-q", instance, c.iota_pi_violations.empty(), "iota(pi(v)) = v for depth < q");
        a.measured = {{"vertices", c.cusped_checked}, {"violations", c.iota_pi_violations.size()}};
        if (!c.iota_pi_violations.empty()) a.witness = vertex_name(K, c.iota_pi_violations.front());
        auto &b = rec.add("pi-iota-identity", instance, c.pi_iota_violations.empty(), "pi(iota(p)) = p on coned points");
        b.measured = {{"points", c.coned_checked}, {"violations", c.pi_iota_violations.size()}};
        if (!c.pi_iota_violations.empty()) b.witness = vertex_name(spaces.coned(), c.pi_iota_violations.front().from);
    });

    rec.guard("transfer-distortion", instance, [&] {
        const auto d = distortion_report(map, pairs);
        const Rational pi_bound(2 * (r + 1)), iota_bound(r + 1);
        const bool pi_ok = !(pi_bound < d.pi_expansion) && !(pi_bound < d.pi_contraction) && d.pi_collapsed_max <= 2 * (r + 1);
        const bool iota_ok = !(iota_bound < d.iota_expansion) && !(iota_bound < d.iota_contraction);
        auto &a = rec.add("pi-quasi-isometry", instance, pi_ok && d.pairs > 0, "distortion <= 2(r+1)");
        a.measured = {{"pairs", d.pairs}, {"expansion", rat(d.pi_expansion)}, {"contraction", rat(d.pi_contraction)},
                      {"collapsed_max", d.pi_collapsed_max}};
        if (!pi_ok) a.witness = vertex_pair(K, d.witness.first, d.witness.second);
        auto &b = rec.add("iota-quasi-isometry", instance, iota_ok && d.iota_pairs > 0, "distortion <= r+1");
        b.measured = {{"pairs", d.iota_pairs}, {"expansion", rat(d.iota_expansion)}, {"contraction", rat(d.iota_contraction)}};
        if (!iota_ok) b.witness = vertex_pair(K, d.witness.first, d.witness.second);
    });

    rec.guard("transfer-lengths", instance, [&] {
        const auto l = length_report(map, pairs);
        auto &a = rec.add("push-forward-length", instance, l.push_violations.empty() && l.push_samples > 0,
                          "l(push-forward) <= 2 l(c)");
        a.measured = {{"paths", l.push_samples}, {"max_ratio", rat(l.push_ratio)}, {"violations", l.push_violations.size()}};
        if (!l.push_violations.empty()) a.witness = vertex_pair(K, l.push_violations[0].first, l.push_violations[0].second);
        auto &b = rec.add("pullback-length", instance, l.pull_violations.empty() && l.pull_samples > 0,
                          "l(c) <= l(pullback) <= (r+1) l(c)");
        b.measured = {{"paths", l.pull_samples}, {"min_ratio", rat(l.pull_low)}, {"max_ratio", rat(l.pull_high)},
                      {"violations", l.pull_violations.size()}};
        if (!l.pull_violations.empty()) b.witness = vertex_pair(K, l.pull_violations[0].first, l.pull_violations[0].second);
    });

    rec.guard("shallow-angle-bound", instance, [&] {
        const int h = K.horoballs_containing(K.basepoint()).at(0);
        std::vector<std::pair<VertexId, VertexId>> base_pairs;
        const auto &base = K.horoballs()[h].base;
        for (std::size_t i = 0; i < base.size(); ++i)
            for (std::size_t j = i; j < base.size(); ++j)
                if (certified(K, base[i], base[j])) base_pairs.emplace_back(base[i], base[j]);
        const int literal = 1 << (q + 1);
        const int bound = 3 << q;
        const auto rep = angle_transfer_report(map, h, base_pairs, std::max(bound + 1, 4 * scene.R), literal);
        std::uint32_t max_shallow = 0;
        std::vector<std::pair<VertexId, VertexId>> over;
        for (const auto &s : rep.samples) {
            if (s.penetration > q) continue;
            max_shallow = std::max(max_shallow, s.image.value);
            if (!(s.image.is_exact() && static_cast<int>(s.image.value) <= bound)) over.emplace_back(s.u, s.v);
        }
        auto &a = rec.add("shallow-angle-bound", instance, over.empty() && !rep.samples.empty(),
                          "image angle <= 3 2^q for q-shallow geodesics");
        a.measured = {{"pairs", rep.samples.size()}, {"max_shallow_angle", max_shallow}, {"bound", bound},
                      {"literal_bound", literal}, {"literal_violations", rep.shallow_violations.size()},
                      {"deep_threshold", rep.deep_threshold}};
        if (!rep.shallow_violations.empty())
            a.measured["literal_witness"] =
                vertex_pair(K, rep.shallow_violations[0].first, rep.shallow_violations[0].second);
        if (!over.empty()) a.witness = vertex_pair(K, over[0].first, over[0].second);
    });

    rec.guard("extended-pullback-family", instance, [&] {
        auto sample_pairs = certified_pairs(K, std::min<std::size_t>(scene.budgets.pairs, 400), scene.seed);
        std::vector<std::array<VertexId, 3>> triples;
        for (std::size_t i = 0; i + 2 < sample_pairs.size() && triples.size() < scene.budgets.triples; i += 3) {
            const std::array<VertexId, 3> t{sample_pairs[i].first, sample_pairs[i + 1].second, sample_pairs[i + 2].first};
            if (certified(K, t[0], t[1]) && certified(K, t[1], t[2]) && certified(K, t[0], t[2])) triples.push_back(t);
        }
        const auto g = verify_guessing_family(map, {sample_pairs, triples, scene.budgets.variants});
        const int bigon_bound = 2 * q * delta;
        auto &a = rec.add("extended-pullback-bigon", instance, g.bigon <= bigon_bound && g.pairs > 0, "<= 2 q delta");
        a.measured = {{"pairs", g.pairs}, {"bigon", g.bigon}, {"delta", delta}, {"bound", bigon_bound}};
        if (g.bigon > bigon_bound) a.witness = vertex_pair(K, g.bigon_witness.first, g.bigon_witness.second);
        auto &b = rec.add("extended-pullback-closeness", instance, g.pairs > 0, "finite; the measured N is recorded");
        b.measured = {{"N", g.closeness}, {"thin_union", g.thin_union}, {"triples", g.triples},
                      {"pullback_distortion", rat(g.pull_distortion)}};
        const bool push_ok = !(Rational(g.closeness) < g.push_excess) && g.push_degenerate == 0 && g.push_samples > 0;
        auto &c = rec.add("push-forward-quasi-geodesic", instance, push_ok, "distortion <= d + N for d-shallow geodesics, 0 < d <= q");
        c.measured = {{"geodesics", g.push_samples}, {"max_distortion", rat(g.push_distortion)}, {"max_excess_over_depth", rat(g.push_excess)},
                      {"N", g.closeness}, {"degenerate", g.push_degenerate}};
    });
}

void transfer(Recorder &rec, const Scene &scene)
{
    const auto tamper = scene_tamper(scene);
    const int r = scene.r;
    rec.guard("transfer-build", tag("r", r), [&] {
        const TransferSpaces spaces(scene.group, r, scene.R, tamper);
        rec.cone_edges(spaces.cusped(), tag("r", r) + " cusped");
        rec.cone_edges(spaces.coned(), tag("r", r) + " coned");
        const auto delta = estimate_delta(spaces.cusped(), scene.budgets.delta, scene.seed).delta;
        rec.guard("peripheral-angle-word-metric", tag("r", r), [&] { peripheral_angles(rec, spaces, tag("r", r)); });
        rec.guard("apex-passing-above-angle", tag("r", r), [&] { apex_passing_checks(rec, spaces, scene, tag("r", r)); });
        for (int q = 1; q < r; ++q) rec.guard("transfer-map", tag(r, q), [&] { transfer_q(rec, spaces, scene, q, delta); });
    });
}

// ------------------------------------------------------------------ uniform-qc

void uniform_qc(Recorder &rec, const Scene &scene)
{
    const auto tamper = scene_tamper(scene);
    json lambdas = json::object();
    std::vector<int> values;
    bool complete = true;
    for (int r : scene.cone_depths) {
        rec.guard("quasiconvexity", tag("r", r), [&] {
            const SubgroupEmbedding emb(*scene.subgroup, r, scene.R, tamper);
            rec.cone_edges(emb.target().cusped(), tag("r", r));
            const auto est = measure_quasiconvexity(emb.target().cusped(), emb.cusped_image(), scene.budgets.geodesic_cap);
            auto &a = rec.add("quasiconvexity-enumeration-complete", tag("r", r), est.overflow_pairs == 0 && est.pairs > 0,
                              "no pair exceeds the geodesic cap");
            a.measured = {{"pairs", est.pairs}, {"overflow_pairs", est.overflow_pairs}, {"lambda", est.lambda}};
            lambdas[std::to_string(r)] = est.lambda;
            values.push_back(est.lambda);
            complete = complete && est.overflow_pairs == 0;
        });
    }
    const bool equal = values.size() == scene.cone_depths.size() && !values.empty() &&
                       std::all_of(values.begin(), values.end(), [&](int v) { return v == values.front(); });
    auto &a = rec.add("uniform-quasiconvexity", tag("R", scene.R), equal && complete, "lambda identical across r");
    a.measured = {{"lambda", lambdas}};
}

// ------------------------------------------------------------------ filling

void filling(Recorder &rec, const Scene &scene, unsigned jobs)
{
    const auto &fs = *scene.filling;
    auto ns = fs.sweep;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    FillingChecks checks;
    checks.set_radius = fs.set_radius;
    checks.separation_radius = fs.separation_radius;
    checks.delta_budget = scene.budgets.delta;
    checks.seed = scene.seed;
    checks.tamper = scene_tamper(scene);

    rec.guard("filling-sweep", tag("r", scene.r) + " " + tag("R", scene.R), [&] {
        const auto reports = verify_fillings(*scene.subgroup, ns, scene.r, scene.R, checks, jobs);
        json rows = json::array();
        json threshold = nullptr;
        std::size_t run = 0;
        int prev_radius = -1;
        bool monotone = true;
        std::vector<int> deltas, lambdas;
        for (const auto &rep : reports) {
            const auto inst = tag("n", static_cast<int>(rep.n));
            auto &cone = rec.add("cone-edges-complete", inst, rep.quotient_cone_edges.pass(), "every cone edge present");
            cone.measured = {{"checked", rep.quotient_cone_edges.checked}, {"missing", rep.quotient_cone_edges.missing.size()}};
            if (!rep.missing_cone_edge.empty()) cone.witness = rep.missing_cone_edge;
            rec.add("filling-homomorphism", inst, rep.homomorphism_violations == 0, "pi(xy) = pi(x) pi(y) on ball pairs")
                .measured = {{"violations", rep.homomorphism_violations}};
            rec.add("peripheral-quotient-injective", inst, rep.peripheral_injective, "P/N injects into the quotient");
            if (rep.h_filling.holds) {
                auto &sep = rec.add("subgroup-separation", inst, rep.separation_violations == 0,
                                    "pi(g) outside pi(H) for g outside H");
                sep.measured = {{"checked", rep.separation_checked}, {"violations", rep.separation_violations}};
                if (rep.separation_witness) sep.witness = to_string(scene.group, *rep.separation_witness);
                rec.add("induced-filling-injective", inst, rep.subgroup_injective, "induced filling of H injects into the quotient");
            }
            if (!rep.set_injective) {
                threshold = nullptr;
                run = 0;
            } else {
                if (threshold.is_null()) threshold = rep.n;
                ++run;
            }
            if (rep.injectivity_radius >= 0) {
                if (rep.injectivity_radius < prev_radius) monotone = false;
                prev_radius = rep.injectivity_radius;
            }
            deltas.push_back(rep.delta);
            lambdas.push_back(rep.lambda);
            rows.push_back({{"n", rep.n}, {"delta", rep.delta}, {"lambda", rep.lambda},
                            {"injectivity_radius", rep.injectivity_radius}, {"h_filling", rep.h_filling.holds},
                            {"set_injective", rep.set_injective}, {"subgroup_injective", rep.subgroup_injective}});
        }
        const auto inst = tag("r", scene.r) + " " + tag("R", scene.R);
        auto &t = rec.add("finite-set-injective", inst, run >= 3,
                          "pi injective on the radius-" + std::to_string(fs.set_radius) +
                              " ball for the last three or more n of the sweep");
        t.measured = {{"threshold", threshold}, {"passing_tail", run}};
        rec.add("injectivity-radius-monotone", inst, monotone, "nondecreasing in n");
        auto band = [](const std::vector<int> &v) {
            return v.empty() ? 0 : *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
        };
        rec.add("quotient-slimness-uniform", inst, band(deltas) <= 2, "delta within a band of 2 across n").measured = {
            {"band", band(deltas)}};
        rec.add("quotient-quasiconvexity-uniform", inst, band(lambdas) <= 2, "lambda within a band of 2 across n").measured = {
            {"band", band(lambdas)}};
        rec.table("filling_sweep", rows);
    });
}

// ------------------------------------------------------------------ fineness

void fineness(Recorder &rec, const Scene &scene)
{
    const auto probe = scene.fineness.value_or(FinenessScene{});
    const auto tamper = scene_tamper(scene);
    const auto i = scene.group.peripheral_indices.front();
    json counts = json::object();
    std::vector<std::size_t> values;
    for (int rho : probe.radii) {
        rec.guard("fineness-probe", tag("R", rho), [&] {
            auto G = scene.group;
            if (probe.peripheral_powers)
                for (int k = 2; k <= rho; ++k) G.gen_set.push_back(generator_power(G, i, k));
            auto C = build_coned_cayley({G, rho});
            if (tamper) C = tamper(C);
            rec.cone_edges(C, tag("R", rho));
            const auto apex = C.find_apex(CosetId{i, {}}).value();
            const auto n = fineness_probe(C, apex, probe.angle_bound, C.basepoint()).pairs.size();
            counts[std::to_string(rho)] = n;
            values.push_back(n);
        });
    }
    const bool complete = values.size() == probe.radii.size();
    if (probe.peripheral_powers) {
        bool growing = complete;
        for (std::size_t k = 1; k < values.size(); ++k) growing = growing && values[k] > values[k - 1];
        rec.add("fineness-fails-with-peripheral-powers", "angle<=" + std::to_string(probe.angle_bound), growing,
                "pair counts strictly increase with the radius")
            .measured = {{"counts", counts}};
    } else {
        const bool constant = complete && std::all_of(values.begin(), values.end(), [&](auto v) { return v == values.front(); });
        rec.add("fineness-at-apex", "angle<=" + std::to_string(probe.angle_bound), constant,
                "pair counts independent of the radius")
            .measured = {{"counts", counts}};
    }
}

} // namespace

bool SuiteReport::pass() const
{
    return !assertions.empty() &&
           std::all_of(assertions.begin(), assertions.end(), [](const Assertion &a) { return a.pass; });
}

json SuiteReport::to_json() const
{
    json out;
    out["schema"] = kReportSchema;
    out["suite"] = suite;
    out["scene"] = scene;
    out["seed"] = seed;
    out["pass"] = pass();
    json list = json::array();
    for (const auto &a : assertions)
        list.push_back({{"anchor", a.anchor}, {"instance", a.instance}, {"pass", a.pass}, {"bound", a.bound},
                        {"measured", a.measured}, {"witness", a.witness}});
    out["assertions"] = list;
    out["tables"] = tables;
    return out;
}

SuiteReport run_suite(const Scene &scene, const std::string &suite, unsigned jobs)
{
    check_suite_requirements(scene, suite);
    SuiteReport report{suite, scene.name, scene.seed, {}, json::object()};
    Recorder rec(report);
    if (suite == "horoball-shape") horoball_shape(rec, scene, jobs);
    if (suite == "transfer") transfer(rec, scene);
    if (suite == "uniform-qc") uniform_qc(rec, scene);
    if (suite == "filling") filling(rec, scene, jobs);
    if (suite == "fineness") fineness(rec, scene);
    return report;
}

} // namespace cusp
