// Acceptance run: one line per criterion, tolerances pinned below and in tests/fixtures/acceptance.json.

#include "cusp/suites.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using namespace cusp;
using nlohmann::json;
namespace fs = std::filesystem;

const fs::path kSource = CUSP_SOURCE_DIR;

// Bounds stated by the criteria.
constexpr int kLineWidth = 64;
constexpr int kLineDepth = 8;
constexpr int kPlainHausdorff = 4;
constexpr int kConedHausdorff = 5;
constexpr int kBandTolerance = 2;

enum class Verdict { pass, fail, deviation };

struct Line {
    int criterion;
    Verdict verdict;
    std::string detail;
};

json read_json(const fs::path &p)
{
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    return json::parse(in);
}

Scene scene(const std::string &name)
{
    return load_scene((kSource / "scenes" / (name + ".json")).string());
}

unsigned jobs()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

struct Timed {
    SuiteReport report;
    double seconds;
};

Timed run(const Scene &s, const std::string &suite)
{
    const auto start = std::chrono::steady_clock::now();
    auto report = run_suite(s, suite, jobs());
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    return {std::move(report), dt.count()};
}

std::vector<const Assertion *> select(const SuiteReport &r, const std::string &anchor, const std::string &instance = "")
{
    std::vector<const Assertion *> out;
    for (const auto &a : r.assertions)
        if (a.anchor == anchor && (instance.empty() || a.instance == instance)) out.push_back(&a);
    return out;
}

/// True when `anchor` occurs at least `least` times and every occurrence passes.
bool holds(const SuiteReport &r, const std::string &anchor, std::size_t least = 1, const std::string &instance = "")
{
    const auto as = select(r, anchor, instance);
    if (as.size() < least) return false;
    for (const auto *a : as)
        if (!a->pass) return false;
    return true;
}

std::string seconds(double s)
{
    std::ostringstream o;
    o.precision(1);
    o << std::fixed << s << "s";
    return o.str();
}

Verdict verdict(bool ok)
{
    return ok ? Verdict::pass : Verdict::fail;
}

std::vector<Line> horoball_criteria(const json &pins)
{
    const auto plain = run(scene("line_horoball"), "horoball-shape");
    const auto coned = run(scene("line_horoball_coned"), "horoball-shape");
    const double budget = pins["runtime_seconds"]["horoball"];
    const auto &line = *scene("line_horoball").horoball;

    const bool sized = line.width == kLineWidth && line.depth == kLineDepth;
    const bool closed = holds(plain.report, "horoball-closed-form-distance") && holds(plain.report, "vertical-length-bound");
    const auto &pairs = select(plain.report, "horoball-closed-form-distance").at(0)->measured["pairs"];
    Line one{1, verdict(sized && closed && plain.seconds < budget),
             "closed form = BFS on " + pairs.dump() + " pairs, 2^L <= d <= 2^(L+2); " + seconds(plain.seconds) +
                 " (< " + seconds(budget) + ")"};

    auto spread = [](const SuiteReport &r) {
        return select(r, "geodesic-shape-hausdorff").at(0)->measured;
    };
    const auto ps = spread(plain.report), cs = spread(coned.report);
    const bool shape = holds(plain.report, "geodesic-shape-hausdorff") && holds(coned.report, "geodesic-shape-hausdorff") &&
                       holds(plain.report, "regular-geodesic-shape") && holds(coned.report, "regular-geodesic-shape") &&
                       ps["max_hausdorff"].get<int>() <= kPlainHausdorff && cs["max_hausdorff"].get<int>() <= kConedHausdorff;
    Line two{2, verdict(shape),
             "max Hausdorff " + ps["max_hausdorff"].dump() + " plain (<= " + std::to_string(kPlainHausdorff) + "), " +
                 cs["max_hausdorff"].dump() + " coned (<= " + std::to_string(kConedHausdorff) + ") over " +
                 ps["geodesics"].dump() + " + " + cs["geodesics"].dump() + " geodesics"};
    return {one, two};
}

std::vector<Line> transfer_criteria(const json &pins)
{
    std::vector<Timed> runs{run(scene("free_ab"), "transfer"), run(scene("free_ab_r4"), "transfer")};
    double total = 0;
    bool maps = true, angles = true, corrected = true;
    std::size_t literal = 0;
    json literal_witness;
    for (const auto &t : runs) {
        total += t.seconds;
        for (const auto *anchor : {"iota-pi-identity-below-q", "pi-iota-identity", "pi-quasi-isometry", "iota-quasi-isometry",
                                   "push-forward-length", "pullback-length"})
            maps = maps && holds(t.report, anchor, 2);
        maps = maps && holds(t.report, "cone-edges-complete", 2);
        angles = angles && holds(t.report, "apex-passing-above-angle") && holds(t.report, "peripheral-angle-word-metric");
        corrected = corrected && holds(t.report, "shallow-angle-bound", 2);
        for (const auto *a : select(t.report, "shallow-angle-bound")) {
            const auto n = a->measured.value("literal_violations", std::size_t{0});
            if (n > 0 && literal_witness.is_null()) literal_witness = {{"instance", a->instance}, {"pair", a->measured["literal_witness"]}};
            literal += n;
        }
    }
    const double budget = pins["runtime_seconds"]["transfer"];
    Line three{3, verdict(maps && total < budget),
               "compositions, distortion <= 2(r+1) / r+1, push <= 2 l, pull in [1, r+1] l for r in {3,4}, all q; " +
                   seconds(total) + " (< " + seconds(budget) + ")"};

    Line four{4, Verdict::fail, ""};
    if (angles && corrected && literal == 0) {
        four = {4, Verdict::pass, "shallow image angle <= 2^(q+1); apex passing above D; peripheral angle = |i-j|"};
    } else if (angles && corrected) {
        four = {4, Verdict::deviation,
                std::to_string(literal) + " q-shallow pairs exceed 2^(q+1), first " + literal_witness.dump() +
                    "; all within 3 2^q; apex passing and peripheral angles hold"};
    } else {
        four.detail = "angle checks failed";
    }

    const auto &r4 = runs[1].report;
    const std::string inst = "r=4 q=2";
    const auto closeness = select(r4, "extended-pullback-closeness", inst);
    const int pinned = pins["N_hat"][inst];
    const int N = closeness.empty() ? -1 : closeness[0]->measured["N"].get<int>();
    const bool family = holds(r4, "extended-pullback-bigon", 1, inst) && !closeness.empty() && closeness[0]->pass &&
                        N == pinned && holds(r4, "push-forward-quasi-geodesic", 1, inst);
    const auto bigon = select(r4, "extended-pullback-bigon", inst);
    Line six{6, verdict(family),
             "r=4 q=2: bigon " + (bigon.empty() ? std::string("?") : bigon[0]->measured["bigon"].dump()) + " <= 2 q delta, N = " +
                 std::to_string(N) + " (pinned " + std::to_string(pinned) + "), push-forward distortion <= d + N"};
    return {three, four, six};
}

Line quasiconvexity_criterion(const json &pins)
{
    const auto t = run(scene("even_b_qc"), "uniform-qc");
    const int pinned = pins["lambda_hat"];
    const auto u = select(t.report, "uniform-quasiconvexity");
    bool ok = holds(t.report, "uniform-quasiconvexity") && holds(t.report, "quasiconvexity-enumeration-complete", 3);
    json lambdas = u.empty() ? json() : u[0]->measured["lambda"];
    if (lambdas.size() != 3) ok = false;
    for (const auto &[r, v] : lambdas.items()) ok = ok && v.get<int>() == pinned;
    return {5, verdict(ok), "lambda by r " + lambdas.dump() + " (pinned " + std::to_string(pinned) + ", tolerance 0)"};
}

Line filling_criterion(const json &pins)
{
    const auto t = run(scene("even_b_filling"), "filling");
    const double budget = pins["runtime_seconds"]["filling"];
    bool ok = t.report.pass();
    for (int n : {5, 7, 9, 11}) {
        const auto inst = "n=" + std::to_string(n);
        ok = ok && holds(t.report, "filling-homomorphism", 1, inst) && holds(t.report, "peripheral-quotient-injective", 1, inst);
    }
    for (int n : {6, 8, 10}) ok = ok && holds(t.report, "induced-filling-injective", 1, "n=" + std::to_string(n));
    int delta_band = -1, lambda_band = -1;
    if (const auto d = select(t.report, "quotient-slimness-uniform"); !d.empty()) delta_band = d[0]->measured["band"];
    if (const auto l = select(t.report, "quotient-quasiconvexity-uniform"); !l.empty()) lambda_band = l[0]->measured["band"];
    ok = ok && delta_band >= 0 && delta_band <= kBandTolerance && lambda_band >= 0 && lambda_band <= kBandTolerance;
    return {7, verdict(ok && t.seconds < budget),
            "homomorphism and P/N injective for odd n, induced filling injective for n in {6,8,10}; delta band " +
                std::to_string(delta_band) + ", lambda band " + std::to_string(lambda_band) + " (<= " +
                std::to_string(kBandTolerance) + "); " + seconds(t.seconds) + " (< " + seconds(budget) + ")"};
}

Line fineness_criterion(const json &pins)
{
    const auto standard = run(scene("fineness_standard"), "fineness");
    const auto powers = run(scene("fineness_powers"), "fineness");
    const int pinned = pins["fineness_standard_count"];
    const auto flat = select(standard.report, "fineness-at-apex");
    const auto grow = select(powers.report, "fineness-fails-with-peripheral-powers");
    bool ok = standard.report.pass() && powers.report.pass() && !flat.empty() && !grow.empty();
    json flat_counts = flat.empty() ? json() : flat[0]->measured["counts"];
    json grow_counts = grow.empty() ? json() : grow[0]->measured["counts"];
    for (const auto &[r, v] : flat_counts.items()) ok = ok && v.get<int>() == pinned;
    return {8, verdict(ok),
            "peripheral powers " + grow_counts.dump() + " strictly increasing; standard " + flat_counts.dump() + " = " +
                std::to_string(pinned) + " (pinned)"};
}

Line negative_controls(const fs::path &cli)
{
    const auto work = fs::temp_directory_path() / "cusp-acceptance";
    fs::remove_all(work);
    fs::create_directories(work);
    struct Case {
        std::string scene, suite;
        std::function<void(json &)> shrink;
    };
    const std::vector<Case> cases{
        {"line_horoball_coned", "horoball-shape", [](json &) {}},
        {"free_ab", "transfer", [](json &) {}},
        {"even_b_qc", "uniform-qc", [](json &j) { j["cone_depths"] = {3}; }},
        {"even_b_filling", "filling", [](json &j) { j["filling"]["sweep"] = {6}; }},
        {"fineness_standard", "fineness", [](json &) {}},
    };
    std::size_t failed_with_witness = 0;
    std::string missing;
    for (const auto &c : cases) {
        auto j = read_json(kSource / "scenes" / (c.scene + ".json"));
        j["corrupt"] = {{"remove_cone_edge", true}};
        c.shrink(j);
        const auto path = work / (c.scene + ".json");
        std::ofstream(path) << j.dump(2);
        const auto out = work / c.scene;
        const auto cmd = "\"" + cli.string() + "\" verify --scene \"" + path.string() + "\" --suite " + c.suite +
                         " --out \"" + out.string() + "\" 2>/dev/null";
        const int status = std::system(cmd.c_str());
        const bool nonzero = status != 0;
        bool witnessed = false;
        if (const auto file = out / ("report-" + c.suite + ".json"); fs::exists(file)) {
            const auto report = read_json(file);
            for (const auto &a : report["assertions"])
                witnessed = witnessed || (!a["pass"].get<bool>() && !a["witness"].is_null());
        }
        if (nonzero && witnessed)
            ++failed_with_witness;
        else
            missing += (missing.empty() ? "" : ", ") + c.suite;
    }
    fs::remove_all(work);
    return {9, verdict(missing.empty()),
            std::to_string(failed_with_witness) + "/" + std::to_string(cases.size()) +
                " suites exit nonzero with a witnessed failure after removing one cone edge" +
                (missing.empty() ? "" : "; not: " + missing)};
}

} // namespace

int main(int argc, char **argv)
{
    if (argc != 2) {
        std::cerr << "usage: acceptance <path to the cusp CLI>\n";
        return 2;
    }
    const auto pins = read_json(kSource / "tests" / "fixtures" / "acceptance.json");
    std::vector<Line> lines;
    auto guarded = [&](std::vector<int> ids, const std::function<std::vector<Line>()> &f) {
        try {
            for (auto &l : f()) lines.push_back(std::move(l));
        } catch (const std::exception &e) {
            for (int id : ids) lines.push_back({id, Verdict::fail, std::string("error: ") + e.what()});
        }
    };
    guarded({1, 2}, [&] { return horoball_criteria(pins); });
    guarded({3, 4, 6}, [&] { return transfer_criteria(pins); });
    guarded({5}, [&] { return std::vector<Line>{quasiconvexity_criterion(pins)}; });
    guarded({7}, [&] { return std::vector<Line>{filling_criterion(pins)}; });
    guarded({8}, [&] { return std::vector<Line>{fineness_criterion(pins)}; });
    guarded({9}, [&] { return std::vector<Line>{negative_controls(argv[1])}; });
    std::sort(lines.begin(), lines.end(), [](const Line &a, const Line &b) { return a.criterion < b.criterion; });

    bool ok = true;
    for (const auto &l : lines) {
        const char *tag = l.verdict == Verdict::pass ? "PASS" : l.verdict == Verdict::fail ? "FAIL" : "DEVIATION";
        std::cout << "criterion " << l.criterion << ": " << tag << "  " << l.detail << "\n";
        ok = ok && l.verdict != Verdict::fail;
    }
    std::cout << (ok ? "acceptance: pass (deviations are listed in README.md)\n" : "acceptance: FAIL\n");
    return ok ? 0 : 1;
}
