#include "cusp/artifacts.hpp"
#include "cusp/suites.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace cusp;
namespace fs = std::filesystem;

constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Options {
    std::string scene;
    std::vector<std::string> suites;
    unsigned jobs = 1;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool dot = false;
};

void common(CLI::App *cmd, Options &o)
{
    cmd->add_option("--scene", o.scene, "Scene file (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--seed", o.seed, "Sampling seed, overriding the scene");
}

Scene load(const Options &o)
{
    auto scene = load_scene(o.scene);
    if (o.seed) scene.seed = *o.seed;
    return scene;
}

std::optional<fs::path> out_dir(const Options &o, const Scene &scene)
{
    if (!o.out.empty()) return fs::path(o.out);
    if (scene.out) return fs::path(*scene.out);
    return std::nullopt;
}

void write_file(const fs::path &path, const std::string &text)
{
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecError("cannot write '" + path.string() + "'");
    out << text;
}

int cmd_build(const Options &o)
{
    const auto scene = load(o);
    const auto dir = out_dir(o, scene).value_or("build-out");
    const auto manifest = write_build(scene, dir, o.dot || scene.dot);
    for (const auto &g : manifest["graphs"])
        std::cout << g["name"].get<std::string>() << ": " << g["vertices"] << " vertices, " << g["edges"] << " edges\n";
    std::cout << "manifest: " << (dir / "manifest.json").string() << "\n";
    return 0;
}

int cmd_export(const Options &o)
{
    const auto scene = load(o);
    const auto dir = out_dir(o, scene).value_or("export-out");
    for (const auto &f : write_dot_files(scene, dir)) std::cout << (dir / f).string() << "\n";
    return 0;
}

int cmd_verify(const Options &o)
{
    const auto scene = load(o);
    auto suites = o.suites.empty() ? scene.suites : o.suites;
    if (suites.empty()) throw SpecError("no suite selected; pass --suite or list suites in the scene");
    for (const auto &s : suites) check_suite_requirements(scene, s);
    const auto dir = out_dir(o, scene);
    bool all = true;
    for (const auto &s : suites) {
        const auto report = run_suite(scene, s, o.jobs);
        for (const auto &a : report.assertions)
            std::cerr << (a.pass ? "PASS " : "FAIL ") << s << " " << a.anchor << " [" << a.instance << "]"
                      << (a.witness.is_null() ? "" : " witness=" + a.witness.dump()) << "\n";
        const auto text = report.to_json().dump(2) + "\n";
        if (dir)
            write_file(*dir / ("report-" + s + ".json"), text);
        else
            std::cout << text;
        std::cerr << s << ": " << (report.pass() ? "pass" : "FAIL") << "\n";
        all = all && report.pass();
    }
    return all ? 0 : kFailed;
}

int cmd_sweep(const Options &o)
{
    const auto scene = load(o);
    if (!scene.filling) throw SchemaError("filling", "sweep needs a filling block");
    if (!scene.subgroup) throw SchemaError("subgroup", "sweep needs a subgroup block");
    FillingChecks checks;
    checks.set_radius = scene.filling->set_radius;
    checks.separation_radius = scene.filling->separation_radius;
    checks.delta_budget = scene.budgets.delta;
    checks.seed = scene.seed;
    checks.tamper = scene_tamper(scene);
    const auto rows = sweep(*scene.subgroup, scene.filling->sweep, scene.r, scene.R, checks, o.jobs);
    const auto csv = sweep_csv(rows);
    if (const auto dir = out_dir(o, scene)) {
        write_file(*dir / "sweep.csv", csv);
        write_file(*dir / "sweep.json", sweep_json(rows).dump(2) + "\n");
    }
    std::cout << csv;
    for (const auto &row : rows)
        if (!row.h_filling) std::cerr << "n=" << row.n << ": not an H-filling\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Cusped spaces, transfer maps and Dehn fillings of free products of cyclic groups"};
    app.require_subcommand(1);
    Options o;
    auto *build = app.add_subcommand("build", "Build the scene's graphs and write JSON dumps and a manifest");
    common(build, o);
    build->add_flag("--dot", o.dot, "Also write DOT files");
    auto *verify = app.add_subcommand("verify", "Run verification suites and write versioned reports");
    common(verify, o);
    verify->add_option("--suite", o.suites, "Suite name; repeatable");
    auto *sweep_cmd = app.add_subcommand("sweep", "Tabulate filling measurements over the scene's sweep range");
    common(sweep_cmd, o);
    auto *export_cmd = app.add_subcommand("export", "Write one DOT file per graph");
    common(export_cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }
    try {
        if (build->parsed()) return cmd_build(o);
        if (verify->parsed()) return cmd_verify(o);
        if (sweep_cmd->parsed()) return cmd_sweep(o);
        if (export_cmd->parsed()) return cmd_export(o);
    } catch (const SchemaError &e) {
        std::cerr << "scene error: " << e.what() << "\n";
        return kUsage;
    } catch (const SpecError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kUsage;
}
