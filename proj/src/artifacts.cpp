#include "cusp/artifacts.hpp"

#include "cusp/coned.hpp"
#include "cusp/horoball.hpp"

#include <fstream>
#include <sstream>

namespace cusp {

namespace {

using nlohmann::json;

void write_text(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecError("cannot write '" + path.string() + "'");
    out << text;
}

} // namespace

std::vector<NamedGraph> scene_graphs(const Scene &scene)
{
    const auto tamper = scene_tamper(scene);
    auto apply = [&](SpaceGraph g) { return tamper ? tamper(g) : g; };
    std::vector<NamedGraph> out;
    out.push_back({"cusped", apply(build_cusped({scene.group, scene.r, scene.R, std::nullopt}))});
    out.push_back({"coned", apply(build_coned_cayley({scene.group, scene.R}))});
    if (scene.horoball) {
        out.push_back({"horoball", apply(build_line_horoball(*scene.horoball))});
    }
    return out;
}

json graph_json(const SpaceGraph &g)
{
    json vertices = json::array();
    for (VertexId v = 0; v < g.size(); ++v) {
        const auto &x = g.vertex(v);
        vertices.push_back({{"id", v}, {"kind", to_string(x.kind)}, {"depth", x.depth}, {"name", vertex_name(g, v)}});
    }
    json edges = json::array();
    for (VertexId v = 0; v < g.size(); ++v)
        for (const auto &a : g.neighbors(v)) {
            if (a.target < v) continue;
            edges.push_back({v, a.target, to_string(a.kind), a.kind == EdgeKind::cayley ? g.labels()[a.label] : ""});
        }
    return {{"basepoint", g.basepoint()}, {"radius", g.truncation_radius()}, {"cone_depth", g.cone_depth()},
            {"vertices", vertices}, {"edges", edges}};
}

json write_build(const Scene &scene, const std::filesystem::path &dir, bool dot)
{
    std::filesystem::create_directories(dir);
    json graphs = json::array();
    for (const auto &[name, g] : scene_graphs(scene)) {
        write_text(dir / (name + ".json"), graph_json(g).dump(1) + "\n");
        std::size_t elements = 0, apices = 0, horo = 0;
        for (VertexId v = 0; v < g.size(); ++v) {
            const auto k = g.vertex(v).kind;
            elements += k == VertexKind::element;
            apices += k == VertexKind::apex;
            horo += k == VertexKind::horoball;
        }
        json entry{{"name", name},
                   {"file", name + ".json"},
                   {"vertices", g.size()},
                   {"edges", g.edge_count()},
                   {"element_vertices", elements},
                   {"horoball_vertices", horo},
                   {"apices", apices},
                   {"horoballs", g.horoballs().size()}};
        if (dot) {
            std::ostringstream s;
            write_dot(s, g);
            write_text(dir / (name + ".dot"), s.str());
            entry["dot"] = name + ".dot";
        }
        graphs.push_back(entry);
    }
    const auto ball = enumerate_ball(scene.group, truncation_alphabet(scene.group), scene.R);
    json manifest{{"schema", kManifestSchema},
                  {"scene", scene.name},
                  {"r", scene.r},
                  {"R", scene.R},
                  {"ball_elements", ball.size()},
                  {"graphs", graphs}};
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

std::vector<std::string> write_dot_files(const Scene &scene, const std::filesystem::path &dir)
{
    std::filesystem::create_directories(dir);
    std::vector<std::string> files;
    for (const auto &[name, g] : scene_graphs(scene)) {
        std::ostringstream s;
        write_dot(s, g);
        write_text(dir / (name + ".dot"), s.str());
        files.push_back(name + ".dot");
    }
    return files;
}

std::string sweep_csv(const std::vector<SweepRow> &rows)
{
    std::ostringstream out;
    out << "n,r,R,delta,lambda,injectivity_radius,h_filling\n";
    for (const auto &row : rows)
        out << row.n << ',' << row.r << ',' << row.R << ',' << row.delta << ',' << row.lambda << ','
            << row.injectivity_radius << ',' << (row.h_filling ? "yes" : "no") << '\n';
    return out.str();
}

json sweep_json(const std::vector<SweepRow> &rows)
{
    json out = json::array();
    for (const auto &row : rows)
        out.push_back({{"n", row.n},
                       {"r", row.r},
                       {"R", row.R},
                       {"delta", row.delta},
                       {"lambda", row.lambda},
                       {"injectivity_radius", row.injectivity_radius},
                       {"h_filling", row.h_filling}});
    return out;
}

} // namespace cusp
