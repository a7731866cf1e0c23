#pragma once

#include "cusp/filling.hpp"
#include "cusp/scene.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cusp {

inline constexpr const char *kManifestSchema = "cusp-manifest/1";

struct NamedGraph {
    std::string name;
    SpaceGraph graph;
};

/// The graphs a scene describes: the cusped space, the coned-off Cayley graph, and the line horoball when given.
std::vector<NamedGraph> scene_graphs(const Scene &scene);

/// Vertices with kind, depth and name; edges as [u, v, kind, label].
nlohmann::json graph_json(const SpaceGraph &g);

/// Writes one JSON dump per graph (and DOT files when `dot` is set) and returns the manifest,
/// which is also written as manifest.json.
nlohmann::json write_build(const Scene &scene, const std::filesystem::path &dir, bool dot);

/// Writes one DOT file per graph; returns the file names.
std::vector<std::string> write_dot_files(const Scene &scene, const std::filesystem::path &dir);

std::string sweep_csv(const std::vector<SweepRow> &rows);
nlohmann::json sweep_json(const std::vector<SweepRow> &rows);

} // namespace cusp
