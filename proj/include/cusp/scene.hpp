#pragma once

#include "cusp/errors.hpp"
#include "cusp/filling.hpp"
#include "cusp/subgroup.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cusp {

/// A scene field failed validation; `path` names it, e.g. "group.factors[1].order".
class SchemaError : public SpecError {
public:
    SchemaError(std::string path, const std::string &message)
        : SpecError(path + ": " + message), path_(std::move(path))
    {
    }
    const std::string &path() const { return path_; }

private:
    std::string path_;
};

/// Standalone horoball over the segment [-width, width] of the integer line.
struct LineHoroballScene {
    int width = 16;
    int depth = 6;
    std::optional<int> cone_depth;
};

struct FillingScene {
    FillingSpec kernels;
    std::vector<std::uint64_t> sweep;
    int set_radius = 2;
    int separation_radius = 3;
};

struct FinenessScene {
    std::vector<int> radii{2, 3, 4};
    int angle_bound = 2;
    /// Adds g^k for 2 <= k <= radius to X, g the peripheral generator.
    bool peripheral_powers = false;
};

struct Budgets {
    std::size_t pairs = 100000;   ///< certified pairs per space
    std::size_t delta = 2000;     ///< triples for slimness
    std::size_t triples = 60;     ///< triples for the thin-union check
    std::size_t variants = 3;     ///< extended pullbacks per pair
    std::uint64_t geodesic_cap = 10000;
};

struct Scene {
    std::string name;
    GroupSpec group;
    int r = 3;
    int R = 4;
    /// Cone depths compared by the uniform quasiconvexity suite; defaults to {r}.
    std::vector<int> cone_depths;
    std::uint64_t seed = 1;
    std::optional<LineHoroballScene> horoball;
    std::optional<SubgroupEmbeddingSpec> subgroup;
    std::optional<FillingScene> filling;
    std::optional<FinenessScene> fineness;
    std::vector<std::string> suites;
    Budgets budgets;
    std::optional<std::string> out;
    bool dot = false;
    /// Negative control: remove the cone edge at the basepoint from every built space.
    bool remove_cone_edge = false;
};

std::vector<std::string> available_suites();

/// Suites that need 1 <= q <= r - 1.
bool needs_q(const std::string &suite);

/// Parses and validates a scene; throws SchemaError naming the offending field.
Scene parse_scene(const nlohmann::json &j);
Scene load_scene(const std::string &path);

/// Rejects suites whose requirements the scene does not meet.
void check_suite_requirements(const Scene &scene, const std::string &suite);

/// The horoball over the integer line segment described by the scene block.
SpaceGraph build_line_horoball(const LineHoroballScene &line);

/// The transform that removes the basepoint cone edge, when the scene asks for it.
GraphTransform scene_tamper(const Scene &scene);

} // namespace cusp
