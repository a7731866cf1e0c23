#pragma once

#include "cusp/coned.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace cusp {

struct MapSpec {
    int r = 2;
    int q = 1;

    /// Throws PreconditionError unless 1 <= q <= r - 1.
    void validate() const;
};

/// The cusped space K_r and the coned-off Cayley graph over the same alphabet and ball,
/// with the identification of their depth-0 layers and of apices with horoballs.
class TransferSpaces {
public:
    /// `tamper`, when set, rewrites the cusped space after it is built.
    TransferSpaces(const GroupSpec &spec, int r, int R, const GraphTransform &tamper = {});

    const SpaceGraph &cusped() const { return cusped_; }
    const SpaceGraph &coned() const { return coned_; }
    int r() const { return cusped_.cone_depth(); }

    VertexId coned_element(VertexId cusped_element) const;
    VertexId cusped_element(VertexId coned_element) const;
    VertexId coned_apex(int horoball) const;
    /// Horoball of a coned apex, or -1.
    int horoball_of_apex(VertexId coned_apex) const;

private:
    SpaceGraph cusped_;
    SpaceGraph coned_;
    std::vector<VertexId> to_coned_;
    std::vector<VertexId> to_cusped_;
    std::vector<VertexId> apex_of_;
    std::vector<int> horoball_of_;
};

/// Depth of a point of the cusped space: fractional on vertical edges, r + 1 at apices.
Rational point_depth(const SpaceGraph &cusped, const Point &p);

/// All geodesics between two points (up to cap), interior points leaving through either end.
std::vector<Path> point_geodesics(const SpaceGraph &g, const Point &x, const Point &y, std::uint64_t cap = 10000);
Path point_geodesic(const SpaceGraph &g, const Point &x, const Point &y);
Rational point_distance(const SpaceGraph &g, const Point &x, const Point &y);

/// The maps pi_q^r : K_r -> coned graph and iota_q^r : coned graph -> K_r.
class TransferMap {
public:
    TransferMap(const TransferSpaces &spaces, int q);
    ~TransferMap();
    TransferMap(TransferMap &&) noexcept;

    const TransferSpaces &spaces() const { return spaces_; }
    int q() const { return q_; }
    int r() const { return spaces_.r(); }

    Point pi(const Point &p) const;
    Point iota(const Point &p) const;

    /// Requires every point other than the first and last to be a vertex.
    Path push_forward(const Path &c) const;
    Path pullback(const Path &c) const;

    /// Which of the available geodesics each stage uses; index k picks the k-th enumerated one.
    struct Choice {
        std::size_t variant = 0;
        std::uint64_t cap = 10000;
    };
    Path extended_pullback(VertexId x, VertexId y, const Choice &choice) const;
    Path extended_pullback(VertexId x, VertexId y) const { return extended_pullback(x, y, Choice{}); }
    /// 1 to 4, following the depth cases of the construction.
    int extended_pullback_case(VertexId x, VertexId y) const;

    /// BFS rows toward a target, cached; safe to call from several threads.
    std::shared_ptr<const std::vector<int>> cusped_row(VertexId target) const;
    std::shared_ptr<const std::vector<int>> coned_row(VertexId target) const;
    Rational coned_distance(const Point &x, const Point &y) const;
    /// Regularized deterministic geodesic of the cusped space.
    std::vector<VertexId> cusped_geodesic(VertexId x, VertexId y) const;

private:
    struct Caches;
    const TransferSpaces &spaces_;
    int q_;
    std::unique_ptr<Caches> caches_;

    Point cone_point(VertexId element, int horoball, Rational position) const;
    VertexId layer_vertex(int horoball, VertexId element, int depth) const;
    std::vector<VertexId> vertical(int horoball, VertexId element, Rational from, Rational to) const;
};

struct CompositionReport {
    std::size_t cusped_checked = 0;
    std::size_t coned_checked = 0;
    std::vector<VertexId> iota_pi_violations;
    std::vector<Point> pi_iota_violations;
    bool pass() const { return iota_pi_violations.empty() && pi_iota_violations.empty(); }
};

/// iota∘pi on every vertex of depth < q and pi∘iota on every coned vertex and on
/// the edge points at multiples of 1/(2q).
CompositionReport check_compositions(const TransferMap &map);

struct DistortionReport {
    std::size_t pairs = 0;
    Rational pi_expansion{0};  ///< max d_coned(pi x, pi y) / d_cusped(x, y)
    Rational pi_contraction{0}; ///< max d_cusped / d_coned over pairs with distinct images
    int pi_collapsed_max = 0;   ///< max d_cusped over pairs with equal images
    std::size_t iota_pairs = 0;
    Rational iota_expansion{0};
    Rational iota_contraction{0};
    std::pair<VertexId, VertexId> witness{kNoVertex, kNoVertex};

    /// pi within 2(r+1) both ways (collapsed pairs within the additive 2(r+1)) and iota within r+1.
    bool within_bounds(int r) const;
};

/// pi over the given cusped pairs and iota over every certified pair of coned vertices.
DistortionReport distortion_report(const TransferMap &map, const std::vector<std::pair<VertexId, VertexId>> &pairs);

struct LengthReport {
    std::size_t push_samples = 0;
    std::size_t pull_samples = 0;
    Rational push_ratio{0}; ///< max l(push-forward) / l(source)
    Rational pull_low{1000000};
    Rational pull_high{0};
    std::vector<std::pair<VertexId, VertexId>> violations;      ///< pairs failing either check
    std::vector<std::pair<VertexId, VertexId>> push_violations;
    std::vector<std::pair<VertexId, VertexId>> pull_violations;
};

/// Push-forwards of geodesics between the pairs and pullbacks of coned geodesics between their images.
LengthReport length_report(const TransferMap &map, const std::vector<std::pair<VertexId, VertexId>> &pairs);

struct AngleSample {
    VertexId u = kNoVertex;
    VertexId v = kNoVertex;
    AngleValue source;
    AngleValue image;
    int penetration = 0;
    bool passes_apex = false;
};

struct AngleTransferReport {
    std::vector<AngleSample> samples;
    std::vector<std::pair<VertexId, VertexId>> shallow_violations;
    /// Least depth from which every sampled pair has image angle above `big_angle`; -1 if none.
    int deep_threshold = -1;
};

/// Depth-0 pairs of one horoball: horoball angle, image angle at the coset apex,
/// penetration of a regular geodesic, and whether every coned geodesic passes the apex.
AngleTransferReport angle_transfer_report(const TransferMap &map, int horoball,
                                          const std::vector<std::pair<VertexId, VertexId>> &pairs, int cutoff,
                                          int big_angle);

struct ApexPassingReport {
    std::size_t triples = 0;
    /// Largest angle among triples with a geodesic avoiding the apex.
    int max_avoided_angle = 0;
    std::vector<std::array<VertexId, 3>> violations; ///< x, y, apex
};

/// For certified pairs x, y and apices a: the angle at a between the first vertices of
/// geodesics [a, x] and [a, y], and whether every geodesic [x, y] passes a. With a threshold,
/// records triples above it that have an avoiding geodesic.
ApexPassingReport apex_passing(const SpaceGraph &coned, const std::vector<std::pair<VertexId, VertexId>> &pairs,
                               std::optional<int> threshold);

struct GeodesicSegment {
    bool deep = false; ///< an epsilon segment inside one horoball at depth >= q
    int horoball = -1;
    std::vector<VertexId> walk;
};

/// Alternating shallow and deep pieces whose concatenation is the walk.
std::vector<GeodesicSegment> decompose_geodesic(const SpaceGraph &cusped, const std::vector<VertexId> &walk, int q);

struct GuessingReport {
    std::size_t pairs = 0;
    std::size_t triples = 0;
    int bigon = 0;      ///< max Hausdorff between extended pullbacks of one pair
    int closeness = 0;  ///< N: max Hausdorff from extended pullback to geodesic
    int thin_union = 0; ///< h with L(x,y) in the h-neighbourhood of L(x,z) and L(z,y)
    std::size_t push_samples = 0; ///< geodesics that are d-shallow for some 1 <= d <= q
    Rational push_distortion{0};  ///< max l(sub-path) / d(ends) over their push-forwards
    Rational push_excess{0};      ///< max of that ratio minus d
    std::size_t push_degenerate = 0; ///< sub-paths of positive length with equal ends
    Rational pull_distortion{0}; ///< same ratio for pullbacks of coned geodesics, from their ends
    std::pair<VertexId, VertexId> bigon_witness{kNoVertex, kNoVertex};
};

struct GuessingSample {
    std::vector<std::pair<VertexId, VertexId>> pairs;
    std::vector<std::array<VertexId, 3>> triples;
    std::size_t variants = 2;
};

GuessingReport verify_guessing_family(const TransferMap &map, const GuessingSample &sample);

/// Certified vertex pairs of the cusped space; every pair when there are at most `budget`,
/// otherwise a seeded sample of that size.
std::vector<std::pair<VertexId, VertexId>> certified_pairs(const SpaceGraph &g, std::size_t budget,
                                                           std::uint64_t seed = 1);

} // namespace cusp
