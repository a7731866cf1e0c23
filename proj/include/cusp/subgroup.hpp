#pragma once

#include "cusp/transfer.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cusp {

/// A peripheral factor D of H sent into c P c^-1 for a peripheral factor P of G.
struct PeripheralEmbedding {
    std::uint32_t source = 0;
    std::uint32_t target = 0;
    GroupElement conjugator;
    /// Letters of the ambient alphabet spelling the conjugator; empty for the identity.
    std::vector<GroupElement> connector;
};

/// H given as a free product of cyclic factors, factor i generated by the image
/// (G factor j)^s of its generator. The factor map must be injective, so H is the
/// subgroup of G generated by those powers.
struct SubgroupEmbeddingSpec {
    GroupSpec ambient;
    GroupSpec subgroup;
    /// subgroup factor index → (ambient factor index, multiplier)
    std::vector<std::pair<std::uint32_t, std::int64_t>> factor_map;
    std::vector<PeripheralEmbedding> peripherals;

    /// Throws SpecError on a non-injective factor map, a peripheral not conjugated into
    /// its target, a connector not spelling its conjugator, or Y ∪ Y_i not inside X ∪ X_i.
    void validate() const;
};

/// The inclusion H → G on normal forms.
GroupElement embed(const SubgroupEmbeddingSpec &spec, const GroupElement &h);
/// The element of H mapping to g, if g lies in H.
std::optional<GroupElement> preimage(const SubgroupEmbeddingSpec &spec, const GroupElement &g);

/// The subgroup instance <a, b^2> in F(a, b) with D = <b^2> in P = <b>; X_P = {b, b^2}
/// so that Y ∪ Y_D lies in X ∪ X_P. A nonzero shift conjugates D by b^shift.
SubgroupEmbeddingSpec even_b_subgroup(std::int64_t shift = 0);

struct MeasuredConstants {
    std::string instance;
    int r = 0;
    int R = 0;
    int q = 0;
    Rational lambda_phi{0};
    Rational angle_expansion{0}; ///< M_A
    std::vector<std::pair<Rational, Rational>> distortion; ///< (k, l) pairs
    int closeness = 0;           ///< N
    int big_angle = 0;           ///< D
    int depth_threshold = -1;    ///< r_D
};

/// The coned-off graphs and cusped spaces of H and G over a common radius, with the
/// maps phi_hat between the coned graphs and phi_r between the cusped spaces.
class SubgroupEmbedding {
public:
    /// `tamper` rewrites the cusped space of G.
    SubgroupEmbedding(SubgroupEmbeddingSpec spec, int r, int R, const GraphTransform &tamper = {});

    const SubgroupEmbeddingSpec &spec() const { return spec_; }
    const TransferSpaces &source() const { return source_; }
    const TransferSpaces &target() const { return target_; }

    /// Cone edges are reparametrized with breakpoints 1/q and 1/q - 1/(q l(nu) + q).
    Point phi_hat(const Point &p, int q) const;
    Path phi_hat(const Path &p, int q) const;
    VertexId phi_hat(VertexId v) const;

    VertexId phi_r(VertexId v) const;
    Point phi_r(const Point &p) const;

    /// Image of every vertex of the cusped space of H.
    std::vector<VertexId> cusped_image() const;

private:
    SubgroupEmbeddingSpec spec_;
    TransferSpaces source_;
    TransferSpaces target_;
    std::vector<VertexId> coned_image_;
    std::vector<VertexId> cusped_image_;

    const PeripheralEmbedding &peripheral(std::uint32_t source) const;
    CosetId image_coset(const CosetId &c) const;
    /// Walk h·nu from h to hc in the target coned graph.
    std::vector<VertexId> connector_walk(VertexId h, const PeripheralEmbedding &pe) const;
    std::vector<Point> cone_step(VertexId h, VertexId apex, Rational t0, Rational t1, int q) const;
};

struct EmbeddingReport {
    std::size_t vertices = 0;
    std::size_t edges = 0;
    bool coned_injective = true;
    bool cusped_injective = true;
    Rational lambda_phi{0};         ///< max image length of an edge, both levels
    std::size_t depth_violations = 0;
    std::size_t agreement_violations = 0; ///< phi_r against iota∘phi_hat∘pi below depth q
    Rational angle_expansion{0};    ///< max image angle / source angle at apices
    std::vector<VertexId> witnesses;
};

EmbeddingReport embedding_report(const SubgroupEmbedding &e, int q, int angle_cutoff);

} // namespace cusp
