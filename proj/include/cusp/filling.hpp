#pragma once

#include "cusp/subgroup.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cusp {

/// Kernel <g^n> of each filled peripheral factor g; n = 0 is the trivial kernel.
struct FillingSpec {
    std::map<std::uint32_t, std::uint64_t> kernels;

    /// Throws SpecError for kernels on non-peripheral factors.
    void validate(const GroupSpec &group) const;
    std::uint64_t kernel(std::uint32_t factor) const;
};

/// A filling quotient G -> G(N_1, ..., N_k) of a free product of cyclic factors.
struct Filling {
    GroupSpec source;
    GroupSpec quotient;
    /// Source factor index → quotient factor index; empty for factors that collapse.
    std::vector<std::optional<std::uint32_t>> factor_image;

    GroupElement project(const GroupElement &g) const;
};

Filling fill(const GroupSpec &group, const FillingSpec &filling);

/// Kernels K_i = phi^-1(c_i N c_i^-1) ∩ D_i of the induced filling of H.
FillingSpec induced_filling(const SubgroupEmbeddingSpec &embed, const FillingSpec &filling);

/// The embedding of the induced filling of H into the filling of G.
SubgroupEmbeddingSpec quotient_embedding(const SubgroupEmbeddingSpec &embed, const FillingSpec &filling);

struct HFillingVerdict {
    bool holds = true;
    std::size_t conjugators = 0;
    std::optional<GroupElement> witness; ///< first conjugator g with N^g outside every D^s
};

/// Over conjugators g in the radius-R ball: whenever H meets P^g infinitely, N^g must lie in some D^s.
HFillingVerdict is_H_filling(const SubgroupEmbeddingSpec &embed, const FillingSpec &filling, int R);

/// Pairs x, y of the source ball with |x| + |y| <= R where project(xy) != project(x) project(y).
std::size_t homomorphism_violations(const Filling &f, int R);

/// Least word length of a nontrivial kernel element in the radius-R ball; -1 if there is none.
int injectivity_radius(const Filling &f, int R);

struct FillingReport {
    std::uint64_t n = 0;
    int r = 0;
    int R = 0;
    HFillingVerdict h_filling;
    std::size_t homomorphism_violations = 0;
    bool peripheral_injective = true;   ///< P/N → quotient
    bool set_injective = true;          ///< projection on the chosen finite set
    std::size_t separation_checked = 0;
    std::size_t separation_violations = 0; ///< g outside H with π(g) in π(H ∩ ball); only for H-fillings
    bool subgroup_injective = true;     ///< induced filling of H → quotient, on the ball
    int injectivity_radius = -1;
    int delta = 0;
    int lambda = 0;
    std::optional<GroupElement> separation_witness;
    ConeEdgeCheck quotient_cone_edges;
    std::vector<std::string> missing_cone_edge; ///< names of the first missing (apex, vertex) pair
};

struct FillingChecks {
    int set_radius = 2;        ///< the finite set is the ball of this radius
    int separation_radius = 3; ///< elements g outside H with |g| at most this
    std::size_t delta_budget = 2000;
    std::uint64_t seed = 1;
    GraphTransform tamper; ///< applied to the quotient cusped space
};

/// Every conclusion check for a filling of the single peripheral factor of `embed`.
FillingReport verify_filling_conclusions(const SubgroupEmbeddingSpec &embed, std::uint64_t n, int r, int R,
                                         const FillingChecks &checks = {});

/// verify_filling_conclusions for each n with up to `jobs` worker threads, in the order of ns.
std::vector<FillingReport> verify_fillings(const SubgroupEmbeddingSpec &embed, const std::vector<std::uint64_t> &ns,
                                           int r, int R, const FillingChecks &checks = {}, unsigned jobs = 1);

struct SweepRow {
    std::uint64_t n = 0;
    int r = 0;
    int R = 0;
    int delta = 0;
    int lambda = 0;
    int injectivity_radius = -1;
    bool h_filling = false;
};

/// One row per n, computed with up to `jobs` worker threads; rows keep the order of ns.
std::vector<SweepRow> sweep(const SubgroupEmbeddingSpec &embed, const std::vector<std::uint64_t> &ns, int r, int R,
                            const FillingChecks &checks = {}, unsigned jobs = 1);

} // namespace cusp
