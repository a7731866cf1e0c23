#include "cusp/subgroup.hpp"

#include "cusp/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>

namespace cusp {

namespace {

GroupElement product(const GroupSpec &spec, const std::vector<GroupElement> &letters)
{
    GroupElement g;
    for (const auto &x : letters) g = multiply(spec, g, x);
    return g;
}

int connector_length(const SubgroupEmbeddingSpec &spec)
{
    std::size_t n = 0;
    for (const auto &pe : spec.peripherals) n = std::max(n, pe.connector.size());
    return static_cast<int>(n);
}

} // namespace

void SubgroupEmbeddingSpec::validate() const
{
    ambient.validate();
    subgroup.validate();
    if (factor_map.size() != subgroup.factors.size()) throw SpecError("factor map must cover every subgroup factor");
    std::set<std::uint32_t> used;
    for (const auto &[j, s] : factor_map) {
        if (j >= ambient.factors.size()) throw SpecError("factor map targets a missing factor");
        if (s == 0) throw SpecError("factor map multiplier must be nonzero");
        if (!used.insert(j).second) throw SpecError("factor map must be injective on factors");
    }
    for (std::uint32_t i = 0; i < subgroup.factors.size(); ++i) {
        const auto &[j, s] = factor_map[i];
        const auto image = generator_power(ambient, j, s);
        if (image.is_identity()) throw SpecError("factor " + subgroup.factors[i].symbol + " maps to the identity");
        const auto order = ambient.factors[j].order;
        const auto step = static_cast<std::uint64_t>(std::abs(s));
        if (subgroup.factors[i].order != (order == kInfiniteOrder ? kInfiniteOrder : order / std::gcd(order, step)))
            throw SpecError("order of factor " + subgroup.factors[i].symbol + " does not match its image");
    }
    if (peripherals.size() != subgroup.peripheral_indices.size())
        throw SpecError("every subgroup peripheral needs an embedding");
    for (const auto &pe : peripherals) {
        if (!subgroup.is_peripheral(pe.source)) throw SpecError("embedding of a non-peripheral subgroup factor");
        if (!ambient.is_peripheral(pe.target)) throw SpecError("peripheral embedding targets a non-peripheral factor");
        const auto d = embed(*this, subgroup.generator(pe.source));
        const auto c = pe.conjugator;
        const auto conjugated = multiply(ambient, multiply(ambient, inverse(ambient, c), d), c);
        if (!in_factor(conjugated, pe.target))
            throw SpecError("peripheral " + subgroup.factors[pe.source].symbol + " is not conjugated into " +
                            ambient.factors[pe.target].symbol);
        const auto letters = alphabet(ambient);
        for (const auto &x : pe.connector)
            if (std::find(letters.begin(), letters.end(), x) == letters.end())
                throw SpecError("connector letter outside the ambient alphabet");
        if (product(ambient, pe.connector) != c) throw SpecError("connector does not spell the conjugator");
    }
    const auto letters = alphabet(ambient);
    for (const auto &y : alphabet(subgroup))
        if (std::find(letters.begin(), letters.end(), embed(*this, y)) == letters.end())
            throw SpecError("subgroup letter " + to_string(subgroup, y) + " maps outside the ambient alphabet");
}

GroupElement embed(const SubgroupEmbeddingSpec &spec, const GroupElement &h)
{
    GroupElement g;
    for (const auto &s : h.syllables) {
        const auto &[j, m] = spec.factor_map.at(s.factor);
        g = multiply(spec.ambient, g, generator_power(spec.ambient, j, m * s.exponent));
    }
    return g;
}

std::optional<GroupElement> preimage(const SubgroupEmbeddingSpec &spec, const GroupElement &g)
{
    GroupElement h;
    for (const auto &s : g.syllables) {
        std::optional<std::uint32_t> source;
        for (std::uint32_t i = 0; i < spec.factor_map.size(); ++i)
            if (spec.factor_map[i].first == s.factor) source = i;
        if (!source) return std::nullopt;
        const auto m = spec.factor_map[*source].second;
        const auto order = spec.ambient.factors[s.factor].order;
        std::optional<std::int64_t> k;
        if (order == kInfiniteOrder) {
            if (s.exponent % m == 0) k = s.exponent / m;
        } else {
            const auto target = generator_power(spec.ambient, s.factor, s.exponent);
            for (std::int64_t c = 0; c < static_cast<std::int64_t>(order) && !k; ++c)
                if (generator_power(spec.ambient, s.factor, m * c) == target) k = c;
        }
        if (!k) return std::nullopt;
        h = multiply(spec.subgroup, h, generator_power(spec.subgroup, *source, *k));
    }
    if (embed(spec, h) != g) return std::nullopt;
    return h;
}

SubgroupEmbeddingSpec even_b_subgroup(std::int64_t shift)
{
    SubgroupEmbeddingSpec e;
    auto &G = e.ambient;
    G.factors = {{"a", kInfiniteOrder}, {"b", kInfiniteOrder}};
    G.peripheral_indices = {1};
    G.gen_set = {parse_element(G, "a"), parse_element(G, "b")};
    G.peripheral_letters[1] = {parse_element(G, "b"), parse_element(G, "b^2")};
    auto &H = e.subgroup;
    H.factors = {{"a", kInfiniteOrder}, {"c", kInfiniteOrder}};
    H.peripheral_indices = {1};
    H.gen_set = {parse_element(H, "a"), parse_element(H, "c")};
    H.peripheral_letters[1] = {parse_element(H, "c")};
    e.factor_map = {{0, 1}, {1, 2}};
    PeripheralEmbedding pe{1, 1, generator_power(G, 1, shift), {}};
    for (std::int64_t k = 0; k < std::abs(shift); ++k) pe.connector.push_back(generator_power(G, 1, shift > 0 ? 1 : -1));
    e.peripherals = {pe};
    return e;
}

// --------------------------------------------------------------- embedding

SubgroupEmbedding::SubgroupEmbedding(SubgroupEmbeddingSpec spec, int r, int R, const GraphTransform &tamper)
    : spec_((spec.validate(), std::move(spec))), source_(spec_.subgroup, r, R),
      target_(spec_.ambient, r, R + connector_length(spec_), tamper)
{
    const auto &B = source_.coned();
    const auto &A = target_.coned();
    coned_image_.assign(B.size(), kNoVertex);
    for (VertexId v = 0; v < B.size(); ++v) {
        const auto &x = B.vertex(v);
        std::optional<VertexId> w;
        if (x.kind == VertexKind::element)
            w = A.find_element(embed(spec_, x.element));
        else
            w = A.find_apex(image_coset(*x.coset));
        if (!w) throw SpecError("ambient ball lacks the image of " + vertex_name(B, v));
        coned_image_[v] = *w;
    }
    const auto &Hr = source_.cusped();
    const auto &Gr = target_.cusped();
    cusped_image_.assign(Hr.size(), kNoVertex);
    for (VertexId v = 0; v < Hr.size(); ++v) {
        const auto &x = Hr.vertex(v);
        std::optional<VertexId> w;
        if (x.kind == VertexKind::element) {
            w = Gr.find_element(embed(spec_, x.element));
        } else {
            const auto coset = image_coset(*x.coset);
            if (x.kind == VertexKind::apex) {
                if (const auto h = Gr.horoball_for_coset(coset)) w = Gr.horoballs()[*h].apex;
            } else {
                const auto &pe = peripheral(x.coset->peripheral);
                w = Gr.find_horo(multiply(spec_.ambient, embed(spec_, x.element), pe.conjugator), coset, x.depth);
            }
        }
        if (!w) throw SpecError("ambient cusped space lacks the image of " + vertex_name(Hr, v));
        cusped_image_[v] = *w;
    }
}

const PeripheralEmbedding &SubgroupEmbedding::peripheral(std::uint32_t source) const
{
    for (const auto &pe : spec_.peripherals)
        if (pe.source == source) return pe;
    throw SpecError("no embedding for subgroup peripheral " + std::to_string(source));
}

CosetId SubgroupEmbedding::image_coset(const CosetId &c) const
{
    const auto &pe = peripheral(c.peripheral);
    return coset_rep(spec_.ambient, multiply(spec_.ambient, embed(spec_, c.representative), pe.conjugator), pe.target);
}

std::vector<VertexId> SubgroupEmbedding::connector_walk(VertexId h, const PeripheralEmbedding &pe) const
{
    const auto &A = target_.coned();
    auto g = A.vertex(h).element;
    std::vector<VertexId> walk{h};
    for (const auto &x : pe.connector) {
        g = multiply(spec_.ambient, g, x);
        const auto v = A.find_element(g);
        if (!v) throw SpecError("ambient ball lacks a connector vertex");
        walk.push_back(*v);
    }
    return walk;
}

VertexId SubgroupEmbedding::phi_hat(VertexId v) const
{
    return coned_image_.at(v);
}

VertexId SubgroupEmbedding::phi_r(VertexId v) const
{
    return cusped_image_.at(v);
}

// Image of the cone edge {h, apex} between positions t0 and t1 measured from h.
std::vector<Point> SubgroupEmbedding::cone_step(VertexId h, VertexId apex, Rational t0, Rational t1, int q) const
{
    const auto &B = source_.coned();
    const auto &pe = peripheral(B.vertex(apex).coset->peripheral);
    const auto walk = connector_walk(phi_hat(h), pe);
    const Rational L(static_cast<std::int64_t>(walk.size()) - 1);
    const Rational inv_q(1, q);
    const Rational tv = inv_q - 1 / (Rational(q) * L + Rational(q));
    const auto hc = walk.back();
    const auto image_apex = phi_hat(apex);
    auto at = [&](Rational t) {
        if (t >= tv) {
            const Rational s = t >= inv_q ? t : (t - tv) * inv_q / (inv_q - tv);
            return Point::on_edge(hc, image_apex, s);
        }
        const Rational s = t / tv * L;
        const auto k = s.numerator() / s.denominator();
        if (Rational(k) == s) return Point::at(walk[static_cast<std::size_t>(k)]);
        return Point::on_edge(walk[static_cast<std::size_t>(k)], walk[static_cast<std::size_t>(k) + 1], s - Rational(k));
    };
    std::vector<Rational> params{t0};
    for (std::int64_t k = 0; Rational(k) <= L; ++k) {
        const Rational b = L == Rational(0) ? Rational(0) : tv * Rational(k) / L;
        if ((t0 < b && b < t1) || (t1 < b && b < t0)) params.push_back(b);
    }
    if (t1 < t0) std::sort(params.begin() + 1, params.end(), std::greater<>());
    else std::sort(params.begin() + 1, params.end());
    params.push_back(t1);
    std::vector<Point> out;
    for (const auto &t : params) out.push_back(at(t));
    return out;
}

Point SubgroupEmbedding::phi_hat(const Point &p, int q) const
{
    const auto &B = source_.coned();
    if (p.is_vertex()) return Point::at(phi_hat(p.from));
    const auto &arc = *B.edge_between(p.from, p.to);
    if (arc.kind == EdgeKind::cayley) return Point::on_edge(phi_hat(p.from), phi_hat(p.to), p.t);
    const bool from_is_element = B.vertex(p.from).kind == VertexKind::element;
    const auto h = from_is_element ? p.from : p.to;
    const auto apex = from_is_element ? p.to : p.from;
    const auto t = from_is_element ? p.t : 1 - p.t;
    return cone_step(h, apex, t, t, q).front();
}

Path SubgroupEmbedding::phi_hat(const Path &c, int q) const
{
    const auto &B = source_.coned();
    const auto pts = simplified(c).points;
    if (pts.empty()) throw PreconditionError("empty path");
    Path out{{phi_hat(pts[0], q)}};
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const auto &a = pts[k];
        const auto &b = pts[k + 1];
        if (!step_length(B, a, b)) throw PreconditionError("phi_hat needs a continuous path");
        VertexId u = a.from, w = a.to;
        if (a.is_vertex()) {
            u = b.is_vertex() ? a.from : b.from;
            w = b.is_vertex() ? b.from : b.to;
        }
        const auto &arc = *B.edge_between(u, w);
        if (arc.kind == EdgeKind::cayley) {
            out.points.push_back(phi_hat(b, q));
            continue;
        }
        const auto h = B.vertex(u).kind == VertexKind::element ? u : w;
        const auto apex = h == u ? w : u;
        auto position = [&](const Point &p) {
            if (p.is_vertex()) return p.from == h ? Rational(0) : Rational(1);
            return p.from == h ? p.t : 1 - p.t;
        };
        const auto pieces = cone_step(h, apex, position(a), position(b), q);
        out.points.insert(out.points.end(), pieces.begin() + 1, pieces.end());
    }
    return simplified(out);
}

Point SubgroupEmbedding::phi_r(const Point &p) const
{
    if (p.is_vertex()) return Point::at(phi_r(p.from));
    const auto u = phi_r(p.from);
    const auto w = phi_r(p.to);
    if (!target_.cusped().adjacent(u, w)) throw PreconditionError("edge image is not an edge");
    return Point::on_edge(u, w, p.t);
}

std::vector<VertexId> SubgroupEmbedding::cusped_image() const
{
    auto out = cusped_image_;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

EmbeddingReport embedding_report(const SubgroupEmbedding &e, int q, int angle_cutoff)
{
    const auto &B = e.source().coned();
    const auto &A = e.target().coned();
    const auto &Hr = e.source().cusped();
    const auto &Gr = e.target().cusped();
    EmbeddingReport out;
    auto injective = [](std::vector<VertexId> images) {
        std::sort(images.begin(), images.end());
        return std::adjacent_find(images.begin(), images.end()) == images.end();
    };
    std::vector<VertexId> coned_images;
    for (auto v : certified_region(B)) coned_images.push_back(e.phi_hat(v));
    out.coned_injective = injective(coned_images);
    std::vector<VertexId> cusped_images;
    for (auto v : certified_region(Hr)) cusped_images.push_back(e.phi_r(v));
    out.cusped_injective = injective(cusped_images);

    for (VertexId v = 0; v < B.size(); ++v)
        for (const auto &a : B.neighbors(v)) {
            if (a.target < v) continue;
            ++out.edges;
            const auto image = e.phi_hat(edge_path({v, a.target}), q);
            if (!is_valid_path(A, image)) {
                out.witnesses.push_back(v);
                continue;
            }
            const auto len = length(A, image);
            if (out.lambda_phi < len) out.lambda_phi = len;
        }
    TransferMap source_map(e.source(), q);
    TransferMap target_map(e.target(), q);
    for (VertexId v = 0; v < Hr.size(); ++v) {
        ++out.vertices;
        const auto w = e.phi_r(v);
        if (Hr.vertex(v).depth != Gr.vertex(w).depth) {
            ++out.depth_violations;
            out.witnesses.push_back(v);
        }
        for (const auto &a : Hr.neighbors(v)) {
            if (a.target < v) continue;
            const auto x = e.phi_r(a.target);
            Rational len(Gr.adjacent(w, x) ? 1 : (*target_map.cusped_row(x))[w]);
            if (out.lambda_phi < len) out.lambda_phi = len;
        }
        if (Hr.vertex(v).kind != VertexKind::apex && Hr.vertex(v).depth < q) {
            const auto composed = target_map.iota(e.phi_hat(source_map.pi(Point::at(v)), q));
            if (!(composed == Point::at(w))) {
                ++out.agreement_violations;
                out.witnesses.push_back(v);
            }
        }
    }
    for (auto apex : certified_region(B)) {
        if (B.vertex(apex).kind != VertexKind::apex) continue;
        const auto image_apex = e.phi_hat(apex);
        std::vector<VertexId> around;
        for (const auto &a : B.neighbors(apex))
            if (certified(B, apex, a.target)) around.push_back(a.target);
        for (std::size_t i = 0; i < around.size(); ++i)
            for (std::size_t j = i + 1; j < around.size(); ++j) {
                const auto u = around[i], v = around[j];
                const auto source = angle_at(B, apex, u, v, std::min(angle_cutoff, safe_cutoff(B, u, v)));
                if (!source.is_exact() || source.value == 0) continue;
                // Image angle read at the first vertices of the image cone edges.
                const auto pu = e.phi_hat(edge_path({apex, u}), q);
                const auto pv = e.phi_hat(edge_path({apex, v}), q);
                const auto iu = pu.points[1].from;
                const auto iv = pv.points[1].from;
                const auto image = angle_at(A, image_apex, iu, iv, std::min(angle_cutoff, safe_cutoff(A, iu, iv)));
                const Rational ratio(image.value, source.value);
                if (out.angle_expansion < ratio) out.angle_expansion = ratio;
            }
    }
    return out;
}

} // namespace cusp
