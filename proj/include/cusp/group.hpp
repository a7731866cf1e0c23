#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cusp {

/// Order value used for infinite cyclic factors.
inline constexpr std::uint64_t kInfiniteOrder = 0;

struct Factor {
    std::string symbol;
    std::uint64_t order = kInfiniteOrder;

    bool infinite() const { return order == kInfiniteOrder; }
    bool operator==(const Factor &) const = default;
};

struct Syllable {
    std::uint32_t factor = 0;
    std::int64_t exponent = 0;

    auto operator<=>(const Syllable &) const = default;
};

/// Normal form in a free product of cyclic groups: alternating syllables,
/// exponents nonzero and, for finite factors, reduced into [1, order-1].
struct GroupElement {
    std::vector<Syllable> syllables;

    bool is_identity() const { return syllables.empty(); }
    std::size_t syllable_count() const { return syllables.size(); }

    auto operator<=>(const GroupElement &) const = default;
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement &g) const noexcept;
};

/// Left coset g·P_i, keyed by the representative with no trailing P_i syllable.
struct CosetId {
    std::uint32_t peripheral = 0;
    GroupElement representative;

    auto operator<=>(const CosetId &) const = default;
};

struct CosetIdHash {
    std::size_t operator()(const CosetId &c) const noexcept;
};

/// A free product of cyclic factors with peripheral data.
struct GroupSpec {
    std::vector<Factor> factors;
    /// Factor indices forming the peripheral collection.
    std::vector<std::uint32_t> peripheral_indices;
    /// The relative generating set X.
    std::vector<GroupElement> gen_set;
    /// X_i for each peripheral index i.
    std::map<std::uint32_t, std::vector<GroupElement>> peripheral_letters;

    bool operator==(const GroupSpec &) const = default;

    /// Checks the structural invariants; throws SpecError.
    void validate() const;
    bool is_peripheral(std::uint32_t factor) const;
    std::optional<std::uint32_t> factor_index(std::string_view symbol) const;
    /// True when g is a normal form for this spec.
    bool is_valid(const GroupElement &g) const;
    /// The syllable generator of a factor.
    GroupElement generator(std::uint32_t factor) const;
};

GroupElement generator_power(const GroupSpec &spec, std::uint32_t factor, std::int64_t exponent);
GroupElement multiply(const GroupSpec &spec, const GroupElement &a, const GroupElement &b);
GroupElement inverse(const GroupSpec &spec, const GroupElement &a);
GroupElement power(const GroupSpec &spec, const GroupElement &a, std::int64_t n);

/// Canonical id of g·P_i.
CosetId coset_rep(const GroupSpec &spec, const GroupElement &g, std::uint32_t peripheral);
/// True when g lies in the factor with the given index (identity included).
bool in_factor(const GroupElement &g, std::uint32_t factor);

/// Closes a list under inverses, removes the identity and duplicates, keeps first-seen order.
std::vector<GroupElement> symmetrize(const GroupSpec &spec, const std::vector<GroupElement> &gens);
/// The symmetrized alphabet X ∪ (union of the X_i).
std::vector<GroupElement> alphabet(const GroupSpec &spec);
/// The symmetrized factor generators.
std::vector<GroupElement> factor_generators(const GroupSpec &spec);

struct Ball {
    std::vector<GroupElement> elements; ///< breadth-first order, identity first
    std::vector<int> length;            ///< word length of each element
    std::unordered_map<GroupElement, std::size_t, GroupElementHash> index;

    std::size_t size() const { return elements.size(); }
    std::optional<std::size_t> find(const GroupElement &g) const;
    bool contains(const GroupElement &g) const { return index.count(g) != 0; }
};

/// Elements of word length at most R over gens and their inverses.
Ball enumerate_ball(const GroupSpec &spec, const std::vector<GroupElement> &gens, int R);

/// Checks on the radius-R ball over the factor generators that X together with
/// the peripherals connects every element; throws SpecError otherwise.
void check_generation(const GroupSpec &spec, int R);

std::string to_string(const GroupSpec &spec, const GroupElement &g);
std::string to_string(const GroupSpec &spec, const CosetId &c);
/// Parses whitespace-separated syllables such as "a b^-2"; "1" is the identity.
GroupElement parse_element(const GroupSpec &spec, std::string_view text);

} // namespace cusp
