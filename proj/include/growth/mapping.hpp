#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "growth/lattice.hpp"
#include "growth/types.hpp"

namespace growth {

using LocalConfig = std::vector<TypeId>;
using ConfigIndex = std::uint32_t;

// Mixed-radix codec between site tuples of types and dense table indices.
class LocalCodec {
public:
    LocalCodec() = default;
    LocalCodec(int nTypes, int arity);

    int arity() const { return arity_; }
    int nTypes() const { return nTypes_; }
    std::size_t tableSize() const { return size_; }

    ConfigIndex encode(std::span<const TypeId> config) const;
    LocalConfig decode(ConfigIndex idx) const;
    TypeId component(ConfigIndex idx, int pos) const;
    ConfigIndex withComponent(ConfigIndex idx, int pos, TypeId v) const;

    // Index of the configuration holding type a at pos and passive elsewhere.
    ConfigIndex delta(int pos, TypeId a) const;

private:
    int nTypes_ = 0;
    int arity_ = 0;
    std::size_t size_ = 0;
    std::vector<std::uint64_t> powers_;
};

// Where a mapping's site tuple lives: translation-invariant offsets on Z^d,
// or explicit site ids on a finite graph.
struct SiteTemplate {
    bool translationInvariant = true;
    std::vector<std::vector<int>> offsets;  // one d-vector per tuple slot
    std::vector<std::uint32_t> sites;       // explicit tuple, used when not invariant

    int arity() const {
        return translationInvariant ? static_cast<int>(offsets.size())
                                    : static_cast<int>(sites.size());
    }
    static SiteTemplate fromOffsets(std::vector<std::vector<int>> offs);
    static SiteTemplate fromSites(std::vector<std::uint32_t> sites);
    bool operator==(const SiteTemplate&) const = default;
};

// One event type: a total function F^T -> F^T stored as a dense table,
// applied at exponential rate per instantiation.
struct LocalMapping {
    SiteTemplate sites;
    std::vector<ConfigIndex> table;  // indexed by LocalCodec::encode
    double rate = 0.0;

    int arity() const { return const_cast<SiteTemplate&>(sites).arity(); }
};

LocalMapping makeMapping(const TypeLattice& lat, SiteTemplate sites,
                         std::vector<ConfigIndex> table, double rate);

// Builds the table from an explicit function of decoded configurations.
template <typename Fn>
std::vector<ConfigIndex> tabulate(const TypeLattice& lat, int arity, Fn&& fn) {
    LocalCodec codec(lat.size(), arity);
    std::vector<ConfigIndex> table(codec.tableSize());
    for (ConfigIndex i = 0; i < table.size(); ++i) {
        LocalConfig in = codec.decode(i);
        LocalConfig out = fn(in);
        table[i] = codec.encode(out);
    }
    return table;
}

LocalConfig applyMapping(const TypeLattice& lat, const LocalMapping& e, const LocalConfig& phi);

// Pointwise join / order on local configurations.
LocalConfig configJoin(const TypeLattice& lat, const LocalConfig& a, const LocalConfig& b);
bool configLeq(const TypeLattice& lat, const LocalConfig& a, const LocalConfig& b);
bool configComparable(const TypeLattice& lat, const LocalConfig& a, const LocalConfig& b);

struct CounterexamplePair {
    LocalConfig first;
    LocalConfig second;
};

// Exhaustive monotonicity check: phi <= phi' implies e(phi) <= e(phi').
bool isAttractive(const TypeLattice& lat, const LocalMapping& e,
                  CounterexamplePair* witness = nullptr);

// Exhaustive join-preservation check: e(phi v phi') = e(phi) v e(phi').
bool isAdditive(const TypeLattice& lat, const LocalMapping& e,
                CounterexamplePair* witness = nullptr);

// Canonical presentation of (template, table): offsets translated to make the
// lexicographically smallest slot the origin and slots sorted, with the table
// permuted to match. Needed to compare event structures up to re-anchoring.
LocalMapping canonicalMapping(const TypeLattice& lat, const LocalMapping& e);

bool sameStructure(const TypeLattice& lat, const std::vector<LocalMapping>& a,
                   const std::vector<LocalMapping>& b, double rateTol = 1e-12);

}  // namespace growth
