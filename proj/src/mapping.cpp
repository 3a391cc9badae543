#include "growth/mapping.hpp"

#include <algorithm>
#include <numeric>

namespace growth {

LocalCodec::LocalCodec(int nTypes, int arity) : nTypes_(nTypes), arity_(arity) {
    powers_.resize(arity + 1);
    powers_[0] = 1;
    for (int i = 0; i < arity; ++i) {
        powers_[i + 1] = powers_[i] * static_cast<std::uint64_t>(nTypes);
        if (powers_[i + 1] > kMaxTableEntries)
            throw BoundExceeded("mapping table would exceed " +
                                std::to_string(kMaxTableEntries) + " entries");
    }
    size_ = powers_[arity];
}

ConfigIndex LocalCodec::encode(std::span<const TypeId> config) const {
    if (static_cast<int>(config.size()) != arity_)
        throw ArityMismatch("configuration has " + std::to_string(config.size()) +
                            " sites, mapping expects " + std::to_string(arity_));
    std::uint64_t idx = 0;
    for (int i = 0; i < arity_; ++i) idx += powers_[i] * config[i];
    return static_cast<ConfigIndex>(idx);
}

LocalConfig LocalCodec::decode(ConfigIndex idx) const {
    LocalConfig out(arity_);
    std::uint64_t v = idx;
    for (int i = 0; i < arity_; ++i) {
        out[i] = static_cast<TypeId>(v % nTypes_);
        v /= nTypes_;
    }
    return out;
}

TypeId LocalCodec::component(ConfigIndex idx, int pos) const {
    return static_cast<TypeId>((idx / powers_[pos]) % nTypes_);
}

ConfigIndex LocalCodec::withComponent(ConfigIndex idx, int pos, TypeId v) const {
    TypeId old = component(idx, pos);
    return static_cast<ConfigIndex>(idx + (static_cast<std::int64_t>(v) - old) *
                                              static_cast<std::int64_t>(powers_[pos]));
}

ConfigIndex LocalCodec::delta(int pos, TypeId a) const {
    return static_cast<ConfigIndex>(powers_[pos] * a);
}

SiteTemplate SiteTemplate::fromOffsets(std::vector<std::vector<int>> offs) {
    SiteTemplate t;
    t.translationInvariant = true;
    t.offsets = std::move(offs);
    for (std::size_t i = 0; i < t.offsets.size(); ++i)
        for (std::size_t j = i + 1; j < t.offsets.size(); ++j)
            if (t.offsets[i] == t.offsets[j]) throw ModelError("template offsets must be distinct");
    return t;
}

SiteTemplate SiteTemplate::fromSites(std::vector<std::uint32_t> sites) {
    SiteTemplate t;
    t.translationInvariant = false;
    t.sites = std::move(sites);
    for (std::size_t i = 0; i < t.sites.size(); ++i)
        for (std::size_t j = i + 1; j < t.sites.size(); ++j)
            if (t.sites[i] == t.sites[j]) throw ModelError("template sites must be distinct");
    return t;
}

LocalMapping makeMapping(const TypeLattice& lat, SiteTemplate sites,
                         std::vector<ConfigIndex> table, double rate) {
    if (rate <= 0) throw NegativeRate("mapping rate must be positive");
    LocalMapping e;
    e.sites = std::move(sites);
    LocalCodec codec(lat.size(), e.sites.arity());
    if (table.size() != codec.tableSize())
        throw ModelError("mapping table must be total: expected " +
                         std::to_string(codec.tableSize()) + " entries, got " +
                         std::to_string(table.size()));
    for (ConfigIndex out : table)
        if (out >= codec.tableSize()) throw ModelError("mapping table entry out of range");
    e.table = std::move(table);
    e.rate = rate;
    return e;
}

LocalConfig applyMapping(const TypeLattice& lat, const LocalMapping& e, const LocalConfig& phi) {
    LocalCodec codec(lat.size(), e.arity());
    return codec.decode(e.table[codec.encode(phi)]);
}

LocalConfig configJoin(const TypeLattice& lat, const LocalConfig& a, const LocalConfig& b) {
    LocalConfig out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = lat.join(a[i], b[i]);
    return out;
}

bool configLeq(const TypeLattice& lat, const LocalConfig& a, const LocalConfig& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!lat.leq(a[i], b[i])) return false;
    return true;
}

bool configComparable(const TypeLattice& lat, const LocalConfig& a, const LocalConfig& b) {
    return configLeq(lat, a, b) || configLeq(lat, b, a);
}

namespace {

// Join of two encoded configurations, componentwise in the lattice.
ConfigIndex indexJoin(const TypeLattice& lat, const LocalCodec& codec, ConfigIndex a,
                      ConfigIndex b) {
    ConfigIndex out = 0;
    std::uint64_t pow = 1;
    for (int i = 0; i < codec.arity(); ++i) {
        out += static_cast<ConfigIndex>(pow * lat.join(codec.component(a, i), codec.component(b, i)));
        pow *= codec.nTypes();
    }
    return out;
}

bool indexLeq(const TypeLattice& lat, const LocalCodec& codec, ConfigIndex a, ConfigIndex b) {
    for (int i = 0; i < codec.arity(); ++i)
        if (!lat.leq(codec.component(a, i), codec.component(b, i))) return false;
    return true;
}

}  // namespace

bool isAttractive(const TypeLattice& lat, const LocalMapping& e, CounterexamplePair* witness) {
    LocalCodec codec(lat.size(), e.arity());
    const std::size_t n = codec.tableSize();
    for (ConfigIndex a = 0; a < n; ++a)
        for (ConfigIndex b = 0; b < n; ++b) {
            if (!indexLeq(lat, codec, a, b)) continue;
            if (!indexLeq(lat, codec, e.table[a], e.table[b])) {
                if (witness) *witness = {codec.decode(a), codec.decode(b)};
                return false;
            }
        }
    return true;
}

bool isAdditive(const TypeLattice& lat, const LocalMapping& e, CounterexamplePair* witness) {
    LocalCodec codec(lat.size(), e.arity());
    const std::size_t n = codec.tableSize();
    for (ConfigIndex a = 0; a < n; ++a)
        for (ConfigIndex b = a; b < n; ++b) {
            ConfigIndex joined = indexJoin(lat, codec, a, b);
            if (e.table[joined] != indexJoin(lat, codec, e.table[a], e.table[b])) {
                if (witness) *witness = {codec.decode(a), codec.decode(b)};
                return false;
            }
        }
    return true;
}

LocalMapping canonicalMapping(const TypeLattice& lat, const LocalMapping& e) {
    const int k = e.arity();
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);

    LocalMapping out = e;
    if (e.sites.translationInvariant) {
        std::stable_sort(perm.begin(), perm.end(), [&](int i, int j) {
            return e.sites.offsets[i] < e.sites.offsets[j];
        });
        // Re-anchor so the smallest slot sits at the origin.
        std::vector<int> base = e.sites.offsets[perm[0]];
        out.sites.offsets.clear();
        for (int i = 0; i < k; ++i) {
            std::vector<int> off = e.sites.offsets[perm[i]];
            for (std::size_t d = 0; d < off.size(); ++d) off[d] -= base[d];
            out.sites.offsets.push_back(std::move(off));
        }
    } else {
        std::stable_sort(perm.begin(), perm.end(),
                         [&](int i, int j) { return e.sites.sites[i] < e.sites.sites[j]; });
        out.sites.sites.clear();
        for (int i = 0; i < k; ++i) out.sites.sites.push_back(e.sites.sites[perm[i]]);
    }

    LocalCodec codec(lat.size(), k);
    std::vector<ConfigIndex> table(codec.tableSize());
    for (ConfigIndex idx = 0; idx < table.size(); ++idx) {
        // idx is in the permuted slot order; translate to the original order.
        LocalConfig permuted = codec.decode(idx);
        LocalConfig original(k);
        for (int i = 0; i < k; ++i) original[perm[i]] = permuted[i];
        ConfigIndex outIdx = e.table[codec.encode(original)];
        LocalConfig outOriginal = codec.decode(outIdx);
        LocalConfig outPermuted(k);
        for (int i = 0; i < k; ++i) outPermuted[i] = outOriginal[perm[i]];
        table[idx] = codec.encode(outPermuted);
    }
    out.table = std::move(table);
    return out;
}

bool sameStructure(const TypeLattice& lat, const std::vector<LocalMapping>& a,
                   const std::vector<LocalMapping>& b, double rateTol) {
    if (a.size() != b.size()) return false;
    auto canon = [&](const std::vector<LocalMapping>& v) {
        std::vector<LocalMapping> c;
        c.reserve(v.size());
        for (const auto& e : v) c.push_back(canonicalMapping(lat, e));
        std::sort(c.begin(), c.end(), [](const LocalMapping& x, const LocalMapping& y) {
            if (x.sites.translationInvariant != y.sites.translationInvariant)
                return x.sites.translationInvariant < y.sites.translationInvariant;
            if (x.sites.offsets != y.sites.offsets) return x.sites.offsets < y.sites.offsets;
            if (x.sites.sites != y.sites.sites) return x.sites.sites < y.sites.sites;
            if (x.table != y.table) return x.table < y.table;
            return x.rate < y.rate;
        });
        return c;
    };
    auto ca = canon(a), cb = canon(b);
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (ca[i].sites != cb[i].sites || ca[i].table != cb[i].table) return false;
        if (std::abs(ca[i].rate - cb[i].rate) > rateTol) return false;
    }
    return true;
}

}  // namespace growth
