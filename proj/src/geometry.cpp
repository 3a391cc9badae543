#include "growth/geometry.hpp"

#include <algorithm>
#include <set>

namespace growth {

Geometry Geometry::torus(std::vector<int> sides) {
    Geometry g;
    g.kind = Kind::Torus;
    g.sides = std::move(sides);
    std::uint64_t n = 1;
    for (int s : g.sides) {
        if (s < 1) throw ModelError("torus sides must be positive");
        n *= static_cast<std::uint64_t>(s);
    }
    if (n == 0 || n > (1u << 26)) throw ModelError("torus too large");
    g.nSites = static_cast<std::uint32_t>(n);
    return g;
}

Geometry Geometry::graph(std::uint32_t nSites) {
    Geometry g;
    g.kind = Kind::Graph;
    g.nSites = nSites;
    return g;
}

RuntimeMapping compileMapping(int nTypes, const LocalMapping& e) {
    RuntimeMapping rm;
    rm.arity = e.arity();
    rm.rate = e.rate;
    rm.table = e.table;
    LocalCodec codec(nTypes, rm.arity);
    rm.powers.resize(rm.arity);
    std::uint32_t pow = 1;
    for (int i = 0; i < rm.arity; ++i) {
        rm.powers[i] = pow;
        pow *= static_cast<std::uint32_t>(nTypes);
    }
    rm.outTypes.resize(rm.table.size() * rm.arity);
    for (ConfigIndex idx = 0; idx < rm.table.size(); ++idx) {
        LocalConfig out = codec.decode(rm.table[idx]);
        for (int p = 0; p < rm.arity; ++p) rm.outTypes[idx * rm.arity + p] = out[p];
    }
    return rm;
}

BoundModel bind(const GrowthModel& m, const Geometry& g) {
    BoundModel bm;
    bm.model = m;
    bm.geom = g;
    bm.nSites = g.nSites;
    const int nTypes = m.lattice.size();
    for (const auto& e : m.events.mappings) {
        bm.runtime.push_back(compileMapping(nTypes, e));
        if (e.table[0] != 0) bm.absorbing = false;
    }

    auto addInstance = [&](std::uint32_t mi, const std::vector<std::uint32_t>& sites) {
        std::set<std::uint32_t> distinct(sites.begin(), sites.end());
        if (distinct.size() != sites.size())
            throw ModelError("template wraps onto itself on this geometry");
        bm.instMapping.push_back(mi);
        bm.siteStart.push_back(static_cast<std::uint32_t>(bm.flatSites.size()));
        for (auto s : sites) bm.flatSites.push_back(s);
        bm.instRate.push_back(m.events.mappings[mi].rate);
    };

    for (std::uint32_t mi = 0; mi < m.events.mappings.size(); ++mi) {
        const auto& tmpl = m.events.mappings[mi].sites;
        if (tmpl.translationInvariant) {
            if (g.kind != Geometry::Kind::Torus)
                throw ModelError("offset templates need a torus geometry");
            const int d = g.dim();
            for (const auto& off : tmpl.offsets)
                if (static_cast<int>(off.size()) != d)
                    throw ModelError("template dimension does not match the torus");
            std::vector<int> coord(d, 0);
            for (std::uint32_t anchor = 0; anchor < g.nSites; ++anchor) {
                std::vector<std::uint32_t> sites;
                sites.reserve(tmpl.offsets.size());
                for (const auto& off : tmpl.offsets) {
                    std::uint32_t idx = 0, stride = 1;
                    for (int k = 0; k < d; ++k) {
                        int c = coord[k] + off[k];
                        c %= g.sides[k];
                        if (c < 0) c += g.sides[k];
                        idx += static_cast<std::uint32_t>(c) * stride;
                        stride *= static_cast<std::uint32_t>(g.sides[k]);
                    }
                    sites.push_back(idx);
                }
                addInstance(mi, sites);
                int k = 0;
                while (k < d && ++coord[k] >= g.sides[k]) coord[k++] = 0;
            }
        } else {
            for (auto s : tmpl.sites)
                if (s >= g.nSites) throw ModelError("explicit template site outside the geometry");
            addInstance(mi, tmpl.sites);
        }
    }
    bm.siteStart.push_back(static_cast<std::uint32_t>(bm.flatSites.size()));
    return bm;
}

BoundModel bindScaled(const GrowthModel& m, const Geometry& g,
                      const std::vector<std::uint32_t>& mappingIds, double factor) {
    GrowthModel scaled = m;
    for (auto id : mappingIds) {
        if (id >= scaled.events.mappings.size()) throw ModelError("parameter mapping id out of range");
        scaled.events.mappings[id].rate *= factor;
    }
    return bind(scaled, g);
}

}  // namespace growth
