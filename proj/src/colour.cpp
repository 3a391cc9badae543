#include "growth/colour.hpp"

#include <algorithm>

namespace growth {

Expansion expand(const TypeLattice& lat) {
    Expansion x;
    TypeSet prims = lat.primitives();
    auto elems = setElements(prims);
    const std::size_t k = elems.size();

    x.combos.push_back(0);  // passive
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
        TypeSet combo = 0;
        for (std::size_t i = 0; i < k; ++i)
            if ((mask >> i) & 1u) combo = setAdd(combo, elems[i]);
        if (lat.isAntichain(combo)) x.combos.push_back(combo);
    }
    std::sort(x.combos.begin() + 1, x.combos.end());
    const int n = static_cast<int>(x.combos.size());
    if (n > kMaxTypes)
        throw BoundExceeded("multi-colour expansion needs " + std::to_string(n) +
                            " types, cap is " + std::to_string(kMaxTypes));
    for (int i = 0; i < n; ++i) x.indexOf[x.combos[i]] = static_cast<TypeId>(i);

    // Order: C <= C' when every member of C lies below some member of C'.
    std::vector<std::uint8_t> leq(n * n, 0);
    std::vector<TypeId> join(n * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bool le = true;
            for (TypeId a : setElements(x.combos[i])) {
                bool covered = false;
                for (TypeId b : setElements(x.combos[j]))
                    if (lat.leq(a, b)) {
                        covered = true;
                        break;
                    }
                if (!covered) {
                    le = false;
                    break;
                }
            }
            leq[i * n + j] = le;
            join[i * n + j] = x.indexOf.at(colourJoin(lat, x.combos[i], x.combos[j]));
        }
    x.starLattice = TypeLattice::fromTables(n, std::move(leq), std::move(join));
    if (!x.starLattice.isMultiColour())
        throw ModelError("expansion failed to be multi-colour; lattice inconsistency");

    x.projection.resize(n);
    for (int i = 0; i < n; ++i) x.projection[i] = lat.joinSet(x.combos[i]);
    return x;
}

namespace {

// Componentwise star join of all star preimages of a base local config; the
// preimage join factorizes over sites and over decompositions per site.
LocalConfig starPreimageJoin(const TypeLattice& lat, const Expansion& x, const LocalConfig& phi) {
    LocalConfig out(phi.size(), 0);
    for (std::size_t p = 0; p < phi.size(); ++p) {
        if (phi[p] == 0) continue;
        TypeSet folded = 0;
        for (TypeSet dec : lat.decompositions(phi[p])) folded = colourJoin(lat, folded, dec);
        out[p] = x.indexOfCombo(folded);
    }
    return out;
}

}  // namespace

LocalMapping liftMapping(const TypeLattice& lat, const Expansion& x, const LocalMapping& e) {
    if (!isAdditive(lat, e)) throw NotAdditive("lift requires an additive mapping");
    const int k = e.arity();
    const TypeLattice& star = x.starLattice;
    LocalCodec baseCodec(lat.size(), k);
    LocalCodec starCodec(star.size(), k);

    // Star images of single-organism inputs, built layer by layer so that the
    // image of a primitive dominates the images of primitives below it.
    std::vector<std::vector<LocalConfig>> img(k, std::vector<LocalConfig>(star.size()));
    auto layers = layerPartition(lat, lat.primitives());
    for (std::size_t li = 0; li < layers.size(); ++li) {
        for (TypeId a : setElements(layers[li])) {
            TypeId starA = x.indexOfCombo(setAdd(0, a));
            for (int p = 0; p < k; ++p) {
                LocalConfig basePhi = baseCodec.decode(baseCodec.delta(p, a));
                LocalConfig image = starPreimageJoin(lat, x, baseCodec.decode(e.table[baseCodec.encode(basePhi)]));
                // Join in the images of strictly lower primitives from
                // earlier layers.
                for (std::size_t lj = 0; lj < li; ++lj)
                    for (TypeId b : setElements(layers[lj]))
                        if (lat.lt(b, a)) {
                            const LocalConfig& lower = img[p][x.indexOfCombo(setAdd(0, b))];
                            for (int q = 0; q < k; ++q)
                                image[q] = star.join(image[q], lower[q]);
                        }
                img[p][starA] = image;
            }
        }
    }
    // Compounds join their members' images; passive maps to all-passive.
    for (int c = 1; c < star.size(); ++c) {
        if (setSize(x.combos[c]) == 1) continue;
        for (int p = 0; p < k; ++p) {
            LocalConfig acc(k, 0);
            for (TypeId a : setElements(x.combos[c])) {
                const LocalConfig& part = img[p][x.indexOfCombo(setAdd(0, a))];
                for (int q = 0; q < k; ++q) acc[q] = star.join(acc[q], part[q]);
            }
            img[p][c] = std::move(acc);
        }
    }
    for (int p = 0; p < k; ++p) img[p][0] = LocalConfig(k, 0);

    LocalMapping out;
    out.sites = e.sites;
    out.rate = e.rate;
    out.table.resize(starCodec.tableSize());
    for (ConfigIndex xi = 0; xi < starCodec.tableSize(); ++xi) {
        LocalConfig cfg = starCodec.decode(xi);
        LocalConfig acc(k, 0);
        for (int p = 0; p < k; ++p) {
            const LocalConfig& part = img[p][cfg[p]];
            for (int q = 0; q < k; ++q) acc[q] = star.join(acc[q], part[q]);
        }
        out.table[xi] = starCodec.encode(acc);
    }

    // Commutation with the projection, checked on every star configuration.
    for (ConfigIndex xi = 0; xi < starCodec.tableSize(); ++xi) {
        LocalConfig cfg = starCodec.decode(xi);
        LocalConfig baseIn(k), gotBase(k);
        for (int p = 0; p < k; ++p) baseIn[p] = x.projection[cfg[p]];
        LocalConfig lifted = starCodec.decode(out.table[xi]);
        for (int p = 0; p < k; ++p) gotBase[p] = x.projection[lifted[p]];
        LocalConfig want = baseCodec.decode(e.table[baseCodec.encode(baseIn)]);
        if (gotBase != want)
            throw CommutationFailure("lifted mapping does not project onto the base mapping");
    }
    if (!isAdditive(star, out))
        throw NotAdditive("lifted mapping failed additivity; internal inconsistency");
    return out;
}

LiftedModel liftModel(const GrowthModel& m) {
    LiftedModel lm;
    lm.expansion = expand(m.lattice);
    lm.model.name = m.name.empty() ? "lift" : m.name + "-lift";
    lm.model.lattice = lm.expansion.starLattice;
    lm.model.geometry = m.geometry;
    lm.model.parameters = m.parameters;
    for (std::size_t i = 0; i < lm.expansion.combos.size(); ++i) {
        if (i == 0) {
            lm.model.typeLabels.push_back(m.labelOf(0));
            continue;
        }
        std::string label;
        for (TypeId a : setElements(lm.expansion.combos[i])) {
            if (!label.empty()) label += "+";
            label += m.labelOf(a);
        }
        lm.model.typeLabels.push_back(label);
    }
    for (const auto& e : m.events.mappings)
        lm.model.events.mappings.push_back(liftMapping(m.lattice, lm.expansion, e));
    return lm;
}

std::vector<TypeId> projectConfiguration(const Expansion& x, const std::vector<TypeId>& xi) {
    std::vector<TypeId> out(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) out[i] = x.projection[xi[i]];
    return out;
}

}  // namespace growth
