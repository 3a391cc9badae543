#include "growth/pcclass.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

namespace growth {

std::vector<Organism> produces(const TypeLattice& lat, const LocalMapping& e, int slot, TypeId a) {
    if (!lat.isMultiColour())
        throw NotMultiColour("production records need unique decompositions");
    LocalCodec codec(lat.size(), e.arity());
    LocalConfig image = codec.decode(e.table[codec.delta(slot, a)]);
    std::vector<Organism> out;
    for (int y = 0; y < e.arity(); ++y)
        if (image[y] != 0)
            for (TypeId b : setElements(lat.colourOf(image[y]))) out.push_back({y, b});
    return out;
}

OrganismFate classifyOrganism(const TypeLattice& lat, const LocalMapping& e, int slot, TypeId a) {
    OrganismFate fate;
    fate.organism = {slot, a};
    fate.production = produces(lat, e, slot, a);

    LocalCodec codec(lat.size(), e.arity());
    LocalConfig image = codec.decode(e.table[codec.delta(slot, a)]);

    // Waxing reads "produces at least itself" in the order: something at the
    // own slot at least as strong. Waning reads "at most itself and nothing
    // else": the whole image dominated by the lone input.
    fate.waxes = lat.leq(a, image[slot]);
    fate.wanes = true;
    for (int y = 0; y < e.arity(); ++y) {
        TypeId bound = (y == slot) ? a : TypeId{0};
        if (!lat.leq(image[y], bound)) fate.wanes = false;
    }
    fate.verdict = fate.waxes ? FateVerdict::Waxes
                              : (fate.wanes ? FateVerdict::Wanes : FateVerdict::Neither);

    const auto& p = fate.production;
    bool producesSelf =
        std::find(p.begin(), p.end(), Organism{slot, a}) != p.end();
    auto elsewhere = [&] {
        return std::any_of(p.begin(), p.end(), [&](const Organism& o) { return o.slot != slot; });
    };
    if (p.empty()) {
        // Death, unless some other organism feeds this one through the event.
        fate.category = FateCategory::Death;
        for (int x = 0; x < e.arity() && fate.category == FateCategory::Death; ++x)
            for (TypeId b : setElements(lat.primitives())) {
                if (x == slot && b == a) continue;
                auto q = produces(lat, e, x, b);
                if (std::find(q.begin(), q.end(), Organism{slot, a}) != q.end()) {
                    fate.category = FateCategory::NeighbourAssistedSurvival;
                    break;
                }
            }
    } else if (p.size() == 1 && p[0] == Organism{slot, a}) {
        fate.category = FateCategory::Persistence;
    } else if (p.size() == 1 && p[0].slot != slot && p[0].type == a) {
        fate.category = FateCategory::Movement;
    } else if (p.size() == 1 && p[0].slot == slot) {
        if (lat.lt(a, p[0].type))
            fate.category = FateCategory::Promotion;
        else if (lat.lt(p[0].type, a))
            fate.category = FateCategory::Demotion;
        else
            fate.category = FateCategory::Transmutation;
    } else if (producesSelf) {
        fate.category = FateCategory::Birth;
    } else if (!producesSelf && image[slot] == 0 && elsewhere()) {
        fate.category = FateCategory::DeathWithDispersal;
    } else {
        fate.category = FateCategory::Other;
    }
    return fate;
}

MappingClass classifyMapping(const TypeLattice& lat, const LocalMapping& e) {
    bool allWax = true, allWane = true;
    for (int slot = 0; slot < e.arity(); ++slot)
        for (TypeId a : setElements(lat.primitives())) {
            OrganismFate f = classifyOrganism(lat, e, slot, a);
            allWax = allWax && f.waxes;
            allWane = allWane && f.wanes;
        }
    if (allWax) return MappingClass::Productive;
    if (allWane) return MappingClass::Destructive;
    return MappingClass::Mixed;
}

std::string to_string(FateVerdict v) {
    switch (v) {
        case FateVerdict::Waxes: return "waxes";
        case FateVerdict::Wanes: return "wanes";
        default: return "neither";
    }
}

std::string to_string(FateCategory c) {
    switch (c) {
        case FateCategory::Persistence: return "persistence";
        case FateCategory::Movement: return "movement";
        case FateCategory::Birth: return "birth";
        case FateCategory::Death: return "death";
        case FateCategory::Promotion: return "promotion";
        case FateCategory::Demotion: return "demotion";
        case FateCategory::DeathWithDispersal: return "death-with-dispersal";
        case FateCategory::NeighbourAssistedSurvival: return "neighbour-assisted-survival";
        case FateCategory::Transmutation: return "transmutation";
        default: return "other";
    }
}

std::string to_string(MappingClass c) {
    switch (c) {
        case MappingClass::Productive: return "productive";
        case MappingClass::Destructive: return "destructive";
        default: return "mixed";
    }
}

bool hasPC(const GrowthModel& m, PCWitness* witness) {
    const TypeLattice& lat = m.lattice;
    if (!lat.isMultiColour()) throw NotMultiColour("the PC criterion needs unique decompositions");
    for (std::size_t mi = 0; mi < m.events.mappings.size(); ++mi) {
        const LocalMapping& e = m.events.mappings[mi];
        if (!isAdditive(lat, e)) throw NotAdditive("the PC criterion needs an additive coupling");
        LocalCodec codec(lat.size(), e.arity());
        for (ConfigIndex i = 0; i < codec.tableSize(); ++i) {
            LocalConfig before = codec.decode(i);
            LocalConfig after = codec.decode(e.table[i]);
            if (configComparable(lat, before, after)) continue;
            if (witness) {
                witness->mapping = mi;
                witness->before = before;
                witness->after = after;
                witness->organisms.clear();
                for (int slot = 0; slot < e.arity(); ++slot)
                    if (before[slot] != 0)
                        for (TypeId a : setElements(lat.colourOf(before[slot])))
                            witness->organisms.push_back(classifyOrganism(lat, e, slot, a));
            }
            return false;
        }
    }
    return true;
}

bool isSimple(const GrowthModel& m) {
    if (!m.lattice.isMultiColour())
        throw NotMultiColour("simplicity is defined for multi-colour models");
    for (const auto& e : m.events.mappings)
        if (classifyMapping(m.lattice, e) == MappingClass::Mixed) return false;
    return true;
}

namespace {

// Reflect offset vectors in one coordinate.
std::vector<std::vector<int>> reflect(const std::vector<std::vector<int>>& offs, int axis) {
    auto out = offs;
    for (auto& o : out) o[axis] = -o[axis];
    return out;
}

}  // namespace

CCReport checkCCConditions(const GrowthModel& m, int maxCompositions) {
    CCReport rep;
    const TypeLattice& lat = m.lattice;

    rep.translationInvariant = !m.events.mappings.empty();
    for (const auto& e : m.events.mappings)
        if (!e.sites.translationInvariant) rep.translationInvariant = false;
    rep.simple = lat.isMultiColour() && isSimple(m);
    if (!rep.translationInvariant) {
        rep.symmetric = false;
        rep.irreducible = Verdict::Inconclusive;
        return rep;
    }
    const int d = m.geometry.dim;

    // Reflection closure of the template set, mapping by mapping.
    rep.symmetric = true;
    for (int axis = 0; axis < d && rep.symmetric; ++axis) {
        std::vector<LocalMapping> reflected;
        for (const auto& e : m.events.mappings) {
            LocalMapping r = e;
            r.sites.offsets = reflect(e.sites.offsets, axis);
            reflected.push_back(std::move(r));
        }
        if (!sameStructure(lat, reflected, m.events.mappings)) rep.symmetric = false;
    }

    // Irreducibility: every primitive at the origin reaches every primitive at
    // every unit displacement through composed production steps.
    if (!lat.isMultiColour()) {
        rep.irreducible = Verdict::Inconclusive;
        return rep;
    }
    int maxOff = 1;
    for (const auto& e : m.events.mappings)
        for (const auto& off : e.sites.offsets)
            for (int c : off) maxOff = std::max(maxOff, std::abs(c));
    if (maxCompositions <= 0) {
        int span = 2 * maxOff + 1;
        long K = lat.size();
        for (int k = 0; k < d; ++k) K *= span;
        maxCompositions = static_cast<int>(std::min<long>(K, 64));
    }

    // Production steps as (type a, type b, displacement) triples.
    struct Step {
        TypeId from, to;
        std::vector<int> disp;
    };
    std::vector<Step> steps;
    for (const auto& e : m.events.mappings) {
        for (int x = 0; x < e.arity(); ++x)
            for (TypeId a : setElements(lat.primitives()))
                for (const Organism& o : produces(lat, e, x, a)) {
                    std::vector<int> disp(d, 0);
                    for (int k = 0; k < d; ++k)
                        disp[k] = e.sites.offsets[o.slot][k] - e.sites.offsets[x][k];
                    steps.push_back({a, o.type, std::move(disp)});
                }
    }

    // Targets: (b, v) for every primitive b and |v|_inf <= 1.
    std::vector<std::vector<int>> unitBox;
    {
        std::vector<int> v(d, -1);
        for (;;) {
            unitBox.push_back(v);
            int k = 0;
            while (k < d && ++v[k] > 1) v[k++] = -1;
            if (k == d) break;
        }
    }

    rep.irreducible = Verdict::Ok;
    for (TypeId a : setElements(lat.primitives())) {
        std::set<std::pair<TypeId, std::vector<int>>> reached;
        std::vector<std::pair<TypeId, std::vector<int>>> frontier{{a, std::vector<int>(d, 0)}};
        reached.insert(frontier[0]);
        bool exhausted = false;
        for (int depth = 0; depth < maxCompositions && !frontier.empty(); ++depth) {
            std::vector<std::pair<TypeId, std::vector<int>>> next;
            for (const auto& [t, pos] : frontier)
                for (const Step& s : steps) {
                    if (s.from != t) continue;
                    std::vector<int> np(d);
                    bool inRange = true;
                    for (int k = 0; k < d; ++k) {
                        np[k] = pos[k] + s.disp[k];
                        if (std::abs(np[k]) > maxCompositions * maxOff) inRange = false;
                    }
                    if (!inRange) continue;
                    auto key = std::make_pair(s.to, np);
                    if (reached.insert(key).second) next.push_back(std::move(key));
                }
            frontier = std::move(next);
            if (frontier.empty()) exhausted = true;
        }
        for (TypeId b : setElements(lat.primitives()))
            for (const auto& v : unitBox)
                if (!reached.count({b, v})) {
                    rep.irreducible = exhausted ? Verdict::Fail : Verdict::Inconclusive;
                    return rep;
                }
    }
    return rep;
}

}  // namespace growth
