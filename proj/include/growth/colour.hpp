#pragma once

#include <unordered_map>
#include <vector>

#include "growth/eventmodel.hpp"

namespace growth {

// The multi-colour expansion: one type per colour combination plus passive,
// with the projection back onto the base alphabet.
struct Expansion {
    TypeLattice starLattice;
    std::vector<TypeSet> combos;      // per star index, its primitive members
    std::unordered_map<TypeSet, TypeId> indexOf;
    std::vector<TypeId> projection;   // star index -> base type

    TypeId indexOfCombo(TypeSet c) const {
        auto it = indexOf.find(c);
        if (it == indexOf.end())
            throw ModelError("no star type for combination " + typeSetToString(c));
        return it->second;
    }
};

Expansion expand(const TypeLattice& lat);

// Lift of an additive mapping along the expansion: additive over the star
// alphabet and commuting with the projection (verified exhaustively).
LocalMapping liftMapping(const TypeLattice& lat, const Expansion& x, const LocalMapping& e);

struct LiftedModel {
    GrowthModel model;  // over x.starLattice
    Expansion expansion;
};

LiftedModel liftModel(const GrowthModel& m);

// Pointwise projection of a star configuration onto the base alphabet.
std::vector<TypeId> projectConfiguration(const Expansion& x, const std::vector<TypeId>& xi);

}  // namespace growth
