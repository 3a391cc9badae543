#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "growth/eventmodel.hpp"

namespace growth {

// The dual alphabet: all increasing, decomposable sets of active types, plus
// a passive element. Ordered by inclusion, joined by union.
struct DualLattice {
    TypeLattice lattice;              // over dual element indices
    std::vector<TypeSet> members;     // per dual index, the base types it contains
    std::unordered_map<TypeSet, TypeId> indexOf;
    // For multi-colour bases: active base type b <-> dual element E_b.
    std::optional<std::vector<TypeId>> identification;

    TypeId indexOfSet(TypeSet s) const {
        auto it = indexOf.find(s);
        if (it == indexOf.end()) throw NotDualType("set " + typeSetToString(s) + " is not a dual type");
        return it->second;
    }
};

// phi ~ theta: some site holds an active type belonging to the dual set there.
bool compatible(const DualLattice& dual, const LocalConfig& phi, const LocalConfig& theta);

// Brute-force enumeration of the dual types; for multi-colour bases also
// builds and checks the identification b <-> E_b.
DualLattice enumerateDualTypes(const TypeLattice& lat);

// Up-set dual element of an active type: E_b = {c : C(c) meets C(b) from above}.
TypeSet dualElementOf(const TypeLattice& lat, TypeId b);

// Dual mapping on the same template and rate; verifies the compatibility
// equivalence e(phi) ~ theta <=> phi ~ dual(e)(theta) exhaustively.
LocalMapping dualMapping(const TypeLattice& lat, const DualLattice& dual, const LocalMapping& e);

struct DualModel {
    GrowthModel model;   // over dual.lattice
    DualLattice dual;
};

DualModel dualModel(const GrowthModel& m);

// Searches for a lattice isomorphism (dual index -> base type) under which
// the dual event structure equals the original rate-for-rate. Full search up
// to maxFullSearch types; beyond that only totally ordered alphabets are
// attempted via the unique rank relabeling.
std::optional<std::vector<TypeId>> isSelfDual(const GrowthModel& m, int maxFullSearch = 12);

// Double-dual consistency: the compatibility symmetry and the commutation of
// every mapping with the canonical identification into the double dual.
bool doubleDualCheck(const GrowthModel& m);

}  // namespace growth
