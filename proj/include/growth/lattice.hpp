#pragma once

#include <optional>
#include <string>
#include <vector>

#include "growth/types.hpp"

namespace growth {

// Finite type alphabet {0,..,N} partially ordered with a join (least upper
// bound) operation. Type 0 is the passive type and lies below everything.
// Immutable after validation; safe to share across threads.
class TypeLattice {
public:
    TypeLattice() = default;

    // Builds from explicit order/join tables. Throws ModelError when the
    // tables fail validation; use validateLattice for a report instead.
    static TypeLattice fromTables(int n, std::vector<std::uint8_t> leq,
                                  std::vector<TypeId> join);

    // Builds from covering relations; joins are derived from the order and
    // must be unique least upper bounds.
    static TypeLattice fromCovers(int n, const std::vector<std::pair<int, int>>& covers);

    int size() const { return n_; }
    int activeCount() const { return n_ - 1; }

    bool leq(TypeId a, TypeId b) const { return leq_[a * n_ + b] != 0; }
    bool lt(TypeId a, TypeId b) const { return a != b && leq(a, b); }
    bool incomparable(TypeId a, TypeId b) const { return !leq(a, b) && !leq(b, a); }
    TypeId join(TypeId a, TypeId b) const { return join_[a * n_ + b]; }

    // Join of a set of types (empty set joins to the passive type).
    TypeId joinSet(TypeSet s) const;

    // Largest type if the lattice has one (it always does: the join of all).
    TypeId top() const;

    // Active types not expressible as a join of two strictly different types.
    TypeSet primitives() const;
    bool isPrimitive(TypeId a) const { return setContains(primitives(), a); }

    // All colour combinations (antichains of primitives) whose join is b.
    std::vector<TypeSet> decompositions(TypeId b) const;

    // True when every compound type has exactly one decomposition.
    bool isMultiColour() const;

    // Unique decomposition of an active type; requires multi-colour.
    TypeSet colourOf(TypeId b) const;

    bool isAntichain(TypeSet s) const;

    const std::vector<std::uint8_t>& leqTable() const { return leq_; }
    const std::vector<TypeId>& joinTable() const { return join_; }

private:
    int n_ = 0;
    std::vector<std::uint8_t> leq_;
    std::vector<TypeId> join_;
    mutable TypeSet primitivesCache_ = 0;
    mutable bool primitivesCached_ = false;
};

// Checks every order and join axiom; reports the first violation with a
// witnessing pair or triple.
Report validateLattice(int n, const std::vector<std::uint8_t>& leq,
                       const std::vector<TypeId>& join);

// Maximal elements of the union: the join on colour combinations.
TypeSet colourJoin(const TypeLattice& lat, TypeSet c1, TypeSet c2);

// Minimal elements of the union; used by the dual-type join formula.
TypeSet colourMinUnion(const TypeLattice& lat, TypeSet c1, TypeSet c2);

// Minimal-element join on colour combinations; the passive type (nullopt)
// when the combinations are disjoint.
std::optional<TypeSet> squareJoin(const TypeLattice& lat, TypeSet c1, TypeSet c2);

// C' covers-from-above relation on combinations: some element of c1 is >=
// some element of c2. Reflexive but in general neither antisymmetric nor
// transitive.
bool colourSucceeds(const TypeLattice& lat, TypeSet c1, TypeSet c2);

// Peels repeated minimal layers off a set of types.
std::vector<TypeSet> layerPartition(const TypeLattice& lat, TypeSet e);

std::string typeSetToString(TypeSet s);

}  // namespace growth
