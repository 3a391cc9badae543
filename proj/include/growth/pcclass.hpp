#pragma once

#include <optional>
#include <string>
#include <vector>

#include "growth/eventmodel.hpp"

namespace growth {

// (tuple slot, primitive type): one organism on a mapping's template.
struct Organism {
    int slot;
    TypeId type;
    bool operator==(const Organism&) const = default;
};

// All organisms produced by a lone (slot, primitive) input through a mapping.
// Requires unique decompositions (multi-colour alphabet).
std::vector<Organism> produces(const TypeLattice& lat, const LocalMapping& e, int slot, TypeId a);

enum class FateVerdict { Waxes, Wanes, Neither };
enum class FateCategory {
    Persistence,
    Movement,
    Birth,
    Death,
    Promotion,
    Demotion,
    DeathWithDispersal,
    NeighbourAssistedSurvival,
    Transmutation,
    Other,
};

struct OrganismFate {
    Organism organism;
    std::vector<Organism> production;
    bool waxes = false;  // produces something at its own slot at least as strong
    bool wanes = false;  // image dominated by the lone input
    FateVerdict verdict = FateVerdict::Neither;
    FateCategory category = FateCategory::Other;
};

OrganismFate classifyOrganism(const TypeLattice& lat, const LocalMapping& e, int slot, TypeId a);

enum class MappingClass { Productive, Destructive, Mixed };

MappingClass classifyMapping(const TypeLattice& lat, const LocalMapping& e);

std::string to_string(FateVerdict v);
std::string to_string(FateCategory c);
std::string to_string(MappingClass c);

struct PCWitness {
    std::size_t mapping = 0;
    LocalConfig before;
    LocalConfig after;
    std::vector<OrganismFate> organisms;  // fates of the organisms involved
};

// Positive correlations: every transition of every mapping moves between
// comparable local states. Requires a multi-colour additive model.
bool hasPC(const GrowthModel& m, PCWitness* witness = nullptr);

// Every mapping is productive or destructive.
bool isSimple(const GrowthModel& m);

struct CCReport {
    bool translationInvariant = false;
    bool symmetric = false;
    Verdict irreducible = Verdict::Inconclusive;
    bool simple = false;
    bool allPass() const {
        return translationInvariant && symmetric && irreducible == Verdict::Ok && simple;
    }
};

// Preconditions of the complete-convergence theorem for models declared via
// offset templates on Z^d.
CCReport checkCCConditions(const GrowthModel& m, int maxCompositions = 0);

}  // namespace growth
