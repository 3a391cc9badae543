#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "growth/mapping.hpp"

namespace growth {

// A family of distinct local mappings with positive rates.
struct EventStructure {
    std::vector<LocalMapping> mappings;
};

Report validateStructure(const TypeLattice& lat, const EventStructure& s);

// Default geometry a model wants to run on.
struct GeometryDefaults {
    int dim = 1;                 // for translation-invariant templates
    std::vector<int> sides;      // suggested torus sides
    std::uint32_t graphSites = 0;  // for explicit-site templates
};

// Named rate parameter attached to a subset of mappings.
struct Parameter {
    double value = 0.0;
    std::vector<std::uint32_t> mappings;
};

struct GrowthModel {
    std::string name;
    TypeLattice lattice;
    std::vector<std::string> typeLabels;
    EventStructure events;
    GeometryDefaults geometry;
    std::map<std::string, Parameter> parameters;

    std::string labelOf(TypeId a) const {
        return a < typeLabels.size() ? typeLabels[a] : std::to_string(static_cast<int>(a));
    }
};

// Transition c_T(phi,psi): eta restricted to T flips from phi to psi.
struct Transition {
    SiteTemplate sites;
    LocalConfig from;
    LocalConfig to;
    double rate = 0.0;
};

struct TransitionRateSet {
    std::vector<Transition> entries;  // keyed uniquely by (sites, from, to)
};

// Transition rates generated by a structure: for each template and each
// phi != e(phi), the summed rate of mappings realizing that flip.
TransitionRateSet ratesFromEvents(const TypeLattice& lat, const EventStructure& s);

// One mapping per transition, flipping phi to psi and fixing everything else.
EventStructure independentConstruction(const TypeLattice& lat, const TransitionRateSet& rates,
                                       int maxSites = 0, double maxRate = 0.0);

bool sameRateSet(const TypeLattice& lat, const TransitionRateSet& a, const TransitionRateSet& b,
                 double tol = 1e-9);

// Assignment of shared mappings to transitions.
struct EventCoupling {
    EventStructure structure;
    std::vector<Transition> transitions;
    std::vector<std::vector<std::uint32_t>> assignment;  // per transition: mapping ids
};

// Checks restriction behaviour, rate sums, no side effects outside assigned
// triggers, and pairwise disjointness of triggers per mapping.
Report validateCoupling(const TypeLattice& lat, const EventCoupling& c);

// Every template has at most maxSites slots and every rate is at most maxRate.
bool checkBoundedness(const EventStructure& s, int maxSites, double maxRate);

enum class Verdict { Ok, Fail, Inconclusive };

struct GrowthModelReport {
    Verdict overall = Verdict::Ok;
    Report issues;                     // absorbing / lattice violations
    Verdict extinctionReachable = Verdict::Ok;
    std::string extinctionWitness;
};

// Growth-model axioms: 0 below everything (lattice-level), the all-passive
// configuration is fixed by every mapping, and extinction is reachable from
// every single-organism start (bounded search; may be inconclusive).
GrowthModelReport validateGrowthModel(const GrowthModel& m, std::size_t nodeBudget = 1000000);

}  // namespace growth
