#pragma once

#include <cstdint>
#include <vector>

#include "growth/eventmodel.hpp"

namespace growth {

struct Geometry {
    enum class Kind { Torus, Graph };
    Kind kind = Kind::Torus;
    std::vector<int> sides;      // torus side lengths, one per dimension
    std::uint32_t nSites = 0;

    static Geometry torus(std::vector<int> sides);
    static Geometry graph(std::uint32_t nSites);
    int dim() const { return static_cast<int>(sides.size()); }
};

// Mapping tables prepared for the event loop: decoded outputs and radix
// powers, so applying an event is gather, lookup, scatter.
struct RuntimeMapping {
    int arity = 0;
    double rate = 0.0;
    std::vector<ConfigIndex> table;
    std::vector<TypeId> outTypes;        // table.size() * arity
    std::vector<std::uint32_t> powers;   // radix powers for encoding
};

RuntimeMapping compileMapping(int nTypes, const LocalMapping& e);

// A model bound to a finite geometry: every template instantiated to
// concrete site tuples.
struct BoundModel {
    GrowthModel model;
    Geometry geom;
    std::vector<RuntimeMapping> runtime;      // per model mapping
    std::vector<std::uint32_t> instMapping;   // per instance: mapping id
    std::vector<std::uint32_t> siteStart;     // per instance: offset into flatSites
    std::vector<std::uint32_t> flatSites;
    std::vector<double> instRate;
    std::uint32_t nSites = 0;
    bool absorbing = true;

    std::size_t instanceCount() const { return instMapping.size(); }
};

BoundModel bind(const GrowthModel& m, const Geometry& g);

// Same instances, rescaled rates on a chosen mapping subset (parameter scans).
BoundModel bindScaled(const GrowthModel& m, const Geometry& g,
                      const std::vector<std::uint32_t>& mappingIds, double factor);

}  // namespace growth
