#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "growth/eventmodel.hpp"

namespace growth::zoo {

// Built-in model constructors. Every model comes with its intended additive
// event coupling: deaths are coupled kill-whatever-is-here mappings where the
// alphabet is graded, transmissions are one mapping per directed edge.

GrowthModel contactProcess(double lambda, int dim = 1);
GrowthModel nStageContact(int N, double lambda, double gamma, int dim = 1);
GrowthModel threeTypeSystem(double lambda, int dim = 1);
GrowthModel twoStageContact(double lambda, double gamma, double delta, int dim = 1);
GrowthModel bipartiteInfection(double lambda, int dim = 1);
GrowthModel household(int N, double lambda, double gamma, int variant = 1, int dim = 1);

struct DispersalEntry {
    std::uint32_t site;
    std::vector<std::uint32_t> targets;  // may be empty: plain death
    double rate;
};

// Occupied sites die and seed their target set.
GrowthModel dandelion(std::uint32_t nSites, const std::vector<DispersalEntry>& dispersal);
// A site stays alive through an event only when a target site feeds it.
GrowthModel helper(std::uint32_t nSites, const std::vector<DispersalEntry>& dispersal);

// Rebinds a nearest-template translation-invariant model (single-site and
// directed-edge templates only) onto an explicit graph: single-site mappings
// per site, edge mappings per directed edge.
GrowthModel onGraph(const GrowthModel& m, std::uint32_t nSites,
                    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

struct ZooEntry {
    std::string name;
    std::string description;
    std::vector<std::string> parameters;
};

const std::vector<ZooEntry>& catalogue();
GrowthModel byName(const std::string& name, const std::map<std::string, double>& params);

}  // namespace growth::zoo
