#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "growth/duality.hpp"
#include "growth/geometry.hpp"

namespace growth {

using Config = std::vector<TypeId>;

Config zeroConfig(std::uint32_t nSites);
Config fullConfig(const TypeLattice& lat, std::uint32_t nSites);
Config deltaConfig(std::uint32_t nSites, std::uint32_t site, TypeId a);
bool isZero(const Config& c);

// One sampled realization of every Poisson event stream over the geometry
// and horizon. Deterministic given the seed; per-instance streams are keyed
// (seed, instance, event index) so replicates never interact.
struct Event {
    double time;
    std::uint32_t instance;
    std::uint32_t index;
};

struct EventMap {
    double horizon = 0.0;
    std::uint64_t seed = 0;
    std::vector<Event> events;  // sorted by (time, instance, index)
};

EventMap sampleEventMap(const BoundModel& bm, double horizon, std::uint64_t seed);

// Trajectory snapshots are sparse below half occupancy and dense above.
struct Snapshot {
    double time = 0.0;
    bool dense = false;
    Config denseValues;
    std::vector<std::pair<std::uint32_t, TypeId>> activeSites;

    static Snapshot of(double t, const Config& c);
    Config materialize(std::uint32_t nSites) const;
};

struct Trajectory {
    std::vector<Snapshot> steps;  // state after each event, time-ordered
    Config final;
};

// Applies events with time <= t in order, using the state just before each
// event as its input.
Config evolveFinal(const BoundModel& bm, const EventMap& map, const Config& eta0, double t);
Trajectory evolveForward(const BoundModel& bm, const EventMap& map, const Config& eta0, double t);

// Dual pass over the same map: events swept in reverse order with the dual
// tables; an event at exactly time t is seen by both passes.
struct DualRuntime {
    DualLattice dual;
    std::vector<RuntimeMapping> mappings;  // per model mapping
    bool absorbing = true;
};

DualRuntime makeDualRuntime(const BoundModel& bm);
Config evolveDual(const BoundModel& bm, const DualRuntime& dr, const EventMap& map,
                  const Config& zeta0, double t);
Trajectory evolveDualTrajectory(const BoundModel& bm, const DualRuntime& dr, const EventMap& map,
                                const Config& zeta0, double t);

bool compatibleConfigs(const DualLattice& dual, const Config& eta, const Config& zeta);

// eta_t ~ zeta_0 <=> eta_0 ~ zeta_t evaluated on one shared realization.
bool dualityHolds(const BoundModel& bm, const DualRuntime& dr, const EventMap& map,
                  const Config& eta0, const Config& zeta0, double t);

// Sites and time intervals [0, s] whose state can affect (site, t).
std::vector<std::pair<std::uint32_t, double>> dependencyCone(const BoundModel& bm,
                                                             const EventMap& map,
                                                             std::uint32_t site, double t);

// Coloured spacetime percolation structure over one event map.
struct PercolationGraph {
    double time = 0.0;
    std::uint32_t nSites = 0;
    std::vector<std::vector<double>> cuts;  // per site: event times touching it
    struct EventEdges {
        double time;
        std::vector<std::uint32_t> sites;                         // the event's tuple
        std::vector<std::array<std::uint8_t, 4>> edges;           // xslot, yslot, a, b
    };
    std::vector<EventEdges> events;  // time-ordered, times <= time
};

PercolationGraph buildPercolationGraph(const BoundModel& bm, const EventMap& map, double t);
bool percolates(const PercolationGraph& g, std::uint32_t site, TypeId colour);
bool percolates(const BoundModel& bm, const EventMap& map, std::uint32_t site, TypeId colour,
                double t);

struct SurvivalEstimate {
    int replicates = 0;
    int successes = 0;
    double pointEstimate = 0.0;
    double ciLow = 0.0;
    double ciHigh = 0.0;
};

SurvivalEstimate wilsonInterval(int successes, int replicates);

SurvivalEstimate estimateSurvival(const BoundModel& bm, const Config& eta0, double horizon,
                                  int replicates, std::uint64_t seedBase, int threads = 0);

// P(eta_t(origin) >= a) per active type a, started from the largest
// configuration, sampled at evenly spaced times.
struct DensitySeries {
    std::vector<double> times;
    std::vector<TypeId> types;
    std::vector<std::vector<double>> estimate;  // [time][type]
    std::vector<std::vector<double>> se;
    bool monotoneWithinNoise = true;  // est(t1) >= est(t2) - 3 se for t1 < t2
};

DensitySeries upperInvariantDensity(const BoundModel& bm, double horizon, int replicates,
                                    int samplePoints, std::uint64_t seedBase, int threads = 0);

struct ConvergenceReport {
    double sigmaHat = 0.0;
    double tv = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    int replicates = 0;
    double time = 0.0;
    std::vector<std::uint32_t> window;
};

// Total variation between the finite-window law started from eta0 and the
// fitted mixture (1 - sigma) * all-passive + sigma * (law from the largest
// configuration). Refuses models failing the convergence preconditions.
ConvergenceReport completeConvergenceTest(const BoundModel& bm, const Config& eta0,
                                          const std::vector<std::uint32_t>& window, double t,
                                          int replicates, double tolerance,
                                          std::uint64_t seedBase, int threads = 0);

struct ScanPoint {
    double value;
    SurvivalEstimate estimate;
};

struct ScanResult {
    std::vector<ScanPoint> points;
    std::optional<double> thresholdCrossing;
    bool pathwiseMonotone = true;  // per-replicate survival monotone in the parameter
};

// Coupled-thinning scan: one uniformized stream per replicate sampled at the
// largest grid value, thinned per grid point, so survival is monotone
// pathwise when the scanned mappings are productive.
ScanResult criticalScan(const GrowthModel& m, const std::string& parameter,
                        const std::vector<double>& grid, const Geometry& g, const Config& eta0,
                        double horizon, int replicates, double threshold,
                        std::uint64_t seedBase, int threads = 0);

}  // namespace growth
