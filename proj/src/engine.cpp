#include "growth/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <queue>
#include <thread>
#include <unordered_map>

#include "growth/pcclass.hpp"
#include "growth/rng.hpp"

namespace growth {

Config zeroConfig(std::uint32_t nSites) { return Config(nSites, 0); }

Config fullConfig(const TypeLattice& lat, std::uint32_t nSites) {
    return Config(nSites, lat.top());
}

Config deltaConfig(std::uint32_t nSites, std::uint32_t site, TypeId a) {
    Config c(nSites, 0);
    c[site] = a;
    return c;
}

bool isZero(const Config& c) {
    return std::all_of(c.begin(), c.end(), [](TypeId v) { return v == 0; });
}

namespace {

int countActive(const Config& c) {
    int n = 0;
    for (TypeId v : c) n += v != 0;
    return n;
}

// Gather, table lookup, scatter; returns the change in active-site count.
inline int applyInstance(const BoundModel& bm, std::uint32_t inst, Config& eta) {
    const RuntimeMapping& rm = bm.runtime[bm.instMapping[inst]];
    const std::uint32_t* sites = bm.flatSites.data() + bm.siteStart[inst];
    std::uint32_t idx = 0;
    for (int p = 0; p < rm.arity; ++p) idx += rm.powers[p] * eta[sites[p]];
    if (rm.table[idx] == idx) return 0;
    const TypeId* out = rm.outTypes.data() + static_cast<std::size_t>(idx) * rm.arity;
    int delta = 0;
    for (int p = 0; p < rm.arity; ++p) {
        TypeId ov = eta[sites[p]];
        TypeId nv = out[p];
        delta += (nv != 0) - (ov != 0);
        eta[sites[p]] = nv;
    }
    return delta;
}

struct HeapEvent {
    double t;
    std::uint32_t inst;
    std::uint32_t k;
};
struct HeapAfter {
    bool operator()(const HeapEvent& a, const HeapEvent& b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.inst != b.inst) return a.inst > b.inst;
        return a.k > b.k;
    }
};

// Lazily merged event stream; yields exactly the (time, instance, index)
// sequence of the materialized sorted map.
template <typename Visit>
void streamEvents(const BoundModel& bm, double horizon, std::uint64_t seed, Visit&& visit) {
    std::priority_queue<HeapEvent, std::vector<HeapEvent>, HeapAfter> pq;
    for (std::uint32_t i = 0; i < bm.instanceCount(); ++i) {
        double r = bm.instRate[i];
        if (r <= 0) continue;
        double t = rng::exponential(r, seed, i, 0);
        if (t <= horizon) pq.push({t, i, 0});
    }
    while (!pq.empty()) {
        HeapEvent ev = pq.top();
        pq.pop();
        if (!visit(ev.t, ev.inst, ev.k)) return;
        double nt = ev.t + rng::exponential(bm.instRate[ev.inst], seed, ev.inst, ev.k + 1);
        if (nt <= horizon) pq.push({nt, ev.inst, ev.k + 1});
    }
}

void parallelFor(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

}  // namespace

EventMap sampleEventMap(const BoundModel& bm, double horizon, std::uint64_t seed) {
    if (horizon < 0) throw ModelError("horizon must be nonnegative");
    EventMap map;
    map.horizon = horizon;
    map.seed = seed;
    for (std::uint32_t i = 0; i < bm.instanceCount(); ++i) {
        double r = bm.instRate[i];
        if (r <= 0) continue;
        double t = 0;
        for (std::uint32_t k = 0;; ++k) {
            t += rng::exponential(r, seed, i, k);
            if (t > horizon) break;
            map.events.push_back({t, i, k});
        }
    }
    std::sort(map.events.begin(), map.events.end(), [](const Event& a, const Event& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.instance != b.instance) return a.instance < b.instance;
        return a.index < b.index;
    });
    return map;
}

Snapshot Snapshot::of(double t, const Config& c) {
    Snapshot s;
    s.time = t;
    int active = countActive(c);
    if (active * 2 > static_cast<int>(c.size())) {
        s.dense = true;
        s.denseValues = c;
    } else {
        for (std::uint32_t i = 0; i < c.size(); ++i)
            if (c[i] != 0) s.activeSites.push_back({i, c[i]});
    }
    return s;
}

Config Snapshot::materialize(std::uint32_t nSites) const {
    if (dense) return denseValues;
    Config c(nSites, 0);
    for (auto [site, v] : activeSites) c[site] = v;
    return c;
}

Config evolveFinal(const BoundModel& bm, const EventMap& map, const Config& eta0, double t) {
    if (t > map.horizon) throw ModelError("evolution time exceeds the map horizon");
    Config eta = eta0;
    int active = countActive(eta);
    for (const Event& ev : map.events) {
        if (ev.time > t) break;
        if (bm.absorbing && active == 0) break;
        active += applyInstance(bm, ev.instance, eta);
    }
    return eta;
}

Trajectory evolveForward(const BoundModel& bm, const EventMap& map, const Config& eta0, double t) {
    if (t > map.horizon) throw ModelError("evolution time exceeds the map horizon");
    Trajectory out;
    Config eta = eta0;
    for (const Event& ev : map.events) {
        if (ev.time > t) break;
        applyInstance(bm, ev.instance, eta);
        out.steps.push_back(Snapshot::of(ev.time, eta));
    }
    out.final = eta;
    return out;
}

DualRuntime makeDualRuntime(const BoundModel& bm) {
    DualRuntime dr;
    DualModel dm = dualModel(bm.model);
    dr.dual = std::move(dm.dual);
    const int n = dm.model.lattice.size();
    for (const auto& e : dm.model.events.mappings) {
        dr.mappings.push_back(compileMapping(n, e));
        if (e.table[0] != 0) dr.absorbing = false;
    }
    return dr;
}

namespace {

inline int applyDualInstance(const BoundModel& bm, const DualRuntime& dr, std::uint32_t inst,
                             Config& zeta) {
    const RuntimeMapping& rm = dr.mappings[bm.instMapping[inst]];
    const std::uint32_t* sites = bm.flatSites.data() + bm.siteStart[inst];
    std::uint32_t idx = 0;
    for (int p = 0; p < rm.arity; ++p) idx += rm.powers[p] * zeta[sites[p]];
    if (rm.table[idx] == idx) return 0;
    const TypeId* out = rm.outTypes.data() + static_cast<std::size_t>(idx) * rm.arity;
    int delta = 0;
    for (int p = 0; p < rm.arity; ++p) {
        TypeId ov = zeta[sites[p]];
        TypeId nv = out[p];
        delta += (nv != 0) - (ov != 0);
        zeta[sites[p]] = nv;
    }
    return delta;
}

}  // namespace

Config evolveDual(const BoundModel& bm, const DualRuntime& dr, const EventMap& map,
                  const Config& zeta0, double t) {
    if (t > map.horizon) throw ModelError("evolution time exceeds the map horizon");
    Config zeta = zeta0;
    int active = countActive(zeta);
    auto begin = map.events.begin();
    auto end = std::upper_bound(map.events.begin(), map.events.end(), t,
                                [](double v, const Event& e) { return v < e.time; });
    for (auto it = std::make_reverse_iterator(end); it != std::make_reverse_iterator(begin); ++it) {
        if (dr.absorbing && active == 0) break;
        active += applyDualInstance(bm, dr, it->instance, zeta);
    }
    return zeta;
}

Trajectory evolveDualTrajectory(const BoundModel& bm, const DualRuntime& dr, const EventMap& map,
                                const Config& zeta0, double t) {
    Trajectory out;
    Config zeta = zeta0;
    auto begin = map.events.begin();
    auto end = std::upper_bound(map.events.begin(), map.events.end(), t,
                                [](double v, const Event& e) { return v < e.time; });
    for (auto it = std::make_reverse_iterator(end); it != std::make_reverse_iterator(begin); ++it) {
        applyDualInstance(bm, dr, it->instance, zeta);
        out.steps.push_back(Snapshot::of(it->time, zeta));  // dual timeline position
    }
    out.final = zeta;
    return out;
}

bool compatibleConfigs(const DualLattice& dual, const Config& eta, const Config& zeta) {
    if (eta.size() != zeta.size()) throw ArityMismatch("configurations differ in size");
    for (std::size_t x = 0; x < eta.size(); ++x)
        if (eta[x] != 0 && setContains(dual.members[zeta[x]], eta[x])) return true;
    return false;
}

bool dualityHolds(const BoundModel& bm, const DualRuntime& dr, const EventMap& map,
                  const Config& eta0, const Config& zeta0, double t) {
    Config etaT = evolveFinal(bm, map, eta0, t);
    Config zetaT = evolveDual(bm, dr, map, zeta0, t);
    return compatibleConfigs(dr.dual, etaT, zeta0) == compatibleConfigs(dr.dual, eta0, zetaT);
}

std::vector<std::pair<std::uint32_t, double>> dependencyCone(const BoundModel& bm,
                                                             const EventMap& map,
                                                             std::uint32_t site, double t) {
    if (t > map.horizon) throw ModelError("time exceeds the map horizon");
    std::unordered_map<std::uint32_t, double> added;
    added[site] = t;
    auto begin = map.events.begin();
    auto end = std::upper_bound(map.events.begin(), map.events.end(), t,
                                [](double v, const Event& e) { return v < e.time; });
    for (auto it = std::make_reverse_iterator(end); it != std::make_reverse_iterator(begin); ++it) {
        const std::uint32_t* sites = bm.flatSites.data() + bm.siteStart[it->instance];
        int arity = bm.runtime[bm.instMapping[it->instance]].arity;
        bool touches = false;
        for (int p = 0; p < arity && !touches; ++p) touches = added.count(sites[p]) != 0;
        if (!touches) continue;
        for (int p = 0; p < arity; ++p) added.emplace(sites[p], it->time);
    }
    std::vector<std::pair<std::uint32_t, double>> out(added.begin(), added.end());
    std::sort(out.begin(), out.end());
    return out;
}

PercolationGraph buildPercolationGraph(const BoundModel& bm, const EventMap& map, double t) {
    const TypeLattice& lat = bm.model.lattice;
    if (!lat.isMultiColour())
        throw NotMultiColour("coloured percolation needs unique decompositions");
    if (t > map.horizon) throw ModelError("time exceeds the map horizon");

    // Per-mapping coloured edges from the production relation.
    std::vector<std::vector<std::array<std::uint8_t, 4>>> prod(bm.runtime.size());
    for (std::uint32_t mi = 0; mi < bm.model.events.mappings.size(); ++mi) {
        const LocalMapping& e = bm.model.events.mappings[mi];
        for (int x = 0; x < e.arity(); ++x)
            for (TypeId a : setElements(lat.primitives()))
                for (const Organism& o : produces(lat, e, x, a))
                    prod[mi].push_back({static_cast<std::uint8_t>(x),
                                        static_cast<std::uint8_t>(o.slot), a, o.type});
    }

    PercolationGraph g;
    g.time = t;
    g.nSites = bm.nSites;
    g.cuts.resize(bm.nSites);
    for (const Event& ev : map.events) {
        if (ev.time > t) break;
        PercolationGraph::EventEdges ee;
        ee.time = ev.time;
        const std::uint32_t* sites = bm.flatSites.data() + bm.siteStart[ev.instance];
        int arity = bm.runtime[bm.instMapping[ev.instance]].arity;
        ee.sites.assign(sites, sites + arity);
        ee.edges = prod[bm.instMapping[ev.instance]];
        for (auto s : ee.sites) g.cuts[s].push_back(ev.time);
        g.events.push_back(std::move(ee));
    }
    return g;
}

bool percolates(const PercolationGraph& g, std::uint32_t site, TypeId colour) {
    std::vector<TypeSet> reach(g.nSites, 0);
    reach[site] = setAdd(0, colour);
    int live = 1;
    for (const auto& ee : g.events) {
        bool touches = false;
        for (auto s : ee.sites)
            if (reach[s]) {
                touches = true;
                break;
            }
        std::vector<TypeSet> next(ee.sites.size(), 0);
        if (touches)
            for (const auto& [xs, ys, a, b] : ee.edges)
                if (setContains(reach[ee.sites[xs]], a)) next[ys] = setAdd(next[ys], b);
        for (std::size_t p = 0; p < ee.sites.size(); ++p) {
            live += (next[p] != 0) - (reach[ee.sites[p]] != 0);
            reach[ee.sites[p]] = next[p];
        }
        if (live == 0) return false;
    }
    return live > 0;
}

bool percolates(const BoundModel& bm, const EventMap& map, std::uint32_t site, TypeId colour,
                double t) {
    return percolates(buildPercolationGraph(bm, map, t), site, colour);
}

SurvivalEstimate wilsonInterval(int successes, int replicates) {
    SurvivalEstimate e;
    e.replicates = replicates;
    e.successes = successes;
    if (replicates == 0) return e;
    const double z = 1.959963984540054;  // two-sided 95%
    double n = replicates;
    double p = successes / n;
    e.pointEstimate = p;
    double z2 = z * z;
    double denom = 1 + z2 / n;
    double centre = (p + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    e.ciLow = std::max(0.0, centre - half);
    e.ciHigh = std::min(1.0, centre + half);
    return e;
}

SurvivalEstimate estimateSurvival(const BoundModel& bm, const Config& eta0, double horizon,
                                  int replicates, std::uint64_t seedBase, int threads) {
    std::vector<char> survived(replicates, 0);
    parallelFor(replicates, threads, [&](int r) {
        std::uint64_t seed = rng::derive(seedBase, rng::kReplicateLabel, r);
        Config eta = eta0;
        int active = countActive(eta);
        if (active > 0)
            streamEvents(bm, horizon, seed, [&](double, std::uint32_t inst, std::uint32_t) {
                active += applyInstance(bm, inst, eta);
                return !(bm.absorbing && active == 0);
            });
        survived[r] = active > 0;
    });
    int wins = 0;
    for (char s : survived) wins += s;
    return wilsonInterval(wins, replicates);
}

DensitySeries upperInvariantDensity(const BoundModel& bm, double horizon, int replicates,
                                    int samplePoints, std::uint64_t seedBase, int threads) {
    DensitySeries out;
    const TypeLattice& lat = bm.model.lattice;
    for (int i = 1; i <= samplePoints; ++i) out.times.push_back(horizon * i / samplePoints);
    for (int a = 1; a < lat.size(); ++a) out.types.push_back(static_cast<TypeId>(a));
    const int nt = static_cast<int>(out.times.size());
    const int na = static_cast<int>(out.types.size());

    std::vector<std::vector<char>> rows(replicates);  // [rep][time*na + type] indicator
    parallelFor(replicates, threads, [&](int r) {
        std::uint64_t seed = rng::derive(seedBase, rng::kReplicateLabel, r);
        Config eta = fullConfig(lat, bm.nSites);
        std::vector<char> row(nt * na, 0);
        int cursor = 0;
        auto record = [&](int upto) {
            for (; cursor < upto; ++cursor)
                for (int j = 0; j < na; ++j)
                    row[cursor * na + j] = lat.leq(out.types[j], eta[0]);
        };
        streamEvents(bm, horizon, seed, [&](double t, std::uint32_t inst, std::uint32_t) {
            int upto = cursor;
            while (upto < nt && out.times[upto] < t) ++upto;
            record(upto);
            applyInstance(bm, inst, eta);
            return true;
        });
        record(nt);
        rows[r] = std::move(row);
    });

    out.estimate.assign(nt, std::vector<double>(na, 0.0));
    out.se.assign(nt, std::vector<double>(na, 0.0));
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < na; ++j) {
            double k = 0;
            for (int r = 0; r < replicates; ++r) k += rows[r][i * na + j];
            double p = replicates ? k / replicates : 0.0;
            out.estimate[i][j] = p;
            out.se[i][j] = replicates ? std::sqrt(p * (1 - p) / replicates) : 0.0;
        }
    for (int j = 0; j < na; ++j)
        for (int i = 0; i + 1 < nt; ++i)
            if (out.estimate[i][j] < out.estimate[i + 1][j] - 3 * (out.se[i][j] + out.se[i + 1][j]))
                out.monotoneWithinNoise = false;
    return out;
}

ConvergenceReport completeConvergenceTest(const BoundModel& bm, const Config& eta0,
                                          const std::vector<std::uint32_t>& window, double t,
                                          int replicates, double tolerance,
                                          std::uint64_t seedBase, int threads) {
    CCReport cc = checkCCConditions(bm.model);
    if (!cc.allPass()) {
        std::string what = "convergence preconditions failed:";
        if (!cc.translationInvariant) what += " translation-invariance";
        if (!cc.symmetric) what += " symmetry";
        if (cc.irreducible != Verdict::Ok) what += " irreducibility";
        if (!cc.simple) what += " simplicity";
        throw PreconditionFailed(what);
    }
    const TypeLattice& lat = bm.model.lattice;
    const int n = lat.size();
    std::size_t cells = 1;
    for (std::size_t i = 0; i < window.size(); ++i) {
        cells *= n;
        if (cells > kMaxTableEntries) throw ModelError("window too large");
        if (window[i] >= bm.nSites) throw ModelError("window site outside the geometry");
    }

    auto windowCell = [&](const Config& eta) {
        std::size_t idx = 0, pow = 1;
        for (auto w : window) {
            idx += pow * eta[w];
            pow *= n;
        }
        return idx;
    };

    auto runPass = [&](const Config& init, std::uint64_t label, std::vector<double>& law,
                       int& survivors) {
        std::vector<std::size_t> cellOf(replicates);
        std::vector<char> alive(replicates);
        parallelFor(replicates, threads, [&](int r) {
            std::uint64_t seed = rng::derive(seedBase, label, r);
            Config eta = init;
            int active = countActive(eta);
            if (active > 0)
                streamEvents(bm, t, seed, [&](double, std::uint32_t inst, std::uint32_t) {
                    active += applyInstance(bm, inst, eta);
                    return !(bm.absorbing && active == 0);
                });
            cellOf[r] = windowCell(eta);
            alive[r] = active > 0;
        });
        law.assign(cells, 0.0);
        survivors = 0;
        for (int r = 0; r < replicates; ++r) {
            law[cellOf[r]] += 1.0 / replicates;
            survivors += alive[r];
        }
    };

    ConvergenceReport rep;
    rep.replicates = replicates;
    rep.tolerance = tolerance;
    rep.time = t;
    rep.window = window;

    std::vector<double> law1, law2;
    int survivors1 = 0, survivors2 = 0;
    runPass(eta0, rng::kReplicateLabel, law1, survivors1);
    rep.sigmaHat = static_cast<double>(survivors1) / replicates;
    runPass(fullConfig(lat, bm.nSites), rng::derive(seedBase, rng::kInitLabel, 1), law2,
            survivors2);

    double tv = 0;
    for (std::size_t c = 0; c < cells; ++c) {
        double mix = rep.sigmaHat * law2[c] + (c == 0 ? 1.0 - rep.sigmaHat : 0.0);
        tv += std::abs(law1[c] - mix);
    }
    rep.tv = tv / 2;
    rep.pass = rep.tv <= tolerance;
    return rep;
}

ScanResult criticalScan(const GrowthModel& m, const std::string& parameter,
                        const std::vector<double>& grid, const Geometry& g, const Config& eta0,
                        double horizon, int replicates, double threshold,
                        std::uint64_t seedBase, int threads) {
    auto it = m.parameters.find(parameter);
    if (it == m.parameters.end()) throw ModelError("unknown parameter: " + parameter);
    const Parameter& par = it->second;
    if (par.value <= 0)
        throw ModelError("scans need the declared parameter value to be positive");
    if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()))
        throw ModelError("scan grid must be ascending");
    for (double v : grid)
        if (v < 0) throw ModelError("scan grid values must be nonnegative");

    const double vmax = grid.back();
    BoundModel bmax = bindScaled(m, g, par.mappings, vmax > 0 ? vmax / par.value : 0.0);
    std::vector<char> affected(bmax.runtime.size(), 0);
    for (auto id : par.mappings) affected[id] = 1;

    const int k = static_cast<int>(grid.size());
    std::vector<char> survived(static_cast<std::size_t>(replicates) * k, 0);
    parallelFor(replicates, threads, [&](int r) {
        std::uint64_t seed = rng::derive(seedBase, rng::kReplicateLabel, r);
        std::uint64_t thinSeed = rng::derive(seed, rng::kThinningLabel, 0);
        for (int gi = 0; gi < k; ++gi) {
            double keepProb = vmax > 0 ? grid[gi] / vmax : 0.0;
            Config eta = eta0;
            int active = countActive(eta);
            if (active > 0)
                streamEvents(bmax, horizon, seed, [&](double, std::uint32_t inst, std::uint32_t kk) {
                    if (affected[bmax.instMapping[inst]] &&
                        rng::u01(thinSeed, inst, kk) > keepProb)
                        return true;  // thinned away at this grid value
                    active += applyInstance(bmax, inst, eta);
                    return !(bmax.absorbing && active == 0);
                });
            survived[static_cast<std::size_t>(r) * k + gi] = active > 0;
        }
    });

    ScanResult out;
    out.pathwiseMonotone = true;
    for (int r = 0; r < replicates; ++r)
        for (int gi = 0; gi + 1 < k; ++gi)
            if (survived[static_cast<std::size_t>(r) * k + gi] >
                survived[static_cast<std::size_t>(r) * k + gi + 1])
                out.pathwiseMonotone = false;
    for (int gi = 0; gi < k; ++gi) {
        int wins = 0;
        for (int r = 0; r < replicates; ++r) wins += survived[static_cast<std::size_t>(r) * k + gi];
        out.points.push_back({grid[gi], wilsonInterval(wins, replicates)});
    }
    for (int gi = 0; gi < k; ++gi) {
        if (out.points[gi].estimate.pointEstimate >= threshold) {
            if (gi == 0) {
                out.thresholdCrossing = grid[0];
            } else {
                double p0 = out.points[gi - 1].estimate.pointEstimate;
                double p1 = out.points[gi].estimate.pointEstimate;
                double frac = (p1 > p0) ? (threshold - p0) / (p1 - p0) : 1.0;
                out.thresholdCrossing = grid[gi - 1] + frac * (grid[gi] - grid[gi - 1]);
            }
            break;
        }
    }
    return out;
}

}  // namespace growth
