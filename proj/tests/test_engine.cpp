#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "growth/colour.hpp"
#include "growth/engine.hpp"
#include "growth/rng.hpp"
#include "growth/zoo.hpp"

using namespace growth;
using namespace fixtures;

namespace {

// Explicit 2-site contact process: death at each site, transmission both ways.
// Instance ids equal mapping ids on explicit graphs.
BoundModel twoSiteContact(double lambda = 1.0) {
    GrowthModel g = zoo::onGraph(zoo::contactProcess(lambda), 2, {{0, 1}});
    return bind(g, Geometry::graph(2));
}

EventMap handMap(std::vector<Event> events, double horizon) {
    EventMap m;
    m.horizon = horizon;
    m.events = std::move(events);
    return m;
}

}  // namespace

TEST_CASE("sampleEventMap: no mappings, no events") {
    GrowthModel empty;
    empty.lattice = chain(2);
    BoundModel bm = bind(empty, Geometry::graph(3));
    EventMap map = sampleEventMap(bm, 5.0, 42);
    CHECK(map.events.empty());
}

TEST_CASE("sampleEventMap: event counts have the right mean") {
    // Single site, one death mapping at rate r: counts are Poisson(r*t).
    TypeLattice two = chain(2);
    GrowthModel m;
    m.lattice = two;
    m.events.mappings.push_back(
        makeMapping(two, SiteTemplate::fromSites({0}),
                    tabulate(two, 1, [](const LocalConfig&) { return LocalConfig{0}; }), 2.5));
    BoundModel bm = bind(m, Geometry::graph(1));
    const double horizon = 3.0, mean = 2.5 * horizon;
    const int seeds = 10000;
    double total = 0;
    for (int s = 0; s < seeds; ++s) total += sampleEventMap(bm, horizon, s).events.size();
    double got = total / seeds;
    double se = std::sqrt(mean / seeds);
    CHECK(std::abs(got - mean) <= 3 * se);
}

TEST_CASE("sampleEventMap is deterministic and sorted") {
    BoundModel bm = twoSiteContact(1.5);
    EventMap a = sampleEventMap(bm, 10.0, 7);
    EventMap b = sampleEventMap(bm, 10.0, 7);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].time == b.events[i].time);
        CHECK(a.events[i].instance == b.events[i].instance);
    }
    CHECK(std::is_sorted(a.events.begin(), a.events.end(),
                         [](const Event& x, const Event& y) { return x.time < y.time; }));
}

TEST_CASE("evolveForward: trivial cases") {
    BoundModel bm = twoSiteContact();
    EventMap empty = handMap({}, 5.0);
    Config eta0 = deltaConfig(2, 0, 1);
    CHECK(evolveFinal(bm, empty, eta0, 5.0) == eta0);
    CHECK(evolveFinal(bm, sampleEventMap(bm, 5.0, 3), zeroConfig(2), 5.0) == zeroConfig(2));
}

TEST_CASE("evolveForward: hand-built two-site trace") {
    BoundModel bm = twoSiteContact();
    // Instance 2 transmits 0 -> 1; instance 0 is death at site 0.
    EventMap map = handMap({{1.0, 2, 0}, {2.0, 0, 0}}, 3.0);
    Config eta0 = deltaConfig(2, 0, 1);
    Trajectory tr = evolveForward(bm, map, eta0, 3.0);
    CHECK(tr.final == deltaConfig(2, 1, 1));
    REQUIRE(tr.steps.size() == 2);
    CHECK(tr.steps[0].materialize(2) == Config{1, 1});
    CHECK(tr.steps[1].materialize(2) == Config{0, 1});
}

TEST_CASE("evolveDual: trivial cases and the reverse hand trace") {
    BoundModel bm = twoSiteContact();
    DualRuntime dr = makeDualRuntime(bm);
    TypeId e1 = dr.dual.indexOfSet(0b10);

    EventMap empty = handMap({}, 5.0);
    CHECK(evolveDual(bm, dr, empty, zeroConfig(2), 5.0) == zeroConfig(2));
    Config z0 = deltaConfig(2, 1, e1);
    CHECK(evolveDual(bm, dr, empty, z0, 5.0) == z0);

    EventMap map = handMap({{1.0, 2, 0}, {2.0, 0, 0}}, 3.0);
    Config zt = evolveDual(bm, dr, map, z0, 3.0);
    CHECK(zt == Config{e1, e1});  // activity at either site at time 0 reaches (y,3)
}

TEST_CASE("dualityHolds: trivial and exhaustive small cases") {
    BoundModel bm = twoSiteContact();
    DualRuntime dr = makeDualRuntime(bm);
    EventMap map = sampleEventMap(bm, 2.0, 11);
    CHECK(dualityHolds(bm, dr, map, zeroConfig(2), deltaConfig(2, 0, 1), 2.0));

    // Contact process on a 4-cycle: all forward and dual initial states.
    GrowthModel contact = zoo::contactProcess(1.5);
    BoundModel cyc = bind(contact, Geometry::torus({4}));
    DualRuntime cdr = makeDualRuntime(cyc);
    int violations = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        EventMap m = sampleEventMap(cyc, 2.0, seed);
        for (int eta = 0; eta < 16; ++eta)
            for (int zeta = 0; zeta < 16; ++zeta) {
                Config eta0(4), zeta0(4);
                for (int s = 0; s < 4; ++s) {
                    eta0[s] = (eta >> s) & 1;
                    zeta0[s] = (zeta >> s) & 1;
                }
                if (!dualityHolds(cyc, cdr, m, eta0, zeta0, 2.0)) ++violations;
            }
    }
    CHECK(violations == 0);
}

TEST_CASE("dualityHolds on the two-stage model over a 3-site path") {
    GrowthModel ts = zoo::twoStageContact(1.5, 1.0, 0.5);
    GrowthModel path = zoo::onGraph(ts, 3, {{0, 1}, {1, 2}});
    BoundModel bm = bind(path, Geometry::graph(3));
    DualRuntime dr = makeDualRuntime(bm);
    int checks = 0, good = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        EventMap m = sampleEventMap(bm, 1.5, seed);
        Config eta0(3), zeta0(3);
        for (int s = 0; s < 3; ++s) {
            eta0[s] = static_cast<TypeId>(rng::draw(seed, 50, s) % 3);
            zeta0[s] = static_cast<TypeId>(rng::draw(seed, 51, s) % dr.dual.lattice.size());
        }
        ++checks;
        good += dualityHolds(bm, dr, m, eta0, zeta0, 1.5);
    }
    CHECK(good == checks);
}

TEST_CASE("dependencyCone") {
    BoundModel bm = twoSiteContact();
    EventMap empty = handMap({}, 5.0);
    auto cone = dependencyCone(bm, empty, 0, 4.0);
    REQUIRE(cone.size() == 1);
    CHECK(cone[0] == std::pair<std::uint32_t, double>{0, 4.0});

    EventMap map = handMap({{1.0, 2, 0}, {2.0, 0, 0}}, 3.0);
    auto cone2 = dependencyCone(bm, map, 1, 3.0);
    REQUIRE(cone2.size() == 2);
    CHECK(cone2[0].first == 0);
    CHECK(cone2[0].second == doctest::Approx(1.0));
    CHECK(cone2[1].first == 1);

    // Nondecreasing in t.
    GrowthModel contact = zoo::contactProcess(2.0);
    BoundModel cyc = bind(contact, Geometry::torus({6}));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EventMap m = sampleEventMap(cyc, 3.0, seed);
        std::size_t prev = 0;
        for (double t : {1.0, 2.0, 3.0}) {
            auto c = dependencyCone(cyc, m, 0, t);
            CHECK(c.size() >= prev);
            prev = c.size();
        }
    }
}

TEST_CASE("percolation basics") {
    BoundModel bm = twoSiteContact();
    // No events: the vertical segment carries any active colour.
    EventMap empty = handMap({}, 5.0);
    CHECK(percolates(bm, empty, 0, 1, 5.0));

    // A single death blocks the only path.
    GrowthModel death;
    death.lattice = chain(2);
    death.events.mappings.push_back(makeMapping(
        death.lattice, SiteTemplate::fromSites({0}),
        tabulate(death.lattice, 1, [](const LocalConfig&) { return LocalConfig{0}; }), 1.0));
    BoundModel bd = bind(death, Geometry::graph(1));
    EventMap one = handMap({{0.5, 0, 0}}, 2.0);
    CHECK_FALSE(percolates(bd, one, 0, 1, 2.0));
    CHECK(percolates(bd, one, 0, 1, 0.4));

    // Transmission events open coloured edges to the neighbour.
    EventMap map = handMap({{1.0, 2, 0}, {2.0, 0, 0}}, 3.0);
    PercolationGraph g = buildPercolationGraph(bm, map, 3.0);
    CHECK(g.events.size() == 2);
    CHECK(percolates(g, 0, 1));  // survives through the transmission edge
    CHECK(percolates(g, 1, 1));  // site 1 sees no death at all
}

TEST_CASE("percolation from a colour equals survival of that organism") {
    for (GrowthModel m : {zoo::contactProcess(1.2), zoo::twoStageContact(1.2, 1.0, 0.3)}) {
        BoundModel bm = bind(m, Geometry::torus({5}));
        for (std::uint64_t seed = 0; seed < 60; ++seed) {
            EventMap map = sampleEventMap(bm, 5.0, seed);
            for (std::uint32_t x = 0; x < 5; ++x)
                for (TypeId a : setElements(m.lattice.primitives())) {
                    bool perc = percolates(bm, map, x, a, 5.0);
                    bool alive = !isZero(evolveFinal(bm, map, deltaConfig(5, x, a), 5.0));
                    CHECK(perc == alive);
                }
        }
    }
}

TEST_CASE("pathwise additivity and attractiveness on the zoo") {
    std::vector<GrowthModel> models = {zoo::contactProcess(1.5),
                                       zoo::twoStageContact(1.5, 1.0, 0.5),
                                       zoo::threeTypeSystem(2.0),
                                       zoo::bipartiteInfection(1.0),
                                       zoo::household(2, 1.5, 1.0, 2),
                                       zoo::nStageContact(3, 1.5, 1.0)};
    for (const auto& m : models) {
        BoundModel bm = bind(m, Geometry::torus({4}));
        const int n = m.lattice.size();
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            EventMap map = sampleEventMap(bm, 1.5, seed);
            for (int rep = 0; rep < 6; ++rep) {
                Config a(4), b(4);
                for (int s = 0; s < 4; ++s) {
                    a[s] = static_cast<TypeId>(rng::draw(seed, 60 + rep, s) % n);
                    b[s] = static_cast<TypeId>(rng::draw(seed, 70 + rep, s) % n);
                }
                Config joined(4);
                for (int s = 0; s < 4; ++s) joined[s] = m.lattice.join(a[s], b[s]);
                Config ea = evolveFinal(bm, map, a, 1.5);
                Config eb = evolveFinal(bm, map, b, 1.5);
                Config ej = evolveFinal(bm, map, joined, 1.5);
                Config want(4);
                for (int s = 0; s < 4; ++s) want[s] = m.lattice.join(ea[s], eb[s]);
                CHECK(ej == want);
                // Order preservation: a <= joined implies evolve(a) <= evolve(joined).
                bool leq = true;
                for (int s = 0; s < 4; ++s) leq = leq && m.lattice.leq(ea[s], ej[s]);
                CHECK(leq);
            }
        }
    }
}

TEST_CASE("pathwise lift commutation") {
    GrowthModel base = zoo::threeTypeSystem(2.0);
    LiftedModel lm = liftModel(base);
    Geometry g = Geometry::torus({3});
    BoundModel bb = bind(base, g);
    BoundModel bl = bind(lm.model, g);
    REQUIRE(bb.instanceCount() == bl.instanceCount());
    const int nStar = lm.model.lattice.size();
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        EventMap mb = sampleEventMap(bb, 1.0, seed);
        EventMap ml = sampleEventMap(bl, 1.0, seed);
        REQUIRE(mb.events.size() == ml.events.size());
        Config xi0(3);
        for (int s = 0; s < 3; ++s)
            xi0[s] = static_cast<TypeId>(rng::draw(seed, 80, s) % nStar);
        Config eta0 = projectConfiguration(lm.expansion, xi0);
        Trajectory tl = evolveForward(bl, ml, xi0, 1.0);
        Trajectory tb = evolveForward(bb, mb, eta0, 1.0);
        REQUIRE(tl.steps.size() == tb.steps.size());
        for (std::size_t i = 0; i < tl.steps.size(); ++i)
            CHECK(projectConfiguration(lm.expansion, tl.steps[i].materialize(3)) ==
                  tb.steps[i].materialize(3));
        CHECK(projectConfiguration(lm.expansion, tl.final) == tb.final);
        // Survival equivalence: the lift dies exactly when the base does.
        CHECK(isZero(tl.final) == isZero(tb.final));
    }
}

TEST_CASE("estimateSurvival: pure-death oracle") {
    GrowthModel m = zoo::contactProcess(0.0);  // death only
    BoundModel bm = bind(m, Geometry::torus({1}));
    const double horizon = 2.0;
    const int reps = 4000;
    SurvivalEstimate est = estimateSurvival(bm, deltaConfig(1, 0, 1), horizon, reps, 99);
    double want = std::exp(-horizon);
    double se = std::sqrt(want * (1 - want) / reps);
    CHECK(std::abs(est.pointEstimate - want) <= 3 * se);
    CHECK(est.ciLow <= est.pointEstimate);
    CHECK(est.pointEstimate <= est.ciHigh);
}

TEST_CASE("estimateSurvival is deterministic given the seed") {
    GrowthModel m = zoo::contactProcess(1.5);
    BoundModel bm = bind(m, Geometry::torus({10}));
    auto a = estimateSurvival(bm, deltaConfig(10, 0, 1), 3.0, 500, 7, 2);
    auto b = estimateSurvival(bm, deltaConfig(10, 0, 1), 3.0, 500, 7, 1);
    CHECK(a.successes == b.successes);
}

TEST_CASE("upperInvariantDensity") {
    // Death-only: the density from the full configuration is exp(-t).
    GrowthModel m = zoo::contactProcess(0.0);
    BoundModel bm = bind(m, Geometry::torus({8}));
    DensitySeries ds = upperInvariantDensity(bm, 2.0, 3000, 4, 123);
    REQUIRE(ds.times.size() == 4);
    REQUIRE(ds.types.size() == 1);
    for (std::size_t i = 0; i < ds.times.size(); ++i) {
        double want = std::exp(-ds.times[i]);
        CHECK(std::abs(ds.estimate[i][0] - want) <= 3 * ds.se[i][0] + 0.01);
    }
    CHECK(ds.monotoneWithinNoise);

    // Subcritical contact: bounded by the branching mean exp((2*lambda-1)t).
    GrowthModel sub = zoo::contactProcess(0.25);
    BoundModel bs = bind(sub, Geometry::torus({8}));
    DensitySeries d2 = upperInvariantDensity(bs, 4.0, 2000, 2, 321);
    for (std::size_t i = 0; i < d2.times.size(); ++i) {
        double bound = std::exp(-0.5 * d2.times[i]);
        CHECK(d2.estimate[i][0] <= bound + 3 * d2.se[i][0] + 0.02);
    }
    CHECK(d2.monotoneWithinNoise);
}

TEST_CASE("completeConvergenceTest: trivial start and failed preconditions") {
    GrowthModel m = zoo::contactProcess(2.0);
    BoundModel bm = bind(m, Geometry::torus({20}));
    ConvergenceReport rep =
        completeConvergenceTest(bm, zeroConfig(20), {0, 1, 2}, 5.0, 500, 0.05, 5);
    CHECK(rep.sigmaHat == 0.0);
    CHECK(rep.tv == doctest::Approx(0.0));
    CHECK(rep.pass);

    // Remove one transmission direction: symmetry fails.
    GrowthModel oneWay = zoo::contactProcess(2.0);
    std::vector<LocalMapping> kept;
    for (const auto& e : oneWay.events.mappings)
        if (!(e.arity() == 2 && e.sites.offsets[1][0] == -1)) kept.push_back(e);
    oneWay.events.mappings = kept;
    BoundModel bw = bind(oneWay, Geometry::torus({20}));
    CHECK_THROWS_AS(
        completeConvergenceTest(bw, deltaConfig(20, 0, 1), {0, 1}, 2.0, 50, 0.05, 5),
        PreconditionFailed);
}

TEST_CASE("criticalScan: coupled thinning is pathwise monotone") {
    GrowthModel m = zoo::contactProcess(1.0);
    ScanResult r = criticalScan(m, "lambda", {0.0, 0.8, 1.6, 2.4}, Geometry::torus({20}),
                                deltaConfig(20, 0, 1), 5.0, 1500, 0.5, 2024);
    CHECK(r.pathwiseMonotone);
    REQUIRE(r.points.size() == 4);
    // The zero endpoint is the pure-death survival probability.
    double want = std::exp(-5.0);
    double se = std::sqrt(want * (1 - want) / 1500.0);
    CHECK(std::abs(r.points[0].estimate.pointEstimate - want) <= 3 * se + 1e-9);
    for (int i = 0; i + 1 < 4; ++i)
        CHECK(r.points[i].estimate.pointEstimate <= r.points[i + 1].estimate.pointEstimate);
}

TEST_CASE("streamed evolution matches the materialized map") {
    GrowthModel m = zoo::twoStageContact(1.5, 1.0, 0.5);
    BoundModel bm = bind(m, Geometry::torus({6}));
    // estimateSurvival streams events lazily; replicate r uses the seed
    // derive(base, replicate-label, r), so evolve the same maps directly.
    const int reps = 5;
    int aliveViaMaps = 0;
    for (int r = 0; r < reps; ++r) {
        EventMap map = sampleEventMap(bm, 4.0, rng::derive(2024, rng::kReplicateLabel, r));
        aliveViaMaps += !isZero(evolveFinal(bm, map, deltaConfig(6, 0, 1), 4.0));
    }
    SurvivalEstimate est = estimateSurvival(bm, deltaConfig(6, 0, 1), 4.0, reps, 2024);
    CHECK(est.successes == aliveViaMaps);
}
