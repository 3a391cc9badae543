#include <cstdint>

#include "doctest.h"
#include "fixtures.hpp"
#include "growth/duality.hpp"
#include "growth/pcclass.hpp"
#include "growth/rng.hpp"
#include "growth/zoo.hpp"

using namespace growth;
using namespace fixtures;

namespace {

std::vector<zoo::DispersalEntry> cycleDispersal(std::uint32_t n) {
    std::vector<zoo::DispersalEntry> entries;
    for (std::uint32_t x = 0; x < n; ++x) {
        entries.push_back({x, {}, 1.0});
        entries.push_back({x, {(x + 1) % n, (x + n - 1) % n}, 1.0});
    }
    return entries;
}

const LocalMapping& transmissionOf(const GrowthModel& m) {
    for (const auto& e : m.events.mappings)
        if (e.arity() == 2) return e;
    throw std::runtime_error("no edge mapping");
}

// Random additive structures on a 1- or 2-site graph over a chain alphabet:
// additive extensions of independently drawn monotone single-organism images.
GrowthModel randomChainModel(std::uint64_t seed, int nTypes, int nSitesMax) {
    TypeLattice lat = chain(nTypes);
    GrowthModel m;
    m.lattice = lat;
    m.geometry.graphSites = 1 + static_cast<std::uint32_t>(rng::draw(seed, 1, 0) % nSitesMax);
    int nMappings = 1 + static_cast<int>(rng::draw(seed, 2, 0) % 3);
    for (int e = 0; e < nMappings; ++e) {
        int arity = (m.geometry.graphSites == 1) ? 1 : 1 + static_cast<int>(rng::draw(seed, 3, e) % 2);
        std::vector<std::uint32_t> sites{0};
        if (arity == 2) sites.push_back(1);
        // Monotone images per slot: I(x,1) <= I(x,2) <= ... pointwise.
        std::vector<std::vector<LocalConfig>> img(arity);
        std::uint64_t ctr = 0;
        for (int x = 0; x < arity; ++x) {
            img[x].resize(nTypes);
            img[x][0] = LocalConfig(arity, 0);
            for (int a = 1; a < nTypes; ++a) {
                LocalConfig v(arity);
                for (int p = 0; p < arity; ++p) {
                    TypeId lo = a == 1 ? TypeId{0} : img[x][a - 1][p];
                    int span = nTypes - lo;
                    v[p] = static_cast<TypeId>(
                        lo + rng::draw(seed, 100 + e * 10 + x, ctr++) % span);
                }
                img[x][a] = v;
            }
        }
        auto table = tabulate(lat, arity, [&](const LocalConfig& in) {
            LocalConfig out(arity, 0);
            for (int x = 0; x < arity; ++x)
                out = configJoin(lat, out, img[x][in[x]]);
            return out;
        });
        LocalMapping lm;
        try {
            lm = makeMapping(lat, SiteTemplate::fromSites(sites), std::move(table), 1.0);
        } catch (const ModelError&) {
            continue;
        }
        // Avoid duplicate tables in the structure.
        bool dup = false;
        for (const auto& prev : m.events.mappings)
            if (prev.sites == lm.sites && prev.table == lm.table) dup = true;
        if (!dup) m.events.mappings.push_back(std::move(lm));
    }
    if (m.events.mappings.empty()) {
        m.events.mappings.push_back(
            makeMapping(lat, SiteTemplate::fromSites({0}),
                        tabulate(lat, 1, [](const LocalConfig&) { return LocalConfig{0}; }), 1.0));
    }
    return m;
}

// Independent oracle: every transition of the generated rate set moves
// between comparable local states.
bool comparableTransitionsOracle(const GrowthModel& m) {
    TransitionRateSet r = ratesFromEvents(m.lattice, m.events);
    for (const auto& t : r.entries)
        if (!configComparable(m.lattice, t.from, t.to)) return false;
    return true;
}

}  // namespace

TEST_CASE("produces") {
    GrowthModel contact = zoo::contactProcess(1.0);
    const LocalMapping& tr = transmissionOf(contact);
    auto p = produces(contact.lattice, tr, 0, 1);
    REQUIRE(p.size() == 2);  // keeps itself, births at the target
    CHECK(std::find(p.begin(), p.end(), Organism{0, 1}) != p.end());
    CHECK(std::find(p.begin(), p.end(), Organism{1, 1}) != p.end());

    // A death mapping produces nothing.
    GrowthModel twoStage = zoo::twoStageContact(1.0, 1.0, 0.5);
    const LocalMapping& death = twoStage.events.mappings[0];
    CHECK(produces(twoStage.lattice, death, 0, 1).empty());
    CHECK(produces(twoStage.lattice, death, 0, 2).empty());

    // The onset sends the juvenile to the adult at the same site.
    const LocalMapping& onset = twoStage.events.mappings[2];
    auto po = produces(twoStage.lattice, onset, 0, 1);
    REQUIRE(po.size() == 1);
    CHECK(po[0] == Organism{0, 2});

    GrowthModel diamond = zoo::threeTypeSystem(1.0);
    CHECK_THROWS_AS(produces(diamond.lattice, diamond.events.mappings[0], 0, 1), NotMultiColour);
}

TEST_CASE("classifyOrganism") {
    TypeLattice two = chain(2);
    GrowthModel contact = zoo::contactProcess(1.0);

    LocalMapping id = siteMapping(two, {0, 1}, 1.0);
    OrganismFate f = classifyOrganism(two, id, 0, 1);
    CHECK(f.category == FateCategory::Persistence);
    CHECK(f.verdict == FateVerdict::Waxes);
    CHECK(f.wanes);  // persistence also wanes: nothing beyond itself

    // Dandelion dispersal: the source dies and seeds elsewhere.
    GrowthModel dand = zoo::dandelion(4, cycleDispersal(4));
    const LocalMapping* disp = nullptr;
    for (const auto& e : dand.events.mappings)
        if (e.arity() == 3) {
            disp = &e;
            break;
        }
    REQUIRE(disp != nullptr);
    OrganismFate fd = classifyOrganism(dand.lattice, *disp, 0, 1);
    CHECK(fd.category == FateCategory::DeathWithDispersal);
    CHECK(fd.verdict == FateVerdict::Neither);

    // Two-stage onset: a promotion, waxing in the graded order.
    GrowthModel twoStage = zoo::twoStageContact(1.0, 1.0, 0.5);
    OrganismFate fo = classifyOrganism(twoStage.lattice, twoStage.events.mappings[2], 0, 1);
    CHECK(fo.category == FateCategory::Promotion);
    CHECK(fo.waxes);
    CHECK_FALSE(fo.wanes);

    // Helper: the focal site dies unless fed, so its sources are elsewhere.
    GrowthModel help = zoo::helper(4, cycleDispersal(4));
    const LocalMapping* hm = nullptr;
    for (const auto& e : help.events.mappings)
        if (e.arity() == 3) {
            hm = &e;
            break;
        }
    REQUIRE(hm != nullptr);
    OrganismFate fh = classifyOrganism(help.lattice, *hm, 0, 1);
    CHECK(fh.category == FateCategory::NeighbourAssistedSurvival);
    CHECK(fh.verdict == FateVerdict::Wanes);
}

TEST_CASE("classifyMapping") {
    GrowthModel contact = zoo::contactProcess(1.0);
    CHECK(classifyMapping(contact.lattice, transmissionOf(contact)) == MappingClass::Productive);

    GrowthModel twoStage = zoo::twoStageContact(1.0, 1.0, 0.5);
    CHECK(classifyMapping(twoStage.lattice, twoStage.events.mappings[0]) ==
          MappingClass::Destructive);
    CHECK(classifyMapping(twoStage.lattice, twoStage.events.mappings[2]) ==
          MappingClass::Productive);

    GrowthModel dand = zoo::dandelion(4, cycleDispersal(4));
    bool sawMixed = false;
    for (const auto& e : dand.events.mappings)
        if (e.arity() > 1 && classifyMapping(dand.lattice, e) == MappingClass::Mixed)
            sawMixed = true;
    CHECK(sawMixed);
}

TEST_CASE("hasPC on the zoo") {
    CHECK(hasPC(zoo::contactProcess(2.0)));
    CHECK(hasPC(zoo::twoStageContact(2.0, 1.0, 0.5)));
    CHECK(hasPC(zoo::bipartiteInfection(1.0)));
    CHECK(hasPC(zoo::household(2, 1.0, 0.5, 2)));
    CHECK(hasPC(zoo::helper(4, cycleDispersal(4))));

    PCWitness w;
    GrowthModel dand = zoo::dandelion(4, cycleDispersal(4));
    CHECK_FALSE(hasPC(dand, &w));
    CHECK_FALSE(w.organisms.empty());
    CHECK_FALSE(configComparable(dand.lattice, w.before, w.after));

    CHECK_THROWS_AS(hasPC(zoo::threeTypeSystem(1.0)), NotMultiColour);
}

TEST_CASE("hasPC agrees with the comparable-transitions oracle on random models") {
    int disagreements = 0;
    for (std::uint64_t s = 0; s < 500; ++s) {
        GrowthModel m = randomChainModel(s, 2 + static_cast<int>(s % 2), 2);
        if (hasPC(m) != comparableTransitionsOracle(m)) ++disagreements;
    }
    CHECK(disagreements == 0);
}

TEST_CASE("isSimple") {
    CHECK(isSimple(zoo::contactProcess(2.0)));
    CHECK(isSimple(zoo::twoStageContact(2.0, 1.0, 0.5)));
    CHECK(isSimple(zoo::bipartiteInfection(1.0)));
    CHECK(isSimple(zoo::household(3, 1.0, 0.5, 1)));
    CHECK(isSimple(zoo::household(3, 1.0, 0.5, 2)));
    CHECK_FALSE(isSimple(zoo::dandelion(4, cycleDispersal(4))));
}

TEST_CASE("simple models have PC") {
    for (const GrowthModel& m :
         {zoo::contactProcess(1.5), zoo::twoStageContact(1.0, 0.5, 0.25),
          zoo::bipartiteInfection(0.5), zoo::household(2, 1.0, 1.0, 2)}) {
        REQUIRE(isSimple(m));
        CHECK(hasPC(m));
    }
}

TEST_CASE("the dual of a simple model is simple") {
    for (const GrowthModel& m :
         {zoo::contactProcess(1.5), zoo::twoStageContact(1.0, 0.5, 0.25),
          zoo::bipartiteInfection(0.5)}) {
        REQUIRE(isSimple(m));
        DualModel dm = dualModel(m);
        CHECK(isSimple(dm.model));
        CHECK(hasPC(dm.model));
    }
}

TEST_CASE("checkCCConditions") {
    CCReport contact = checkCCConditions(zoo::contactProcess(2.0));
    CHECK(contact.translationInvariant);
    CHECK(contact.symmetric);
    CHECK(contact.irreducible == Verdict::Ok);
    CHECK(contact.simple);
    CHECK(contact.allPass());

    CCReport twoStage = checkCCConditions(zoo::twoStageContact(2.0, 2.0, 0.0));
    CHECK(twoStage.allPass());

    CCReport household2 = checkCCConditions(zoo::household(2, 1.0, 1.0, 2));
    CHECK(household2.allPass());

    // One-directional transmission: reflection closure fails.
    GrowthModel oneWay = zoo::contactProcess(2.0);
    std::vector<LocalMapping> kept;
    for (const auto& e : oneWay.events.mappings) {
        if (e.arity() == 2 && e.sites.offsets[1][0] == -1) continue;
        kept.push_back(e);
    }
    oneWay.events.mappings = kept;
    CCReport r = checkCCConditions(oneWay);
    CHECK(r.translationInvariant);
    CHECK_FALSE(r.symmetric);

    // Explicit-graph models are not translation invariant.
    CCReport dand = checkCCConditions(zoo::dandelion(4, cycleDispersal(4)));
    CHECK_FALSE(dand.translationInvariant);
    CHECK_FALSE(dand.allPass());
}

TEST_CASE("two-dimensional symmetry check") {
    CCReport r = checkCCConditions(zoo::contactProcess(1.0, 2));
    CHECK(r.allPass());
}
