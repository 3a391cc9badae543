#include "doctest.h"
#include "fixtures.hpp"
#include "growth/modelfile.hpp"
#include "growth/zoo.hpp"

using namespace growth;

namespace {

std::vector<zoo::DispersalEntry> cycleDispersal(std::uint32_t n) {
    std::vector<zoo::DispersalEntry> entries;
    for (std::uint32_t x = 0; x < n; ++x) {
        entries.push_back({x, {}, 1.0});
        entries.push_back({x, {(x + 1) % n, (x + n - 1) % n}, 1.0});
    }
    return entries;
}

double rateOf(const TransitionRateSet& r, const SiteTemplate& sites, const LocalConfig& from,
              const LocalConfig& to) {
    EventStructure probe;  // reuse canonical comparison through sameRateSet
    TransitionRateSet single;
    single.entries.push_back({sites, from, to, 1.0});
    for (const auto& t : r.entries) {
        TransitionRateSet candidate;
        candidate.entries.push_back({t.sites, t.from, t.to, 1.0});
        if (sameRateSet(TypeLattice{}, single, candidate)) return t.rate;
    }
    return 0.0;
}

}  // namespace

TEST_CASE("every zoo model validates and is additive") {
    std::vector<GrowthModel> models = {
        zoo::contactProcess(1.5),
        zoo::nStageContact(3, 1.5, 0.5),
        zoo::threeTypeSystem(2.0),
        zoo::twoStageContact(1.5, 1.0, 0.5),
        zoo::bipartiteInfection(1.0),
        zoo::household(2, 1.0, 0.5, 1),
        zoo::household(2, 1.0, 0.5, 2),
        zoo::dandelion(4, cycleDispersal(4)),
        zoo::helper(4, cycleDispersal(4)),
    };
    for (const auto& m : models) {
        CAPTURE(m.name);
        CHECK(validateLattice(m.lattice.size(), m.lattice.leqTable(), m.lattice.joinTable()).ok());
        CHECK(validateStructure(m.lattice, m.events).ok());
        for (const auto& e : m.events.mappings) {
            CHECK(isAdditive(m.lattice, e));
            CHECK(isAttractive(m.lattice, e));
        }
        CHECK(validateGrowthModel(m).overall == Verdict::Ok);
    }
}

TEST_CASE("contact process rates") {
    GrowthModel m = zoo::contactProcess(1.5);
    TransitionRateSet r = ratesFromEvents(m.lattice, m.events);
    CHECK(rateOf(r, SiteTemplate::fromOffsets({{0}}), {1}, {0}) == doctest::Approx(1.0));
    CHECK(rateOf(r, SiteTemplate::fromOffsets({{0}, {1}}), {1, 0}, {1, 1}) ==
          doctest::Approx(1.5));
    // lambda = 0 leaves the pure-death structure.
    CHECK(zoo::contactProcess(0.0).events.mappings.size() == 1);
    CHECK_THROWS_AS(zoo::contactProcess(-1.0), NegativeRate);
}

TEST_CASE("N-stage reduces to the contact process at N=1") {
    GrowthModel n1 = zoo::nStageContact(1, 2.0, 5.0);
    GrowthModel contact = zoo::contactProcess(2.0);
    CHECK(sameStructure(contact.lattice, n1.events.mappings, contact.events.mappings));
}

TEST_CASE("N-stage transition rates") {
    const int N = 3;
    GrowthModel m = zoo::nStageContact(N, 2.0, 0.5);
    TransitionRateSet r = ratesFromEvents(m.lattice, m.events);
    for (TypeId i = 1; i <= N; ++i)
        CHECK(rateOf(r, SiteTemplate::fromOffsets({{0}}), {i}, {0}) == doctest::Approx(1.0));
    for (TypeId i = 1; i < N; ++i)
        CHECK(rateOf(r, SiteTemplate::fromOffsets({{0}}), {i}, {TypeId(i + 1)}) ==
              doctest::Approx(0.5));
    CHECK(rateOf(r, SiteTemplate::fromOffsets({{0}, {1}}), {N, 0}, {N, 1}) ==
          doctest::Approx(2.0));
    // Only the final stage transmits.
    CHECK(rateOf(r, SiteTemplate::fromOffsets({{0}, {1}}), {1, 0}, {1, 1}) == 0.0);
}

TEST_CASE("two-stage transition rates include the coupled recovery") {
    GrowthModel m = zoo::twoStageContact(1.5, 0.75, 0.25);
    TransitionRateSet r = ratesFromEvents(m.lattice, m.events);
    auto site = SiteTemplate::fromOffsets({{0}});
    CHECK(rateOf(r, site, {1}, {0}) == doctest::Approx(1.25));  // 1 + delta
    CHECK(rateOf(r, site, {2}, {0}) == doctest::Approx(1.0));
    CHECK(rateOf(r, site, {1}, {2}) == doctest::Approx(0.75));
    CHECK(rateOf(r, SiteTemplate::fromOffsets({{0}, {1}}), {2, 0}, {2, 1}) ==
          doctest::Approx(1.5));
}

TEST_CASE("bipartite primitives and transitions") {
    GrowthModel m = zoo::bipartiteInfection(0.5);
    CHECK(m.lattice.primitives() == 0b0110u);  // {m, f}
    TransitionRateSet r = ratesFromEvents(m.lattice, m.events);
    auto site = SiteTemplate::fromOffsets({{0}});
    CHECK(rateOf(r, site, {1}, {0}) == doctest::Approx(1.0));   // m recovers
    CHECK(rateOf(r, site, {3}, {2}) == doctest::Approx(1.0));   // mf -> f
    CHECK(rateOf(r, site, {3}, {1}) == doctest::Approx(1.0));   // mf -> m
    CHECK(rateOf(r, site, {1}, {3}) == doctest::Approx(0.5));   // m -> m v f
    auto edge = SiteTemplate::fromOffsets({{0}, {1}});
    CHECK(rateOf(r, edge, {1, 0}, {1, 2}) == doctest::Approx(0.5));  // m infects f
    CHECK(rateOf(r, edge, {2, 0}, {2, 1}) == doctest::Approx(0.5));  // f infects m
    CHECK(rateOf(r, edge, {3, 0}, {3, 3}) == 0.0);  // both sexes arrive via separate events
}

TEST_CASE("household variant 2 transmits at i*lambda") {
    const int N = 3;
    GrowthModel m = zoo::household(N, 0.5, 1.0, 2);
    TransitionRateSet r = ratesFromEvents(m.lattice, m.events);
    auto edge = SiteTemplate::fromOffsets({{0}, {1}});
    for (TypeId i = 1; i <= N; ++i)
        CHECK(rateOf(r, edge, {i, 0}, {i, 1}) == doctest::Approx(i * 0.5));
    // Promotion at i*gamma.
    auto site = SiteTemplate::fromOffsets({{0}});
    for (TypeId i = 1; i < N; ++i)
        CHECK(rateOf(r, site, {i}, {TypeId(i + 1)}) == doctest::Approx(i * 1.0));
    // Variant 1 at N=1 equals the contact process.
    GrowthModel h1 = zoo::household(1, 2.0, 1.0, 1);
    GrowthModel contact = zoo::contactProcess(2.0);
    CHECK(sameStructure(contact.lattice, h1.events.mappings, contact.events.mappings));
}

TEST_CASE("dandelion self-dispersal is a no-op") {
    GrowthModel m = zoo::dandelion(2, {{0, {0}, 1.0}, {0, {}, 1.0}, {1, {}, 1.0}});
    // The self-dispersal mapping has arity 1 and fixes both states.
    const LocalMapping& e = m.events.mappings[0];
    CHECK(e.arity() == 1);
    CHECK(applyMapping(m.lattice, e, {1}) == LocalConfig{1});
    CHECK(applyMapping(m.lattice, e, {0}) == LocalConfig{0});
}

TEST_CASE("onGraph expands templates to directed edges once") {
    GrowthModel contact = zoo::contactProcess(2.0);
    GrowthModel g = zoo::onGraph(contact, 3, {{0, 1}, {1, 2}});
    // 3 deaths + 2 edges * 2 directions = 7 mappings.
    CHECK(g.events.mappings.size() == 7);
    CHECK(validateGrowthModel(g).overall == Verdict::Ok);
}

TEST_CASE("zoo catalogue and byName") {
    CHECK_FALSE(zoo::catalogue().empty());
    for (const auto& entry : zoo::catalogue()) {
        GrowthModel m = zoo::byName(entry.name, {});
        CHECK(validateGrowthModel(m).overall == Verdict::Ok);
    }
    CHECK_THROWS_AS(zoo::byName("nope", {}), ModelError);
}

TEST_CASE("zoo models serialize and reload") {
    for (const auto& entry : zoo::catalogue()) {
        GrowthModel m = zoo::byName(entry.name, {});
        std::string text = modelfile::saveToString(m);
        GrowthModel back = modelfile::loadFromString(text);
        CHECK(sameStructure(m.lattice, back.events.mappings, m.events.mappings));
        CHECK(modelfile::saveToString(back) == text);
    }
}
