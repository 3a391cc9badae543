#include "growth/eventmodel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <unordered_set>

namespace growth {

namespace {

std::string templateKey(const SiteTemplate& t) {
    std::string k = t.translationInvariant ? "o:" : "s:";
    if (t.translationInvariant) {
        for (const auto& off : t.offsets) {
            for (int c : off) k += std::to_string(c) + ",";
            k += ";";
        }
    } else {
        for (auto s : t.sites) k += std::to_string(s) + ";";
    }
    return k;
}

std::string configKey(const LocalConfig& c) {
    std::string k;
    for (TypeId a : c) k += std::to_string(static_cast<int>(a)) + ",";
    return k;
}

// Permutes/translates a transition into the same canonical slot order used
// by canonicalMapping.
Transition canonicalTransition(const Transition& t) {
    const int k = t.from.size();
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    Transition out = t;
    if (t.sites.translationInvariant) {
        std::stable_sort(perm.begin(), perm.end(),
                         [&](int i, int j) { return t.sites.offsets[i] < t.sites.offsets[j]; });
        std::vector<int> base = t.sites.offsets[perm[0]];
        out.sites.offsets.clear();
        for (int i = 0; i < k; ++i) {
            auto off = t.sites.offsets[perm[i]];
            for (std::size_t d = 0; d < off.size(); ++d) off[d] -= base[d];
            out.sites.offsets.push_back(std::move(off));
        }
    } else {
        std::stable_sort(perm.begin(), perm.end(),
                         [&](int i, int j) { return t.sites.sites[i] < t.sites.sites[j]; });
        out.sites.sites.clear();
        for (int i = 0; i < k; ++i) out.sites.sites.push_back(t.sites.sites[perm[i]]);
    }
    for (int i = 0; i < k; ++i) {
        out.from[i] = t.from[perm[i]];
        out.to[i] = t.to[perm[i]];
    }
    return out;
}

}  // namespace

Report validateStructure(const TypeLattice& lat, const EventStructure& s) {
    Report r;
    LocalCodec probe;
    for (std::size_t i = 0; i < s.mappings.size(); ++i) {
        const auto& e = s.mappings[i];
        if (e.rate <= 0) {
            r.issues.push_back({"NegativeRate", "mapping " + std::to_string(i), {(int)i}});
            return r;
        }
        LocalCodec codec(lat.size(), e.sites.arity());
        if (e.table.size() != codec.tableSize()) {
            r.issues.push_back({"TableNotTotal", "mapping " + std::to_string(i), {(int)i}});
            return r;
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (s.mappings[j].sites == e.sites && s.mappings[j].table == e.table) {
                r.issues.push_back({"DuplicateMapping",
                                    "mappings " + std::to_string(j) + " and " + std::to_string(i) +
                                        " share sites and table",
                                    {(int)j, (int)i}});
                return r;
            }
        }
    }
    return r;
}

TransitionRateSet ratesFromEvents(const TypeLattice& lat, const EventStructure& s) {
    std::map<std::string, Transition> acc;
    for (const auto& e : s.mappings) {
        LocalCodec codec(lat.size(), e.arity());
        for (ConfigIndex idx = 0; idx < codec.tableSize(); ++idx) {
            if (e.table[idx] == idx) continue;
            Transition t;
            t.sites = e.sites;
            t.from = codec.decode(idx);
            t.to = codec.decode(e.table[idx]);
            t.rate = e.rate;
            Transition ct = canonicalTransition(t);
            std::string key = templateKey(ct.sites) + "|" + configKey(ct.from) + ">" +
                              configKey(ct.to);
            auto [it, fresh] = acc.emplace(key, ct);
            if (!fresh) it->second.rate += e.rate;
        }
    }
    TransitionRateSet out;
    for (auto& [k, t] : acc) out.entries.push_back(std::move(t));
    return out;
}

EventStructure independentConstruction(const TypeLattice& lat, const TransitionRateSet& rates,
                                       int maxSites, double maxRate) {
    if (maxSites > 0 || maxRate > 0) {
        std::map<std::string, double> totals;
        for (const auto& t : rates.entries) {
            if (maxSites > 0 && static_cast<int>(t.from.size()) > maxSites)
                throw BoundExceeded("transition involves " + std::to_string(t.from.size()) +
                                    " sites, bound is " + std::to_string(maxSites));
            totals[templateKey(t.sites)] += t.rate;
        }
        if (maxRate > 0)
            for (const auto& [k, total] : totals)
                if (total > maxRate)
                    throw BoundExceeded("total rate " + std::to_string(total) +
                                        " on one template exceeds bound " +
                                        std::to_string(maxRate));
    }
    EventStructure s;
    for (const auto& t : rates.entries) {
        if (t.rate <= 0) throw NegativeRate("transition rates must be positive");
        LocalCodec codec(lat.size(), t.from.size());
        std::vector<ConfigIndex> table(codec.tableSize());
        for (ConfigIndex i = 0; i < table.size(); ++i) table[i] = i;
        table[codec.encode(t.from)] = codec.encode(t.to);
        s.mappings.push_back(makeMapping(lat, t.sites, std::move(table), t.rate));
    }
    return s;
}

bool sameRateSet(const TypeLattice&, const TransitionRateSet& a, const TransitionRateSet& b,
                 double tol) {
    auto norm = [&](const TransitionRateSet& r) {
        std::map<std::string, double> m;
        for (const auto& t : r.entries) {
            Transition ct = canonicalTransition(t);
            m[templateKey(ct.sites) + "|" + configKey(ct.from) + ">" + configKey(ct.to)] +=
                ct.rate;
        }
        return m;
    };
    auto ma = norm(a), mb = norm(b);
    if (ma.size() != mb.size()) return false;
    for (const auto& [k, v] : ma) {
        auto it = mb.find(k);
        if (it == mb.end() || std::abs(it->second - v) > tol) return false;
    }
    return true;
}

namespace {

// Slot indices of the transition's sites inside the mapping's template;
// nullopt when the transition region is not covered by the template.
std::optional<std::vector<int>> embedSites(const SiteTemplate& inner, const SiteTemplate& outer) {
    if (inner.translationInvariant != outer.translationInvariant) return std::nullopt;
    std::vector<int> slots;
    const int n = inner.arity();
    for (int i = 0; i < n; ++i) {
        int found = -1;
        for (int j = 0; j < outer.arity(); ++j) {
            bool match = inner.translationInvariant
                             ? inner.offsets[i] == outer.offsets[j]
                             : inner.sites[i] == outer.sites[j];
            if (match) {
                found = j;
                break;
            }
        }
        if (found < 0) return std::nullopt;
        slots.push_back(found);
    }
    return slots;
}

}  // namespace

Report validateCoupling(const TypeLattice& lat, const EventCoupling& c) {
    Report r = validateStructure(lat, c.structure);
    if (!r.ok()) return r;
    if (c.assignment.size() != c.transitions.size()) {
        r.issues.push_back({"AssignmentMismatch", "one index set required per transition", {}});
        return r;
    }

    // Triggers each mapping is assigned to, for the side-effect and
    // disjointness checks.
    std::vector<std::vector<std::pair<std::vector<int>, LocalConfig>>> triggers(
        c.structure.mappings.size());

    for (std::size_t ti = 0; ti < c.transitions.size(); ++ti) {
        const Transition& t = c.transitions[ti];
        double sum = 0;
        for (std::uint32_t mi : c.assignment[ti]) {
            if (mi >= c.structure.mappings.size()) {
                r.issues.push_back({"AssignmentMismatch",
                                    "transition " + std::to_string(ti) + " references mapping " +
                                        std::to_string(mi),
                                    {(int)ti, (int)mi}});
                return r;
            }
            const LocalMapping& e = c.structure.mappings[mi];
            auto slots = embedSites(t.sites, e.sites);
            if (!slots) {
                r.issues.push_back({"SideEffect",
                                    "mapping " + std::to_string(mi) +
                                        " does not cover the region of transition " +
                                        std::to_string(ti),
                                    {(int)ti, (int)mi}});
                return r;
            }
            // Restriction behaviour: on every extension of the trigger, the
            // mapping performs exactly the flip and fixes the rest.
            LocalCodec codec(lat.size(), e.arity());
            for (ConfigIndex idx = 0; idx < codec.tableSize(); ++idx) {
                bool matches = true;
                for (std::size_t p = 0; p < slots->size(); ++p)
                    if (codec.component(idx, (*slots)[p]) != t.from[p]) {
                        matches = false;
                        break;
                    }
                if (!matches) continue;
                ConfigIndex out = e.table[idx];
                ConfigIndex expected = idx;
                for (std::size_t p = 0; p < slots->size(); ++p)
                    expected = codec.withComponent(expected, (*slots)[p], t.to[p]);
                if (out != expected) {
                    r.issues.push_back({"SideEffect",
                                        "mapping " + std::to_string(mi) +
                                            " does not realize transition " + std::to_string(ti) +
                                            " exactly on trigger extension " +
                                            configKey(codec.decode(idx)),
                                        {(int)ti, (int)mi, (int)idx}});
                    return r;
                }
            }
            triggers[mi].push_back({*slots, t.from});
            sum += e.rate;
        }
        if (std::abs(sum - t.rate) > 1e-9 * std::max(1.0, std::abs(t.rate))) {
            r.issues.push_back({"RateMismatch",
                                "transition " + std::to_string(ti) + " needs rate " +
                                    std::to_string(t.rate) + ", assigned mappings sum to " +
                                    std::to_string(sum),
                                {(int)ti}});
            return r;
        }
    }

    for (std::size_t mi = 0; mi < c.structure.mappings.size(); ++mi) {
        const LocalMapping& e = c.structure.mappings[mi];
        LocalCodec codec(lat.size(), e.arity());
        // Outside every assigned trigger the mapping must be the identity.
        for (ConfigIndex idx = 0; idx < codec.tableSize(); ++idx) {
            bool inTrigger = false;
            for (const auto& [slots, from] : triggers[mi]) {
                bool match = true;
                for (std::size_t p = 0; p < slots.size(); ++p)
                    if (codec.component(idx, slots[p]) != from[p]) {
                        match = false;
                        break;
                    }
                if (match) {
                    inTrigger = true;
                    break;
                }
            }
            if (!inTrigger && e.table[idx] != idx) {
                r.issues.push_back({"SideEffect",
                                    "mapping " + std::to_string(mi) +
                                        " alters non-trigger configuration " +
                                        configKey(codec.decode(idx)),
                                    {(int)mi, (int)idx}});
                return r;
            }
        }
        // Pairwise disjointness of trigger configuration sets.
        for (std::size_t i = 0; i < triggers[mi].size(); ++i)
            for (std::size_t j = i + 1; j < triggers[mi].size(); ++j) {
                const auto& [slotsA, fromA] = triggers[mi][i];
                const auto& [slotsB, fromB] = triggers[mi][j];
                bool disjoint = false;
                for (std::size_t p = 0; p < slotsA.size() && !disjoint; ++p)
                    for (std::size_t q = 0; q < slotsB.size() && !disjoint; ++q)
                        if (slotsA[p] == slotsB[q] && fromA[p] != fromB[q]) disjoint = true;
                if (!disjoint) {
                    r.issues.push_back({"OverlapViolation",
                                        "mapping " + std::to_string(mi) +
                                            " is assigned to transitions with jointly satisfiable "
                                            "triggers",
                                        {(int)mi, (int)i, (int)j}});
                    return r;
                }
            }
    }
    return r;
}

bool checkBoundedness(const EventStructure& s, int maxSites, double maxRate) {
    for (const auto& e : s.mappings) {
        if (e.sites.arity() > maxSites) return false;
        if (e.rate > maxRate) return false;
    }
    return true;
}

namespace {

// Local patch instantiation for the extinction search. Returns per-instance
// slot lists over patch site indices.
struct Patch {
    int nSites = 0;
    std::vector<std::pair<std::uint32_t, std::vector<int>>> instances;  // (mapping, sites)
    int startSite = 0;
};

Patch buildPatch(const GrowthModel& m) {
    Patch p;
    bool invariant = !m.events.mappings.empty();
    for (const auto& e : m.events.mappings)
        if (!e.sites.translationInvariant) invariant = false;
    if (!invariant) {
        std::uint32_t n = m.geometry.graphSites;
        for (const auto& e : m.events.mappings)
            for (auto s : e.sites.sites) n = std::max(n, s + 1);
        p.nSites = static_cast<int>(n);
        for (std::uint32_t i = 0; i < m.events.mappings.size(); ++i) {
            std::vector<int> slots;
            for (auto s : m.events.mappings[i].sites.sites) slots.push_back(static_cast<int>(s));
            p.instances.push_back({i, std::move(slots)});
        }
        p.startSite = p.nSites / 2;
        return p;
    }
    const int d = m.geometry.dim;
    int radius = 1;
    for (const auto& e : m.events.mappings)
        for (const auto& off : e.sites.offsets)
            for (int c : off) radius = std::max(radius, std::abs(c));
    int side = 2 * radius + 1;
    int nSites = 1;
    for (int k = 0; k < d; ++k) nSites *= side;
    p.nSites = nSites;
    auto toIndex = [&](const std::vector<int>& coord) {
        int idx = 0;
        for (int k = d - 1; k >= 0; --k) idx = idx * side + (coord[k] + radius);
        return idx;
    };
    // Anchor every template wherever the whole tuple fits inside the patch.
    std::vector<int> anchor(d, -radius);
    for (;;) {
        for (std::uint32_t i = 0; i < m.events.mappings.size(); ++i) {
            const auto& offs = m.events.mappings[i].sites.offsets;
            std::vector<int> slots;
            bool fits = true;
            for (const auto& off : offs) {
                std::vector<int> coord(d);
                for (int k = 0; k < d; ++k) {
                    coord[k] = anchor[k] + off[k];
                    if (coord[k] < -radius || coord[k] > radius) fits = false;
                }
                if (!fits) break;
                slots.push_back(toIndex(coord));
            }
            if (fits) p.instances.push_back({i, std::move(slots)});
        }
        int k = 0;
        while (k < d && ++anchor[k] > radius) anchor[k++] = -radius;
        if (k == d) break;
    }
    p.startSite = toIndex(std::vector<int>(d, 0));
    return p;
}

}  // namespace

GrowthModelReport validateGrowthModel(const GrowthModel& m, std::size_t nodeBudget) {
    GrowthModelReport rep;
    const TypeLattice& lat = m.lattice;

    Report sr = validateStructure(lat, m.events);
    if (!sr.ok()) {
        rep.issues = sr;
        rep.overall = Verdict::Fail;
        return rep;
    }
    for (std::size_t i = 0; i < m.events.mappings.size(); ++i) {
        if (m.events.mappings[i].table[0] != 0) {
            rep.issues.issues.push_back(
                {"NotAbsorbing",
                 "mapping " + std::to_string(i) + " does not fix the all-passive configuration",
                 {(int)i}});
            rep.overall = Verdict::Fail;
            return rep;
        }
    }

    Patch patch = buildPatch(m);
    const int n = lat.size();
    // Config space must fit a 64-bit mixed-radix code for the hash set.
    double bits = patch.nSites * std::log2(double(n));
    if (bits > 62) {
        rep.extinctionReachable = Verdict::Inconclusive;
        rep.overall = Verdict::Inconclusive;
        rep.extinctionWitness = "patch configuration space too large to search";
        return rep;
    }
    std::vector<std::uint64_t> powers(patch.nSites + 1);
    powers[0] = 1;
    for (int i = 0; i < patch.nSites; ++i) powers[i + 1] = powers[i] * n;

    bool inconclusive = false;
    for (TypeId a : setElements(lat.primitives())) {
        std::uint64_t start = powers[patch.startSite] * a;
        if (start == 0) continue;
        std::unordered_set<std::uint64_t> seen{start};
        std::deque<std::uint64_t> frontier{start};
        bool reached = false;
        while (!frontier.empty()) {
            std::uint64_t cfg = frontier.front();
            frontier.pop_front();
            if (cfg == 0) {
                reached = true;
                break;
            }
            if (seen.size() > nodeBudget) break;
            for (const auto& [mi, slots] : patch.instances) {
                const LocalMapping& e = m.events.mappings[mi];
                LocalCodec codec(n, e.arity());
                LocalConfig phi(slots.size());
                for (std::size_t p = 0; p < slots.size(); ++p)
                    phi[p] = static_cast<TypeId>((cfg / powers[slots[p]]) % n);
                ConfigIndex out = e.table[codec.encode(phi)];
                std::uint64_t next = cfg;
                for (std::size_t p = 0; p < slots.size(); ++p) {
                    TypeId nv = codec.component(out, p);
                    TypeId ov = phi[p];
                    next += (std::int64_t(nv) - std::int64_t(ov)) *
                            std::int64_t(powers[slots[p]]);
                }
                if (seen.insert(next).second) frontier.push_back(next);
            }
        }
        if (!reached) {
            if (seen.size() > nodeBudget) {
                inconclusive = true;
            } else {
                rep.extinctionReachable = Verdict::Fail;
                rep.extinctionWitness =
                    "extinction unreachable from a single organism of type " + m.labelOf(a);
                rep.overall = Verdict::Fail;
                return rep;
            }
        }
    }
    if (inconclusive) {
        rep.extinctionReachable = Verdict::Inconclusive;
        rep.overall = Verdict::Inconclusive;
        rep.extinctionWitness = "search budget exhausted";
    }
    return rep;
}

}  // namespace growth
