#include "growth/zoo.hpp"

#include <algorithm>

namespace growth::zoo {

namespace {

void requireRate(double r, const std::string& name) {
    if (r < 0) throw NegativeRate(name + " must be nonnegative");
}

std::vector<std::vector<int>> edgeTemplate(int dim, int axis, int dir) {
    std::vector<int> src(dim, 0), dst(dim, 0);
    dst[axis] = dir;
    return {src, dst};
}

// Adds one directed-edge mapping per axis and direction; returns the ids.
template <typename TriggerFn>
std::vector<std::uint32_t> addTransmissions(GrowthModel& m, int dim, double rate,
                                            TriggerFn&& newTargetType) {
    std::vector<std::uint32_t> ids;
    if (rate <= 0) return ids;
    auto table = tabulate(m.lattice, 2, [&](const LocalConfig& in) {
        LocalConfig out = in;
        TypeId add = newTargetType(in[0]);
        if (add != 0) out[1] = m.lattice.join(out[1], add);
        return out;
    });
    for (int axis = 0; axis < dim; ++axis)
        for (int dir : {+1, -1}) {
            ids.push_back(static_cast<std::uint32_t>(m.events.mappings.size()));
            m.events.mappings.push_back(makeMapping(
                m.lattice, SiteTemplate::fromOffsets(edgeTemplate(dim, axis, dir)), table, rate));
        }
    return ids;
}

std::uint32_t addSiteMapping(GrowthModel& m, std::vector<TypeId> images, double rate) {
    auto table = tabulate(m.lattice, 1,
                          [&](const LocalConfig& in) { return LocalConfig{images[in[0]]}; });
    m.events.mappings.push_back(
        makeMapping(m.lattice, SiteTemplate::fromOffsets({std::vector<int>(m.geometry.dim, 0)}),
                    std::move(table), rate));
    return static_cast<std::uint32_t>(m.events.mappings.size() - 1);
}

TypeLattice chainLattice(int n) {
    std::vector<std::pair<int, int>> covers;
    for (int i = 0; i + 1 < n; ++i) covers.push_back({i, i + 1});
    return TypeLattice::fromCovers(n, covers);
}

void defaultTorus(GrowthModel& m, int dim) {
    m.geometry.dim = dim;
    m.geometry.sides.assign(dim, 20);
}

}  // namespace

GrowthModel contactProcess(double lambda, int dim) {
    requireRate(lambda, "lambda");
    GrowthModel m;
    m.name = "contact";
    m.lattice = chainLattice(2);
    m.typeLabels = {"0", "1"};
    defaultTorus(m, dim);
    addSiteMapping(m, {0, 0}, 1.0);  // death
    auto tr = addTransmissions(m, dim, lambda,
                               [](TypeId src) { return src >= 1 ? TypeId{1} : TypeId{0}; });
    m.parameters["lambda"] = {lambda, tr};
    return m;
}

GrowthModel nStageContact(int N, double lambda, double gamma, int dim) {
    if (N < 1) throw ModelError("N must be at least 1");
    requireRate(lambda, "lambda");
    requireRate(gamma, "gamma");
    GrowthModel m;
    m.name = "nstage";
    m.lattice = chainLattice(N + 1);
    for (int i = 0; i <= N; ++i) m.typeLabels.push_back(std::to_string(i));
    defaultTorus(m, dim);
    addSiteMapping(m, std::vector<TypeId>(N + 1, 0), 1.0);  // coupled death of every stage
    std::vector<std::uint32_t> onsets;
    if (gamma > 0)
        for (int i = 1; i < N; ++i) {
            std::vector<TypeId> images(N + 1);
            for (int a = 0; a <= N; ++a) images[a] = static_cast<TypeId>(a == i ? i + 1 : a);
            onsets.push_back(addSiteMapping(m, images, gamma));
        }
    auto tr = addTransmissions(m, dim, lambda, [N](TypeId src) {
        return src == static_cast<TypeId>(N) ? TypeId{1} : TypeId{0};
    });
    m.parameters["lambda"] = {lambda, tr};
    m.parameters["gamma"] = {gamma, onsets};
    return m;
}

GrowthModel threeTypeSystem(double lambda, int dim) {
    requireRate(lambda, "lambda");
    GrowthModel m;
    m.name = "three-type";
    m.lattice = TypeLattice::fromCovers(5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}});
    m.typeLabels = {"0", "1", "2", "3", "4"};
    defaultTorus(m, dim);
    addSiteMapping(m, {0, 0, 0, 0, 0}, 1.0);  // every organism dies together
    std::vector<std::uint32_t> births;
    for (TypeId c : {TypeId{1}, TypeId{2}, TypeId{3}}) {
        auto ids = addTransmissions(m, dim, lambda / 3.0, [c](TypeId src) {
            return src >= 1 ? c : TypeId{0};
        });
        births.insert(births.end(), ids.begin(), ids.end());
    }
    m.parameters["lambda"] = {lambda, births};
    return m;
}

GrowthModel twoStageContact(double lambda, double gamma, double delta, int dim) {
    requireRate(lambda, "lambda");
    requireRate(gamma, "gamma");
    requireRate(delta, "delta");
    GrowthModel m;
    m.name = "two-stage";
    m.lattice = chainLattice(3);
    m.typeLabels = {"0", "1", "2"};
    defaultTorus(m, dim);
    addSiteMapping(m, {0, 0, 0}, 1.0);  // whenever a 2 recovers, a 1 recovers too
    std::vector<std::uint32_t> deltas, gammas;
    if (delta > 0) deltas.push_back(addSiteMapping(m, {0, 0, 2}, delta));  // juvenile recovery
    if (gamma > 0) gammas.push_back(addSiteMapping(m, {0, 2, 2}, gamma));  // onset
    auto tr = addTransmissions(m, dim, lambda,
                               [](TypeId src) { return src == 2 ? TypeId{1} : TypeId{0}; });
    m.parameters["lambda"] = {lambda, tr};
    m.parameters["gamma"] = {gamma, gammas};
    m.parameters["delta"] = {delta, deltas};
    return m;
}

GrowthModel bipartiteInfection(double lambda, int dim) {
    requireRate(lambda, "lambda");
    GrowthModel m;
    m.name = "bipartite";
    // 1 = m, 2 = f, 3 = m v f.
    m.lattice = TypeLattice::fromCovers(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    m.typeLabels = {"0", "m", "f", "mf"};
    defaultTorus(m, dim);
    addSiteMapping(m, {0, 0, 2, 2}, 1.0);  // m recovers (mf -> f)
    addSiteMapping(m, {0, 1, 0, 1}, 1.0);  // f recovers (mf -> m)
    std::vector<std::uint32_t> lam;
    if (lambda > 0) {
        lam.push_back(addSiteMapping(m, {0, 3, 2, 3}, lambda));  // m -> m v f
        lam.push_back(addSiteMapping(m, {0, 1, 3, 3}, lambda));  // f -> m v f
    }
    auto toF = addTransmissions(m, dim, lambda, [&m](TypeId src) {
        return m.lattice.leq(1, src) ? TypeId{2} : TypeId{0};  // neighbour m infects as f
    });
    auto toM = addTransmissions(m, dim, lambda, [&m](TypeId src) {
        return m.lattice.leq(2, src) ? TypeId{1} : TypeId{0};  // neighbour f infects as m
    });
    lam.insert(lam.end(), toF.begin(), toF.end());
    lam.insert(lam.end(), toM.begin(), toM.end());
    m.parameters["lambda"] = {lambda, lam};
    return m;
}

GrowthModel household(int N, double lambda, double gamma, int variant, int dim) {
    if (N < 1) throw ModelError("N must be at least 1");
    if (variant != 1 && variant != 2) throw ModelError("variant must be 1 or 2");
    requireRate(lambda, "lambda");
    requireRate(gamma, "gamma");
    GrowthModel m;
    m.name = "household";
    m.lattice = chainLattice(N + 1);
    for (int i = 0; i <= N; ++i) m.typeLabels.push_back(std::to_string(i));
    defaultTorus(m, dim);
    addSiteMapping(m, std::vector<TypeId>(N + 1, 0), 1.0);
    std::vector<std::uint32_t> gammas;
    if (gamma > 0)
        for (int i = 1; i < N; ++i) {
            std::vector<TypeId> images(N + 1);
            for (int a = 0; a <= N; ++a) images[a] = static_cast<TypeId>(a == i ? i + 1 : a);
            gammas.push_back(addSiteMapping(m, images, i * gamma));  // i -> i+1 at rate i*gamma
        }
    std::vector<std::uint32_t> lam;
    if (variant == 1) {
        lam = addTransmissions(m, dim, lambda, [N](TypeId src) {
            return src == static_cast<TypeId>(N) ? TypeId{1} : TypeId{0};
        });
    } else {
        // Graded coupling: mapping k fires when the source is at least k, so a
        // source in state i drives transmission at rate i*lambda.
        for (TypeId k = 1; k <= static_cast<TypeId>(N); ++k) {
            auto ids = addTransmissions(m, dim, lambda, [k](TypeId src) {
                return src >= k ? TypeId{1} : TypeId{0};
            });
            lam.insert(lam.end(), ids.begin(), ids.end());
        }
    }
    m.parameters["lambda"] = {lambda, lam};
    m.parameters["gamma"] = {gamma, gammas};
    return m;
}

namespace {

GrowthModel dispersalModel(std::uint32_t nSites, const std::vector<DispersalEntry>& dispersal,
                           bool helperForm) {
    GrowthModel m;
    m.name = helperForm ? "helper" : "dandelion";
    m.lattice = chainLattice(2);
    m.typeLabels = {"0", "1"};
    m.geometry.graphSites = nSites;
    for (const auto& d : dispersal) {
        if (d.rate < 0) throw NegativeRate("dispersal rate");
        if (d.rate == 0) continue;
        if (d.site >= nSites) throw ModelError("dispersal site out of range");
        std::vector<std::uint32_t> tuple{d.site};
        bool selfTarget = false;
        for (auto t : d.targets) {
            if (t >= nSites) throw ModelError("dispersal target out of range");
            if (t == d.site) {
                selfTarget = true;
                continue;
            }
            if (std::find(tuple.begin(), tuple.end(), t) == tuple.end()) tuple.push_back(t);
        }
        const int arity = static_cast<int>(tuple.size());
        std::vector<ConfigIndex> table;
        if (!helperForm) {
            table = tabulate(m.lattice, arity, [&](const LocalConfig& in) {
                LocalConfig out = in;
                if (in[0] == 1) {
                    out[0] = selfTarget ? 1 : 0;
                    for (int p = 1; p < arity; ++p) out[p] = 1;
                }
                return out;
            });
        } else {
            table = tabulate(m.lattice, arity, [&](const LocalConfig& in) {
                LocalConfig out = in;
                TypeId fed = selfTarget ? in[0] : TypeId{0};
                for (int p = 1; p < arity; ++p) fed = std::max(fed, in[p]);
                out[0] = fed;
                return out;
            });
        }
        m.events.mappings.push_back(
            makeMapping(m.lattice, SiteTemplate::fromSites(tuple), std::move(table), d.rate));
    }
    return m;
}

}  // namespace

GrowthModel dandelion(std::uint32_t nSites, const std::vector<DispersalEntry>& dispersal) {
    return dispersalModel(nSites, dispersal, false);
}

GrowthModel helper(std::uint32_t nSites, const std::vector<DispersalEntry>& dispersal) {
    return dispersalModel(nSites, dispersal, true);
}

GrowthModel onGraph(const GrowthModel& m, std::uint32_t nSites,
                    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    GrowthModel out;
    out.name = m.name + "-graph";
    out.lattice = m.lattice;
    out.typeLabels = m.typeLabels;
    out.geometry.graphSites = nSites;

    // Directed-edge tables shared by a +-pair of offset templates become one
    // mapping per directed edge; duplicates across the pair collapse.
    struct EdgeGroup {
        std::vector<ConfigIndex> table;
        double rate;
    };
    std::vector<EdgeGroup> groups;
    for (const auto& e : m.events.mappings) {
        if (!e.sites.translationInvariant)
            throw ModelError("onGraph expects a translation-invariant model");
        if (e.arity() == 1) {
            for (std::uint32_t s = 0; s < nSites; ++s)
                out.events.mappings.push_back(
                    makeMapping(out.lattice, SiteTemplate::fromSites({s}), e.table, e.rate));
        } else if (e.arity() == 2) {
            bool seen = false;
            for (const auto& g : groups)
                if (g.table == e.table && g.rate == e.rate) seen = true;
            if (!seen) groups.push_back({e.table, e.rate});
        } else {
            throw ModelError("onGraph supports single-site and edge templates only");
        }
    }
    for (const auto& g : groups)
        for (auto [u, v] : edges) {
            out.events.mappings.push_back(
                makeMapping(out.lattice, SiteTemplate::fromSites({u, v}), g.table, g.rate));
            out.events.mappings.push_back(
                makeMapping(out.lattice, SiteTemplate::fromSites({v, u}), g.table, g.rate));
        }
    return out;
}

const std::vector<ZooEntry>& catalogue() {
    static const std::vector<ZooEntry> entries = {
        {"contact", "two-state infection: transmission along edges, recovery at rate 1",
         {"lambda", "dim"}},
        {"nstage", "N infectious stages; only the final stage transmits", {"N", "lambda", "gamma", "dim"}},
        {"three-type", "three interchangeable organisms with a shared crowded state",
         {"lambda", "dim"}},
        {"two-stage", "juveniles mature at rate gamma before transmitting; extra juvenile death delta",
         {"lambda", "gamma", "delta", "dim"}},
        {"bipartite", "two-sex infection: m infects f, f infects m, same site or neighbours",
         {"lambda", "dim"}},
        {"household", "graded site load 1..N; transmission scales with load in variant 2",
         {"N", "lambda", "gamma", "variant", "dim"}},
        {"dandelion", "occupied sites die and disperse to a fixed target set (explicit graph)", {}},
        {"helper", "sites survive an event only when a target site is occupied (explicit graph)", {}},
    };
    return entries;
}

GrowthModel byName(const std::string& name, const std::map<std::string, double>& params) {
    auto get = [&](const std::string& k, double dflt) {
        auto it = params.find(k);
        return it == params.end() ? dflt : it->second;
    };
    int dim = static_cast<int>(get("dim", 1));
    if (name == "contact") return contactProcess(get("lambda", 2.0), dim);
    if (name == "nstage")
        return nStageContact(static_cast<int>(get("N", 2)), get("lambda", 2.0), get("gamma", 1.0),
                             dim);
    if (name == "three-type") return threeTypeSystem(get("lambda", 3.0), dim);
    if (name == "two-stage")
        return twoStageContact(get("lambda", 2.0), get("gamma", 2.0), get("delta", 0.0), dim);
    if (name == "bipartite") return bipartiteInfection(get("lambda", 2.0), dim);
    if (name == "household")
        return household(static_cast<int>(get("N", 2)), get("lambda", 2.0), get("gamma", 1.0),
                         static_cast<int>(get("variant", 1)), dim);
    if (name == "dandelion" || name == "helper") {
        // Default 4-site cycle: each site disperses to (or is helped by) its
        // two neighbours, plus a plain death entry keeping extinction reachable.
        std::uint32_t n = static_cast<std::uint32_t>(get("sites", 4));
        std::vector<DispersalEntry> entries;
        for (std::uint32_t x = 0; x < n; ++x) {
            entries.push_back({x, {}, 1.0});
            entries.push_back({x, {(x + 1) % n, (x + n - 1) % n}, get("rate", 1.0)});
        }
        return name == "dandelion" ? dandelion(n, entries) : helper(n, entries);
    }
    throw ModelError("unknown zoo model: " + name);
}

}  // namespace growth::zoo
