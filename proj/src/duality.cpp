#include "growth/duality.hpp"

#include <algorithm>
#include <functional>

namespace growth {

bool compatible(const DualLattice& dual, const LocalConfig& phi, const LocalConfig& theta) {
    if (phi.size() != theta.size()) throw ArityMismatch("configurations live on different tuples");
    for (std::size_t x = 0; x < phi.size(); ++x)
        if (phi[x] != 0 && setContains(dual.members[theta[x]], phi[x])) return true;
    return false;
}

TypeSet dualElementOf(const TypeLattice& lat, TypeId b) {
    TypeSet cb = lat.colourOf(b);
    TypeSet out = 0;
    for (int c = 1; c < lat.size(); ++c)
        if (colourSucceeds(lat, lat.colourOf(static_cast<TypeId>(c)), cb))
            out = setAdd(out, static_cast<TypeId>(c));
    return out;
}

DualLattice enumerateDualTypes(const TypeLattice& lat) {
    const int n = lat.size();
    std::vector<TypeSet> found{0};
    const std::uint64_t limit = std::uint64_t{1} << (n - 1);
    for (std::uint64_t raw = 1; raw < limit; ++raw) {
        TypeSet s = static_cast<TypeSet>(raw << 1);  // active types only
        bool increasing = true;
        for (TypeId a : setElements(s)) {
            for (int b = 1; b < n && increasing; ++b)
                if (lat.leq(a, static_cast<TypeId>(b)) && !setContains(s, static_cast<TypeId>(b)))
                    increasing = false;
            if (!increasing) break;
        }
        if (!increasing) continue;
        bool decomposable = true;
        for (int a = 1; a < n && decomposable; ++a)
            for (int b = 1; b < n && decomposable; ++b) {
                TypeId j = lat.join(static_cast<TypeId>(a), static_cast<TypeId>(b));
                if (setContains(s, j) && !setContains(s, static_cast<TypeId>(a)) &&
                    !setContains(s, static_cast<TypeId>(b)))
                    decomposable = false;
            }
        if (!decomposable) continue;
        found.push_back(s);
    }
    std::sort(found.begin(), found.end());

    DualLattice dual;
    dual.members = found;
    const int k = static_cast<int>(found.size());
    for (int i = 0; i < k; ++i) dual.indexOf[found[i]] = static_cast<TypeId>(i);

    std::vector<std::uint8_t> leq(k * k, 0);
    std::vector<TypeId> join(k * k, 0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            leq[i * k + j] = (found[i] & ~found[j]) == 0;
            TypeSet u = found[i] | found[j];
            auto it = dual.indexOf.find(u);
            if (it == dual.indexOf.end())
                throw NotDualType("dual types are not closed under union: " + typeSetToString(u));
            join[i * k + j] = it->second;
        }
    dual.lattice = TypeLattice::fromTables(k, std::move(leq), std::move(join));

    if (lat.isMultiColour()) {
        std::vector<TypeId> ident(n, 0);
        std::vector<bool> hit(k, false);
        hit[0] = true;
        for (int b = 1; b < n; ++b) {
            TypeSet eb = dualElementOf(lat, static_cast<TypeId>(b));
            auto it = dual.indexOf.find(eb);
            if (it == dual.indexOf.end() || hit[it->second])
                throw NotDualType("identification b <-> E_b is not a bijection");
            ident[b] = it->second;
            hit[it->second] = true;
        }
        for (bool h : hit)
            if (!h) throw NotDualType("identification b <-> E_b is not onto the dual types");
        dual.identification = std::move(ident);
    }
    return dual;
}

LocalMapping dualMapping(const TypeLattice& lat, const DualLattice& dual, const LocalMapping& e) {
    CounterexamplePair w;
    if (!isAdditive(lat, e, &w))
        throw NotAdditive("dual mapping requires an additive mapping");

    const int k = e.arity();
    LocalCodec baseCodec(lat.size(), k);
    LocalCodec dualCodec(dual.lattice.size(), k);

    // Images of single-organism inputs, e(delta_x(a)).
    std::vector<std::vector<LocalConfig>> image(k, std::vector<LocalConfig>(lat.size()));
    for (int x = 0; x < k; ++x)
        for (int a = 0; a < lat.size(); ++a)
            image[x][a] = baseCodec.decode(e.table[baseCodec.delta(x, static_cast<TypeId>(a))]);

    LocalMapping out;
    out.sites = e.sites;
    out.rate = e.rate;
    out.table.resize(dualCodec.tableSize());
    for (ConfigIndex ti = 0; ti < dualCodec.tableSize(); ++ti) {
        LocalConfig theta = dualCodec.decode(ti);
        LocalConfig dtheta(k);
        for (int x = 0; x < k; ++x) {
            TypeSet s = 0;
            for (int a = 1; a < lat.size(); ++a)
                if (compatible(dual, image[x][a], theta)) s = setAdd(s, static_cast<TypeId>(a));
            auto it = dual.indexOf.find(s);
            if (it == dual.indexOf.end())
                throw NotDualType("computed set " + typeSetToString(s) +
                                  " is not increasing/decomposable");
            dtheta[x] = it->second;
        }
        out.table[ti] = dualCodec.encode(dtheta);
    }

    // The central contract: e(phi) ~ theta <=> phi ~ dual(theta), exhaustively.
    for (ConfigIndex pi = 0; pi < baseCodec.tableSize(); ++pi) {
        LocalConfig phi = baseCodec.decode(pi);
        LocalConfig ephi = baseCodec.decode(e.table[pi]);
        for (ConfigIndex ti = 0; ti < dualCodec.tableSize(); ++ti) {
            LocalConfig theta = dualCodec.decode(ti);
            LocalConfig dtheta = dualCodec.decode(out.table[ti]);
            if (compatible(dual, ephi, theta) != compatible(dual, phi, dtheta))
                throw NotDualType("duality equivalence failed at phi/theta");
        }
    }
    return out;
}

DualModel dualModel(const GrowthModel& m) {
    DualModel dm;
    dm.dual = enumerateDualTypes(m.lattice);
    dm.model.name = m.name.empty() ? "dual" : m.name + "-dual";
    dm.model.lattice = dm.dual.lattice;
    dm.model.geometry = m.geometry;
    dm.model.parameters = m.parameters;
    for (std::size_t i = 0; i < dm.dual.members.size(); ++i) {
        if (i == 0) {
            dm.model.typeLabels.push_back(m.labelOf(0));
            continue;
        }
        std::string label = "{";
        bool first = true;
        for (TypeId a : setElements(dm.dual.members[i])) {
            if (!first) label += ",";
            label += m.labelOf(a);
            first = false;
        }
        dm.model.typeLabels.push_back(label + "}");
    }
    for (const auto& e : m.events.mappings)
        dm.model.events.mappings.push_back(dualMapping(m.lattice, dm.dual, e));
    for (const auto& e : dm.model.events.mappings)
        if (!isAdditive(dm.model.lattice, e))
            throw NotAdditive("dual mapping is not additive; internal inconsistency");
    return dm;
}

namespace {

// Backtracking search for order- and join-preserving bijections between two
// equally sized lattices; calls visit(sigma) for each one found, stopping
// when visit returns true.
bool forEachIsomorphism(const TypeLattice& from, const TypeLattice& to,
                        const std::function<bool(const std::vector<TypeId>&)>& visit) {
    const int n = from.size();
    if (to.size() != n) return false;
    std::vector<TypeId> sigma(n, 0);
    std::vector<bool> used(n, false);
    used[0] = true;  // passive maps to passive

    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == n) return visit(sigma);
        for (int cand = 1; cand < n; ++cand) {
            if (used[cand]) continue;
            bool ok = true;
            for (int j = 0; j < i && ok; ++j) {
                if (from.leq(static_cast<TypeId>(i), static_cast<TypeId>(j)) !=
                    to.leq(static_cast<TypeId>(cand), sigma[j]))
                    ok = false;
                if (from.leq(static_cast<TypeId>(j), static_cast<TypeId>(i)) !=
                    to.leq(sigma[j], static_cast<TypeId>(cand)))
                    ok = false;
                if (ok) {
                    TypeId fj = from.join(static_cast<TypeId>(i), static_cast<TypeId>(j));
                    if (fj <= i) {  // join already assigned
                        TypeId mapped = fj == i ? static_cast<TypeId>(cand) : sigma[fj];
                        if (to.join(static_cast<TypeId>(cand), sigma[j]) != mapped) ok = false;
                    }
                }
            }
            if (!ok) continue;
            sigma[i] = static_cast<TypeId>(cand);
            used[cand] = true;
            if (rec(i + 1)) return true;
            used[cand] = false;
        }
        return false;
    };
    return rec(1);
}

// Full join preservation check for a candidate relabeling.
bool isLatticeIso(const TypeLattice& from, const TypeLattice& to,
                  const std::vector<TypeId>& sigma) {
    const int n = from.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (from.leq(a, b) != to.leq(sigma[a], sigma[b])) return false;
            if (sigma[from.join(a, b)] != to.join(sigma[a], sigma[b])) return false;
        }
    return true;
}

std::vector<LocalMapping> relabelMappings(const TypeLattice& fromLat, const TypeLattice& toLat,
                                          const std::vector<LocalMapping>& mappings,
                                          const std::vector<TypeId>& sigma) {
    std::vector<LocalMapping> out;
    for (const auto& e : mappings) {
        LocalCodec fromCodec(fromLat.size(), e.arity());
        LocalCodec toCodec(toLat.size(), e.arity());
        LocalMapping r;
        r.sites = e.sites;
        r.rate = e.rate;
        r.table.resize(toCodec.tableSize());
        for (ConfigIndex i = 0; i < fromCodec.tableSize(); ++i) {
            LocalConfig in = fromCodec.decode(i);
            LocalConfig outCfg = fromCodec.decode(e.table[i]);
            LocalConfig inR(in.size()), outR(in.size());
            for (std::size_t p = 0; p < in.size(); ++p) {
                inR[p] = sigma[in[p]];
                outR[p] = sigma[outCfg[p]];
            }
            r.table[toCodec.encode(inR)] = toCodec.encode(outR);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

std::optional<std::vector<TypeId>> isSelfDual(const GrowthModel& m, int maxFullSearch) {
    DualModel dm = dualModel(m);
    const int n = m.lattice.size();
    if (dm.model.lattice.size() != n) return std::nullopt;

    std::optional<std::vector<TypeId>> result;
    auto tryCandidate = [&](const std::vector<TypeId>& sigma) {
        auto relabeled = relabelMappings(dm.model.lattice, m.lattice, dm.model.events.mappings, sigma);
        if (sameStructure(m.lattice, relabeled, m.events.mappings)) {
            result = sigma;
            return true;
        }
        return false;
    };

    if (n <= maxFullSearch) {
        forEachIsomorphism(dm.model.lattice, m.lattice, tryCandidate);
        return result;
    }
    // Large alphabet: only the unique rank relabeling of totally ordered
    // lattices is attempted.
    auto totallyOrdered = [](const TypeLattice& lat) {
        for (int a = 0; a < lat.size(); ++a)
            for (int b = 0; b < lat.size(); ++b)
                if (lat.incomparable(static_cast<TypeId>(a), static_cast<TypeId>(b))) return false;
        return true;
    };
    if (!totallyOrdered(m.lattice) || !totallyOrdered(dm.model.lattice)) return std::nullopt;
    std::vector<TypeId> byRankFrom(n), byRankTo(n);
    std::vector<TypeId> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = static_cast<TypeId>(i);
    auto rankOf = [&](const TypeLattice& lat) {
        std::vector<TypeId> order = ids;
        std::sort(order.begin(), order.end(),
                  [&](TypeId a, TypeId b) { return lat.lt(a, b); });
        return order;
    };
    byRankFrom = rankOf(dm.model.lattice);
    byRankTo = rankOf(m.lattice);
    std::vector<TypeId> sigma(n);
    for (int i = 0; i < n; ++i) sigma[byRankFrom[i]] = byRankTo[i];
    if (isLatticeIso(dm.model.lattice, m.lattice, sigma) && tryCandidate(sigma)) return result;
    return std::nullopt;
}

bool doubleDualCheck(const GrowthModel& m) {
    if (!m.lattice.isMultiColour())
        throw NotMultiColour("double dual identification requires a multi-colour alphabet");
    DualModel d1 = dualModel(m);
    DualModel d2 = dualModel(d1.model);
    const int n = m.lattice.size();

    // lambda_b: dual elements containing E_a for some colour a of b.
    std::vector<TypeId> lambdaIdx(n, 0);
    for (int b = 1; b < n; ++b) {
        TypeSet cb = m.lattice.colourOf(static_cast<TypeId>(b));
        TypeSet lam = 0;
        for (std::size_t ei = 1; ei < d1.dual.members.size(); ++ei) {
            bool contains = false;
            for (TypeId a : setElements(cb)) {
                TypeSet ea = dualElementOf(m.lattice, a);
                if ((ea & ~d1.dual.members[ei]) == 0) {
                    contains = true;
                    break;
                }
            }
            if (contains) lam = setAdd(lam, static_cast<TypeId>(ei));
        }
        auto it = d2.dual.indexOf.find(lam);
        if (it == d2.dual.indexOf.end()) return false;
        lambdaIdx[b] = it->second;
    }

    for (std::size_t mi = 0; mi < m.events.mappings.size(); ++mi) {
        const LocalMapping& e = m.events.mappings[mi];
        const LocalMapping& ebar = d2.model.events.mappings[mi];
        const int k = e.arity();
        LocalCodec baseCodec(n, k);
        LocalCodec dualCodec(d1.model.lattice.size(), k);
        LocalCodec ddCodec(d2.model.lattice.size(), k);

        for (ConfigIndex pi = 0; pi < baseCodec.tableSize(); ++pi) {
            LocalConfig phi = baseCodec.decode(pi);
            LocalConfig xi(k);
            for (int x = 0; x < k; ++x) xi[x] = lambdaIdx[phi[x]];

            // Compatibility symmetry phi ~ theta <=> theta ~ Xi_phi.
            for (ConfigIndex ti = 0; ti < dualCodec.tableSize(); ++ti) {
                LocalConfig theta = dualCodec.decode(ti);
                if (compatible(d1.dual, phi, theta) != compatible(d2.dual, theta, xi))
                    return false;
            }

            // Double-dual mappings commute with the identification.
            LocalConfig ephi = baseCodec.decode(e.table[pi]);
            LocalConfig xiE(k);
            for (int x = 0; x < k; ++x) xiE[x] = lambdaIdx[ephi[x]];
            LocalConfig got = ddCodec.decode(ebar.table[ddCodec.encode(xi)]);
            if (got != xiE) return false;
        }
    }
    return true;
}

}  // namespace growth
