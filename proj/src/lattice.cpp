#include "growth/lattice.hpp"

#include <algorithm>
#include <map>

namespace growth {

std::string Report::summary() const {
    if (issues.empty()) return "ok";
    std::string s;
    for (const auto& v : issues) {
        if (!s.empty()) s += "; ";
        s += v.code + " (" + v.detail;
        if (!v.witness.empty()) {
            s += "; witness:";
            for (int w : v.witness) s += " " + std::to_string(w);
        }
        s += ")";
    }
    return s;
}

namespace {

Violation poset(std::string detail, std::vector<int> witness) {
    return {"PosetViolation", std::move(detail), std::move(witness)};
}
Violation joinBad(std::string detail, std::vector<int> witness) {
    return {"JoinViolation", std::move(detail), std::move(witness)};
}

}  // namespace

Report validateLattice(int n, const std::vector<std::uint8_t>& leq,
                       const std::vector<TypeId>& join) {
    Report r;
    auto fail = [&](Violation v) {
        r.issues.push_back(std::move(v));
        return r;
    };
    if (n < 2 || n > kMaxTypes)
        return fail({"SizeViolation",
                     "type count must be in [2," + std::to_string(kMaxTypes) + "], got " +
                         std::to_string(n),
                     {n}});
    if (leq.size() != static_cast<std::size_t>(n) * n ||
        join.size() != static_cast<std::size_t>(n) * n)
        return fail({"SizeViolation", "order/join tables must be total on FxF", {}});
    auto le = [&](int a, int b) { return leq[a * n + b] != 0; };
    auto jn = [&](int a, int b) { return static_cast<int>(join[a * n + b]); };

    for (int a = 0; a < n; ++a)
        if (!le(a, a)) return fail(poset("order not reflexive", {a}));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && le(a, b) && le(b, a))
                return fail(poset("order not antisymmetric", {a, b}));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (!le(a, b)) continue;
            for (int c = 0; c < n; ++c)
                if (le(b, c) && !le(a, c))
                    return fail(poset("order not transitive", {a, b, c}));
        }
    for (int a = 0; a < n; ++a)
        if (!le(0, a)) return fail(poset("passive type must lie below every type", {0, a}));

    for (int a = 0; a < n; ++a) {
        if (jn(a, a) != a) return fail(joinBad("join not idempotent", {a}));
        for (int b = 0; b < n; ++b) {
            int j = jn(a, b);
            if (j < 0 || j >= n) return fail(joinBad("join table entry out of range", {a, b}));
            if (jn(b, a) != j) return fail(joinBad("join not commutative", {a, b}));
            if (!le(a, j) || !le(b, j))
                return fail(joinBad("join must dominate both arguments", {a, b}));
            for (int c = 0; c < n; ++c)
                if (le(a, c) && le(b, c) && !le(j, c))
                    return fail(joinBad("join is not the least upper bound", {a, b, c}));
        }
    }
    return r;
}

TypeLattice TypeLattice::fromTables(int n, std::vector<std::uint8_t> leq,
                                    std::vector<TypeId> join) {
    Report r = validateLattice(n, leq, join);
    if (!r.ok()) throw ModelError("invalid lattice: " + r.summary());
    TypeLattice lat;
    lat.n_ = n;
    lat.leq_ = std::move(leq);
    lat.join_ = std::move(join);
    return lat;
}

TypeLattice TypeLattice::fromCovers(int n, const std::vector<std::pair<int, int>>& covers) {
    if (n < 2 || n > kMaxTypes)
        throw ModelError("type count must be in [2," + std::to_string(kMaxTypes) + "]");
    std::vector<std::uint8_t> leq(n * n, 0);
    for (int a = 0; a < n; ++a) leq[a * n + a] = 1;
    for (auto [a, b] : covers) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw ModelError("cover relation references unknown type");
        leq[a * n + b] = 1;
    }
    // Warshall closure.
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
            if (leq[a * n + k])
                for (int b = 0; b < n; ++b)
                    if (leq[k * n + b]) leq[a * n + b] = 1;

    std::vector<TypeId> join(n * n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int best = -1;
            for (int c = 0; c < n; ++c) {
                if (!leq[a * n + c] || !leq[b * n + c]) continue;
                // c is an upper bound; keep the lowest seen so far.
                if (best == -1 || leq[c * n + best]) best = c;
            }
            if (best == -1)
                throw ModelError("types " + std::to_string(a) + "," + std::to_string(b) +
                                 " have no upper bound; not a join lattice");
            // best must lie below every upper bound, otherwise joins are not unique.
            for (int c = 0; c < n; ++c)
                if (leq[a * n + c] && leq[b * n + c] && !leq[best * n + c])
                    throw ModelError("types " + std::to_string(a) + "," + std::to_string(b) +
                                     " have no least upper bound; join would not be unique");
            join[a * n + b] = static_cast<TypeId>(best);
        }
    return fromTables(n, std::move(leq), std::move(join));
}

TypeId TypeLattice::joinSet(TypeSet s) const {
    TypeId acc = 0;
    for (TypeId a : setElements(s)) acc = join(acc, a);
    return acc;
}

TypeId TypeLattice::top() const {
    TypeId acc = 0;
    for (int a = 0; a < n_; ++a) acc = join(acc, static_cast<TypeId>(a));
    return acc;
}

TypeSet TypeLattice::primitives() const {
    if (primitivesCached_) return primitivesCache_;
    TypeSet prim = 0;
    for (int a = 1; a < n_; ++a) {
        bool compound = false;
        for (int b = 1; b < n_ && !compound; ++b)
            for (int c = 1; c < n_ && !compound; ++c)
                if (b != a && c != a && join(static_cast<TypeId>(b), static_cast<TypeId>(c)) == a)
                    compound = true;
        if (!compound) prim = setAdd(prim, static_cast<TypeId>(a));
    }
    primitivesCache_ = prim;
    primitivesCached_ = true;
    return prim;
}

bool TypeLattice::isAntichain(TypeSet s) const {
    auto elems = setElements(s);
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = i + 1; j < elems.size(); ++j)
            if (!incomparable(elems[i], elems[j])) return false;
    return true;
}

std::vector<TypeSet> TypeLattice::decompositions(TypeId b) const {
    std::vector<TypeSet> out;
    if (b == 0) return out;
    // Only primitives below b can participate.
    TypeSet candidates = 0;
    for (TypeId p : setElements(primitives()))
        if (leq(p, b)) candidates = setAdd(candidates, p);
    auto elems = setElements(candidates);
    const std::size_t k = elems.size();
    for (TypeSet mask = 1; mask < (TypeSet{1} << k); ++mask) {
        TypeSet combo = 0;
        for (std::size_t i = 0; i < k; ++i)
            if ((mask >> i) & 1u) combo = setAdd(combo, elems[i]);
        if (!isAntichain(combo)) continue;
        if (joinSet(combo) == b) out.push_back(combo);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool TypeLattice::isMultiColour() const {
    for (int b = 1; b < n_; ++b)
        if (decompositions(static_cast<TypeId>(b)).size() != 1) return false;
    return true;
}

TypeSet TypeLattice::colourOf(TypeId b) const {
    if (b == 0) return 0;
    auto d = decompositions(b);
    if (d.size() != 1)
        throw NotMultiColour("type " + std::to_string(b) + " has " + std::to_string(d.size()) +
                             " decompositions");
    return d[0];
}

TypeSet colourJoin(const TypeLattice& lat, TypeSet c1, TypeSet c2) {
    TypeSet u = c1 | c2;
    TypeSet out = 0;
    for (TypeId a : setElements(u)) {
        bool dominated = false;
        for (TypeId b : setElements(u))
            if (lat.lt(a, b)) {
                dominated = true;
                break;
            }
        if (!dominated) out = setAdd(out, a);
    }
    return out;
}

TypeSet colourMinUnion(const TypeLattice& lat, TypeSet c1, TypeSet c2) {
    TypeSet u = c1 | c2;
    TypeSet out = 0;
    for (TypeId a : setElements(u)) {
        bool dominates = false;
        for (TypeId b : setElements(u))
            if (lat.lt(b, a)) {
                dominates = true;
                break;
            }
        if (!dominates) out = setAdd(out, a);
    }
    return out;
}

std::optional<TypeSet> squareJoin(const TypeLattice& lat, TypeSet c1, TypeSet c2) {
    if ((c1 & c2) == 0) return std::nullopt;
    return colourMinUnion(lat, c1, c2);
}

bool colourSucceeds(const TypeLattice& lat, TypeSet c1, TypeSet c2) {
    for (TypeId a : setElements(c1))
        for (TypeId b : setElements(c2))
            if (lat.leq(b, a)) return true;
    return false;
}

std::vector<TypeSet> layerPartition(const TypeLattice& lat, TypeSet e) {
    std::vector<TypeSet> layers;
    TypeSet rest = e;
    while (rest) {
        TypeSet layer = 0;
        for (TypeId a : setElements(rest)) {
            bool dominates = false;
            for (TypeId b : setElements(rest))
                if (lat.lt(b, a)) {
                    dominates = true;
                    break;
                }
            if (!dominates) layer = setAdd(layer, a);
        }
        layers.push_back(layer);
        rest &= ~layer;
    }
    return layers;
}

std::string typeSetToString(TypeSet s) {
    std::string out = "{";
    bool first = true;
    for (TypeId a : setElements(s)) {
        if (!first) out += ",";
        out += std::to_string(static_cast<int>(a));
        first = false;
    }
    return out + "}";
}

}  // namespace growth
