#pragma once

// Shared lattice and mapping fixtures for the unit suites.

#include <vector>

#include "growth/eventmodel.hpp"
#include "growth/lattice.hpp"
#include "growth/mapping.hpp"

namespace fixtures {

using namespace growth;

// 0 < 1 < ... < n-1.
inline TypeLattice chain(int n) {
    std::vector<std::pair<int, int>> covers;
    for (int i = 0; i + 1 < n; ++i) covers.push_back({i, i + 1});
    return TypeLattice::fromCovers(n, covers);
}

// 0 < 1,2,3 < 4 with 1,2,3 mutually incomparable.
inline TypeLattice diamond() {
    return TypeLattice::fromCovers(5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}});
}

// Diamond with the extra relation 1 < 2.
inline TypeLattice diamondOrdered() {
    return TypeLattice::fromCovers(5, {{0, 1}, {0, 3}, {1, 2}, {1, 4}, {2, 4}, {3, 4}});
}

// 0 < m,f < m v f with m <> f.  Indices: m=1, f=2, mf=3.
inline TypeLattice bipartite() {
    return TypeLattice::fromCovers(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
}

// Single-site mapping from explicit images over a chain lattice.
inline LocalMapping siteMapping(const TypeLattice& lat, std::vector<TypeId> images, double rate,
                                std::vector<int> offset = {0}) {
    auto table = tabulate(lat, 1, [&](const LocalConfig& in) {
        return LocalConfig{images[in[0]]};
    });
    return makeMapping(lat, SiteTemplate::fromOffsets({offset}), std::move(table), rate);
}

}  // namespace fixtures
