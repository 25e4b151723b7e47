#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "sphlas/scalars.hpp"

// Number of edge colorings of the complete graph K_k with c colors, up to
// vertex permutations, by Burnside's lemma: average of c^(edge cycles).
inline sphlas::Int edge_coloring_count(int k, int colors) {
    using sphlas::Int;
    std::vector<int> perm(static_cast<size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    Int total = 0;
    Int order = 0;
    do {
        ++order;
        std::vector<std::vector<int>> seen(size_t(k), std::vector<int>(size_t(k), 0));
        long cycles = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) {
                if (seen[size_t(i)][size_t(j)]) continue;
                int a = i, b = j;
                do {
                    seen[size_t(std::min(a, b))][size_t(std::max(a, b))] = 1;
                    int na = perm[size_t(a)], nb = perm[size_t(b)];
                    a = na;
                    b = nb;
                } while (!(std::min(a, b) == i && std::max(a, b) == j));
                ++cycles;
            }
        Int weight = 1;
        for (long c = 0; c < cycles; ++c) weight *= colors;
        total += weight;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (total % order != 0) throw std::logic_error("edge_coloring_count: Burnside sum not divisible");
    return total / order;
}
