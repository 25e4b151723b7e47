#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "sphlas/scalars.hpp"

// Reference orbit counter, independent of the production enumerator: lists
// every assignment of values to the edges of K_k, canonicalizes by direct
// minimization over the full (signed) permutation group, and filters with a
// principal-minor PSD test and cofactor-expansion determinants.
namespace brute {

using sphlas::Int;
using sphlas::Rat;

inline Rat det_cofactor(const std::vector<std::vector<Rat>>& m) {
    const size_t k = m.size();
    if (k == 0) return Rat(1);
    if (k == 1) return m[0][0];
    Rat acc = 0;
    for (size_t c = 0; c < k; ++c) {
        std::vector<std::vector<Rat>> minor(k - 1, std::vector<Rat>(k - 1));
        for (size_t i = 1; i < k; ++i) {
            size_t jj = 0;
            for (size_t j = 0; j < k; ++j) {
                if (j == c) continue;
                minor[i - 1][jj++] = m[i][j];
            }
        }
        Rat term = m[0][c] * det_cofactor(minor);
        if (c % 2) term = -term;
        acc += term;
    }
    return acc;
}

inline std::vector<std::vector<Rat>> principal(const std::vector<std::vector<Rat>>& m,
                                               const std::vector<size_t>& idx) {
    std::vector<std::vector<Rat>> s(idx.size(), std::vector<Rat>(idx.size()));
    for (size_t a = 0; a < idx.size(); ++a)
        for (size_t b = 0; b < idx.size(); ++b) s[a][b] = m[idx[a]][idx[b]];
    return s;
}

inline bool is_psd_minors(const std::vector<std::vector<Rat>>& m, size_t* rank_out = nullptr) {
    const size_t k = m.size();
    size_t rank = 0;
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        std::vector<size_t> idx;
        for (size_t i = 0; i < k; ++i)
            if ((mask >> i) & 1u) idx.push_back(i);
        Rat d = det_cofactor(principal(m, idx));
        if (d < 0) return false;
        if (d > 0) rank = std::max(rank, idx.size());
    }
    if (rank_out) *rank_out = rank;
    return true;
}

// canonical position i holds sign_i * original point perm_i
inline std::vector<Rat> min_key(const std::vector<std::vector<Rat>>& m, bool projective) {
    const size_t k = m.size();
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<std::vector<Rat>> best;
    do {
        const unsigned smax = projective ? (1u << k) : 1u;  // includes the global flip
        for (unsigned mask = 0; mask < smax; ++mask) {
            std::vector<Rat> key;
            for (size_t i = 0; i < k; ++i)
                for (size_t j = i + 1; j < k; ++j) {
                    Rat v = m[size_t(perm[i])][size_t(perm[j])];
                    if (((mask >> i) & 1u) != ((mask >> j) & 1u)) v = -v;
                    key.push_back(v);
                }
            if (!best || key < *best) best = std::move(key);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *best;
}

// orbit counts by exact size, sizes 0..max_size
inline std::vector<size_t> orbit_counts(const std::vector<Rat>& values, bool projective,
                                        unsigned max_size, std::optional<long> n = std::nullopt) {
    std::vector<size_t> counts(size_t(max_size) + 1, 0);
    counts[0] = 1;
    for (unsigned k = 1; k <= max_size; ++k) {
        const size_t ne = size_t(k) * (k - 1) / 2;
        std::map<std::vector<Rat>, int> classes;
        std::vector<size_t> edge(ne, 0);
        for (;;) {
            std::vector<std::vector<Rat>> m(k, std::vector<Rat>(k, Rat(1)));
            size_t pos = 0;
            for (size_t i = 0; i < k; ++i)
                for (size_t j = i + 1; j < k; ++j, ++pos) {
                    m[i][j] = values[edge[pos]];
                    m[j][i] = values[edge[pos]];
                }
            size_t rank = 0;
            if (is_psd_minors(m, &rank) && (!n || long(rank) <= *n))
                classes.emplace(min_key(m, projective), 1);
            size_t digit = 0;
            while (digit < ne && ++edge[digit] == values.size()) edge[digit++] = 0;
            if (digit == ne || ne == 0) break;
        }
        counts[k] = classes.size();
    }
    return counts;
}

}  // namespace brute
