#pragma once

// Brute-force semistandard tableau enumeration: generate every filling of the
// diagram with entries in 1..t and keep the semistandard ones. Exponential,
// for oracle use on small shapes only.

#include "sphlas/tableau.hpp"

namespace sphlas::testsupport {

inline std::vector<Tableau> brute_ssyt(const Partition& lambda, unsigned t) {
  Partition mu = conjugate(lambda);
  size_t cells = partition_weight(lambda);
  std::vector<Tableau> found;
  std::vector<int> flat(cells, 1);
  while (true) {
    std::vector<std::vector<int>> cols;
    size_t pos = 0;
    for (unsigned len : mu) {
      cols.emplace_back(flat.begin() + pos, flat.begin() + pos + len);
      pos += len;
    }
    Tableau tab(std::move(cols));
    if (tab.is_semistandard()) found.push_back(tab);
    size_t i = 0;
    while (i < cells && flat[i] == static_cast<int>(t)) {
      flat[i] = 1;
      ++i;
    }
    if (i == cells) break;
    ++flat[i];
  }
  return found;
}

}  // namespace sphlas::testsupport
