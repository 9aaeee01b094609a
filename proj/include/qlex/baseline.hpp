#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qlex/lexsort.hpp"
#include "qlex/matrix.hpp"

namespace qlex {

// Stable merge sort of the indices 0..m-1 by their key values. Equal keys
// keep their original relative order.
std::vector<std::int32_t> stable_sort_permutation(std::span<const std::int32_t> keys);

// Classic iterated-stable-sort lexicographic ranking: one stable pass per
// column, least-important first. Reference implementation for the refine
// engine; O(|seq| * m log m).
RankingVector stable_lex_sort(const DataMatrix& matrix, std::span<const std::int32_t> seq);

// Independent oracle: re-compares decoded row tuples with its own
// comparators and shares nothing with the refine path. Intentionally naive.
// An empty sequence yields the all-zero ranking.
RankingVector brute_force_ranking(const DataMatrix& matrix, std::span<const std::int32_t> seq);

}  // namespace qlex
