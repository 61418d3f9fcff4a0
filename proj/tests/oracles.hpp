#pragma once

// Brute-force reference implementations. Deliberately naive and independent
// of the library algorithms: everything here enumerates.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "removal/graph.hpp"
#include "removal/matrix.hpp"

namespace oracle {

using removal::DenseMatrix;
using removal::Pattern;
using removal::SubmatrixIndex;

/// Every k-subset of {1..n}, ascending, in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k);

std::vector<SubmatrixIndex> copies(const DenseMatrix& m, const Pattern& a);
std::uint64_t count(const DenseMatrix& m, const Pattern& a);

/// Number of s x t submatrices per row-major entry string.
std::map<std::string, std::uint64_t> histogram(const DenseMatrix& m, std::size_t s,
                                               std::size_t t);
std::string code_of(const Pattern& a);

/// Maximum number of pairwise entry-disjoint copies, exhaustive.
std::size_t max_packing(const std::vector<SubmatrixIndex>& copies);
/// Minimum number of cells meeting every copy, exhaustive over cell subsets.
std::size_t min_hitting(const DenseMatrix& m, const std::vector<SubmatrixIndex>& copies);
/// Fewest rewrites making m free of every member; tries all edit sets of
/// growing size. Only for tiny matrices.
std::size_t edit_distance(const DenseMatrix& m, const std::vector<Pattern>& family);

/// Pairs (S, sigma) with sigma(S) = A, by applying every permutation pair.
std::uint64_t reordered_count(const DenseMatrix& m, const Pattern& a);
/// Tuples with one vertex per part that are pairwise adjacent.
std::uint64_t clique_count(const removal::PartiteGraph& g);

/// Direct x1 + x2 + x3 = 3 x4 search over all quadruples.
bool solution_free(const std::vector<std::size_t>& xs);

}  // namespace oracle
