#pragma once

#include <cstdint>
#include <vector>

#include "gphs/dataset.hpp"
#include "gphs/errors.hpp"
#include "gphs/hypothesis.hpp"
#include "gphs/spectral.hpp"

namespace gphs {

/// Finite class of halfspaces with normals on the unit sphere of a subspace
/// crossed with a threshold grid, plus the two constant classifiers (last).
struct Cover {
  std::vector<Halfspace> items;
  double eps_cover = 0.0;
  double t_max = 0.0;     // threshold grid spans [-t_max, t_max]
  int normal_count = 0;   // sphere net size
  int grid_count = 0;     // thresholds per normal
};

struct CoverBudgetError : ResourceError {
  using ResourceError::ResourceError;
};

/// Deterministic eps_cover-cover of halfspaces over span(v): greedy
/// farthest-point net at resolution eps_cover/2 on the sphere, selected from a
/// seeded Halton candidate set of size 10*(3/eps_cover)^r, crossed with a
/// uniform threshold grid of step eps_cover/2 on [-t_max, t_max], where t_max
/// puts eps_cover/4 Gaussian mass beyond each end. r = 0 yields constants only.
/// Throws CoverBudgetError when the result would exceed max_cover items.
Cover build_cover(const Subspace& v, double eps_cover, long long max_cover, std::uint64_t seed);

struct ErmResult {
  int index = -1;      // position in the cover, first-best on ties
  double error = 1.0;  // empirical misclassification rate
};

/// Best single cover element on the sample.
ErmResult erm_halfspace(const Cover& cover, const LabeledDataset& data, int threads = 1);

struct CellErm {
  double error = 0.0;               // (1/n) sum_cells min(pos, neg)
  std::vector<std::int8_t> table;   // majority per cell, empty or tied -> +1
};

/// Optimal relabeling of the cells cut out by the given halfspaces.
CellErm cell_boolean_erm(const std::vector<Halfspace>& parts, const LabeledDataset& data);

struct SearchResult {
  BooleanHypothesis hypothesis;
  std::vector<int> indices;        // tuple of cover positions
  double error = 1.0;
  long long tuples_examined = 0;
};

struct TupleBudgetError : ResourceError {
  SearchResult best;
  TupleBudgetError(const std::string& what, SearchResult r)
      : ResourceError(what), best(std::move(r)) {}
};

/// Minimizes cell-ERM error over all |cover|^K tuples, lexicographic tuple
/// order, first-best tie-break. Stops with TupleBudgetError (carrying the best
/// incumbent) once max_tuples tuples have been examined.
SearchResult search_boolean(const Cover& cover, int k, const LabeledDataset& data,
                            long long max_tuples, int threads = 1);

/// Same enumeration with the truth table pinned to the conjunction (+1 only on
/// the all-positive cell).
SearchResult search_intersection(const Cover& cover, int k, const LabeledDataset& data,
                                 long long max_tuples, int threads = 1);

}  // namespace gphs
