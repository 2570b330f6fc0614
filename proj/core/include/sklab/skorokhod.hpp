#pragma once

#include <cstddef>

#include "sklab/cadlag.hpp"

namespace sklab {

// Certified enclosure of a computed distance.  closed means
// upper - lower <= the requested tolerance.
struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
  bool closed = false;
};

struct M1Result {
  double value = 0.0;
  Bracket bracket;
};

// Distance from x2 to the closed segment between x1 and x3; if x2 lies
// outside, the nearer of the two endpoint gaps.
double m1_point_oscillation(double x1, double x2, double x3);

// sup over t1 <= t <= t2 with t2 - t1 <= delta of
// m1_point_oscillation(x(t1), x(t), x(t2)).  Exact for step paths: only
// value triples drawn from distinct constant pieces matter, and a piece
// triple (i, j, l) is realizable inside a delta-window iff the gap between
// the end of piece i and the start of piece l is < delta (the infimum of
// t2 - t1 over the open piece i is not attained).
double omega_delta(const CadlagPath& x, double delta);

// Exact strong-M1 distance between nondecreasing scalar step paths: both
// completed graphs are monotone staircases, for which the parametric
// infimum collapses to the Hausdorff distance between the graphs under
// max(time gap, value gap).  Computed by bisecting an interval-coverage
// test, so the result carries ~1e-13 absolute error.
double m1_distance_monotone(const CadlagPath& x, const CadlagPath& y);

// Strong-M1 distance between cadlag step paths (dim 1 or 2; for dim 2 the
// spatial gap is the max over coordinates).  Returns the midpoint of a
// certified bracket: the upper end starts from a dynamic program over
// synchronized discretized traversals of the two completed graphs, the
// bracket is then tightened by bisecting an exact monotone-reachability
// decision on the cell decomposition of the parameter square.
M1Result m1_distance(const CadlagPath& x, const CadlagPath& y, std::size_t resolution = 256,
                     double tolerance = 1e-9);

// Product (weak-M1) distance between 2-dimensional paths: max over
// coordinates of the scalar strong-M1 distance; the bracket inherits the
// coordinatewise worst ends.
M1Result wm1_distance(const CadlagPath& x, const CadlagPath& y, std::size_t resolution = 256,
                      double tolerance = 1e-9);

// sup over t of the max-norm gap between the two paths.
double uniform_distance(const CadlagPath& x, const CadlagPath& y);

}  // namespace sklab
