#include "sklab/skorokhod.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sklab {

double m1_point_oscillation(double x1, double x2, double x3) {
  const double lo = std::min(x1, x3), hi = std::max(x1, x3);
  if (x2 >= lo && x2 <= hi) return 0.0;
  return std::min(std::fabs(x2 - x1), std::fabs(x3 - x2));
}

double omega_delta(const CadlagPath& x, double delta) {
  if (!(delta > 0.0) || !(delta <= 1.0))
    throw std::domain_error("oscillation window must lie in (0, 1]");
  if (x.dim() != 1) throw std::domain_error("omega_delta needs a scalar path");
  const auto& times = x.jump_times();
  const std::size_t K = times.size();
  if (K < 2) return 0.0;
  std::vector<double> v(K + 1);
  v[0] = x.initial_value()[0];
  for (std::size_t p = 1; p <= K; ++p) v[p] = x.post_jump_values()[p - 1];

  // Only triples of values taken from three distinct constant pieces can
  // produce a nonzero oscillation.  A window [t1, t2] with t1 in piece i and
  // t2 in piece l exists with t2 - t1 <= delta iff the gap from the end of
  // piece i (= times[i]) to the start of piece l (= times[l-1]) is < delta:
  // t1 ranges over a half-open piece, so the infimum gap is never attained.
  double best = 0.0;
  for (std::size_t i = 0; i + 2 <= K; ++i) {
    double mmin = v[i + 1], mmax = v[i + 1];
    for (std::size_t l = i + 2; l <= K; ++l) {
      if (!(times[l - 1] - times[i] < delta)) break;
      if (l > i + 2) {
        mmin = std::min(mmin, v[l - 1]);
        mmax = std::max(mmax, v[l - 1]);
      }
      const double lo = std::min(v[i], v[l]), hi = std::max(v[i], v[l]);
      best = std::max({best, mmax - hi, lo - mmin});
    }
  }
  return best;
}

namespace {

struct Interval {
  double lo = 1.0;
  double hi = 0.0;
  bool empty() const { return lo > hi; }
};

// ---- monotone staircases: Hausdorff distance between completed graphs ----

struct HSeg {
  double y, t0, t1;
};  // height y over the time interval [t0, t1]
struct VSeg {
  double t, y0, y1;
};  // at time t, spanning heights [y0, y1] (y0 <= y1)

struct Staircase {
  std::vector<HSeg> hs;
  std::vector<VSeg> vs;
};

Staircase staircase(const CadlagPath& x) {
  Staircase g;
  double t_prev = 0.0, y_prev = x.initial_value()[0];
  for (std::size_t k = 0; k < x.jump_count(); ++k) {
    const double t = x.jump_times()[k];
    const double y = x.post_jump_values()[k];
    g.hs.push_back({y_prev, t_prev, t});
    if (y != y_prev) g.vs.push_back({t, std::min(y_prev, y), std::max(y_prev, y)});
    t_prev = t;
    y_prev = y;
  }
  if (t_prev < 1.0) g.hs.push_back({y_prev, t_prev, 1.0});
  return g;
}

double dist_to_interval(double z, double lo, double hi) {
  return std::max({lo - z, z - hi, 0.0});
}

// checks that the closed target [lo, hi] is covered by the closed intervals
bool covers(std::vector<Interval>& ivs, double lo, double hi) {
  std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double cur = lo;
  for (const auto& iv : ivs) {
    if (iv.lo > cur) break;
    cur = std::max(cur, iv.hi);
    if (cur >= hi) return true;
  }
  return cur >= hi;
}

bool horizontal_covered(const HSeg& a, const Staircase& b, double r) {
  std::vector<Interval> ivs;
  for (const auto& h : b.hs)
    if (std::fabs(a.y - h.y) <= r) ivs.push_back({h.t0 - r, h.t1 + r});
  for (const auto& v : b.vs)
    if (dist_to_interval(a.y, v.y0, v.y1) <= r) ivs.push_back({v.t - r, v.t + r});
  return covers(ivs, a.t0, a.t1);
}

bool vertical_covered(const VSeg& a, const Staircase& b, double r) {
  std::vector<Interval> ivs;
  for (const auto& h : b.hs)
    if (dist_to_interval(a.t, h.t0, h.t1) <= r) ivs.push_back({h.y - r, h.y + r});
  for (const auto& v : b.vs)
    if (std::fabs(a.t - v.t) <= r) ivs.push_back({v.y0 - r, v.y1 + r});
  return covers(ivs, a.y0, a.y1);
}

bool staircase_within(const Staircase& a, const Staircase& b, double r) {
  for (const auto& h : a.hs)
    if (!horizontal_covered(h, b, r)) return false;
  for (const auto& v : a.vs)
    if (!vertical_covered(v, b, r)) return false;
  return true;
}

bool hausdorff_le(const Staircase& a, const Staircase& b, double r) {
  return staircase_within(a, b, r) && staircase_within(b, a, r);
}

bool nondecreasing_scalar(const CadlagPath& x) {
  if (x.dim() != 1) return false;
  double prev = x.initial_value()[0];
  for (std::size_t k = 0; k < x.jump_count(); ++k) {
    const double y = x.post_jump_values()[k];
    if (y < prev) return false;
    prev = y;
  }
  return true;
}

// ---- general case: completed graphs as polylines in [0,1] x R^d ----

using Point = std::array<double, 3>;

struct Polyline {
  std::vector<Point> pts;
  std::size_t dims = 2;  // 1 time component + d space components
};

double linf(const Point& a, const Point& b, std::size_t dims) {
  double m = 0.0;
  for (std::size_t c = 0; c < dims; ++c) m = std::max(m, std::fabs(a[c] - b[c]));
  return m;
}

Polyline completed_graph(const CadlagPath& x) {
  Polyline g;
  g.dims = 1 + x.dim();
  const std::size_t d = x.dim();
  auto push = [&](const Point& p) {
    if (g.pts.empty() || linf(g.pts.back(), p, g.dims) > 0.0) g.pts.push_back(p);
  };
  Point cur{0.0, 0.0, 0.0};
  for (std::size_t c = 0; c < d; ++c) cur[1 + c] = x.initial_value()[c];
  push(cur);
  for (std::size_t k = 0; k < x.jump_count(); ++k) {
    const double t = x.jump_times()[k];
    Point before = cur;
    before[0] = t;
    push(before);
    Point after = before;
    for (std::size_t c = 0; c < d; ++c) after[1 + c] = x.post_jump_values()[k * d + c];
    push(after);
    cur = after;
  }
  Point end = cur;
  end[0] = 1.0;
  push(end);
  if (g.pts.size() < 2) g.pts.push_back(g.pts.front());  // cannot happen: time spans [0,1]
  return g;
}

// free parameter range on a cell edge: the moving point runs along segment
// s0 -> s1 while the other curve sits at the fixed vertex
Interval edge_free(const Point& fixed, const Point& s0, const Point& s1, std::size_t dims,
                   double r) {
  double lo = 0.0, hi = 1.0;
  for (std::size_t c = 0; c < dims; ++c) {
    const double u = fixed[c] - s0[c];
    const double w = s1[c] - s0[c];
    if (w == 0.0) {
      if (std::fabs(u) > r) return {1.0, 0.0};
      continue;
    }
    double a = (u - r) / w, b = (u + r) / w;
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  return {lo, hi};
}

// monotone-reachability decision on the cell decomposition of the parameter
// square: every cell's free region is an intersection of half-planes with
// the unit cell, hence convex, so reachability propagates through edge
// intervals only
bool frechet_le(const Polyline& A, const Polyline& B, double r) {
  const std::size_t dims = A.dims;
  const std::size_t nA = A.pts.size() - 1, nB = B.pts.size() - 1;
  if (linf(A.pts.front(), B.pts.front(), dims) > r) return false;
  if (linf(A.pts.back(), B.pts.back(), dims) > r) return false;

  // left boundary: contiguous reachability upward from the origin
  std::vector<Interval> col(nB);
  bool left_open = true;
  for (std::size_t j = 0; j < nB; ++j) {
    Interval iv = edge_free(A.pts[0], B.pts[j], B.pts[j + 1], dims, r);
    if (left_open && !iv.empty() && iv.lo <= 0.0)
      col[j] = {0.0, std::min(iv.hi, 1.0)};
    else
      col[j] = {1.0, 0.0};
    left_open = left_open && !col[j].empty() && col[j].hi >= 1.0;
  }

  bool bottom_open = true;
  Interval top;
  for (std::size_t i = 0; i < nA; ++i) {
    // bottom boundary cell (i, 0)
    Interval bot;
    {
      Interval iv = edge_free(B.pts[0], A.pts[i], A.pts[i + 1], dims, r);
      if (bottom_open && !iv.empty() && iv.lo <= 0.0)
        bot = {0.0, std::min(iv.hi, 1.0)};
      else
        bot = {1.0, 0.0};
      bottom_open = bottom_open && !bot.empty() && bot.hi >= 1.0;
    }
    for (std::size_t j = 0; j < nB; ++j) {
      const Interval L = col[j];
      const Interval Bo = bot;
      Interval Rf = edge_free(A.pts[i + 1], B.pts[j], B.pts[j + 1], dims, r);
      Interval Tf = edge_free(B.pts[j + 1], A.pts[i], A.pts[i + 1], dims, r);
      Rf.lo = std::max(Rf.lo, 0.0);
      Rf.hi = std::min(Rf.hi, 1.0);
      Tf.lo = std::max(Tf.lo, 0.0);
      Tf.hi = std::min(Tf.hi, 1.0);
      Interval R{1.0, 0.0}, T{1.0, 0.0};
      if (!Bo.empty())
        R = Rf;  // entering from below, any free right point is reachable
      else if (!L.empty())
        R = {std::max(Rf.lo, L.lo), Rf.hi};
      if (!L.empty())
        T = Tf;
      else if (!Bo.empty())
        T = {std::max(Tf.lo, Bo.lo), Tf.hi};
      col[j] = R;
      bot = T;
    }
    top = bot;
  }
  const Interval last_right = col[nB - 1];
  return (!last_right.empty() && last_right.hi >= 1.0) || (!top.empty() && top.hi >= 1.0);
}

Polyline refine(const Polyline& p, double h) {
  Polyline out;
  out.dims = p.dims;
  for (std::size_t i = 0; i + 1 < p.pts.size(); ++i) {
    const Point& a = p.pts[i];
    const Point& b = p.pts[i + 1];
    const double len = linf(a, b, p.dims);
    const std::size_t pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / h)));
    for (std::size_t k = 0; k < pieces; ++k) {
      const double s = static_cast<double>(k) / static_cast<double>(pieces);
      Point q;
      for (std::size_t c = 0; c < 3; ++c) q[c] = a[c] + s * (b[c] - a[c]);
      out.pts.push_back(q);
    }
  }
  out.pts.push_back(p.pts.back());
  return out;
}

// best synchronized traversal of the discretized graphs (an upper bound on
// the continuous infimum since vertices of the originals are retained)
double discrete_frechet(const Polyline& A, const Polyline& B) {
  const std::size_t n = A.pts.size(), m = B.pts.size();
  std::vector<double> prev(m), cur(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double d = linf(A.pts[0], B.pts[j], A.dims);
    prev[j] = (j == 0) ? d : std::max(prev[j - 1], d);
  }
  for (std::size_t i = 1; i < n; ++i) {
    cur[0] = std::max(prev[0], linf(A.pts[i], B.pts[0], A.dims));
    for (std::size_t j = 1; j < m; ++j) {
      const double reach = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = std::max(reach, linf(A.pts[i], B.pts[j], A.dims));
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

double polyline_length(const Polyline& p) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < p.pts.size(); ++i) len += linf(p.pts[i], p.pts[i + 1], p.dims);
  return len;
}

bool span_less(std::span<const double> a, std::span<const double> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool span_eq(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool path_less(const CadlagPath& a, const CadlagPath& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  if (!span_eq(a.initial_value(), b.initial_value()))
    return span_less(a.initial_value(), b.initial_value());
  if (!span_eq(a.jump_times(), b.jump_times())) return span_less(a.jump_times(), b.jump_times());
  return span_less(a.post_jump_values(), b.post_jump_values());
}

}  // namespace

double m1_distance_monotone(const CadlagPath& x, const CadlagPath& y) {
  if (!nondecreasing_scalar(x) || !nondecreasing_scalar(y))
    throw std::domain_error("m1_distance_monotone needs nondecreasing scalar paths");
  const Staircase a = staircase(x);
  const Staircase b = staircase(y);
  if (hausdorff_le(a, b, 0.0)) return 0.0;
  double hi = uniform_distance(x, y);
  double lo = 0.0;
  // hausdorff(a, b) <= frechet <= uniform distance, so hi is a valid start
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hausdorff_le(a, b, mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

M1Result m1_distance(const CadlagPath& x, const CadlagPath& y, std::size_t resolution,
                     double tolerance) {
  if (x.dim() != y.dim()) throw std::domain_error("m1_distance needs matching dimensions");
  if (!(tolerance > 0.0)) throw std::domain_error("m1_distance tolerance must be positive");
  if (resolution < x.jump_count() || resolution < y.jump_count())
    throw std::domain_error("m1_distance resolution below the jump count");
  // order the arguments canonically so the reported value is exactly symmetric
  const CadlagPath& p = path_less(y, x) ? y : x;
  const CadlagPath& q = path_less(y, x) ? x : y;

  const Polyline A = completed_graph(p);
  const Polyline B = completed_graph(q);
  double lo = std::max(linf(A.pts.front(), B.pts.front(), A.dims),
                       linf(A.pts.back(), B.pts.back(), A.dims));
  const double res = static_cast<double>(resolution);
  const Polyline Ar = refine(A, std::max(polyline_length(A), 1.0) / res);
  const Polyline Br = refine(B, std::max(polyline_length(B), 1.0) / res);
  double hi = std::max(lo, discrete_frechet(Ar, Br));

  if (frechet_le(A, B, lo)) return {lo, {lo, lo, true}};
  for (int it = 0; it < 200 && hi - lo > tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (frechet_le(A, B, mid))
      hi = mid;
    else
      lo = mid;
  }
  return {0.5 * (lo + hi), {lo, hi, hi - lo <= tolerance}};
}

M1Result wm1_distance(const CadlagPath& x, const CadlagPath& y, std::size_t resolution,
                      double tolerance) {
  if (x.dim() != 2 || y.dim() != 2)
    throw std::domain_error("wm1_distance needs two-dimensional paths");
  const M1Result first = m1_distance(x.coordinate(0), y.coordinate(0), resolution, tolerance);
  const M1Result second = m1_distance(x.coordinate(1), y.coordinate(1), resolution, tolerance);
  M1Result out;
  out.value = std::max(first.value, second.value);
  out.bracket.lower = std::max(first.bracket.lower, second.bracket.lower);
  out.bracket.upper = std::max(first.bracket.upper, second.bracket.upper);
  out.bracket.closed = first.bracket.closed && second.bracket.closed;
  return out;
}

double uniform_distance(const CadlagPath& x, const CadlagPath& y) {
  if (x.dim() != y.dim()) throw std::domain_error("uniform_distance needs matching dimensions");
  std::vector<double> grid;
  grid.push_back(0.0);
  grid.insert(grid.end(), x.jump_times().begin(), x.jump_times().end());
  grid.insert(grid.end(), y.jump_times().begin(), y.jump_times().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> vx(x.dim()), vy(y.dim());
  double best = 0.0;
  for (double t : grid) {
    x.eval(t, vx);
    y.eval(t, vy);
    for (std::size_t c = 0; c < x.dim(); ++c) best = std::max(best, std::fabs(vx[c] - vy[c]));
  }
  return best;
}

}  // namespace sklab
