#include "geomonge/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <queue>
#include <string>

namespace geomonge {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case ErrorCode::INFINITE_DISTANCE: return "INFINITE_DISTANCE";
    case ErrorCode::AMBIGUOUS_GEODESIC: return "AMBIGUOUS_GEODESIC";
    case ErrorCode::INFEASIBLE_MASS: return "INFEASIBLE_MASS";
    case ErrorCode::NO_FINITE_COUPLING: return "NO_FINITE_COUPLING";
    case ErrorCode::NEGATIVE_CYCLE: return "NEGATIVE_CYCLE";
    case ErrorCode::NONMONOTONE_INPUT: return "NONMONOTONE_INPUT";
    case ErrorCode::BRANCHING_DETECTED: return "BRANCHING_DETECTED";
    case ErrorCode::EQUIVALENCE_FAILURE: return "EQUIVALENCE_FAILURE";
    case ErrorCode::MASS_OFF_RAYS: return "MASS_OFF_RAYS";
    case ErrorCode::MASS_MISMATCH: return "MASS_MISMATCH";
    case ErrorCode::RAY_MISMATCH: return "RAY_MISMATCH";
    case ErrorCode::PARAM_UNDEFINED: return "PARAM_UNDEFINED";
    case ErrorCode::MISSING_DENSITY: return "MISSING_DENSITY";
    case ErrorCode::ORDER_VIOLATION: return "ORDER_VIOLATION";
    case ErrorCode::DIVISION_BY_ZERO_CELL: return "DIVISION_BY_ZERO_CELL";
    case ErrorCode::ENDPOINT_MISSING: return "ENDPOINT_MISSING";
    case ErrorCode::DOMAIN: return "DOMAIN";
    case ErrorCode::IO_ERROR: return "IO_ERROR";
  }
  return "UNKNOWN";
}

FiniteGeodesicSpace build_segment(int n_points, double length) {
  if (n_points < 2) fail(ErrorCode::INVALID_ARGUMENT, "segment needs >= 2 points");
  if (!(length > 0)) fail(ErrorCode::INVALID_ARGUMENT, "segment length must be positive");
  std::vector<double> pos(n_points);
  double h = length / (n_points - 1);
  for (int i = 0; i < n_points; ++i) pos[i] = i * h;
  return build_line_points(pos);
}

FiniteGeodesicSpace build_line_points(const std::vector<double>& positions) {
  int n = static_cast<int>(positions.size());
  if (n < 1) fail(ErrorCode::INVALID_ARGUMENT, "need at least one point");
  FiniteGeodesicSpace sp;
  sp.n = n;
  sp.tol = 1e-9;
  sp.labels.reserve(n);
  for (double p : positions) sp.labels.push_back({p});
  sp.d.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      sp.d[static_cast<size_t>(i) * n + j] = std::abs(positions[i] - positions[j]);
  sp.dL = sp.d;
  return sp;
}

FiniteGeodesicSpace build_tree(const std::vector<int>& parent,
                               const std::vector<double>& edge_len) {
  int n = static_cast<int>(parent.size());
  if (n < 1 || edge_len.size() != parent.size())
    fail(ErrorCode::INVALID_ARGUMENT, "parent/edge_len size mismatch");
  for (int i = 1; i < n; ++i)
    if (parent[i] < 0 || parent[i] >= i)
      fail(ErrorCode::INVALID_ARGUMENT, "parent[i] must be < i");

  // depth from the root, then path distance via lowest common ancestor
  std::vector<double> depth(n, 0.0);
  for (int i = 1; i < n; ++i) depth[i] = depth[parent[i]] + edge_len[i];

  auto lca_dist = [&](int a, int b) {
    double da = depth[a], db = depth[b];
    int x = a, y = b;
    while (x != y) {
      if (x > y) {
        x = parent[x];
      } else {
        y = parent[y];
      }
    }
    return da + db - 2 * depth[x];
  };

  FiniteGeodesicSpace sp;
  sp.n = n;
  sp.tol = 1e-9;
  sp.d.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = lca_dist(i, j);
      sp.d[static_cast<size_t>(i) * n + j] = v;
      sp.d[static_cast<size_t>(j) * n + i] = v;
    }
  sp.dL = sp.d;
  return sp;
}

namespace {

struct Edge {
  int to;
  double len;
};

std::vector<double> dijkstra(const std::vector<std::vector<Edge>>& adj, int src) {
  int n = static_cast<int>(adj.size());
  std::vector<double> dist(n, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u]) continue;
    for (const Edge& e : adj[u]) {
      double nd = du + e.len;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        pq.push({nd, e.to});
      }
    }
  }
  return dist;
}

long long mod_ll(long long v, long long M) {
  long long r = v % M;
  return r < 0 ? r + M : r;
}

}  // namespace

CounterexampleSpace build_counterexample_space(int q_denom, int strip_res) {
  if (q_denom < 2) fail(ErrorCode::INVALID_ARGUMENT, "q_denom must be >= 2");
  int m = strip_res;
  if (m < 8 || m % 8 != 0)
    fail(ErrorCode::INVALID_ARGUMENT,
         "strip_res must be a positive multiple of 8 so the band maps are grid-exact");

  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  long long p0 = std::llround(golden * q_denom);
  p0 = std::clamp<long long>(p0, 1, q_denom - 1);
  long long g = std::gcd(p0, static_cast<long long>(q_denom));
  const long long num = p0 / g;
  const long long den = q_denom / g;
  const double alpha = static_cast<double>(num) / static_cast<double>(den);

  // band levels: source strip is the open band (1/2, 5/8) of the sheet
  std::vector<int> a_levels;
  for (int k = 0; k < m; ++k)
    if (2 * k > m && 8 * k < 5 * m) a_levels.push_back(k);
  if (a_levels.empty())
    fail(ErrorCode::INVALID_ARGUMENT,
         "strip_res too coarse: no sample level inside the source band");

  CounterexampleSpace out;
  out.alpha = alpha;
  out.alpha_num = static_cast<int>(num);
  out.alpha_den = static_cast<int>(den);
  out.strip_res = m;
  out.shift_up = 3 * m / 8;
  out.shift_down = 5 * m / 8;

  FiniteGeodesicSpace& sp = out.space;
  sp.tol = 1e-6;

  const long long M = den * m;  // x lattice resolution
  std::vector<std::vector<double>> labels;
  auto add_vertex = [&](double comp, long long x_int, double y) {
    labels.push_back({comp, static_cast<double>(x_int) / static_cast<double>(M), y});
    return static_cast<int>(labels.size()) - 1;
  };

  // shared base circle, one vertex per lattice position j/den
  std::vector<int> base(den);
  for (long long j = 0; j < den; ++j) base[j] = add_vertex(0.0, j * m, 0.0);

  std::vector<std::vector<Edge>> adjL;  // weighted (geodesic cost)
  std::vector<std::vector<Edge>> adjD;  // unweighted (ambient)
  auto ensure = [&](int id) {
    if (static_cast<int>(adjL.size()) <= id) {
      adjL.resize(id + 1);
      adjD.resize(id + 1);
    }
  };
  auto add_edge = [&](int u, int v, double lenL, double lenD) {
    ensure(std::max(u, v));
    adjL[u].push_back({v, lenL});
    adjL[v].push_back({u, lenL});
    adjD[u].push_back({v, lenD});
    adjD[v].push_back({u, lenD});
  };

  // one sheet: closed admissible curve(s) with slope coef*alpha glued to
  // the base circle every m steps. upper_weight applies above the mid line.
  auto build_sheet = [&](int coef, double comp_tag, double upper_weight,
                         std::vector<int>* curve_out) {
    long long shift = mod_ll(coef * num, den);
    long long orbit_count = std::gcd(shift, den);  // gcd(0, den) = den
    long long period = den / orbit_count;
    double hyp = std::sqrt(1.0 + (coef * alpha) * (coef * alpha)) / m;
    for (long long j0 = 0; j0 < orbit_count; ++j0) {
      std::vector<int> curve(static_cast<size_t>(period) * m);
      for (long long k = 0; k < period * m; ++k) {
        int level = static_cast<int>(k % m);
        if (level == 0) {
          long long wrap = k / m;
          curve[k] = base[mod_ll(j0 + wrap * shift, den)];
        } else {
          long long x_int = mod_ll(j0 * m + coef * num * k, M);
          curve[k] = add_vertex(comp_tag, x_int, static_cast<double>(level) / m);
        }
      }
      for (long long k = 0; k < period * m; ++k) {
        int level = static_cast<int>(k % m);
        double w = (2 * level >= m) ? upper_weight : 1.0;
        add_edge(curve[k], curve[(k + 1) % (period * m)], w * hyp, hyp);
      }
      if (curve_out && j0 == 0) *curve_out = curve;
    }
  };

  build_sheet(1, 0.0, 4.0, &out.sheet_curve);  // central sheet, 4x upper band
  for (int coef : {1, -1, 2, -2}) build_sheet(coef, coef, 1.0, nullptr);

  // the ambient metric may also travel along the base circle itself
  for (long long j = 0; j < den; ++j)
    if (den > 1) {
      ensure(base[(j + 1) % den]);
      adjD[base[j]].push_back({base[(j + 1) % den], 1.0 / den});
      adjD[base[(j + 1) % den]].push_back({base[j], 1.0 / den});
    }

  int n = static_cast<int>(labels.size());
  ensure(n - 1);
  sp.n = n;
  sp.labels = std::move(labels);
  sp.d.assign(static_cast<size_t>(n) * n, 0.0);
  sp.dL.assign(static_cast<size_t>(n) * n, 0.0);
  for (int s = 0; s < n; ++s) {
    std::vector<double> dl = dijkstra(adjL, s);
    std::vector<double> dd = dijkstra(adjD, s);
    for (int t = 0; t < n; ++t) {
      sp.dL[static_cast<size_t>(s) * n + t] = dl[t];
      sp.d[static_cast<size_t>(s) * n + t] = dd[t];
    }
  }

  for (int k : a_levels)
    for (long long w = 0; w < den; ++w)
      out.band_a_offsets.push_back(static_cast<int>(w * m + k));
  std::sort(out.band_a_offsets.begin(), out.band_a_offsets.end());
  return out;
}

StructureReport validate_structure(const FiniteGeodesicSpace& sp) {
  StructureReport rep;
  const int n = sp.n;
  const double tol = sp.tol;
  const size_t cap = 1000;  // keep reports bounded on large spaces

  auto note_triangle = [&](int i, int j, int k, double defect) {
    rep.triangle_ok = false;
    if (rep.triangle_violations.size() < cap)
      rep.triangle_violations.push_back({i, j, k, defect});
  };

  for (int i = 0; i < n; ++i) {
    if (sp.distL(i, i) != 0.0 || sp.dist(i, i) != 0.0) note_triangle(i, i, i, sp.distL(i, i));
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(sp.dist(i, j) - sp.dist(j, i)) > tol ||
          !(sp.distL(i, j) == sp.distL(j, i) ||
            std::abs(sp.distL(i, j) - sp.distL(j, i)) <= tol))
        note_triangle(i, j, j, sp.dist(i, j) - sp.dist(j, i));
      if (i != j && sp.distL(i, j) == 0.0) note_triangle(i, j, j, 0.0);
    }
  }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        double lhs = sp.distL(i, k);
        double rhs = sp.distL(i, j) + sp.distL(j, k);
        if (!is_inf(lhs) && !is_inf(rhs) && lhs > rhs + tol) note_triangle(i, j, k, lhs - rhs);
        if (is_inf(lhs) && !is_inf(rhs)) note_triangle(i, j, k, kInf);
        double dl = sp.dist(i, k), dr = sp.dist(i, j) + sp.dist(j, k);
        if (dl > dr + tol) note_triangle(i, j, k, dl - dr);
      }
    }

  // branching: from x through y, two distinct additive continuations at
  // the same distance beyond y
  std::vector<std::pair<double, int>> cont;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      double dxy = sp.distL(x, y);
      if (y == x || is_inf(dxy) || dxy <= 0) continue;
      cont.clear();
      for (int z = 0; z < n; ++z) {
        if (z == y) continue;
        double dyz = sp.distL(y, z);
        if (is_inf(dyz) || dyz <= 0) continue;
        if (std::abs(sp.distL(x, z) - (dxy + dyz)) <= tol) cont.push_back({dyz, z});
      }
      std::sort(cont.begin(), cont.end());
      for (size_t t = 1; t < cont.size(); ++t)
        if (cont[t].first - cont[t - 1].first <= tol) {
          if (rep.branching_witnesses.size() < cap)
            rep.branching_witnesses.push_back({x, y, cont[t - 1].second, cont[t].second});
        }
    }

  // dL-finiteness classes by flood fill
  std::vector<int> comp(n, -1);
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    int id = static_cast<int>(rep.finite_components.size());
    rep.finite_components.emplace_back();
    std::vector<int> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      rep.finite_components[id].push_back(u);
      for (int v = 0; v < n; ++v)
        if (comp[v] < 0 && !is_inf(sp.distL(u, v))) {
          comp[v] = id;
          stack.push_back(v);
        }
    }
    std::sort(rep.finite_components[id].begin(), rep.finite_components[id].end());
  }
  return rep;
}

GeodesicPath geodesic_between(const FiniteGeodesicSpace& sp, int x, int y) {
  if (x < 0 || x >= sp.n || y < 0 || y >= sp.n)
    fail(ErrorCode::INVALID_ARGUMENT, "point index out of range");
  GeodesicPath path;
  if (x == y) {
    path.points = {x};
    path.params = {0.0};
    return path;
  }
  double total = sp.distL(x, y);
  if (is_inf(total))
    fail(ErrorCode::INFINITE_DISTANCE, "no finite geodesic between the points");

  std::vector<std::pair<double, int>> chain;
  for (int z = 0; z < sp.n; ++z) {
    double a = sp.distL(x, z), b = sp.distL(z, y);
    if (is_inf(a) || is_inf(b)) continue;
    if (std::abs(a + b - total) <= sp.tol) chain.push_back({a, z});
  }
  std::sort(chain.begin(), chain.end());

  for (size_t i = 0; i + 1 < chain.size(); ++i)
    if (chain[i + 1].first - chain[i].first <= sp.tol)
      fail(ErrorCode::AMBIGUOUS_GEODESIC,
           "two additive points at equal distance " + std::to_string(chain[i].first));
  for (size_t i = 0; i < chain.size(); ++i)
    for (size_t j = i + 1; j < chain.size(); ++j) {
      double gap = chain[j].first - chain[i].first;
      if (std::abs(sp.distL(chain[i].second, chain[j].second) - gap) > sp.tol)
        fail(ErrorCode::AMBIGUOUS_GEODESIC, "incomparable additive chains between endpoints");
    }

  path.points.reserve(chain.size());
  path.params.reserve(chain.size());
  for (auto& [t, z] : chain) {
    path.points.push_back(z);
    path.params.push_back(t);
  }
  return path;
}

}  // namespace geomonge
