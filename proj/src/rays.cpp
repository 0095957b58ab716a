#include "geomonge/rays.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <string>

namespace geomonge {

namespace {

void sort_unique(PairSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

bool contains(const PairSet& s, int x, int y) {
  return std::binary_search(s.begin(), s.end(), std::make_pair(x, y));
}

std::string pt(int i) { return std::to_string(i); }

}  // namespace

int RaySystem::position_on_ray(int r, int point) const {
  const auto& pts = rays[r].points;
  for (size_t i = 0; i < pts.size(); ++i)
    if (pts[i] == point) return static_cast<int>(i);
  return -1;
}

double RaySystem::param_on_ray(int r, int point) const {
  int pos = position_on_ray(r, point);
  if (pos < 0)
    fail(ErrorCode::PARAM_UNDEFINED,
         "point " + pt(point) + " is not on ray " + pt(r));
  return rays[r].params[pos];
}

PairSet close_cycles(const FiniteGeodesicSpace& sp, const PairSet& support_in) {
  PairSet support = support_in;
  sort_unique(support);
  for (auto& [x, y] : support)
    if (is_inf(sp.distL(x, y)))
      fail(ErrorCode::INVALID_ARGUMENT, "support pair (" + pt(x) + "," + pt(y) +
                                            ") has infinite cost");
  int P = static_cast<int>(support.size());
  if (P == 0) return support;

  // sigma(p,q): marginal cost of rerouting pair q's source to pair p's
  // target; zero-total cycles in this graph generate the closure.
  auto sigma = [&](int p, int q) {
    double cross = sp.distL(support[q].first, support[p].second);
    if (is_inf(cross)) return kInf;
    return cross - sp.distL(support[p].first, support[p].second);
  };

  std::vector<double> D(static_cast<size_t>(P) * P);
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q)
      D[static_cast<size_t>(p) * P + q] = (p == q) ? 0.0 : sigma(p, q);
  for (int k = 0; k < P; ++k)
    for (int p = 0; p < P; ++p) {
      double dpk = D[static_cast<size_t>(p) * P + k];
      if (is_inf(dpk)) continue;
      for (int q = 0; q < P; ++q) {
        double cand = dpk + D[static_cast<size_t>(k) * P + q];
        double& cur = D[static_cast<size_t>(p) * P + q];
        if (cand < cur) cur = cand;
      }
    }
  for (int p = 0; p < P; ++p)
    if (D[static_cast<size_t>(p) * P + p] < -sp.tol)
      fail(ErrorCode::NONMONOTONE_INPUT,
           "support admits a negative-defect cycle through pair " + pt(p));

  PairSet closed = support;
  for (int q = 0; q < P; ++q)
    for (int p = 0; p < P; ++p) {
      if (p == q) continue;
      double s = sigma(q, p);
      if (is_inf(s)) continue;
      double roundtrip = s + D[static_cast<size_t>(p) * P + q];
      if (std::abs(roundtrip) <= sp.tol)
        closed.push_back({support[p].first, support[q].second});
    }
  sort_unique(closed);
  return closed;
}

PairSet build_G(const FiniteGeodesicSpace& sp, const PairSet& gamma_prime) {
  std::set<std::pair<int, int>> acc;
  std::vector<std::pair<double, int>> chain;
  for (auto& [w, z] : gamma_prime) {
    double total = sp.distL(w, z);
    chain.clear();
    for (int x = 0; x < sp.n; ++x) {
      double a = sp.distL(w, x), b = sp.distL(x, z);
      if (is_inf(a) || is_inf(b)) continue;
      if (std::abs(a + b - total) <= sp.tol) chain.push_back({a, x});
    }
    std::sort(chain.begin(), chain.end());
    for (size_t i = 0; i < chain.size(); ++i)
      for (size_t j = i; j < chain.size(); ++j) {
        auto [tx, x] = chain[i];
        auto [ty, y] = chain[j];
        double mid = sp.distL(x, y);
        if (is_inf(mid)) continue;
        if (std::abs(tx + mid + sp.distL(y, z) - total) <= sp.tol)
          acc.insert({x, y});
      }
  }
  return PairSet(acc.begin(), acc.end());
}

std::pair<std::vector<int>, std::vector<int>> transport_sets(int n, const PairSet& G) {
  std::vector<bool> has_succ(n, false), has_pred(n, false);
  for (auto& [x, y] : G)
    if (x != y) {
      has_succ[x] = true;
      has_pred[y] = true;
    }
  std::vector<int> T, Te;
  for (int i = 0; i < n; ++i) {
    if (has_succ[i] && has_pred[i]) T.push_back(i);
    if (has_succ[i] || has_pred[i]) Te.push_back(i);
  }
  return {T, Te};
}

std::pair<std::vector<int>, std::vector<int>> endpoints(int n, const PairSet& G) {
  std::vector<bool> has_succ(n, false), has_pred(n, false);
  for (auto& [x, y] : G)
    if (x != y) {
      has_succ[x] = true;
      has_pred[y] = true;
    }
  std::vector<std::vector<int>> preds(n), succs(n);
  for (auto& [x, y] : G)
    if (x != y) {
      preds[y].push_back(x);
      succs[x].push_back(y);
    }

  std::vector<int> a(n, -1), b(n, -1);
  for (int x = 0; x < n; ++x) {
    if (!(has_succ[x] && has_pred[x])) continue;  // endpoint maps live on T
    for (int y : preds[x])
      if (!has_pred[y]) {
        if (a[x] >= 0 && a[x] != y)
          fail(ErrorCode::BRANCHING_DETECTED,
               "point " + pt(x) + " reaches two initial points " + pt(a[x]) +
                   " and " + pt(y));
        a[x] = y;
      }
    for (int y : succs[x])
      if (!has_succ[y]) {
        if (b[x] >= 0 && b[x] != y)
          fail(ErrorCode::BRANCHING_DETECTED,
               "point " + pt(x) + " reaches two final points " + pt(b[x]) +
                   " and " + pt(y));
        b[x] = y;
      }
  }
  return {a, b};
}

AxiomReport check_partial_order_axioms(int n, const PairSet& G) {
  auto [T, Te] = transport_sets(n, G);
  (void)T;
  for (int x : Te)
    if (!contains(G, x, x)) return {false, "not reflexive at " + pt(x)};
  for (auto& [x, y] : G) {
    if (x != y && contains(G, y, x))
      return {false, "not antisymmetric on (" + pt(x) + "," + pt(y) + ")"};
    for (auto& [y2, z] : G)
      if (y2 == y && !contains(G, x, z))
        return {false,
                "not transitive on (" + pt(x) + "," + pt(y) + "," + pt(z) + ")"};
  }
  return {true, ""};
}

AxiomReport check_equivalence_axioms(int n, const PairSet& G) {
  auto [T, Te] = transport_sets(n, G);
  (void)Te;
  std::vector<bool> inT(n, false);
  for (int x : T) inT[x] = true;
  auto related = [&](int x, int y) {
    return contains(G, x, y) || contains(G, y, x);
  };
  for (int x : T)
    if (!related(x, x)) return {false, "not reflexive at " + pt(x)};
  // symmetry is structural for R = G u G^-1; check transitivity
  for (auto& [x, y] : G) {
    if (!inT[x] || !inT[y]) continue;
    for (auto& [p, q] : G) {
      int z = -1;
      if (p == y && inT[q]) z = q;
      if (q == y && inT[p]) z = p;
      if (z < 0) continue;
      if (!related(x, z) || !related(y, x) || !related(z, y))
        return {false, "R not transitive on (" + pt(x) + "," + pt(y) + "," +
                           pt(z) + ")"};
    }
  }
  return {true, ""};
}

RaySystem build_ray_system(const FiniteGeodesicSpace& sp, const PairSet& G) {
  RaySystem rs;
  rs.n = sp.n;
  rs.G = G;
  sort_unique(rs.G);
  std::tie(rs.T_points, rs.Te_points) = transport_sets(sp.n, rs.G);
  std::tie(rs.a_map, rs.b_map) = endpoints(sp.n, rs.G);

  std::vector<bool> inT(sp.n, false);
  for (int x : rs.T_points) inT[x] = true;

  // union-find over the interior relation
  std::vector<int> uf(sp.n);
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return uf[x] == x ? x : uf[x] = find(uf[x]);
  };
  for (auto& [x, y] : rs.G)
    if (x != y && inT[x] && inT[y]) uf[find(x)] = find(y);

  auto related = [&](int x, int y) {
    return contains(rs.G, x, y) || contains(rs.G, y, x);
  };

  // transitivity must make every class a single chain
  std::vector<std::vector<int>> classes_by_root(sp.n);
  for (int x : rs.T_points) classes_by_root[find(x)].push_back(x);
  for (const auto& cls : classes_by_root)
    for (size_t i = 0; i < cls.size(); ++i)
      for (size_t j = i + 1; j < cls.size(); ++j)
        if (!related(cls[i], cls[j])) {
          // find a common neighbor for the witness triple
          int w = -1;
          for (int z : cls)
            if (related(cls[i], z) && related(z, cls[j])) w = z;
          fail(ErrorCode::EQUIVALENCE_FAILURE,
               "R is not transitive on triple (" + pt(cls[i]) + "," +
                   pt(w) + "," + pt(cls[j]) + ")");
        }

  // assemble rays: class + endpoints, signed params from the
  // lexicographically smallest interior point
  std::vector<int> roots;
  for (int r = 0; r < sp.n; ++r)
    if (!classes_by_root[r].empty()) roots.push_back(r);
  std::vector<std::pair<int, int>> rep_root;  // (representative, root)
  for (int r : roots) {
    int rep = *std::min_element(classes_by_root[r].begin(), classes_by_root[r].end());
    rep_root.push_back({rep, r});
  }
  std::sort(rep_root.begin(), rep_root.end());

  rs.quotient.assign(sp.n, -1);
  for (auto& [rep, root] : rep_root) {
    int ray_idx = static_cast<int>(rs.rays.size());
    const auto& cls = classes_by_root[root];

    int a_pt = rs.a_map[cls[0]], b_pt = rs.b_map[cls[0]];
    for (int x : cls) {
      if (rs.a_map[x] != a_pt)
        fail(ErrorCode::BRANCHING_DETECTED, "class of " + pt(rep) +
                                                " has mismatched initial points");
      if (rs.b_map[x] != b_pt)
        fail(ErrorCode::BRANCHING_DETECTED, "class of " + pt(rep) +
                                                " has mismatched final points");
    }
    if (a_pt >= 0 && a_pt == b_pt)
      fail(ErrorCode::EQUIVALENCE_FAILURE,
           "class of " + pt(rep) + " closes onto itself at " + pt(a_pt));

    std::vector<std::pair<double, int>> chain;
    for (int x : cls) {
      double t;
      if (x == rep) {
        t = 0.0;
      } else if (contains(rs.G, rep, x)) {
        t = sp.distL(rep, x);
      } else {
        t = -sp.distL(rep, x);
      }
      chain.push_back({t, x});
    }
    if (a_pt >= 0) chain.push_back({-sp.distL(rep, a_pt), a_pt});
    if (b_pt >= 0) chain.push_back({sp.distL(rep, b_pt), b_pt});
    std::sort(chain.begin(), chain.end());

    for (size_t i = 0; i + 1 < chain.size(); ++i)
      if (chain[i + 1].first - chain[i].first <= sp.tol)
        fail(ErrorCode::EQUIVALENCE_FAILURE,
             "points " + pt(chain[i].second) + " and " + pt(chain[i + 1].second) +
                 " share param " + std::to_string(chain[i].first));
    for (size_t i = 0; i < chain.size(); ++i)
      for (size_t j = i + 1; j < chain.size(); ++j) {
        double gap = chain[j].first - chain[i].first;
        if (std::abs(sp.distL(chain[i].second, chain[j].second) - gap) > sp.tol)
          fail(ErrorCode::EQUIVALENCE_FAILURE,
               "chain (" + pt(rep) + "," + pt(chain[i].second) + "," +
                   pt(chain[j].second) + ") is not isometric to its params");
      }

    GeodesicPath ray;
    for (auto& [t, x] : chain) {
      ray.points.push_back(x);
      ray.params.push_back(t);
      if (inT[x]) rs.quotient[x] = ray_idx;
    }
    rs.rays.push_back(std::move(ray));
    rs.section.push_back(rep);
  }

  // pairs whose chain has no interior carry no ray structure
  for (auto& [x, y] : rs.G)
    if (x != y && !inT[x] && !inT[y]) {
      bool has_interior = false;
      for (int z : rs.T_points)
        if (contains(rs.G, x, z) && contains(rs.G, z, y)) has_interior = true;
      if (!has_interior) rs.isolated_pairs.push_back({x, y});
    }
  sort_unique(rs.isolated_pairs);
  return rs;
}

double covered_plan_mass(const TransportPlan& plan, const RaySystem& rs) {
  std::vector<bool> inTe(rs.n, false);
  for (int x : rs.Te_points) inTe[x] = true;
  double covered = 0.0;
  for (const PlanEntry& e : plan.entries)
    if (e.src == e.dst || (inTe[e.src] && inTe[e.dst])) covered += e.mass;
  return covered;
}

}  // namespace geomonge
