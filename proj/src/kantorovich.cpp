#include "geomonge/kantorovich.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <thread>

namespace geomonge {

TransportPlan TransportPlan::from_entries(int n, std::vector<PlanEntry> raw) {
  std::map<std::pair<int, int>, double> merged;
  for (const PlanEntry& e : raw) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
      fail(ErrorCode::INVALID_ARGUMENT, "plan entry out of range");
    if (e.mass < 0) fail(ErrorCode::INVALID_ARGUMENT, "negative plan mass");
    if (e.mass > 0) merged[{e.src, e.dst}] += e.mass;
  }
  TransportPlan plan;
  std::vector<double> left(n, 0.0), right(n, 0.0);
  for (auto& [key, mass] : merged) {
    plan.entries.push_back({key.first, key.second, mass});
    left[key.first] += mass;
    right[key.second] += mass;
  }
  plan.left_marginal = DiscreteMeasure::from_weights(std::move(left));
  plan.right_marginal = DiscreteMeasure::from_weights(std::move(right));
  return plan;
}

TransportPlan TransportPlan::identity(const DiscreteMeasure& mu) {
  std::vector<PlanEntry> entries;
  for (int i = 0; i < mu.size(); ++i)
    if (mu[i] > 0) entries.push_back({i, i, mu[i]});
  return from_entries(mu.size(), std::move(entries));
}

std::vector<std::pair<int, int>> TransportPlan::support() const {
  std::vector<std::pair<int, int>> s;
  s.reserve(entries.size());
  for (const PlanEntry& e : entries) s.push_back({e.src, e.dst});
  return s;
}

double TransportPlan::cost(const FiniteGeodesicSpace& sp) const {
  double c = 0.0;
  for (const PlanEntry& e : entries) c += sp.distL(e.src, e.dst) * e.mass;
  return c;
}

// ---------------------------------------------------------------------------
// Exact solver: successive shortest augmenting paths with node potentials.

namespace {

struct FlowArc {
  int to;
  double cap;
  double cost;
  int rev;  // index of the reverse arc in graph[to]
};

class MinCostFlow {
 public:
  explicit MinCostFlow(int n) : graph_(n), potential_(n, 0.0) {}

  void add_arc(int from, int to, double cap, double cost) {
    graph_[from].push_back({to, cap, cost, static_cast<int>(graph_[to].size())});
    graph_[to].push_back({from, 0.0, -cost, static_cast<int>(graph_[from].size()) - 1});
  }

  /// Pushes `amount` from s to t; returns (flow shipped, total cost).
  /// Residuals below 1e-13 of the total are float crumbs, not mass:
  /// pushing them would pollute the support with spurious pairs.
  std::pair<double, double> run(int s, int t, double amount) {
    int n = static_cast<int>(graph_.size());
    double shipped = 0.0, total_cost = 0.0;
    const double eps = 1e-13 * std::max(1.0, amount);
    while (amount - shipped > eps) {
      std::vector<double> dist(n, kInf);
      std::vector<int> prev_node(n, -1), prev_arc(n, -1);
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
      dist[s] = 0.0;
      pq.push({0.0, s});
      while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (du > dist[u]) continue;
        for (int ai = 0; ai < static_cast<int>(graph_[u].size()); ++ai) {
          const FlowArc& a = graph_[u][ai];
          if (a.cap <= eps || is_inf(a.cost)) continue;
          double rc = a.cost + potential_[u] - potential_[a.to];
          if (rc < 0) rc = 0;  // guards tiny float negatives
          if (du + rc < dist[a.to]) {
            dist[a.to] = du + rc;
            prev_node[a.to] = u;
            prev_arc[a.to] = ai;
            pq.push({dist[a.to], a.to});
          }
        }
      }
      if (is_inf(dist[t])) break;  // no residual path left
      for (int v = 0; v < n; ++v)
        if (!is_inf(dist[v])) potential_[v] += dist[v];

      double push = amount - shipped;
      for (int v = t; v != s; v = prev_node[v])
        push = std::min(push, graph_[prev_node[v]][prev_arc[v]].cap);
      for (int v = t; v != s; v = prev_node[v]) {
        FlowArc& a = graph_[prev_node[v]][prev_arc[v]];
        a.cap -= push;
        graph_[a.to][a.rev].cap += push;
        total_cost += a.cost * push;
      }
      shipped += push;
    }
    return {shipped, total_cost};
  }

  const std::vector<std::vector<FlowArc>>& graph() const { return graph_; }

 private:
  std::vector<std::vector<FlowArc>> graph_;
  std::vector<double> potential_;
};

}  // namespace

TransportPlan solve_kantorovich(const FiniteGeodesicSpace& sp,
                                const DiscreteMeasure& mu,
                                const DiscreteMeasure& nu) {
  if (mu.size() != sp.n || nu.size() != sp.n)
    fail(ErrorCode::INVALID_ARGUMENT, "measure size does not match the space");
  double scale = std::max(1.0, std::max(mu.total, nu.total));
  if (std::abs(mu.total - nu.total) > 1e-9 * scale)
    fail(ErrorCode::INFEASIBLE_MASS, "marginal totals differ: " +
                                         std::to_string(mu.total) + " vs " +
                                         std::to_string(nu.total));

  std::vector<int> srcs, dsts;
  for (int i = 0; i < sp.n; ++i) {
    if (mu[i] > 0) srcs.push_back(i);  // zero-mass atoms dropped here
    if (nu[i] > 0) dsts.push_back(i);
  }
  if (srcs.empty()) return TransportPlan::from_entries(sp.n, {});

  int ns = static_cast<int>(srcs.size()), nd = static_cast<int>(dsts.size());
  int source = ns + nd, sink = ns + nd + 1;
  MinCostFlow mcf(ns + nd + 2);
  for (int i = 0; i < ns; ++i) mcf.add_arc(source, i, mu[srcs[i]], 0.0);
  for (int j = 0; j < nd; ++j) mcf.add_arc(ns + j, sink, nu[dsts[j]], 0.0);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nd; ++j) {
      double c = sp.distL(srcs[i], dsts[j]);
      if (!is_inf(c)) mcf.add_arc(i, ns + j, kInf, c);
    }

  auto [shipped, cost] = mcf.run(source, sink, mu.total);
  if (mu.total - shipped > 1e-9 * scale)
    fail(ErrorCode::NO_FINITE_COUPLING,
         "every coupling of the remaining mass crosses an unreachable pair");

  std::vector<PlanEntry> entries;
  for (int i = 0; i < ns; ++i)
    for (const FlowArc& a : mcf.graph()[i]) {
      if (a.to < ns || a.to >= ns + nd) continue;
      double f = mcf.graph()[a.to][a.rev].cap;  // shipped amount
      if (f > 1e-13 * scale) entries.push_back({srcs[i], dsts[a.to - ns], f});
    }
  TransportPlan plan = TransportPlan::from_entries(sp.n, std::move(entries));
  plan.cost_cache = plan.cost(sp);
  return plan;
}

// ---------------------------------------------------------------------------
// Cyclical monotonicity.

namespace {

struct CycleScan {
  const FiniteGeodesicSpace& sp;
  const std::vector<std::pair<int, int>>& pairs;
  double tol;
  std::optional<CycleViolation> found;

  // Evaluates the cycle pairs[idx[0]], ..., pairs[idx[k-1]] closing back
  // to idx[0]; keeps the lexicographically first violation.
  void visit(const std::vector<int>& idx) {
    double plan_sum = 0.0, swap_sum = 0.0;
    size_t k = idx.size();
    for (size_t i = 0; i < k; ++i) {
      auto [x, y] = pairs[idx[i]];
      auto [xn, yn] = pairs[idx[(i + 1) % k]];
      plan_sum += sp.distL(x, y);
      double sw = sp.distL(xn, y);
      if (is_inf(sw)) return;  // swapped route unreachable, cannot violate
      swap_sum += sw;
    }
    double defect = swap_sum - plan_sum;
    if (defect < -tol) {
      std::vector<int> cyc(idx);
      if (!found || cyc < found->pair_indices) found = CycleViolation{cyc, defect};
    }
  }

  // All cycles of the given length with smallest index `first` leading
  // (each cyclic order visited once).
  void scan_from(int first, int length) {
    std::vector<int> rest;
    for (int i = first + 1; i < static_cast<int>(pairs.size()); ++i) rest.push_back(i);
    std::vector<int> idx(length);
    idx[0] = first;
    choose_and_permute(rest, idx, 1);
  }

  void choose_and_permute(const std::vector<int>& avail, std::vector<int>& idx, int pos) {
    if (found) return;
    if (pos == static_cast<int>(idx.size())) {
      visit(idx);
      return;
    }
    for (size_t i = 0; i < avail.size(); ++i) {
      bool used = false;
      for (int p = 1; p < pos; ++p)
        if (idx[p] == avail[i]) used = true;
      if (used) continue;
      idx[pos] = avail[i];
      choose_and_permute(avail, idx, pos + 1);
    }
  }
};

int env_thread_cap() {
  const char* v = std::getenv("GEOMONGE_THREADS");
  if (!v) return 1;
  int k = std::atoi(v);
  return k < 1 ? 1 : k;
}

}  // namespace

MonotoneCertificate certify_monotone(const FiniteGeodesicSpace& sp,
                                     const TransportPlan& plan, int max_cycle) {
  if (plan.entries.empty()) fail(ErrorCode::INVALID_ARGUMENT, "empty plan");
  if (max_cycle < 2) fail(ErrorCode::INVALID_ARGUMENT, "max_cycle must be >= 2");

  MonotoneCertificate cert;
  cert.max_cycle = max_cycle;
  auto pairs = plan.support();
  int P = static_cast<int>(pairs.size());

  int threads = std::min(env_thread_cap(), P);
  for (int len = 2; len <= std::min(max_cycle, P); ++len) {
    std::optional<CycleViolation> best;
    if (threads <= 1) {
      CycleScan scan{sp, pairs, sp.tol, std::nullopt};
      for (int first = 0; first + len <= P && !scan.found; ++first)
        scan.scan_from(first, len);
      best = scan.found;
    } else {
      // disjoint batches by leading pair; merge keeps the lexicographic
      // first violation, so the result matches the serial order
      std::vector<std::optional<CycleViolation>> results(threads);
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t]() {
          CycleScan scan{sp, pairs, sp.tol, std::nullopt};
          for (int first = t; first + len <= P; first += threads) {
            scan.found.reset();
            scan.scan_from(first, len);
            if (scan.found && (!results[t] || scan.found->pair_indices <
                                                  results[t]->pair_indices))
              results[t] = scan.found;
          }
        });
      for (auto& th : pool) th.join();
      for (auto& r : results)
        if (r && (!best || r->pair_indices < best->pair_indices)) best = r;
    }
    if (best) {
      cert.pass = false;
      cert.violation = best;
      return cert;
    }
  }

  // full-length certificate via the relaxation potential, per component
  try {
    std::vector<bool> covered(sp.n, false);
    bool all_ok = true;
    for (const auto& [x, y] : pairs) {
      if (covered[x]) continue;
      PotentialPair pot = compute_potential(sp, plan, x);
      for (int i = 0; i < sp.n; ++i)
        if (!is_inf(pot.phi[i])) covered[i] = true;
      if (!covered[x]) all_ok = false;
    }
    cert.potential_certified = all_ok;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NEGATIVE_CYCLE) {
      cert.potential_certified = false;
      cert.pass = false;
    } else {
      throw;
    }
  }
  return cert;
}

PotentialPair compute_potential(const FiniteGeodesicSpace& sp,
                                const TransportPlan& plan, int base) {
  if (base < 0 || base >= sp.n) fail(ErrorCode::INVALID_ARGUMENT, "base out of range");
  auto pairs = plan.support();
  pairs.push_back({base, base});  // adjoined root pair
  int P = static_cast<int>(pairs.size());
  int root = P - 1;

  // D[q] = cheapest chain of swaps from the root pair ending at pair q
  std::vector<double> D(P, kInf);
  D[root] = 0.0;
  auto step = [&](int q, int r) {
    // moving the chain from pair q to pair r costs dL(x_r, y_q) - dL(x_q, y_q)
    double cross = sp.distL(pairs[r].first, pairs[q].second);
    if (is_inf(cross) || is_inf(D[q])) return kInf;
    return D[q] + cross - sp.distL(pairs[q].first, pairs[q].second);
  };

  bool changed = true;
  for (int round = 0; round < P && changed; ++round) {
    changed = false;
    for (int q = 0; q < P; ++q) {
      if (is_inf(D[q])) continue;
      for (int r = 0; r < P; ++r) {
        double cand = step(q, r);
        if (cand < D[r] - sp.tol * 0.5) {
          D[r] = cand;
          changed = true;
        }
      }
    }
  }
  if (changed) {
    // one extra scan: any further strict improvement means a negative cycle
    for (int q = 0; q < P; ++q) {
      if (is_inf(D[q])) continue;
      for (int r = 0; r < P; ++r)
        if (step(q, r) < D[r] - sp.tol)
          fail(ErrorCode::NEGATIVE_CYCLE,
               "support admits a cost-decreasing cycle; the plan is not monotone");
    }
  }

  PotentialPair pot;
  pot.phi.assign(sp.n, kInf);
  pot.psi.assign(sp.n, kInf);
  for (int x = 0; x < sp.n; ++x) {
    double best = kInf;
    for (int q = 0; q < P; ++q) {
      if (is_inf(D[q])) continue;
      double cross = sp.distL(x, pairs[q].second);
      if (is_inf(cross)) continue;
      best = std::min(best, D[q] + cross - sp.distL(pairs[q].first, pairs[q].second));
    }
    pot.phi[x] = best;
  }
  for (int x = 0; x < sp.n; ++x)
    if (!is_inf(pot.phi[x])) pot.psi[x] = -pot.phi[x];
  return pot;
}

double dual_value(const PotentialPair& pot, const DiscreteMeasure& mu,
                  const DiscreteMeasure& nu) {
  double j = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0) {
      if (is_inf(pot.phi[i])) return -kInf;
      j += pot.phi[i] * mu[i];
    }
    if (nu[i] > 0) {
      if (is_inf(pot.psi[i])) return -kInf;
      j += pot.psi[i] * nu[i];
    }
  }
  return j;
}

// ---------------------------------------------------------------------------
// Vertex enumeration for the degenerate-cost sanity scenario.

namespace {

struct ForestEnum {
  int a, b;  // atom counts
  std::vector<std::pair<int, int>> edges;
  std::vector<double> supply, demand;
  const FiniteGeodesicSpace& sp;
  std::vector<int> atom_src, atom_dst;
  std::vector<double> costs;

  // union-find over a + b nodes
  std::vector<int> parent;
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }

  void solve_tree(const std::vector<int>& chosen) {
    int nodes = a + b;
    std::vector<std::vector<std::pair<int, int>>> adj(nodes);  // (other, edge)
    for (int e : chosen) {
      auto [i, j] = edges[e];
      adj[i].push_back({a + j, e});
      adj[a + j].push_back({i, e});
    }
    std::vector<double> rem(nodes);
    for (int i = 0; i < a; ++i) rem[i] = supply[i];
    for (int j = 0; j < b; ++j) rem[a + j] = demand[j];
    std::vector<int> degree(nodes);
    std::vector<bool> edge_done(edges.size(), false);
    for (int v = 0; v < nodes; ++v) degree[v] = static_cast<int>(adj[v].size());

    std::vector<int> leaves;
    for (int v = 0; v < nodes; ++v)
      if (degree[v] == 1) leaves.push_back(v);

    double cost = 0.0;
    int processed = 0;
    while (!leaves.empty()) {
      int v = leaves.back();
      leaves.pop_back();
      if (degree[v] != 1) continue;
      for (auto [w, e] : adj[v]) {
        if (edge_done[e]) continue;
        double f = rem[v];
        if (f < -1e-12) return;  // infeasible basis
        auto [i, j] = edges[e];
        cost += sp.distL(atom_src[i], atom_dst[j]) * f;
        rem[w] -= f;
        rem[v] = 0;
        edge_done[e] = true;
        if (--degree[w] == 1) leaves.push_back(w);
        degree[v] = 0;
        ++processed;
        break;
      }
    }
    if (processed != static_cast<int>(chosen.size())) return;
    for (int v = 0; v < a + b; ++v)
      if (std::abs(rem[v]) > 1e-9) return;  // component totals unbalanced
    costs.push_back(cost);
  }

  void recurse(std::vector<int>& chosen, size_t next_edge) {
    int need = a + b - 1;
    if (static_cast<int>(chosen.size()) == need) {
      solve_tree(chosen);
      return;
    }
    if (static_cast<int>(edges.size() - next_edge) <
        need - static_cast<int>(chosen.size()))
      return;
    for (size_t e = next_edge; e < edges.size(); ++e) {
      auto [i, j] = edges[e];
      int ri = find(i), rj = find(a + j);
      if (ri == rj) continue;  // would close a cycle
      std::vector<int> saved = parent;
      parent[ri] = rj;
      chosen.push_back(static_cast<int>(e));
      recurse(chosen, e + 1);
      chosen.pop_back();
      parent = saved;
    }
  }
};

}  // namespace

std::vector<double> vertex_coupling_costs(const FiniteGeodesicSpace& sp,
                                          const DiscreteMeasure& mu,
                                          const DiscreteMeasure& nu,
                                          int max_atoms) {
  std::vector<int> srcs, dsts;
  for (int i = 0; i < sp.n; ++i) {
    if (mu[i] > 0) srcs.push_back(i);
    if (nu[i] > 0) dsts.push_back(i);
  }
  if (static_cast<int>(srcs.size()) > max_atoms ||
      static_cast<int>(dsts.size()) > max_atoms)
    fail(ErrorCode::INVALID_ARGUMENT, "vertex enumeration capped at " +
                                          std::to_string(max_atoms) + " atoms");

  ForestEnum fe{static_cast<int>(srcs.size()),
                static_cast<int>(dsts.size()),
                {},
                {},
                {},
                sp,
                srcs,
                dsts,
                {},
                {}};
  for (int i = 0; i < fe.a; ++i)
    for (int j = 0; j < fe.b; ++j)
      if (!is_inf(sp.distL(srcs[i], dsts[j]))) fe.edges.push_back({i, j});
  for (int i : srcs) fe.supply.push_back(mu[i]);
  for (int j : dsts) fe.demand.push_back(nu[j]);
  fe.parent.resize(fe.a + fe.b);
  std::iota(fe.parent.begin(), fe.parent.end(), 0);

  std::vector<int> chosen;
  fe.recurse(chosen, 0);
  return fe.costs;
}

}  // namespace geomonge
