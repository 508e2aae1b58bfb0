#include "catdag/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "catdag/errors.hpp"

namespace catdag {

PpiMatrix ppi(std::span<const Dag> dags) {
  if (dags.empty()) throw InputError("cannot compute PPI from an empty trace");
  const int q = dags.front().num_nodes();
  PpiMatrix out(q);
  for (const Dag& dag : dags) {
    if (dag.num_nodes() != q) throw InputError("trace mixes DAGs of different size");
    for (const Edge& e : dag.edges()) out(e.from, e.to) += 1.0;
  }
  for (double& x : out.values) x /= static_cast<double>(dags.size());
  return out;
}

PpiMatrix ppi(const Trace& trace) {
  std::vector<Dag> dags;
  dags.reserve(trace.draws.size());
  for (const Draw& d : trace.draws) dags.push_back(d.dag);
  return ppi(dags);
}

DirectedGraph mpm(const PpiMatrix& ppi, double threshold) {
  DirectedGraph g;
  g.q = ppi.q;
  for (int u = 0; u < ppi.q; ++u) {
    for (int v = 0; v < ppi.q; ++v) {
      if (u != v && ppi(u, v) > threshold) g.edges.push_back({u, v});
    }
  }
  g.cyclic = !is_acyclic(g.edges, g.q);
  return g;
}

namespace {

// Edges of some directed cycle, or empty when acyclic.
std::vector<Edge> find_cycle(const std::vector<Edge>& edges, int q) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(q));
  for (const Edge& e : edges) out[static_cast<std::size_t>(e.from)].push_back(e.to);
  std::vector<int> color(static_cast<std::size_t>(q), 0), parent(static_cast<std::size_t>(q), -1);
  for (int root = 0; root < q; ++root) {
    if (color[static_cast<std::size_t>(root)] != 0) continue;
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    color[static_cast<std::size_t>(root)] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      const auto& succ = out[static_cast<std::size_t>(u)];
      if (next == succ.size()) {
        color[static_cast<std::size_t>(u)] = 2;
        stack.pop_back();
        continue;
      }
      const int w = succ[next++];
      if (color[static_cast<std::size_t>(w)] == 1) {
        std::vector<Edge> cycle{{u, w}};
        for (int x = u; x != w; x = parent[static_cast<std::size_t>(x)]) {
          cycle.push_back({parent[static_cast<std::size_t>(x)], x});
        }
        return cycle;
      }
      if (color[static_cast<std::size_t>(w)] == 0) {
        color[static_cast<std::size_t>(w)] = 1;
        parent[static_cast<std::size_t>(w)] = u;
        stack.push_back({w, 0});
      }
    }
  }
  return {};
}

}  // namespace

Dag repair_cycles(const DirectedGraph& graph, const PpiMatrix& ppi) {
  std::vector<Edge> edges = graph.edges;
  for (auto cycle = find_cycle(edges, graph.q); !cycle.empty(); cycle = find_cycle(edges, graph.q)) {
    const Edge weakest = *std::min_element(cycle.begin(), cycle.end(), [&](const Edge& a, const Edge& b) {
      const double pa = ppi(a.from, a.to);
      const double pb = ppi(b.from, b.to);
      return pa != pb ? pa < pb : a < b;
    });
    edges.erase(std::find(edges.begin(), edges.end(), weakest));
  }
  return Dag::from_edges(graph.q, edges);
}

Dag map_dag(std::span<const Dag> dags) {
  if (dags.empty()) throw InputError("cannot compute the MAP DAG of an empty trace");
  std::map<std::vector<Edge>, std::size_t> visits;
  for (const Dag& dag : dags) ++visits[dag.edges()];
  const std::vector<Edge>* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& [edges, count] : visits) {
    // Map iteration is lexicographic, so the first strict improvement wins ties.
    if (best == nullptr || count > best_count || (count == best_count && edges.size() < best->size())) {
      best = &edges;
      best_count = count;
    }
  }
  return Dag::from_edges(dags.front().num_nodes(), *best);
}

Dag map_dag(const Trace& trace) {
  std::vector<Dag> dags;
  dags.reserve(trace.draws.size());
  for (const Draw& d : trace.draws) dags.push_back(d.dag);
  return map_dag(dags);
}

namespace {

// 0 absent, 1 undirected, 2 u->v, 3 v->u for u < v.
std::vector<int> pair_status(const Cpdag& g) {
  const auto q = static_cast<std::size_t>(g.q);
  std::vector<int> status(q * q, 0);
  for (const Edge& e : g.undirected) {
    const auto [u, v] = std::minmax(e.from, e.to);
    status[static_cast<std::size_t>(u) * q + static_cast<std::size_t>(v)] = 1;
  }
  for (const Edge& e : g.directed) {
    const auto [u, v] = std::minmax(e.from, e.to);
    status[static_cast<std::size_t>(u) * q + static_cast<std::size_t>(v)] = e.from < e.to ? 2 : 3;
  }
  return status;
}

}  // namespace

int shd(const Cpdag& a, const Cpdag& b) {
  if (a.q != b.q) throw InputError("SHD needs graphs on the same node set");
  const auto sa = pair_status(a);
  const auto sb = pair_status(b);
  int d = 0;
  for (std::size_t i = 0; i < sa.size(); ++i) d += sa[i] != sb[i] ? 1 : 0;
  return d;
}

SenSpe sen_spe(std::span<const Edge> estimate, std::span<const Edge> truth, int q) {
  const auto n = static_cast<std::size_t>(q);
  std::vector<std::uint8_t> est(n * n, 0), tru(n * n, 0);
  const auto mark = [&](std::span<const Edge> edges, std::vector<std::uint8_t>& m) {
    for (const Edge& e : edges) {
      if (e.from < 0 || e.to < 0 || e.from >= q || e.to >= q) throw InputError("edge outside the node set");
      m[static_cast<std::size_t>(e.from) * n + static_cast<std::size_t>(e.to)] = 1;
    }
  };
  mark(estimate, est);
  mark(truth, tru);
  double tp = 0, fn = 0, tn = 0, fp = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      const bool e = est[u * n + v] != 0;
      const bool t = tru[u * n + v] != 0;
      if (t) {
        (e ? tp : fn) += 1;
      } else {
        (e ? fp : tn) += 1;
      }
    }
  }
  SenSpe out;
  if (tp + fn > 0) out.sen = tp / (tp + fn);
  else out.sen_undefined = true;
  if (tn + fp > 0) out.spe = tn / (tn + fp);
  else out.spe_undefined = true;
  return out;
}

SenSpe sen_spe(const Dag& estimate, const Dag& truth) {
  if (estimate.num_nodes() != truth.num_nodes()) throw InputError("SEN/SPE need graphs on the same node set");
  const auto e = estimate.edges();
  const auto t = truth.edges();
  return sen_spe(e, t, truth.num_nodes());
}

SenSpe sen_spe(const Cpdag& estimate, const Cpdag& truth) {
  if (estimate.q != truth.q) throw InputError("SEN/SPE need graphs on the same node set");
  const auto both_ways = [](const Cpdag& c) {
    std::vector<Edge> out = c.directed;
    for (const Edge& e : c.undirected) {
      out.push_back(e);
      out.push_back({e.to, e.from});
    }
    return out;
  };
  const auto e = both_ways(estimate);
  const auto t = both_ways(truth);
  return sen_spe(e, t, truth.q);
}

double abs_error(double true_effect, double estimate) { return std::abs(true_effect - estimate); }

void write_ppi_csv(std::ostream& out, const PpiMatrix& ppi, const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) != ppi.q) throw std::invalid_argument("write_ppi_csv: name count mismatch");
  const auto old_precision = out.precision(17);
  out << "parent";
  for (const auto& name : names) out << ',' << name;
  out << '\n';
  for (int u = 0; u < ppi.q; ++u) {
    out << names[static_cast<std::size_t>(u)];
    for (int v = 0; v < ppi.q; ++v) out << ',' << ppi(u, v);
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace catdag
