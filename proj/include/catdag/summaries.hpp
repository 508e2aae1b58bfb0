#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "catdag/dag.hpp"
#include "catdag/mcmc.hpp"

namespace catdag {

/// q x q edge-inclusion frequencies, row = parent, column = child.
struct PpiMatrix {
  int q = 0;
  std::vector<double> values;  // row-major

  PpiMatrix() = default;
  explicit PpiMatrix(int n) : q(n), values(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0) {}
  double operator()(int u, int v) const { return values[static_cast<std::size_t>(u * q + v)]; }
  double& operator()(int u, int v) { return values[static_cast<std::size_t>(u * q + v)]; }
};

/// Throws InputError on an empty trace.
PpiMatrix ppi(const Trace& trace);
PpiMatrix ppi(std::span<const Dag> dags);

/// Directed graph that need not be acyclic.
struct DirectedGraph {
  int q = 0;
  std::vector<Edge> edges;  // sorted
  bool cyclic = false;
};

/// Edges with ppi strictly above the threshold.
DirectedGraph mpm(const PpiMatrix& ppi, double threshold = 0.5);

/// Breaks cycles by repeatedly deleting the lowest-PPI edge of a cycle.
Dag repair_cycles(const DirectedGraph& graph, const PpiMatrix& ppi);

/// Most visited DAG; ties go to fewer edges, then to the lexicographically
/// smallest sorted edge list.
Dag map_dag(const Trace& trace);
Dag map_dag(std::span<const Dag> dags);

/// Number of node pairs whose status (absent, undirected, u->v, v->u) differs.
/// Throws InputError when q differs.
int shd(const Cpdag& a, const Cpdag& b);

struct SenSpe {
  double sen = 1.0;
  double spe = 1.0;
  /// Set when the corresponding denominator was zero and the value defaulted to 1.
  bool sen_undefined = false;
  bool spe_undefined = false;
};

/// Confusion counts over the q(q-1) ordered pairs of the 0-1 adjacency matrix.
SenSpe sen_spe(std::span<const Edge> estimate, std::span<const Edge> truth, int q);
SenSpe sen_spe(const Dag& estimate, const Dag& truth);
/// Same counts on CPDAG adjacency matrices: an undirected edge sets both entries.
SenSpe sen_spe(const Cpdag& estimate, const Cpdag& truth);

double abs_error(double true_effect, double estimate);

/// Dense CSV with a header row of names; 17 significant digits.
void write_ppi_csv(std::ostream& out, const PpiMatrix& ppi, const std::vector<std::string>& names);

}  // namespace catdag
