#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace catdag {

/// Directed edge `from -> to` between 0-based node indices.
struct Edge {
  int from = 0;
  int to = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Labeled DAG on q nodes. Stored both as an adjacency bitmap and as sorted
/// per-node parent lists. Values are immutable once built; mutation goes
/// through apply_operator which returns a new Dag.
class Dag {
 public:
  explicit Dag(int q = 0);

  /// Builds a DAG from an edge list. Throws InputError on out-of-range
  /// indices, self loops, duplicate/antiparallel pairs or directed cycles.
  static Dag from_edges(int q, std::span<const Edge> edges);

  int num_nodes() const { return q_; }
  std::size_t num_edges() const { return num_edges_; }
  bool has_edge(int u, int v) const { return adj_[index(u, v)] != 0; }
  bool adjacent(int u, int v) const { return has_edge(u, v) || has_edge(v, u); }

  /// Parents of v in increasing index order.
  const std::vector<int>& parents(int v) const;
  std::vector<int> children(int v) const;

  /// All edges sorted by (from, to).
  std::vector<Edge> edges() const;

  /// True iff a directed path from -> ... -> to exists (length >= 1).
  bool has_path(int from, int to) const;

  /// Ancestors of the given nodes, the nodes themselves included, sorted.
  std::vector<int> ancestral_closure(std::span<const int> nodes) const;

  std::vector<int> topological_order() const;

  friend bool operator==(const Dag& a, const Dag& b) {
    return a.q_ == b.q_ && a.adj_ == b.adj_;
  }

 private:
  friend Dag add_edge_unchecked(const Dag&, int, int);
  friend Dag remove_edge_unchecked(const Dag&, int, int);

  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(q_) + static_cast<std::size_t>(v);
  }
  void check_node(int v) const;

  int q_ = 0;
  std::size_t num_edges_ = 0;
  std::vector<std::uint8_t> adj_;
  std::vector<std::vector<int>> parents_;
};

/// True iff the directed graph admits a topological order. Throws InputError
/// for out-of-range indices.
bool is_acyclic(std::span<const Edge> edges, int q);

enum class OperatorKind { kInsert = 0, kDelete = 1, kReverse = 2 };

struct Operator {
  OperatorKind kind = OperatorKind::kInsert;
  int from = 0;
  int to = 0;

  auto operator<=>(const Operator&) const = default;
};

std::string to_string(const Operator& op);

/// Every Insert/Delete/Reverse whose result is a DAG, ordered by
/// (kind, from, to) with Insert < Delete < Reverse.
std::vector<Operator> valid_operators(const Dag& dag);

/// |valid_operators(dag)| without materializing the list.
std::size_t count_valid_operators(const Dag& dag);

bool is_valid_operator(const Dag& dag, const Operator& op);

/// Throws std::logic_error when op is not valid on dag.
Dag apply_operator(const Dag& dag, const Operator& op);

/// Nodes whose parent set changes under op: {to} for Insert/Delete,
/// {from, to} (sorted) for Reverse.
std::vector<int> affected_nodes(const Operator& op);

/// Completed partially directed graph of a Markov equivalence class.
/// Undirected edges are stored with from < to.
struct Cpdag {
  int q = 0;
  std::vector<Edge> directed;
  std::vector<Edge> undirected;

  friend bool operator==(const Cpdag&, const Cpdag&) = default;
};

Cpdag to_cpdag(const Dag& dag);

/// Unshielded colliders a -> c <- b, reported with a < b.
struct VStructure {
  int a = 0;
  int b = 0;
  int collider = 0;

  auto operator<=>(const VStructure&) const = default;
};
std::vector<VStructure> v_structures(const Dag& dag);

// Edge-list text format: one `u v` pair per line, 1-based. CPDAGs use
// `u -> v` and `u -- v`. Blank lines and lines starting with '#' are skipped.
void write_edge_list(std::ostream& out, std::span<const Edge> edges);
std::vector<Edge> read_edge_list(std::istream& in, int q);
void write_cpdag(std::ostream& out, const Cpdag& cpdag);
Cpdag read_cpdag(std::istream& in, int q);

}  // namespace catdag
