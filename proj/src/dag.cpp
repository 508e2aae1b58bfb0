#include "catdag/dag.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "catdag/errors.hpp"

namespace catdag {

namespace {

// Reachability matrix: reach[a*q+b] != 0 iff a directed path a ~> b of length >= 1 exists.
std::vector<std::uint8_t> reachability(const Dag& dag) {
  const int q = dag.num_nodes();
  std::vector<std::vector<int>> children(static_cast<std::size_t>(q));
  for (int v = 0; v < q; ++v) {
    for (int u : dag.parents(v)) children[static_cast<std::size_t>(u)].push_back(v);
  }
  std::vector<std::uint8_t> reach(static_cast<std::size_t>(q) * static_cast<std::size_t>(q), 0);
  std::vector<int> stack;
  for (int s = 0; s < q; ++s) {
    std::uint8_t* row = &reach[static_cast<std::size_t>(s) * static_cast<std::size_t>(q)];
    stack.assign(children[static_cast<std::size_t>(s)].begin(),
                 children[static_cast<std::size_t>(s)].end());
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      if (row[x]) continue;
      row[x] = 1;
      for (int c : children[static_cast<std::size_t>(x)]) {
        if (!row[c]) stack.push_back(c);
      }
    }
  }
  return reach;
}

// A reversal of u -> v is valid iff no other directed path u ~> v exists.
bool reversal_ok(const Dag& dag, const std::vector<std::uint8_t>& reach, int u, int v) {
  const int q = dag.num_nodes();
  for (int c : dag.children(u)) {
    if (c == v) continue;
    if (reach[static_cast<std::size_t>(c) * static_cast<std::size_t>(q) + static_cast<std::size_t>(v)]) {
      return false;
    }
  }
  return true;
}

}  // namespace

Dag::Dag(int q) : q_(q) {
  if (q < 0) throw std::invalid_argument("Dag: negative node count");
  adj_.assign(static_cast<std::size_t>(q) * static_cast<std::size_t>(q), 0);
  parents_.resize(static_cast<std::size_t>(q));
}

void Dag::check_node(int v) const {
  if (v < 0 || v >= q_) {
    throw InputError("node index " + std::to_string(v) + " out of range for q=" + std::to_string(q_));
  }
}

Dag Dag::from_edges(int q, std::span<const Edge> edges) {
  if (!is_acyclic(edges, q)) throw InputError("edge list contains a directed cycle");
  Dag dag(q);
  for (const Edge& e : edges) {
    if (e.from == e.to) throw InputError("self loop on node " + std::to_string(e.from + 1));
    if (dag.adjacent(e.from, e.to)) {
      throw InputError("duplicate or antiparallel edge " + std::to_string(e.from + 1) + " " +
                       std::to_string(e.to + 1));
    }
    dag.adj_[dag.index(e.from, e.to)] = 1;
    dag.parents_[static_cast<std::size_t>(e.to)].push_back(e.from);
    ++dag.num_edges_;
  }
  for (auto& p : dag.parents_) std::sort(p.begin(), p.end());
  return dag;
}

const std::vector<int>& Dag::parents(int v) const {
  check_node(v);
  return parents_[static_cast<std::size_t>(v)];
}

std::vector<int> Dag::children(int v) const {
  check_node(v);
  std::vector<int> out;
  for (int w = 0; w < q_; ++w) {
    if (adj_[index(v, w)]) out.push_back(w);
  }
  return out;
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (int u = 0; u < q_; ++u) {
    for (int v = 0; v < q_; ++v) {
      if (adj_[index(u, v)]) out.push_back({u, v});
    }
  }
  return out;
}

bool Dag::has_path(int from, int to) const {
  check_node(from);
  check_node(to);
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(q_), 0);
  std::vector<int> stack{from};
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int w = 0; w < q_; ++w) {
      if (!adj_[index(x, w)] || seen[static_cast<std::size_t>(w)]) continue;
      if (w == to) return true;
      seen[static_cast<std::size_t>(w)] = 1;
      stack.push_back(w);
    }
  }
  return false;
}

std::vector<int> Dag::ancestral_closure(std::span<const int> nodes) const {
  std::vector<std::uint8_t> in(static_cast<std::size_t>(q_), 0);
  std::vector<int> stack;
  for (int v : nodes) {
    check_node(v);
    if (!in[static_cast<std::size_t>(v)]) {
      in[static_cast<std::size_t>(v)] = 1;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int p : parents_[static_cast<std::size_t>(x)]) {
      if (!in[static_cast<std::size_t>(p)]) {
        in[static_cast<std::size_t>(p)] = 1;
        stack.push_back(p);
      }
    }
  }
  std::vector<int> out;
  for (int v = 0; v < q_; ++v) {
    if (in[static_cast<std::size_t>(v)]) out.push_back(v);
  }
  return out;
}

std::vector<int> Dag::topological_order() const {
  std::vector<int> indeg(static_cast<std::size_t>(q_));
  for (int v = 0; v < q_; ++v) indeg[static_cast<std::size_t>(v)] = static_cast<int>(parents_[static_cast<std::size_t>(v)].size());
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(q_));
  // Smallest ready index first, so the order is canonical.
  std::vector<std::uint8_t> done(static_cast<std::size_t>(q_), 0);
  while (static_cast<int>(order.size()) < q_) {
    int next = -1;
    for (int v = 0; v < q_; ++v) {
      if (!done[static_cast<std::size_t>(v)] && indeg[static_cast<std::size_t>(v)] == 0) {
        next = v;
        break;
      }
    }
    if (next < 0) throw std::logic_error("topological_order: graph is cyclic");
    done[static_cast<std::size_t>(next)] = 1;
    order.push_back(next);
    for (int w = 0; w < q_; ++w) {
      if (adj_[index(next, w)]) --indeg[static_cast<std::size_t>(w)];
    }
  }
  return order;
}

Dag add_edge_unchecked(const Dag& dag, int u, int v) {
  Dag out = dag;
  out.adj_[out.index(u, v)] = 1;
  auto& p = out.parents_[static_cast<std::size_t>(v)];
  p.insert(std::lower_bound(p.begin(), p.end(), u), u);
  ++out.num_edges_;
  return out;
}

Dag remove_edge_unchecked(const Dag& dag, int u, int v) {
  Dag out = dag;
  out.adj_[out.index(u, v)] = 0;
  auto& p = out.parents_[static_cast<std::size_t>(v)];
  p.erase(std::lower_bound(p.begin(), p.end(), u));
  --out.num_edges_;
  return out;
}

bool is_acyclic(std::span<const Edge> edges, int q) {
  if (q < 0) throw InputError("negative node count");
  std::vector<std::vector<int>> out(static_cast<std::size_t>(q));
  std::vector<int> indeg(static_cast<std::size_t>(q), 0);
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= q || e.to < 0 || e.to >= q) {
      throw InputError("edge (" + std::to_string(e.from + 1) + ", " + std::to_string(e.to + 1) +
                       ") has a node index outside 1.." + std::to_string(q));
    }
    out[static_cast<std::size_t>(e.from)].push_back(e.to);
    ++indeg[static_cast<std::size_t>(e.to)];
  }
  std::vector<int> ready;
  for (int v = 0; v < q; ++v) {
    if (indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
  }
  int visited = 0;
  while (!ready.empty()) {
    const int x = ready.back();
    ready.pop_back();
    ++visited;
    for (int w : out[static_cast<std::size_t>(x)]) {
      if (--indeg[static_cast<std::size_t>(w)] == 0) ready.push_back(w);
    }
  }
  return visited == q;
}

std::string to_string(const Operator& op) {
  static constexpr const char* kNames[] = {"Insert", "Delete", "Reverse"};
  return std::string(kNames[static_cast<int>(op.kind)]) + " " + std::to_string(op.from + 1) + "->" +
         std::to_string(op.to + 1);
}

std::vector<Operator> valid_operators(const Dag& dag) {
  const int q = dag.num_nodes();
  const auto reach = reachability(dag);
  std::vector<Operator> ops;
  for (int u = 0; u < q; ++u) {
    for (int v = 0; v < q; ++v) {
      if (u == v || dag.adjacent(u, v)) continue;
      if (!reach[static_cast<std::size_t>(v) * static_cast<std::size_t>(q) + static_cast<std::size_t>(u)]) {
        ops.push_back({OperatorKind::kInsert, u, v});
      }
    }
  }
  const auto edges = dag.edges();
  for (const Edge& e : edges) ops.push_back({OperatorKind::kDelete, e.from, e.to});
  for (const Edge& e : edges) {
    if (reversal_ok(dag, reach, e.from, e.to)) ops.push_back({OperatorKind::kReverse, e.from, e.to});
  }
  return ops;
}

std::size_t count_valid_operators(const Dag& dag) {
  const int q = dag.num_nodes();
  const auto reach = reachability(dag);
  std::size_t count = dag.num_edges();
  for (int u = 0; u < q; ++u) {
    for (int v = 0; v < q; ++v) {
      if (u == v) continue;
      if (dag.has_edge(u, v)) {
        if (reversal_ok(dag, reach, u, v)) ++count;
      } else if (!dag.has_edge(v, u) &&
                 !reach[static_cast<std::size_t>(v) * static_cast<std::size_t>(q) + static_cast<std::size_t>(u)]) {
        ++count;
      }
    }
  }
  return count;
}

bool is_valid_operator(const Dag& dag, const Operator& op) {
  const int q = dag.num_nodes();
  if (op.from < 0 || op.from >= q || op.to < 0 || op.to >= q || op.from == op.to) return false;
  switch (op.kind) {
    case OperatorKind::kInsert:
      return !dag.adjacent(op.from, op.to) && !dag.has_path(op.to, op.from);
    case OperatorKind::kDelete:
      return dag.has_edge(op.from, op.to);
    case OperatorKind::kReverse: {
      if (!dag.has_edge(op.from, op.to)) return false;
      const Dag without = remove_edge_unchecked(dag, op.from, op.to);
      return !without.has_path(op.from, op.to);
    }
  }
  return false;
}

Dag apply_operator(const Dag& dag, const Operator& op) {
  if (!is_valid_operator(dag, op)) throw std::logic_error("invalid operator: " + to_string(op));
  switch (op.kind) {
    case OperatorKind::kInsert:
      return add_edge_unchecked(dag, op.from, op.to);
    case OperatorKind::kDelete:
      return remove_edge_unchecked(dag, op.from, op.to);
    case OperatorKind::kReverse:
      return add_edge_unchecked(remove_edge_unchecked(dag, op.from, op.to), op.to, op.from);
  }
  throw std::logic_error("unknown operator kind");
}

std::vector<int> affected_nodes(const Operator& op) {
  if (op.kind == OperatorKind::kReverse) {
    return {std::min(op.from, op.to), std::max(op.from, op.to)};
  }
  return {op.to};
}

std::vector<VStructure> v_structures(const Dag& dag) {
  std::vector<VStructure> out;
  for (int c = 0; c < dag.num_nodes(); ++c) {
    const auto& pa = dag.parents(c);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      for (std::size_t j = i + 1; j < pa.size(); ++j) {
        if (!dag.adjacent(pa[i], pa[j])) out.push_back({pa[i], pa[j], c});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Cpdag to_cpdag(const Dag& dag) {
  const int q = dag.num_nodes();
  const auto at = [q](int u, int v) {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(q) + static_cast<std::size_t>(v);
  };
  // dir[u,v]: u -> v oriented; und[u,v] == und[v,u]: undirected u -- v.
  std::vector<std::uint8_t> dir(static_cast<std::size_t>(q) * static_cast<std::size_t>(q), 0);
  std::vector<std::uint8_t> und(dir.size(), 0);
  for (const Edge& e : dag.edges()) {
    und[at(e.from, e.to)] = 1;
    und[at(e.to, e.from)] = 1;
  }
  const auto orient = [&](int u, int v) {
    und[at(u, v)] = 0;
    und[at(v, u)] = 0;
    dir[at(u, v)] = 1;
  };
  for (const VStructure& s : v_structures(dag)) {
    orient(s.a, s.collider);
    orient(s.b, s.collider);
  }
  const auto adjacent = [&](int u, int v) { return dag.adjacent(u, v); };

  // Orientation closure (Meek rules 1-3; rule 4 cannot fire from a DAG pattern).
  bool changed = true;
  while (changed) {
    changed = false;
    for (int b = 0; b < q; ++b) {
      for (int c = 0; c < q; ++c) {
        if (!und[at(b, c)]) continue;
        bool fire = false;
        // R1: a -> b -- c, a and c nonadjacent.
        for (int a = 0; a < q && !fire; ++a) {
          if (dir[at(a, b)] && a != c && !adjacent(a, c)) fire = true;
        }
        // R2: b -> a -> c with b -- c.
        for (int a = 0; a < q && !fire; ++a) {
          if (dir[at(b, a)] && dir[at(a, c)]) fire = true;
        }
        // R3: b -- x -> c, b -- y -> c, x and y nonadjacent, b -- c.
        for (int x = 0; x < q && !fire; ++x) {
          if (!und[at(b, x)] || !dir[at(x, c)]) continue;
          for (int y = x + 1; y < q && !fire; ++y) {
            if (und[at(b, y)] && dir[at(y, c)] && !adjacent(x, y)) fire = true;
          }
        }
        if (fire) {
          orient(b, c);
          changed = true;
        }
      }
    }
  }

  Cpdag out;
  out.q = q;
  for (int u = 0; u < q; ++u) {
    for (int v = 0; v < q; ++v) {
      if (dir[at(u, v)]) out.directed.push_back({u, v});
      if (u < v && und[at(u, v)]) out.undirected.push_back({u, v});
    }
  }
  return out;
}

void write_edge_list(std::ostream& out, std::span<const Edge> edges) {
  for (const Edge& e : edges) out << (e.from + 1) << ' ' << (e.to + 1) << '\n';
}

namespace {

int parse_node(const std::string& token, int q, int line_no) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || token.empty()) {
    throw InputError("edge list line " + std::to_string(line_no) + ": bad node '" + token + "'");
  }
  if (value < 1 || value > q) {
    throw InputError("edge list line " + std::to_string(line_no) + ": node " + token +
                     " outside 1.." + std::to_string(q));
  }
  return value - 1;
}

}  // namespace

std::vector<Edge> read_edge_list(std::istream& in, int q) {
  std::vector<Edge> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b) || (ls >> extra)) {
      throw InputError("edge list line " + std::to_string(line_no) + ": expected 'u v'");
    }
    edges.push_back({parse_node(a, q, line_no), parse_node(b, q, line_no)});
  }
  return edges;
}

void write_cpdag(std::ostream& out, const Cpdag& cpdag) {
  for (const Edge& e : cpdag.directed) out << (e.from + 1) << " -> " << (e.to + 1) << '\n';
  for (const Edge& e : cpdag.undirected) out << (e.from + 1) << " -- " << (e.to + 1) << '\n';
}

Cpdag read_cpdag(std::istream& in, int q) {
  Cpdag out;
  out.q = q;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, mark, b;
    if (!(ls >> a)) continue;
    if (!(ls >> mark >> b) || (mark != "->" && mark != "--")) {
      throw InputError("cpdag line " + std::to_string(line_no) + ": expected 'u -> v' or 'u -- v'");
    }
    const int u = parse_node(a, q, line_no);
    const int v = parse_node(b, q, line_no);
    if (mark == "->") {
      out.directed.push_back({u, v});
    } else {
      out.undirected.push_back({std::min(u, v), std::max(u, v)});
    }
  }
  std::sort(out.directed.begin(), out.directed.end());
  std::sort(out.undirected.begin(), out.undirected.end());
  return out;
}

}  // namespace catdag
