// Copyright 2026 The isomortar Authors
// SPDX-License-Identifier: Apache-2.0

#include "isomortar/gauge.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <deque>
#include <numeric>
#include <ostream>

namespace isomortar {

ControlGraph build_control_graph(const EdgeSpace& space, const DofConstraints& bc) {
  if (static_cast<int>(bc.constrained.size()) != space.num_dofs() ||
      static_cast<int>(bc.dirichlet_vertex.size()) != space.num_vertices())
    throw InternalError("boundary data does not match the edge space");
  ControlGraph g;
  g.num_vertices = space.num_vertices();
  g.edges.reserve(space.num_dofs());
  for (int e = 0; e < space.num_dofs(); ++e) {
    g.edges.push_back(space.edge_vertices(e));
    g.forward.push_back(space.edge_forward(e));
    g.direction.push_back(space.edge_direction(e));
  }
  g.constrained_edge = bc.constrained;
  g.dirichlet_vertex = bc.dirichlet_vertex;
  g.annular = space.model().annular;
  std::vector<char> touched(g.num_vertices, 0);
  for (const auto& e : g.edges) touched[e[0]] = touched[e[1]] = 1;
  for (int v = 0; v < g.num_vertices; ++v)
    if (!touched[v]) throw TopologyError("control vertex " + std::to_string(v) + " has no edges");
  return g;
}

TreeCotreeSplit build_tree(const ControlGraph& g, const TreeOptions& options) {
  const int nv = g.num_vertices;
  const int ne = g.num_edges();

  // node of each vertex: itself, or the lowest vertex of its Dirichlet set
  std::vector<int> node(nv);
  std::iota(node.begin(), node.end(), 0);
  auto find = [&](int v) {
    while (node[v] != v) v = node[v] = node[node[v]];
    return v;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) node[std::max(a, b)] = std::min(a, b);
  };
  int first_dirichlet = -1;
  for (int v = 0; v < nv; ++v)
    if (g.dirichlet_vertex[v]) {
      if (first_dirichlet < 0) first_dirichlet = v;
      if (options.merge_dirichlet_components) unite(first_dirichlet, v);
    }
  if (!options.merge_dirichlet_components)
    for (int e = 0; e < ne; ++e)
      if (g.dirichlet_vertex[g.edges[e][0]] && g.dirichlet_vertex[g.edges[e][1]] &&
          g.constrained_edge[e])
        unite(g.edges[e][0], g.edges[e][1]);
  for (int v = 0; v < nv; ++v) node[v] = find(v);

  std::vector<std::vector<int>> adj(nv);
  for (int e = 0; e < ne; ++e) {
    if (g.constrained_edge[e]) continue;
    const int a = node[g.edges[e][0]], b = node[g.edges[e][1]];
    if (a == b) continue;
    adj[a].push_back(e);
    adj[b].push_back(e);
  }
  for (auto& l : adj)
    std::sort(l.begin(), l.end(), [&](int x, int y) {
      return std::pair(g.direction[x], x) < std::pair(g.direction[y], y);
    });

  TreeCotreeSplit s;
  s.num_dofs = ne;
  std::vector<char> in_tree(ne, 0), visited(nv, 0);
  std::vector<int> component(nv, -1);
  std::vector<char> component_dirichlet;

  auto other = [&](int e, int n) {
    const int a = node[g.edges[e][0]];
    return a == n ? node[g.edges[e][1]] : a;
  };
  auto take = [&](int e, int to, int root) {
    in_tree[e] = 1;
    if (g.dirichlet_vertex[to] && to != root) s.generators.push_back(e);
  };

  auto grow = [&](int root) {
    const int c = s.num_components++;
    component_dirichlet.push_back(g.dirichlet_vertex[root]);
    visited[root] = 1;
    component[root] = c;
    if (options.order == TreeOrder::BreadthFirst) {
      std::deque<int> queue{root};
      while (!queue.empty()) {
        const int n = queue.front();
        queue.pop_front();
        for (int e : adj[n]) {
          const int m = other(e, n);
          if (visited[m]) continue;
          visited[m] = 1;
          component[m] = c;
          if (g.dirichlet_vertex[m]) component_dirichlet[c] = 1;
          take(e, m, root);
          queue.push_back(m);
        }
      }
    } else {
      std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
      while (!stack.empty()) {
        auto& [n, next] = stack.back();
        if (next == adj[n].size()) {
          stack.pop_back();
          continue;
        }
        const int e = adj[n][next++];
        const int m = other(e, n);
        if (visited[m]) continue;
        visited[m] = 1;
        component[m] = c;
        if (g.dirichlet_vertex[m]) component_dirichlet[c] = 1;
        take(e, m, root);
        stack.emplace_back(m, 0);
      }
    }
  };

  if (first_dirichlet >= 0) grow(node[first_dirichlet]);
  for (int v = 0; v < nv; ++v)
    if (node[v] == v && g.dirichlet_vertex[v] && !visited[v]) grow(v);
  for (int v = 0; v < nv; ++v)
    if (node[v] == v && !visited[v]) grow(v);

  if (options.ring_generators && g.annular) {
    std::vector<int> theta_out(nv, -1);
    for (int e = 0; e < ne; ++e)
      if (g.direction[e] == 1 && !g.constrained_edge[e]) theta_out[g.forward[e][0]] = e;
    std::vector<char> done(s.num_components, 0);
    for (int v = 0; v < nv; ++v) {
      const int c = component[node[v]];
      if (done[c] || component_dirichlet[c]) continue;
      done[c] = 1;
      std::vector<int> ring;
      int cur = v;
      for (int step = 0; step <= nv; ++step) {
        const int e = theta_out[cur];
        if (e < 0) break;
        ring.push_back(e);
        cur = g.forward[e][1];
        if (cur == v) break;
      }
      if (ring.empty() || cur != v) continue;
      for (int e : ring)
        if (!in_tree[e]) {
          in_tree[e] = 1;
          s.generators.push_back(e);
          break;
        }
    }
  }

  std::sort(s.generators.begin(), s.generators.end());
  s.cotree_index.assign(ne, -1);
  for (int e = 0; e < ne; ++e) {
    if (g.constrained_edge[e]) continue;
    if (in_tree[e]) {
      s.tree.push_back(e);
    } else {
      s.cotree_index[e] = s.num_cotree();
      s.cotree.push_back(e);
    }
  }
  return s;
}

SparseMatrix TreeCotreeSplit::selection() const {
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < num_cotree(); ++i) t.emplace_back(cotree[i], i, 1.0);
  SparseMatrix p(num_dofs, num_cotree());
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

SparseMatrix reduce_matrix(const SparseMatrix& k, const TreeCotreeSplit& split) {
  if (k.rows() != split.num_dofs || k.cols() != split.num_dofs)
    throw InternalError("stiffness size does not match the tree-cotree split");
  std::vector<Eigen::Triplet<double>> t;
  for (int r = 0; r < k.outerSize(); ++r) {
    const int rr = split.cotree_index[r];
    if (rr < 0) continue;
    for (SparseMatrix::InnerIterator it(k, r); it; ++it) {
      const int cc = split.cotree_index[it.col()];
      if (cc >= 0) t.emplace_back(rr, cc, it.value());
    }
  }
  SparseMatrix out(split.num_cotree(), split.num_cotree());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseMatrix reduce_columns(const SparseMatrix& b, const TreeCotreeSplit& split) {
  if (b.cols() != split.num_dofs) throw InternalError("coupling width does not match the split");
  std::vector<Eigen::Triplet<double>> t;
  for (int r = 0; r < b.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(b, r); it; ++it) {
      const int cc = split.cotree_index[it.col()];
      if (cc >= 0) t.emplace_back(r, cc, it.value());
    }
  SparseMatrix out(b.rows(), split.num_cotree());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

Eigen::VectorXd reduce_vector(const Eigen::VectorXd& f, const TreeCotreeSplit& split) {
  if (f.size() != split.num_dofs) throw InternalError("vector size does not match the split");
  Eigen::VectorXd out(split.num_cotree());
  for (int i = 0; i < split.num_cotree(); ++i) out[i] = f[split.cotree[i]];
  return out;
}

Eigen::VectorXd expand(const Eigen::VectorXd& reduced, const TreeCotreeSplit& split) {
  if (reduced.size() != split.num_cotree())
    throw InternalError("reduced vector size does not match the cotree");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(split.num_dofs);
  for (int i = 0; i < split.num_cotree(); ++i) out[split.cotree[i]] = reduced[i];
  return out;
}

int numerical_kernel_dimension(const SparseMatrix& k, double rel_tol) {
  if (k.rows() == 0) return 0;
  const Eigen::MatrixXd dense = Eigen::MatrixXd(k);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  int count = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i]) <= rel_tol * scale) ++count;
  return count;
}

void check_nonsingular(const SparseMatrix& k, double pivot_tol) {
  if (k.rows() == 0) return;
  const Eigen::SparseMatrix<double> kc = k;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(kc);
  const double scale = kc.diagonal().cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success) throw GaugeError("stiffness factorization failed", -1);
  const auto d = ldlt.vectorD();
  int small = 0;
  for (int i = 0; i < d.size(); ++i)
    if (!(d[i] > pivot_tol * scale)) ++small;
  if (small > 0)
    throw GaugeError("reduced stiffness has " + std::to_string(small) +
                         " near-zero pivots; the gauge left a kernel",
                     small);
}

void write_split(std::ostream& out, const TreeCotreeSplit& split) {
  out << "# components " << split.num_components << "\n# tree " << split.tree.size() << "\n";
  for (int e : split.tree) out << e << '\n';
  out << "# generators " << split.generators.size() << '\n';
  for (int e : split.generators) out << e << '\n';
  out << "# cotree " << split.cotree.size() << '\n';
  for (int e : split.cotree) out << e << '\n';
}

SparseMatrix multiplier_gauge_basis(const TraceSpace& trace) {
  const int nt = trace.num_theta_vertices();
  const int nz = trace.num_z_vertices();
  const int cols = nt * nz;
  std::vector<Eigen::Triplet<double>> t;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < nt; ++j) {
      const int v = j + nt * k;
      if (v == 0) continue;
      const int c = v - 1;
      t.emplace_back(trace.theta_edge(j, k), c, -1.0);
      t.emplace_back(trace.theta_edge((j + nt - 1) % nt, k), c, 1.0);
      if (k + 1 < nz) t.emplace_back(trace.z_edge(j, k), c, -1.0);
      if (k > 0) t.emplace_back(trace.z_edge(j, k - 1), c, 1.0);
    }
  for (int k = 0; k < nz; ++k) t.emplace_back(trace.theta_edge(nt - 1, k), cols - 1, 1.0);
  SparseMatrix m(trace.num_dofs(), cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace isomortar
