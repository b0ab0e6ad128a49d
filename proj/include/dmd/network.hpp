#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dmd/common.hpp"

namespace dmd {

// Undirected simple graph on nodes 0..n-1. Edges are stored with first < second.
class Graph {
 public:
  // Throws std::invalid_argument on self-loops, duplicates or out-of-range indices.
  // Connectivity is not required here; see connected().
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges);

  int size() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  std::vector<int> degrees() const;
  bool has_edge(int i, int j) const;
  bool connected() const;

 private:
  Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n), edges_(std::move(edges)) {}
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
};

Graph build_grid_graph(int rows, int cols);
Graph complete_graph(int n);
// Erdos-Renyi G(n, p) conditioned on connectivity by rejection.
Graph random_connected_graph(int n, double edge_prob, std::uint64_t seed);

// "n <count>" header followed by one "i j" line per edge.
std::string to_edge_list(const Graph& g);
Graph parse_edge_list(std::string_view text);

// Doubly-stochastic consensus weights with positive diagonal.
class WeightMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit WeightMatrix(Mat w);
  // Additionally requires w(i,j) > 0 only on edges of `support` or the diagonal.
  WeightMatrix(Mat w, const Graph& support);

  int size() const { return static_cast<int>(w_.rows()); }
  const Mat& matrix() const { return w_; }
  double operator()(int i, int j) const { return w_(i, j); }
  bool symmetric() const { return w_ == w_.transpose(); }

 private:
  Mat w_;
};

WeightMatrix metropolis_weights(const Graph& g);
WeightMatrix uniform_complete_weights(int n);

struct SpectralInfo {
  double sigma2 = 0.0;  // second largest singular value
  double gap = 1.0;     // 1 - sigma2
};

SpectralInfo second_singular_value(const WeightMatrix& w);

// Consensus step: row i of the result is sum_j w(i,j) * states.row(j).
Mat mix(const WeightMatrix& w, const Mat& states, Exec exec = Exec::serial);

}  // namespace dmd
