#include "dmd/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dmd/kernels.hpp"

namespace dmd {

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 1) throw std::invalid_argument("graph needs at least one node");
  std::set<std::pair<int, int>> seen;
  for (auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw std::invalid_argument("edge index out of range: " + std::to_string(a) + " " + std::to_string(b));
    if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second)
      throw std::invalid_argument("duplicate edge " + std::to_string(a) + " " + std::to_string(b));
  }
  std::sort(edges.begin(), edges.end());
  return Graph(n, std::move(edges));
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(n_, 0);
  for (const auto& [a, b] : edges_) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

bool Graph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(i, j));
}

bool Graph::connected() const {
  // union-find
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int components = n_;
  for (const auto& [a, b] : edges_) {
    int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components == 1;
}

Graph build_grid_graph(int rows, int cols) {
  if (rows < 1 || cols < 1 || rows * cols < 2)
    throw std::invalid_argument("grid graph needs rows, cols >= 1 and at least two nodes");
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int v = r * cols + c;
      if (c + 1 < cols) edges.emplace_back(v, v + 1);
      if (r + 1 < rows) edges.emplace_back(v, v + cols);
    }
  }
  return Graph::from_edges(rows * cols, std::move(edges));
}

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph::from_edges(n, std::move(edges));
}

Graph random_connected_graph(int n, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random graph needs n >= 1");
  if (!(edge_prob > 0.0) || edge_prob > 1.0) throw std::invalid_argument("edge probability must be in (0, 1]");
  Rng rng(seed);
  std::bernoulli_distribution coin(edge_prob);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(rng)) edges.emplace_back(i, j);
    Graph g = Graph::from_edges(n, std::move(edges));
    if (g.connected()) return g;
  }
  throw std::runtime_error("could not sample a connected graph; edge probability too small");
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << "n " << g.size() << "\n";
  for (const auto& [a, b] : g.edges()) out << a << " " << b << "\n";
  return out.str();
}

Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tag;
  int n = 0;
  if (!(in >> tag >> n) || tag != "n") throw std::invalid_argument("edge list must start with 'n <count>'");
  std::vector<std::pair<int, int>> edges;
  int a = 0, b = 0;
  while (in >> a) {
    if (!(in >> b)) throw std::invalid_argument("edge list has a dangling index");
    edges.emplace_back(a, b);
  }
  if (!in.eof()) throw std::invalid_argument("edge list contains a non-integer token");
  return Graph::from_edges(n, std::move(edges));
}

WeightMatrix::WeightMatrix(Mat w) : w_(std::move(w)) {
  const auto n = w_.rows();
  if (n < 1 || w_.cols() != n) throw std::invalid_argument("weight matrix must be square and non-empty");
  if (!w_.allFinite()) throw std::invalid_argument("weight matrix has non-finite entries");
  if (w_.minCoeff() < 0.0 || w_.maxCoeff() > 1.0) throw std::invalid_argument("weight entries must lie in [0, 1]");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(w_(i, i) > 0.0)) throw std::invalid_argument("weight matrix diagonal must be positive");
    if (std::abs(w_.row(i).sum() - 1.0) > kTolerance) throw std::invalid_argument("weight matrix row does not sum to 1");
    if (std::abs(w_.col(i).sum() - 1.0) > kTolerance) throw std::invalid_argument("weight matrix column does not sum to 1");
  }
}

WeightMatrix::WeightMatrix(Mat w, const Graph& support) : WeightMatrix(std::move(w)) {
  if (support.size() != size()) throw std::invalid_argument("weight matrix and graph sizes differ");
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (i != j && w_(i, j) > 0.0 && !support.has_edge(i, j))
        throw std::invalid_argument("positive weight on a non-edge");
}

WeightMatrix metropolis_weights(const Graph& g) {
  if (!g.connected()) throw std::invalid_argument("metropolis weights require a connected graph");
  const int n = g.size();
  const auto deg = g.degrees();
  Mat w = Mat::Zero(n, n);
  for (const auto& [a, b] : g.edges()) {
    double v = 1.0 / (1.0 + std::max(deg[a], deg[b]));
    w(a, b) = v;
    w(b, a) = v;
  }
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) off += w(i, j);
    w(i, i) = 1.0 - off;
  }
  return WeightMatrix(std::move(w), g);
}

WeightMatrix uniform_complete_weights(int n) {
  if (n < 1) throw std::invalid_argument("complete weights need n >= 1");
  return WeightMatrix(Mat::Constant(n, n, 1.0 / n));
}

SpectralInfo second_singular_value(const WeightMatrix& w) {
  if (w.size() == 1) return {0.0, 1.0};
  Eigen::JacobiSVD<Mat> svd(w.matrix());
  if (svd.info() != Eigen::Success) throw std::runtime_error("singular value decomposition did not converge");
  const Vec& s = svd.singularValues();  // sorted descending
  double sigma2 = std::clamp(s(1), 0.0, 1.0);
  // rank-deficient matrices leave round-off in trailing singular values
  if (sigma2 < 1e-13) sigma2 = 0.0;
  return {sigma2, 1.0 - sigma2};
}

Mat mix(const WeightMatrix& w, const Mat& states, Exec exec) {
  if (states.rows() != w.size()) throw std::invalid_argument("mix: state count does not match weight matrix");
  Mat out(states.rows(), states.cols());
  if (exec == Exec::parallel)
    kernels::mix_parallel(w.matrix(), states, out);
  else
    kernels::mix_serial(w.matrix(), states, out);
  return out;
}

}  // namespace dmd
