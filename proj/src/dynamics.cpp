#include "dmd/dynamics.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dmd/csv.hpp"

namespace dmd {

LinearDynamics::LinearDynamics(Mat a) : a_(std::move(a)) {
  if (a_.rows() < 1 || a_.rows() != a_.cols()) throw std::invalid_argument("dynamics matrix must be square and non-empty");
  if (!a_.allFinite()) throw std::invalid_argument("dynamics matrix has non-finite entries");
  Eigen::JacobiSVD<Mat> svd(a_);
  spectral_norm_ = svd.singularValues()(0);
}

LinearDynamics identity_dynamics(int dim, double scale) {
  return LinearDynamics(scale * Mat::Identity(dim, dim));
}

LinearDynamics ncv_dynamics(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("sampling interval must be positive");
  Mat a = Mat::Identity(4, 4);
  a(0, 1) = eps;
  a(2, 3) = eps;
  return LinearDynamics(std::move(a));
}

Mat ncv_noise_covariance(double eps, double sigma_v2) {
  if (!(eps > 0.0)) throw std::invalid_argument("sampling interval must be positive");
  if (!(sigma_v2 >= 0.0)) throw std::invalid_argument("sigma_v2 must be non-negative");
  Mat s = Mat::Zero(4, 4);
  for (int b = 0; b < 2; ++b) {
    const int o = 2 * b;
    s(o, o) = sigma_v2 * eps * eps * eps / 3.0;
    s(o, o + 1) = s(o + 1, o) = sigma_v2 * eps * eps / 2.0;
    s(o + 1, o + 1) = sigma_v2 * eps;
  }
  return s;
}

Mat ncv_noise_factor(double eps, double sigma_v2) {
  const Mat s = ncv_noise_covariance(eps, sigma_v2);
  Mat l = Mat::Zero(4, 4);
  if (sigma_v2 == 0.0) return l;
  for (int b = 0; b < 2; ++b) {
    const int o = 2 * b;
    const double l11 = std::sqrt(s(o, o));
    const double l21 = s(o + 1, o) / l11;
    l(o, o) = l11;
    l(o + 1, o) = l21;
    l(o + 1, o + 1) = std::sqrt(s(o + 1, o + 1) - l21 * l21);
  }
  return l;
}

NoiseModel NoiseModel::gaussian_ncv(double eps, double sigma_v2, std::uint64_t seed) {
  if (!(eps > 0.0)) throw std::invalid_argument("sampling interval must be positive");
  if (!(sigma_v2 >= 0.0)) throw std::invalid_argument("sigma_v2 must be non-negative");
  NoiseModel m;
  m.kind = NoiseKind::gaussian_ncv;
  m.eps = eps;
  m.sigma_v2 = sigma_v2;
  m.seed = seed;
  return m;
}

NoiseModel NoiseModel::constant_drift(Vec v) {
  NoiseModel m;
  m.kind = NoiseKind::constant_drift;
  m.drift = std::move(v);
  return m;
}

NoiseModel NoiseModel::custom(std::vector<Vec> v) {
  NoiseModel m;
  m.kind = NoiseKind::custom_sequence;
  m.sequence = std::move(v);
  return m;
}

MinimizerPath generate_path(const LinearDynamics& dyn, const NoiseModel& noise, const Vec& x0, int horizon) {
  const int d = dyn.dim();
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (x0.size() != d) throw std::invalid_argument("initial state dimension does not match dynamics");

  Mat factor;
  Rng rng(noise.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  switch (noise.kind) {
    case NoiseKind::gaussian_ncv:
      if (d != 4) throw std::invalid_argument("gaussian_ncv noise requires the 4-dimensional NCV dynamics");
      factor = ncv_noise_factor(noise.eps, noise.sigma_v2);
      break;
    case NoiseKind::constant_drift:
      if (noise.drift.size() != d) throw std::invalid_argument("drift dimension does not match dynamics");
      break;
    case NoiseKind::custom_sequence:
      if (static_cast<int>(noise.sequence.size()) < horizon) throw std::invalid_argument("custom noise sequence is shorter than the horizon");
      for (const auto& v : noise.sequence)
        if (v.size() != d) throw std::invalid_argument("custom noise vector dimension does not match dynamics");
      break;
    case NoiseKind::zero:
      break;
  }

  MinimizerPath path;
  path.states.reserve(horizon + 1);
  path.noise.reserve(horizon);
  path.states.push_back(x0);
  for (int t = 0; t < horizon; ++t) {
    Vec v;
    switch (noise.kind) {
      case NoiseKind::zero:
        v = Vec::Zero(d);
        break;
      case NoiseKind::gaussian_ncv: {
        Vec xi(4);
        for (int k = 0; k < 4; ++k) xi(k) = normal(rng);
        v = factor * xi;
        break;
      }
      case NoiseKind::constant_drift:
        v = noise.drift;
        break;
      case NoiseKind::custom_sequence:
        v = noise.sequence[t];
        break;
    }
    path.states.push_back(dyn.apply(path.states.back()) + v);
    path.noise.push_back(std::move(v));
  }
  return path;
}

MinimizerPath path_from_states(const LinearDynamics& dyn, std::vector<Vec> states) {
  if (states.size() < 2) throw std::invalid_argument("a path needs at least two states");
  MinimizerPath path;
  for (std::size_t t = 0; t + 1 < states.size(); ++t) path.noise.push_back(states[t + 1] - dyn.apply(states[t]));
  path.states = std::move(states);
  return path;
}

namespace {

double vec_norm(const Vec& v, NormKind norm) { return norm == NormKind::l2 ? v.norm() : v.lpNorm<1>(); }

}  // namespace

double path_variation(const MinimizerPath& path, const LinearDynamics& dyn, NormKind norm) {
  if (path.states.size() < 2) throw std::invalid_argument("path variation needs at least two states");
  if (path.dim() != dyn.dim()) throw std::invalid_argument("path and dynamics dimensions differ");
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < path.states.size(); ++t) total += vec_norm(path.states[t + 1] - dyn.apply(path.states[t]), norm);
  return total;
}

std::vector<double> noise_norms(const MinimizerPath& path, NormKind norm) {
  std::vector<double> out;
  out.reserve(path.noise.size());
  for (const auto& v : path.noise) out.push_back(vec_norm(v, norm));
  return out;
}

void write_path_csv(std::ostream& out, const MinimizerPath& path) {
  const int d = path.dim();
  out << "t";
  for (int k = 1; k <= d; ++k) out << ",x" << k;
  for (int k = 1; k <= d; ++k) out << ",v" << k;
  out << "\n";
  for (std::size_t t = 0; t < path.states.size(); ++t) {
    out << (t + 1);
    for (int k = 0; k < d; ++k) out << "," << csv::number(path.states[t](k));
    for (int k = 0; k < d; ++k) {
      out << ",";
      if (t < path.noise.size()) out << csv::number(path.noise[t](k));
    }
    out << "\n";
  }
}

MinimizerPath read_path_csv(std::istream& in) {
  std::string line;
  while (std::getline(in, line) && (line.empty() || line[0] == '#')) {
  }
  const auto header = csv::split(line);
  if (header.empty() || header[0] != "t" || header.size() % 2 != 1) throw std::invalid_argument("path csv: bad header");
  const int d = static_cast<int>(header.size() - 1) / 2;
  MinimizerPath path;
  bool ended = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (ended) throw std::invalid_argument("path csv: rows after the final state");
    const auto cells = csv::split(line);
    if (static_cast<int>(cells.size()) != 2 * d + 1) throw std::invalid_argument("path csv: wrong column count");
    Vec x(d), v(d);
    for (int k = 0; k < d; ++k) x(k) = csv::parse_number(cells[1 + k]);
    path.states.push_back(std::move(x));
    if (cells[1 + d].empty()) {
      ended = true;
      continue;
    }
    for (int k = 0; k < d; ++k) v(k) = csv::parse_number(cells[1 + d + k]);
    path.noise.push_back(std::move(v));
  }
  if (path.states.size() != path.noise.size() + 1) throw std::invalid_argument("path csv: expected one more state than noise rows");
  return path;
}

}  // namespace dmd
