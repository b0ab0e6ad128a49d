#include "dmd/objectives.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dmd {

ObservationModel ObservationModel::grouped(int n, int dim, double halfwidth) {
  if (n < dim) throw std::invalid_argument("need at least one agent per observed coordinate");
  if (!(halfwidth >= 0.0)) throw std::invalid_argument("observation noise half-width must be non-negative");
  ObservationModel obs;
  obs.noise_halfwidth = halfwidth;
  const int base = n / dim, extra = n % dim;
  for (int k = 0; k < dim; ++k)
    for (int j = 0; j < base + (k < extra ? 1 : 0); ++j) obs.coordinate.push_back(k);
  return obs;
}

LossEnsemble LossEnsemble::tracking(const MinimizerPath& path, ObservationModel obs, GradientConvention convention) {
  const int d = path.dim();
  const int n = static_cast<int>(obs.coordinate.size());
  if (n < 1 || path.states.empty()) throw std::invalid_argument("tracking losses need agents and a target path");
  if (!(obs.noise_halfwidth >= 0.0)) throw std::invalid_argument("observation noise half-width must be non-negative");
  LossEnsemble e;
  e.kind_ = LossKind::tracking_square;
  e.n_ = n;
  e.d_ = d;
  e.group_weight_ = Vec::Zero(d);
  for (int k : obs.coordinate) {
    if (k < 0 || k >= d) throw std::invalid_argument("observed coordinate out of range");
    e.group_weight_(k) += 1.0 / n;
  }
  for (const auto& x : path.states) {
    e.slices_.emplace_back(x);
    e.slice_mean_.push_back(x);
  }
  e.obs_ = std::move(obs);
  e.convention_ = convention;
  return e;
}

LossEnsemble LossEnsemble::quadratic(std::vector<Mat> centers, double gradient_noise) {
  if (centers.empty() || centers.front().rows() < 1) throw std::invalid_argument("quadratic losses need centers");
  if (!(gradient_noise >= 0.0)) throw std::invalid_argument("gradient noise must be non-negative");
  LossEnsemble e;
  e.kind_ = LossKind::synthetic_quadratic;
  e.n_ = static_cast<int>(centers.front().rows());
  e.d_ = static_cast<int>(centers.front().cols());
  for (const auto& c : centers) {
    if (c.rows() != e.n_ || c.cols() != e.d_) throw std::invalid_argument("inconsistent center shapes");
    Vec mean = c.colwise().mean().transpose();
    e.spread_.push_back((c.rowwise() - mean.transpose()).rowwise().squaredNorm().mean());
    e.slice_mean_.push_back(std::move(mean));
  }
  e.slices_ = std::move(centers);
  e.gradient_noise_ = gradient_noise;
  return e;
}

LossEnsemble LossEnsemble::linear(std::vector<Mat> coefficients, const Domain& domain, double gradient_noise) {
  if (coefficients.empty() || coefficients.front().rows() < 1) throw std::invalid_argument("linear losses need coefficients");
  if (!domain.bounded()) throw std::invalid_argument("linear losses need a bounded domain");
  if (!(gradient_noise >= 0.0)) throw std::invalid_argument("gradient noise must be non-negative");
  LossEnsemble e;
  e.kind_ = LossKind::synthetic_linear;
  e.n_ = static_cast<int>(coefficients.front().rows());
  e.d_ = static_cast<int>(coefficients.front().cols());
  if (domain.dim() != e.d_) throw std::invalid_argument("domain dimension mismatch");
  for (const auto& g : coefficients) {
    if (g.rows() != e.n_ || g.cols() != e.d_) throw std::invalid_argument("inconsistent coefficient shapes");
    e.slice_mean_.push_back(g.colwise().mean().transpose());
  }
  e.slices_ = std::move(coefficients);
  e.gradient_noise_ = gradient_noise;
  e.linear_domain_ = domain;
  return e;
}

void LossEnsemble::check(int i, int t) const {
  if (i < 0 || i >= n_) throw std::out_of_range("agent index " + std::to_string(i) + " out of range");
  if (t < 1 || t > horizon()) throw std::out_of_range("time index " + std::to_string(t) + " out of range");
}

double LossEnsemble::value(int i, int t, const Vec& x) const {
  check(i, t);
  switch (kind_) {
    case LossKind::tracking_square: {
      const int k = obs_.coordinate[i];
      const double gap = slices_[t - 1](k, 0) - x(k);
      return gap * gap + obs_.noise_variance();
    }
    case LossKind::synthetic_quadratic:
      return (x - slices_[t - 1].row(i).transpose()).squaredNorm();
    case LossKind::synthetic_linear:
      return slices_[t - 1].row(i).dot(x);
  }
  return 0.0;
}

Vec LossEnsemble::gradient(int i, int t, const Vec& x) const {
  check(i, t);
  switch (kind_) {
    case LossKind::tracking_square: {
      const int k = obs_.coordinate[i];
      Vec g = Vec::Zero(d_);
      g(k) = 2.0 * (x(k) - slices_[t - 1](k, 0));
      return g;
    }
    case LossKind::synthetic_quadratic:
      return 2.0 * (x - slices_[t - 1].row(i).transpose());
    case LossKind::synthetic_linear:
      return slices_[t - 1].row(i).transpose();
  }
  return {};
}

Vec LossEnsemble::stochastic_gradient(int i, int t, const Vec& x, Rng& rng) const {
  check(i, t);
  if (kind_ == LossKind::tracking_square) {
    const int k = obs_.coordinate[i];
    double w = 0.0;
    if (obs_.noise_halfwidth > 0.0) w = std::uniform_real_distribution<double>(-obs_.noise_halfwidth, obs_.noise_halfwidth)(rng);
    const double z = slices_[t - 1](k, 0) + w;
    const double scale = convention_ == GradientConvention::literal ? 1.0 : 2.0;
    Vec g = Vec::Zero(d_);
    g(k) = -scale * (z - x(k));
    return g;
  }
  Vec g = gradient(i, t, x);
  if (gradient_noise_ > 0.0) {
    std::uniform_real_distribution<double> u(-gradient_noise_, gradient_noise_);
    for (int k = 0; k < d_; ++k) g(k) += u(rng);
  }
  return g;
}

double LossEnsemble::stochastic_scale() const {
  return kind_ == LossKind::tracking_square && convention_ == GradientConvention::literal ? 0.5 : 1.0;
}

double LossEnsemble::global_value(int t, const Vec& x) const {
  if (t < 1 || t > horizon()) throw std::out_of_range("time index " + std::to_string(t) + " out of range");
  const Vec& m = slice_mean_[t - 1];
  switch (kind_) {
    case LossKind::tracking_square:
      return group_weight_.dot((x - m).array().square().matrix()) + obs_.noise_variance();
    case LossKind::synthetic_quadratic:
      return (x - m).squaredNorm() + spread_[t - 1];
    case LossKind::synthetic_linear:
      return m.dot(x);
  }
  return 0.0;
}

Vec LossEnsemble::global_minimizer(int t) const {
  if (t < 1 || t > horizon()) throw std::out_of_range("time index " + std::to_string(t) + " out of range");
  const Vec& m = slice_mean_[t - 1];
  if (kind_ != LossKind::synthetic_linear) return m;
  const Domain& dom = linear_domain_;
  if (dom.kind() == DomainKind::box) {
    Vec x(d_);
    for (int k = 0; k < d_; ++k) x(k) = m(k) > 0.0 ? dom.lo()(k) : dom.hi()(k);
    return x;
  }
  Eigen::Index best = 0;
  m.minCoeff(&best);
  Vec x = Vec::Constant(d_, dom.floor());
  x(best) = 1.0 - (d_ - 1) * dom.floor();
  return x;
}

LossEnsemble synthetic_suite(std::uint64_t seed, int n, int d, int horizon, const MirrorGeometry& geom,
                             const SyntheticOptions& options) {
  const Domain& dom = geom.domain();
  if (!dom.bounded()) throw std::invalid_argument("synthetic suites need a bounded domain");
  if (n < 1 || horizon < 1 || d != dom.dim()) throw std::invalid_argument("synthetic suite: bad sizes");
  if (options.spread < 0.0 || options.spread > 1.0) throw std::invalid_argument("spread must lie in [0, 1]");
  Rng rng(seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  auto uniform_vec = [&](int len) {
    Vec v(len);
    for (int k = 0; k < len; ++k) v(k) = sym(rng);
    return v;
  };
  const int slices = horizon + 1;

  if (options.kind == LossKind::synthetic_linear) {
    std::vector<Mat> coefs;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int t = 0; t < slices; ++t) {
      Mat g = Mat::Zero(n, d);
      if (!options.zero_coefficients) {
        for (int i = 0; i < n; ++i) {
          if (geom.kind() == MirrorKind::euclidean) {
            Vec v(d);
            for (int k = 0; k < d; ++k) v(k) = normal(rng);
            g.row(i) = v.normalized().transpose();  // unit l2 norm
          } else {
            g.row(i) = uniform_vec(d).transpose();  // l-infinity norm <= 1
          }
        }
      }
      coefs.push_back(std::move(g));
    }
    return LossEnsemble::linear(std::move(coefs), dom, options.gradient_noise);
  }
  if (options.kind != LossKind::synthetic_quadratic) throw std::invalid_argument("synthetic suite supports quadratic or linear losses");

  const Mat a = options.dynamics.size() == 0 ? Mat::Identity(d, d) : options.dynamics;
  if (a.rows() != d || a.cols() != d) throw std::invalid_argument("synthetic dynamics dimension mismatch");
  std::vector<Mat> centers;
  if (dom.kind() == DomainKind::box) {
    const Vec mid = 0.5 * (dom.lo() + dom.hi());
    const Vec half = 0.5 * (dom.hi() - dom.lo());
    const Vec inner_lo = mid - 0.5 * half, inner_hi = mid + 0.5 * half;
    Vec p = mid + 0.5 * half.cwiseProduct(uniform_vec(d));
    for (int t = 0; t < slices; ++t) {
      Mat offsets(n, d);
      for (int i = 0; i < n; ++i) offsets.row(i) = 0.5 * uniform_vec(d).transpose();
      const Vec mean_offset = offsets.colwise().mean().transpose();
      Mat c(n, d);
      for (int i = 0; i < n; ++i)
        c.row(i) = (p + options.spread * 0.5 * half.cwiseProduct(offsets.row(i).transpose() - mean_offset)).transpose();
      centers.push_back(c.cwiseMax(dom.lo().transpose().replicate(n, 1)).cwiseMin(dom.hi().transpose().replicate(n, 1)));
      p = (a * p + options.drift * half.cwiseProduct(uniform_vec(d))).cwiseMax(inner_lo).cwiseMin(inner_hi);
    }
  } else {
    Vec p = sample_point(dom, rng);
    for (int t = 0; t < slices; ++t) {
      Mat c(n, d);
      for (int i = 0; i < n; ++i) {
        Vec q = sample_point(dom, rng);
        c.row(i) = ((1.0 - 0.5 * options.spread) * p + 0.5 * options.spread * q).transpose();
      }
      centers.push_back(std::move(c));
      Vec u = uniform_vec(d);
      u.array() -= u.mean();
      p = project_to_domain(geom, a * p + options.drift * u);
    }
  }
  return LossEnsemble::quadratic(std::move(centers), options.gradient_noise);
}

double lipschitz_bound(const LossEnsemble& ens, const MirrorGeometry& geom) {
  const Domain& dom = geom.domain();
  if (!dom.bounded()) throw std::invalid_argument("Lipschitz bound needs a bounded domain");
  switch (ens.kind()) {
    case LossKind::tracking_square:
      if (dom.kind() != DomainKind::box) throw std::invalid_argument("tracking losses use a box domain");
      return 2.0 * (dom.hi() - dom.lo()).maxCoeff();
    case LossKind::synthetic_quadratic:
      if (geom.kind() == MirrorKind::euclidean) return 2.0 * (dom.hi() - dom.lo()).norm();
      return 2.0 * (1.0 - dom.dim() * dom.floor());
    case LossKind::synthetic_linear:
      return 1.0;
  }
  return 0.0;
}

double second_moment_bound(const LossEnsemble& ens, const MirrorGeometry& geom) {
  const Domain& dom = geom.domain();
  if (!dom.bounded()) throw std::invalid_argument("second-moment bound needs a bounded domain");
  if (ens.kind() == LossKind::tracking_square) {
    if (dom.kind() != DomainKind::box) throw std::invalid_argument("tracking losses use a box domain");
    const double scale = ens.convention() == GradientConvention::literal ? 1.0 : 2.0;
    const double g = scale * ((dom.hi() - dom.lo()).maxCoeff() + ens.observation().noise_halfwidth);
    return g * g;
  }
  const double noise = geom.kind() == MirrorKind::euclidean ? ens.gradient_noise() * std::sqrt(static_cast<double>(ens.dim()))
                                                            : ens.gradient_noise();
  const double g = lipschitz_bound(ens, geom) + noise;
  return g * g;
}

}  // namespace dmd
