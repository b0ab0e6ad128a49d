#include "dmd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmd {

Domain Domain::box(Vec lo, Vec hi) {
  if (lo.size() < 1 || lo.size() != hi.size()) throw std::invalid_argument("box bounds must be non-empty and equal length");
  if (!lo.allFinite() || !hi.allFinite()) throw std::invalid_argument("box bounds must be finite");
  if (!(lo.array() < hi.array()).all()) throw std::invalid_argument("box requires lo < hi in every coordinate");
  Domain d;
  d.kind_ = DomainKind::box;
  d.dim_ = static_cast<int>(lo.size());
  d.lo_ = std::move(lo);
  d.hi_ = std::move(hi);
  return d;
}

Domain Domain::simplex(int dim, double floor) {
  if (dim < 2) throw std::invalid_argument("simplex needs dimension >= 2");
  if (!(floor > 0.0) || !(floor < 1.0 / dim)) throw std::invalid_argument("simplex floor must lie in (0, 1/d)");
  Domain d;
  d.kind_ = DomainKind::simplex;
  d.dim_ = dim;
  d.floor_ = floor;
  return d;
}

Domain Domain::unconstrained(int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  Domain d;
  d.dim_ = dim;
  return d;
}

bool Domain::contains(const Vec& x, double tol) const {
  if (x.size() != dim_ || !x.allFinite()) return false;
  switch (kind_) {
    case DomainKind::box:
      return ((x - lo_).array() >= -tol).all() && ((hi_ - x).array() >= -tol).all();
    case DomainKind::simplex:
      return std::abs(x.sum() - 1.0) <= tol && (x.array() >= floor_ - tol).all();
    case DomainKind::unconstrained:
      return true;
  }
  return false;
}

MirrorGeometry MirrorGeometry::euclidean(Domain domain) {
  if (domain.kind() == DomainKind::simplex) throw std::invalid_argument("euclidean geometry pairs with box or unconstrained domains");
  return MirrorGeometry(MirrorKind::euclidean, std::move(domain));
}

MirrorGeometry MirrorGeometry::kl(Domain domain) {
  if (domain.kind() != DomainKind::simplex) throw std::invalid_argument("KL geometry requires a floored simplex domain");
  return MirrorGeometry(MirrorKind::kl, std::move(domain));
}

double MirrorGeometry::norm(const Vec& x) const {
  return kind_ == MirrorKind::euclidean ? x.norm() : x.lpNorm<1>();
}

double MirrorGeometry::dual_norm(const Vec& g) const {
  return kind_ == MirrorKind::euclidean ? g.norm() : g.lpNorm<Eigen::Infinity>();
}

namespace {

void require_in_domain(const MirrorGeometry& geom, const Vec& x, const char* what) {
  if (!geom.domain().contains(x)) throw std::domain_error(std::string(what) + " lies outside the domain");
}

}  // namespace

double bregman(const MirrorGeometry& geom, const Vec& x, const Vec& y) {
  require_in_domain(geom, x, "bregman: x");
  require_in_domain(geom, y, "bregman: y");
  if (geom.kind() == MirrorKind::euclidean) return 0.5 * (x - y).squaredNorm();
  // generalized KL; the -x + y terms cancel on the simplex
  double d = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) d += x(i) * std::log(x(i) / y(i)) - x(i) + y(i);
  return std::max(d, 0.0);
}

Vec project_floored_simplex(const Vec& p, double floor) {
  const auto d = p.size();
  if (!(p.array() >= 0.0).all() || !p.allFinite() || !(p.sum() > 0.0))
    throw std::domain_error("floored-simplex projection needs a non-negative finite vector with positive mass");
  Vec x = p / p.sum();
  std::vector<bool> pinned(d, false);
  for (Eigen::Index pass = 0; pass < d; ++pass) {
    bool changed = false;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!pinned[i] && x(i) < floor) {
        pinned[i] = true;
        changed = true;
      }
    }
    if (!changed) break;
    double free_mass = 0.0;
    Eigen::Index n_pinned = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (pinned[i])
        ++n_pinned;
      else
        free_mass += x(i);
    }
    const double target = 1.0 - static_cast<double>(n_pinned) * floor;
    for (Eigen::Index i = 0; i < d; ++i) x(i) = pinned[i] ? floor : x(i) * (target / free_mass);
  }
  return x;
}

Vec project_to_domain(const MirrorGeometry& geom, const Vec& x) {
  const Domain& dom = geom.domain();
  switch (dom.kind()) {
    case DomainKind::box:
      return x.cwiseMax(dom.lo()).cwiseMin(dom.hi());
    case DomainKind::simplex: {
      if (dom.contains(x, 1e-12)) return x;
      Vec p = x.cwiseMax(dom.floor());
      return project_floored_simplex(p, dom.floor());
    }
    case DomainKind::unconstrained:
      return x;
  }
  return x;
}

Vec prox(const MirrorGeometry& geom, const Vec& gradient, const Vec& y, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("prox step size must be positive");
  if (gradient.size() != geom.dim()) throw std::invalid_argument("prox: gradient dimension mismatch");
  if (!gradient.allFinite()) throw std::invalid_argument("prox: gradient is not finite");
  require_in_domain(geom, y, "prox: y");

  // a constant gradient is orthogonal to the simplex, so y is already the minimizer
  const bool constant_gradient = (gradient.array() == gradient(0)).all();
  if (constant_gradient && (gradient(0) == 0.0 || geom.kind() == MirrorKind::kl)) return y;

  Vec x;
  if (geom.kind() == MirrorKind::euclidean) {
    x = y - eta * gradient;
    if (geom.domain().kind() == DomainKind::box) x = x.cwiseMax(geom.domain().lo()).cwiseMin(geom.domain().hi());
  } else {
    Vec logits = y.array().log() - eta * gradient.array();
    const double top = logits.maxCoeff();
    Vec w = (logits.array() - top).exp();
    x = project_floored_simplex(w, geom.domain().floor());
  }
  if (!x.allFinite()) throw std::overflow_error("prox produced a non-finite point");
  return x;
}

std::optional<GeometryConstants> geometry_constants(const MirrorGeometry& geom) {
  const Domain& dom = geom.domain();
  if (!dom.bounded()) return std::nullopt;
  if (geom.kind() == MirrorKind::euclidean) {
    const double diam = (dom.hi() - dom.lo()).norm();
    return GeometryConstants{0.5 * diam * diam, diam};
  }
  const double log_inv_floor = std::log(1.0 / dom.floor());
  return GeometryConstants{log_inv_floor, dom.dim() * log_inv_floor};
}

Vec sample_point(const Domain& domain, Rng& rng) {
  const int d = domain.dim();
  Vec x(d);
  switch (domain.kind()) {
    case DomainKind::box: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (int i = 0; i < d; ++i) x(i) = domain.lo()(i) + u(rng) * (domain.hi()(i) - domain.lo()(i));
      break;
    }
    case DomainKind::simplex: {
      // flat Dirichlet, then mixed toward the floor
      std::exponential_distribution<double> e(1.0);
      for (int i = 0; i < d; ++i) x(i) = e(rng) + 1e-300;
      x /= x.sum();
      x = (domain.floor() + (1.0 - d * domain.floor()) * x.array()).matrix();
      break;
    }
    case DomainKind::unconstrained: {
      std::normal_distribution<double> n(0.0, 1.0);
      for (int i = 0; i < d; ++i) x(i) = n(rng);
      break;
    }
  }
  return x;
}

SeparateConvexityReport check_separate_convexity(const MirrorGeometry& geom, int trials, std::uint64_t seed,
                                                 int mixture_size) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (mixture_size < 1) throw std::invalid_argument("mixture size must be >= 1");
  Rng rng(seed);
  std::exponential_distribution<double> e(1.0);
  SeparateConvexityReport report;
  report.trials = trials;
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    Vec x = sample_point(geom.domain(), rng);
    std::vector<Vec> ys;
    Vec alpha(mixture_size);
    for (int k = 0; k < mixture_size; ++k) {
      ys.push_back(sample_point(geom.domain(), rng));
      alpha(k) = e(rng);
    }
    alpha /= alpha.sum();
    Vec mixture = Vec::Zero(geom.dim());
    double rhs = 0.0;
    for (int k = 0; k < mixture_size; ++k) {
      mixture += alpha(k) * ys[k];
      rhs += alpha(k) * bregman(geom, x, ys[k]);
    }
    if (geom.kind() == MirrorKind::kl) mixture /= mixture.sum();  // round-off only
    const double gap = bregman(geom, x, mixture) - rhs;
    report.max_violation = std::max(report.max_violation, gap);
    if (gap > 1e-9) ++report.violations;
  }
  return report;
}

NonexpansiveReport check_nonexpansive(const MirrorGeometry& geom, const Mat& a, int trials, std::uint64_t seed) {
  if (a.rows() != a.cols() || a.rows() != geom.dim()) throw std::invalid_argument("dynamics matrix dimension mismatch");
  NonexpansiveReport report;
  if (geom.kind() == MirrorKind::euclidean) {
    Eigen::JacobiSVD<Mat> svd(a);
    const double smax = svd.singularValues()(0);
    report.sigma_max = smax;
    report.pass = smax <= 1.0 + 1e-12;
    return report;
  }
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  Rng rng(seed);
  report.max_violation = -std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int trial = 0; trial < trials; ++trial) {
    Vec x = sample_point(geom.domain(), rng);
    Vec y = sample_point(geom.domain(), rng);
    Vec ax = a * x, ay = a * y;
    if (!geom.domain().contains(ax) || !geom.domain().contains(ay)) continue;
    ++report.pairs_checked;
    const double gap = bregman(geom, ax, ay) - bregman(geom, x, y);
    report.max_violation = std::max(report.max_violation, gap);
    if (gap > 1e-12) ok = false;
  }
  report.pass = ok && report.pairs_checked > 0;
  return report;
}

}  // namespace dmd
