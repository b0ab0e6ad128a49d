#pragma once

#include <optional>

#include "dmd/common.hpp"

namespace dmd {

enum class DomainKind { box, simplex, unconstrained };

// Feasible set X. Boxes need lo < hi component-wise; the simplex carries a floor in (0, 1/d)
// so that every coordinate stays bounded away from zero.
class Domain {
 public:
  static Domain box(Vec lo, Vec hi);
  static Domain simplex(int dim, double floor);
  static Domain unconstrained(int dim);

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool bounded() const { return kind_ != DomainKind::unconstrained; }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  double floor() const { return floor_; }

  bool contains(const Vec& x, double tol = 1e-9) const;

 private:
  DomainKind kind_ = DomainKind::unconstrained;
  int dim_ = 0;
  Vec lo_, hi_;
  double floor_ = 0.0;
};

enum class MirrorKind { euclidean, kl };

// Mirror map plus domain. Euclidean pairs with box or unconstrained domains (norm l2),
// KL with the floored simplex (norm l1, dual norm l-infinity).
class MirrorGeometry {
 public:
  static MirrorGeometry euclidean(Domain domain);
  static MirrorGeometry kl(Domain domain);

  MirrorKind kind() const { return kind_; }
  const Domain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }

  double norm(const Vec& x) const;
  double dual_norm(const Vec& g) const;

 private:
  MirrorGeometry(MirrorKind kind, Domain domain) : kind_(kind), domain_(std::move(domain)) {}
  MirrorKind kind_;
  Domain domain_;
};

// D_R(x, y) = R(x) - R(y) - <x - y, grad R(y)>. Throws std::domain_error outside the domain.
double bregman(const MirrorGeometry& geom, const Vec& x, const Vec& y);

// argmin_{x in X} eta <x, g> + D_R(x, y).
Vec prox(const MirrorGeometry& geom, const Vec& gradient, const Vec& y, double eta);

// KL projection of a non-negative vector onto {x : sum x = 1, x >= floor}: raise coordinates that
// fall below the floor, take the deficit proportionally from the rest, repeat (at most d passes).
Vec project_floored_simplex(const Vec& p, double floor);

// Map an arbitrary point back into the domain (clamp for boxes, floored-simplex repair for KL).
Vec project_to_domain(const MirrorGeometry& geom, const Vec& x);

struct GeometryConstants {
  double r2 = 0.0;  // sup of D_R over the domain (an upper bound for KL)
  double k = 0.0;   // Lipschitz constant of D_R(., z) in the geometry norm
};

// std::nullopt for unconstrained domains, where R^2 is infinite.
std::optional<GeometryConstants> geometry_constants(const MirrorGeometry& geom);

Vec sample_point(const Domain& domain, Rng& rng);

struct SeparateConvexityReport {
  int trials = 0;
  int violations = 0;
  double max_violation = 0.0;  // max of D(x, sum a_i y_i) - sum a_i D(x, y_i)
};

SeparateConvexityReport check_separate_convexity(const MirrorGeometry& geom, int trials, std::uint64_t seed,
                                                 int mixture_size = 3);

struct NonexpansiveReport {
  bool pass = false;
  std::optional<double> sigma_max;  // euclidean only
  int pairs_checked = 0;            // KL only
  double max_violation = 0.0;       // KL only: max of D(Ax, Ay) - D(x, y)
};

NonexpansiveReport check_nonexpansive(const MirrorGeometry& geom, const Mat& a, int trials, std::uint64_t seed);

}  // namespace dmd
