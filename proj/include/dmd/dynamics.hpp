#pragma once

#include <iosfwd>
#include <vector>

#include "dmd/common.hpp"

namespace dmd {

// Known linear dynamics x*_{t+1} = A x*_t + v_t.
class LinearDynamics {
 public:
  explicit LinearDynamics(Mat a);

  int dim() const { return static_cast<int>(a_.rows()); }
  const Mat& matrix() const { return a_; }
  Vec apply(const Vec& x) const { return a_ * x; }

  // Cached at construction: largest singular value of A and whether it is <= 1.
  double spectral_norm() const { return spectral_norm_; }
  bool nonexpansive() const { return spectral_norm_ <= 1.0 + 1e-12; }

 private:
  Mat a_;
  double spectral_norm_ = 0.0;
};

LinearDynamics identity_dynamics(int dim, double scale = 1.0);

// Near-constant-velocity target, state (px, vx, py, vy): A = I_2 (x) [[1, eps], [0, 1]].
LinearDynamics ncv_dynamics(double eps);

// sigma_v2 * I_2 (x) [[eps^3/3, eps^2/2], [eps^2/2, eps]]
Mat ncv_noise_covariance(double eps, double sigma_v2);

// Lower-triangular L with L L^T equal to ncv_noise_covariance, built per 2x2 block.
Mat ncv_noise_factor(double eps, double sigma_v2);

enum class NoiseKind { zero, gaussian_ncv, constant_drift, custom_sequence };

struct NoiseModel {
  NoiseKind kind = NoiseKind::zero;
  double sigma_v2 = 0.0;
  double eps = 0.1;  // gaussian_ncv sampling interval
  std::uint64_t seed = 0;
  Vec drift;                  // constant_drift
  std::vector<Vec> sequence;  // custom_sequence, one v_t per step

  static NoiseModel zero() { return {}; }
  static NoiseModel gaussian_ncv(double eps, double sigma_v2, std::uint64_t seed);
  static NoiseModel constant_drift(Vec v);
  static NoiseModel custom(std::vector<Vec> v);
};

// states holds x*_1..x*_{T+1}; noise holds v_1..v_T.
struct MinimizerPath {
  std::vector<Vec> states;
  std::vector<Vec> noise;

  int horizon() const { return static_cast<int>(noise.size()); }
  int dim() const { return states.empty() ? 0 : static_cast<int>(states.front().size()); }
  // 1-based time index
  const Vec& at(int t) const { return states.at(static_cast<std::size_t>(t - 1)); }
};

MinimizerPath generate_path(const LinearDynamics& dyn, const NoiseModel& noise, const Vec& x0, int horizon);

// Builds a path from an explicit comparator sequence; v_t = x*_{t+1} - A x*_t.
MinimizerPath path_from_states(const LinearDynamics& dyn, std::vector<Vec> states);

enum class NormKind { l2, l1 };

// C_T = sum_t ||x*_{t+1} - A x*_t||
double path_variation(const MinimizerPath& path, const LinearDynamics& dyn, NormKind norm);

// ||v_t|| for t = 1..T, read from the stored noise sequence.
std::vector<double> noise_norms(const MinimizerPath& path, NormKind norm);

// Columns t, x1..xd, v1..vd; the last row (t = T+1) leaves the v columns empty.
void write_path_csv(std::ostream& out, const MinimizerPath& path);
MinimizerPath read_path_csv(std::istream& in);

}  // namespace dmd
