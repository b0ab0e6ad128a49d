#include "dmd/kernels.hpp"

#include <exception>

#include "dmd/geometry.hpp"

namespace dmd::kernels {

namespace {

inline void mix_row(const Mat& w, const Mat& x, Mat& out, Eigen::Index i) {
  const Eigen::Index n = x.rows(), d = x.cols();
  for (Eigen::Index k = 0; k < d; ++k) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) acc += w(i, j) * x(j, k);
    out(i, k) = acc;
  }
}

inline void dynamics_row(const MirrorGeometry& geom, const Mat& a, const Mat& xhat, Mat& out, Eigen::Index i) {
  const Eigen::Index d = xhat.cols();
  Vec row(d);
  for (Eigen::Index r = 0; r < d; ++r) {
    double acc = 0.0;
    for (Eigen::Index c = 0; c < d; ++c) acc += a(r, c) * xhat(i, c);
    row(r) = acc;
  }
  if (geom.kind() == MirrorKind::kl) row = project_to_domain(geom, row);
  out.row(i) = row.transpose();
}

}  // namespace

void mix_serial(const Mat& w, const Mat& x, Mat& out) {
  out.resize(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) mix_row(w, x, out, i);
}

void mix_parallel(const Mat& w, const Mat& x, Mat& out) {
  out.resize(x.rows(), x.cols());
  const Eigen::Index n = x.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) mix_row(w, x, out, i);
}

void prox_rows_serial(const MirrorGeometry& geom, const Mat& grads, const Mat& y, double eta, Mat& out) {
  out.resize(y.rows(), y.cols());
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    out.row(i) = prox(geom, grads.row(i).transpose(), y.row(i).transpose(), eta).transpose();
}

void prox_rows_parallel(const MirrorGeometry& geom, const Mat& grads, const Mat& y, double eta, Mat& out) {
  out.resize(y.rows(), y.cols());
  const Eigen::Index n = y.rows();
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    try {
      out.row(i) = prox(geom, grads.row(i).transpose(), y.row(i).transpose(), eta).transpose();
    } catch (...) {
#pragma omp critical(dmd_prox_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void dynamics_rows_serial(const MirrorGeometry& geom, const Mat& a, const Mat& xhat, Mat& out) {
  out.resize(xhat.rows(), xhat.cols());
  for (Eigen::Index i = 0; i < xhat.rows(); ++i) dynamics_row(geom, a, xhat, out, i);
}

void dynamics_rows_parallel(const MirrorGeometry& geom, const Mat& a, const Mat& xhat, Mat& out) {
  out.resize(xhat.rows(), xhat.cols());
  const Eigen::Index n = xhat.rows();
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    try {
      dynamics_row(geom, a, xhat, out, i);
    } catch (...) {
#pragma omp critical(dmd_dynamics_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

Vec row_mean(const Mat& x) {
  Vec m = Vec::Zero(x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index k = 0; k < x.cols(); ++k) m(k) += x(i, k);
  return m / static_cast<double>(x.rows());
}

}  // namespace dmd::kernels
