#pragma once

// Row-parallel kernels used by the engine. Every kernel has a serial reference and an
// OpenMP version; the two iterate each row in the same order and are bit-identical.

#include "dmd/common.hpp"

namespace dmd {

class MirrorGeometry;

namespace kernels {

// out = w * x, one row per agent.
void mix_serial(const Mat& w, const Mat& x, Mat& out);
void mix_parallel(const Mat& w, const Mat& x, Mat& out);

// out.row(i) = prox(geom, grads.row(i), y.row(i), eta)
void prox_rows_serial(const MirrorGeometry& geom, const Mat& grads, const Mat& y, double eta, Mat& out);
void prox_rows_parallel(const MirrorGeometry& geom, const Mat& grads, const Mat& y, double eta, Mat& out);

// out.row(i) = a * xhat.row(i), re-projected onto the domain for KL geometries.
void dynamics_rows_serial(const MirrorGeometry& geom, const Mat& a, const Mat& xhat, Mat& out);
void dynamics_rows_parallel(const MirrorGeometry& geom, const Mat& a, const Mat& xhat, Mat& out);

// Column means with a fixed left-to-right summation order.
Vec row_mean(const Mat& x);

}  // namespace kernels
}  // namespace dmd
