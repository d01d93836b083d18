#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace biflat {

using cx = std::complex<double>;

/// Gauss-Legendre rule on [-1, 1]; nodes/weights computed once per order and
/// cached process-wide.
struct gl_rule {
  std::vector<double> x;
  std::vector<double> w;
};

const gl_rule& gauss_legendre(int n);

/// Integral of f along the straight segment [a, b], fixed panel count.
cx integrate_segment(const std::function<cx(cx)>& f, cx a, cx b, int order = 40, int panels = 3);

/// Adaptive variant: bisect panels until two successive estimates agree to
/// `tol` (absolute), with a depth cap.
cx integrate_segment_adaptive(const std::function<cx(cx)>& f, cx a, cx b, double tol = 1e-12,
                              int order = 24, int max_depth = 12);

/// Tensor polar quadrature of f over the unit disk: nr radial x nt angular
/// Gauss-Legendre nodes (the area element r dr dtheta is included).
double integrate_disk(const std::function<double(cx)>& f, int nr = 256, int nt = 512);

}  // namespace biflat
