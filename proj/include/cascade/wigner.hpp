#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cascade/algebra.hpp"

// Phase-space representation: Wigner function of a truncated density matrix on
// a rectangular grid, evaluated with the generalized-Laguerre kernel
//
//   W(x,y) = (1/pi) e^{-2|alpha|^2} [ sum_m rho_mm (-1)^m L_m(4|alpha|^2)
//          + sum_{m<n} 2 Re( rho_mn (-1)^m sqrt(m!/n!) (2 alpha)^{n-m}
//                            L_m^{n-m}(4|alpha|^2) ) ]
//
// with alpha = (x + iy)/sqrt(2), so that x = sqrt(2) Re alpha.  This is the
// closed form of the displaced-parity trace and integrates to Tr rho over the
// (x, y) plane.

namespace cascade {

/// Rectangular evaluation grid.  When the y-axis fields are NaN they inherit
/// the x-axis values, matching the common square-grid case.
struct GridSpec {
  double xmin = -6.0;
  double xmax = 6.0;
  int nx = 201;
  double ymin = std::numeric_limits<double>::quiet_NaN();
  double ymax = std::numeric_limits<double>::quiet_NaN();
  int ny = 0;
};

/// Sampled Wigner function: w(r, c) = W(xs[c], ys[r]).  Rows sweep y so the
/// natural row-major traversal is y-then-x.
struct WignerGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  Eigen::MatrixXd w;

  double dx() const { return xs.size() > 1 ? xs[1] - xs[0] : 1.0; }
  double dy() const { return ys.size() > 1 ? ys[1] - ys[0] : 1.0; }
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("grid needs at least one point");
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[i] = lo + i * step;
  return v;
}

}  // namespace detail

/// Evaluate the Wigner function of rho on the grid.
inline WignerGrid wigner(const Eigen::MatrixXcd& rho, const GridSpec& spec = {}) {
  if (rho.rows() != rho.cols() || rho.rows() < 1)
    throw std::invalid_argument("density matrix must be square and nonempty");
  const int dim = int(rho.rows());

  GridSpec g = spec;
  if (std::isnan(g.ymin)) g.ymin = g.xmin;
  if (std::isnan(g.ymax)) g.ymax = g.xmax;
  if (g.ny <= 0) g.ny = g.nx;
  if (!(g.xmin < g.xmax) || !(g.ymin < g.ymax))
    if (g.nx > 1 || g.ny > 1)
      throw std::invalid_argument("grid bounds must be increasing");

  WignerGrid out;
  out.xs = detail::linspace(g.xmin, g.xmax, g.nx);
  out.ys = detail::linspace(g.ymin, g.ymax, g.ny);
  out.w.resize(g.ny, g.nx);

  // sqrt(m!/(m+d)!) decays fast enough to tame the Laguerre growth; it only
  // depends on the matrix indices, so build it once.
  Eigen::MatrixXd factor(dim, dim);
  for (int d = 0; d < dim; ++d) {
    double f = 1.0;
    for (int k = 1; k <= d; ++k) f /= std::sqrt(double(k));
    for (int m = 0; m + d < dim; ++m) {
      factor(m, d) = f;
      f *= std::sqrt(double(m + 1) / double(m + 1 + d));
    }
  }

  std::vector<double> lag(dim);
  for (int r = 0; r < g.ny; ++r)
    for (int c = 0; c < g.nx; ++c) {
      const cplx alpha = cplx{out.xs[c], out.ys[r]} / std::sqrt(2.0);
      const double z = 4.0 * std::norm(alpha);
      double sum = 0.0;
      cplx pw = 1.0;  // (2 alpha)^d
      for (int d = 0; d < dim; ++d) {
        // Three-term recurrence for L_m^{(d)}(z) along the diagonal.
        double sign = 1.0;
        for (int m = 0; m + d < dim; ++m) {
          if (m == 0)
            lag[0] = 1.0;
          else if (m == 1)
            lag[1] = 1.0 + d - z;
          else
            lag[m] = ((2.0 * (m - 1) + 1 + d - z) * lag[m - 1] -
                      (m - 1 + d) * lag[m - 2]) /
                     double(m);
          const double weight = sign * factor(m, d) * lag[m];
          if (d == 0)
            sum += weight * rho(m, m).real();
          else
            sum += 2.0 * weight * (rho(m, m + d) * pw).real();
          sign = -sign;
        }
        pw *= 2.0 * alpha;
      }
      out.w(r, c) = sum * std::exp(-2.0 * std::norm(alpha)) / std::numbers::pi;
    }
  return out;
}

/// Grid point with the largest W; ties broken by the lowest (row, column)
/// index, scanning rows (y) outermost.  Returns (x*, y*).
inline std::pair<double, double> wigner_mode(const WignerGrid& grid) {
  if (grid.w.size() == 0) throw std::invalid_argument("empty Wigner grid");
  int best_r = 0, best_c = 0;
  for (int r = 0; r < grid.w.rows(); ++r)
    for (int c = 0; c < grid.w.cols(); ++c)
      if (grid.w(r, c) > grid.w(best_r, best_c)) {
        best_r = r;
        best_c = c;
      }
  return {grid.xs[best_c], grid.ys[best_r]};
}

/// Riemann cell sum of the sampled W; approaches Tr rho when the grid covers
/// the state's support.
inline double grid_integral(const WignerGrid& grid) {
  return grid.w.sum() * grid.dx() * grid.dy();
}

/// Rescale w to [-1, 1] by its largest magnitude (display convention used for
/// figure export; raw values remain the library contract).
inline WignerGrid scale_unit(WignerGrid grid) {
  const double peak = grid.w.cwiseAbs().maxCoeff();
  if (peak > 0.0) grid.w /= peak;
  return grid;
}

}  // namespace cascade
