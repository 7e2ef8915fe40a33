#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "plateau/error.hpp"

namespace plateau {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVec3 = Eigen::Vector3cd;
using cdouble = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Shortest decimal text that is byte-stable across runs: 17 significant
/// digits, the format used by every CSV/OBJ writer.
inline std::string fmt17(double v) {
  if (v == 0.0) v = 0.0;  // fold -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// ODE stepping

/// Classical fourth-order Runge-Kutta step. `Step` may be complex, which is
/// how analytic continuation along a complex direction is done.
template <class State, class Rhs, class Step>
State rk4_step(const Rhs& f, const State& y, Step h) {
  const State k1 = f(y);
  const State k2 = f(State(y + (h / 2.0) * k1));
  const State k3 = f(State(y + (h / 2.0) * k2));
  const State k4 = f(State(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Number of equal steps covering `length` with a step no larger than
/// `step` (a length that is an integer multiple of `step` up to rounding
/// keeps that exact count).
inline int step_count(double length, double step) {
  require(step > 0.0, "step must be positive");
  require(length > 0.0, "length must be positive");
  const double q = length / step;
  const double r = std::round(q);
  const int n = (std::abs(q - r) <= 1e-9 * std::max(1.0, q)) ? int(r) : int(std::ceil(q));
  return std::max(n, 1);
}

/// Gram-Schmidt on a right-handed frame; B is rebuilt as T x N.
inline void orthonormalize(Vec3& T, Vec3& N, Vec3& B) {
  T.normalize();
  N -= N.dot(T) * T;
  N.normalize();
  B = T.cross(N);
}

// ---------------------------------------------------------------------------
// Quadrature

/// Composite Simpson on uniformly spaced samples. An odd number of intervals
/// closes with the 3/8 rule on the last three.
inline double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (f[0] + f[1]);
  if (n == 3) return h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);
  std::size_t intervals = n - 1;
  std::size_t simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2)
    sum += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  if (simpson_end != intervals) {
    const std::size_t i = simpson_end;
    sum += 3.0 * h / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
  }
  return sum;
}

/// Simpson on samples at nonuniform abscissae, one parabola per pair of
/// intervals (trapezoid on a trailing single interval).
inline double simpson_nonuniform(std::span<const double> x, std::span<const double> f) {
  const std::size_t n = x.size();
  double sum = 0.0;
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) {
    const double h0 = x[i + 1] - x[i], h1 = x[i + 2] - x[i + 1];
    const double hs = h0 + h1;
    sum += hs / 6.0 *
           ((2.0 - h1 / h0) * f[i] + hs * hs / (h0 * h1) * f[i + 1] + (2.0 - h0 / h1) * f[i + 2]);
  }
  if (i + 1 < n) sum += 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
  return sum;
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};

inline GaussRule gauss_legendre(int n) {
  require(n >= 1, "Gauss-Legendre order must be >= 1");
  GaussRule g{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    g.x[i] = -z;
    g.x[n - 1 - i] = z;
    g.w[i] = g.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Finite differences

/// Fornberg's recursion: weights w(k, j) of the k-th derivative at x0 from
/// samples at x[j], k = 0..m.
inline Eigen::MatrixXd fornberg_weights(double x0, std::span<const double> x, int m) {
  const int n = int(x.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m + 1, n);
  c(0, 0) = 1.0;
  double c1 = 1.0, c4 = x[0] - x0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
        c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
      }
      for (int k = mn; k >= 1; --k) c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
      c(0, j) = c4 * c(0, j) / c3;
    }
    c1 = c2;
  }
  return c;
}

/// `order`-th derivative of sampled data with respect to the abscissa, using
/// `width`-point Fornberg stencils (centered where possible, wrapping with
/// the given period when `periodic`).
inline std::vector<double> differentiate(std::span<const double> s, std::span<const double> f,
                                         int order, bool periodic, double period,
                                         int width = 7) {
  const int n = int(s.size());
  require(n == int(f.size()), "differentiate: size mismatch");
  width = std::min(width, periodic ? n : n);
  require(width > order, "differentiate: too few samples for derivative order");
  std::vector<double> out(n);
  std::vector<double> xs(width), fs(width);
  const int half = width / 2;
  for (int i = 0; i < n; ++i) {
    int start = i - half;
    if (!periodic) start = std::clamp(start, 0, n - width);
    for (int j = 0; j < width; ++j) {
      int k = start + j;
      double shift = 0.0;
      if (periodic) {
        while (k < 0) { k += n; shift -= period; }
        while (k >= n) { k -= n; shift += period; }
      }
      xs[j] = s[k] + shift;
      fs[j] = f[k];
    }
    const Eigen::MatrixXd w = fornberg_weights(s[i], xs, order);
    double d = 0.0;
    for (int j = 0; j < width; ++j) d += w(order, j) * fs[j];
    out[i] = d;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Polynomials

/// All complex roots of sum_k coeff[k] z^k via the companion matrix.
inline std::vector<cdouble> polynomial_roots(std::span<const cdouble> coeff) {
  int deg = int(coeff.size()) - 1;
  while (deg > 0 && std::abs(coeff[deg]) == 0.0) --deg;
  if (deg <= 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeff[i] / coeff[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cdouble> r(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  return r;
}

template <class T>
T horner(std::span<const T> coeff, T z) {
  T acc = T(0);
  for (std::size_t k = coeff.size(); k-- > 0;) acc = acc * z + coeff[k];
  return acc;
}

}  // namespace plateau
