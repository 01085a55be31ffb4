#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "cml/errors.hpp"

namespace cml {

using Vec4 = std::array<double, 4>;
using Complex = std::complex<double>;

/// Imaginary residue allowed when a complex-diagnostic result is promoted
/// back to a real metric.
inline constexpr double kImagTol = 1e-12;
/// Slack on the Lorentzian-signature check (determinant must be <= 0).
inline constexpr double kLorentzTol = 1e-12;
/// Determinant magnitude below which a metric is treated as singular.
inline constexpr double kSingularTol = 1e-9;

namespace detail {

template <class S>
using Mat4 = std::array<S, 16>;

/// 4x4 determinant by Laplace expansion over 2x2 minors.
template <class S>
S det4(const Mat4<S>& m) {
  const S s0 = m[0] * m[5] - m[1] * m[4];
  const S s1 = m[0] * m[6] - m[2] * m[4];
  const S s2 = m[0] * m[7] - m[3] * m[4];
  const S s3 = m[1] * m[6] - m[2] * m[5];
  const S s4 = m[1] * m[7] - m[3] * m[5];
  const S s5 = m[2] * m[7] - m[3] * m[6];
  const S c5 = m[10] * m[15] - m[11] * m[14];
  const S c4 = m[9] * m[15] - m[11] * m[13];
  const S c3 = m[9] * m[14] - m[10] * m[13];
  const S c2 = m[8] * m[15] - m[11] * m[12];
  const S c1 = m[8] * m[14] - m[10] * m[12];
  const S c0 = m[8] * m[13] - m[9] * m[12];
  return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
}

template <class S>
Mat4<S> mat_mul(const Mat4<S>& a, const Mat4<S>& b) {
  Mat4<S> out{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const S aik = a[i * 4 + k];
      for (int j = 0; j < 4; ++j) out[i * 4 + j] += aik * b[k * 4 + j];
    }
  return out;
}

template <class S>
Mat4<S> mat_transpose(const Mat4<S>& a) {
  Mat4<S> out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[j * 4 + i] = a[i * 4 + j];
  return out;
}

}  // namespace detail

/// Symmetric 4x4 metric tensor. Scalar = double for physical metrics;
/// Scalar = std::complex<double> for the diagnostic phase-metric mode.
/// Mutation goes through set(), which writes both (i,j) and (j,i), so the
/// symmetry invariant holds by construction.
template <class Scalar>
class MetricTensor {
 public:
  MetricTensor() = default;  // zero tensor

  static MetricTensor diagonal(Scalar d0, Scalar d1, Scalar d2, Scalar d3) {
    MetricTensor g;
    g.e_[0] = d0;
    g.e_[5] = d1;
    g.e_[10] = d2;
    g.e_[15] = d3;
    return g;
  }

  /// Builds from raw row-major entries; off-diagonal pairs are averaged and
  /// an asymmetry beyond kImagTol (relative to the largest entry) is an error.
  static MetricTensor from_entries(const detail::Mat4<Scalar>& m) {
    double scale = 0.0;
    for (const Scalar& v : m) scale = std::max(scale, std::abs(v));
    MetricTensor g;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        const Scalar a = m[i * 4 + j];
        const Scalar b = m[j * 4 + i];
        if (std::abs(a - b) > kImagTol * std::max(1.0, scale))
          throw NumericError("metric entries are not symmetric");
        const Scalar avg = (a + b) / 2.0;
        g.e_[i * 4 + j] = avg;
        g.e_[j * 4 + i] = avg;
      }
    return g;
  }

  Scalar operator()(int i, int j) const { return e_[i * 4 + j]; }
  void set(int i, int j, Scalar v) {
    e_[i * 4 + j] = v;
    e_[j * 4 + i] = v;
  }
  const detail::Mat4<Scalar>& entries() const { return e_; }

  friend bool operator==(const MetricTensor& a, const MetricTensor& b) {
    return a.e_ == b.e_;
  }

 private:
  detail::Mat4<Scalar> e_{};
};

using Metric4 = MetricTensor<double>;
using ComplexMetric4 = MetricTensor<Complex>;

/// Flat metric diag(1, 1, 1, -1); coordinate order (x, y, z, t), c = 1.
Metric4 minkowski();

template <class Scalar>
Scalar determinant(const MetricTensor<Scalar>& g) {
  return detail::det4(g.entries());
}

/// sqrt(-det g). The position probability density carried by a metric.
/// Throws NumericError on non-Lorentzian input (det > 0 beyond tolerance,
/// or imaginary part of a diagnostic determinant beyond tolerance).
double volume_element(const Metric4& g);
double volume_element(const ComplexMetric4& g);

/// Entrywise average: the metric due to both physical situations.
template <class Scalar>
MetricTensor<Scalar> superpose(const MetricTensor<Scalar>& g1,
                               const MetricTensor<Scalar>& g2) {
  MetricTensor<Scalar> out;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) out.set(i, j, (g1(i, j) + g2(i, j)) / 2.0);
  return out;
}

/// Inverse metric (contravariant components) via the adjugate.
/// Throws NumericError when |det| < kSingularTol.
Metric4 inverse(const Metric4& g);

/// Diagnostic phase metric diag(1, 1, e^{i a}, -e^{-i a}).
/// Its determinant is exactly -1 for every angle.
struct PhaseMetric {
  double alpha = 0.0;
  ComplexMetric4 expand() const;
};

/// The fixed quadratic-form transform W: identity except for the lower-right
/// block [[-i, 1], [1, -i]] / sqrt(2). (det W)^2 = 1, so determinants of
/// transformed metrics are preserved.
detail::Mat4<Complex> w_matrix();

/// W^t G W for a diagnostic metric.
ComplexMetric4 apply_w(const ComplexMetric4& g);

/// Real form of W^t G^{s1}(alpha) W: identity upper-left block and
/// [[-cos a, sin a], [sin a, cos a]] lower-right -- a rotoreflection.
/// Throws NumericError if the imaginary residue exceeds kImagTol.
Metric4 rotoreflect(double alpha);

/// sqrt(-det((G^{s1}(alpha) + G^{s2}(beta)) / 2)) by literal determinant
/// evaluation of the superposed phase metrics.
double interference_density(double alpha, double beta);

/// Closed form |cos((alpha - beta) / 2)| the determinant route must match.
double interference_closed_form(double alpha, double beta);

}  // namespace cml
