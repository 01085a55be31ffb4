#include "cml/metric.hpp"

#include <algorithm>
#include <cmath>

namespace cml {

Metric4 minkowski() { return Metric4::diagonal(1.0, 1.0, 1.0, -1.0); }

namespace {

double volume_element_of_det(double det) {
  if (det > kLorentzTol)
    throw NumericError("non-Lorentzian metric: determinant is positive");
  return std::sqrt(std::max(0.0, -det));
}

}  // namespace

double volume_element(const Metric4& g) {
  return volume_element_of_det(determinant(g));
}

double volume_element(const ComplexMetric4& g) {
  const Complex det = determinant(g);
  if (std::abs(det.imag()) > kImagTol)
    throw NumericError("non-Lorentzian metric: determinant is not real");
  return volume_element_of_det(det.real());
}

Metric4 inverse(const Metric4& g) {
  const auto& m = g.entries();
  const double s0 = m[0] * m[5] - m[1] * m[4];
  const double s1 = m[0] * m[6] - m[2] * m[4];
  const double s2 = m[0] * m[7] - m[3] * m[4];
  const double s3 = m[1] * m[6] - m[2] * m[5];
  const double s4 = m[1] * m[7] - m[3] * m[5];
  const double s5 = m[2] * m[7] - m[3] * m[6];
  const double c5 = m[10] * m[15] - m[11] * m[14];
  const double c4 = m[9] * m[15] - m[11] * m[13];
  const double c3 = m[9] * m[14] - m[10] * m[13];
  const double c2 = m[8] * m[15] - m[11] * m[12];
  const double c1 = m[8] * m[14] - m[10] * m[12];
  const double c0 = m[8] * m[13] - m[9] * m[12];

  const double det = s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
  if (std::abs(det) < kSingularTol)
    throw NumericError("singular metric: |det| below tolerance");
  const double inv = 1.0 / det;

  detail::Mat4<double> o;
  o[0] = (m[5] * c5 - m[6] * c4 + m[7] * c3) * inv;
  o[1] = (-m[1] * c5 + m[2] * c4 - m[3] * c3) * inv;
  o[2] = (m[13] * s5 - m[14] * s4 + m[15] * s3) * inv;
  o[3] = (-m[9] * s5 + m[10] * s4 - m[11] * s3) * inv;
  o[4] = (-m[4] * c5 + m[6] * c2 - m[7] * c1) * inv;
  o[5] = (m[0] * c5 - m[2] * c2 + m[3] * c1) * inv;
  o[6] = (-m[12] * s5 + m[14] * s2 - m[15] * s1) * inv;
  o[7] = (m[8] * s5 - m[10] * s2 + m[11] * s1) * inv;
  o[8] = (m[4] * c4 - m[5] * c2 + m[7] * c0) * inv;
  o[9] = (-m[0] * c4 + m[1] * c2 - m[3] * c0) * inv;
  o[10] = (m[12] * s4 - m[13] * s2 + m[15] * s0) * inv;
  o[11] = (-m[8] * s4 + m[9] * s2 - m[11] * s0) * inv;
  o[12] = (-m[4] * c3 + m[5] * c1 - m[6] * c0) * inv;
  o[13] = (m[0] * c3 - m[1] * c1 + m[2] * c0) * inv;
  o[14] = (-m[12] * s3 + m[13] * s1 - m[14] * s0) * inv;
  o[15] = (m[8] * s3 - m[9] * s1 + m[10] * s0) * inv;
  return Metric4::from_entries(o);
}

ComplexMetric4 PhaseMetric::expand() const {
  const Complex a = std::polar(1.0, alpha);
  const Complex b = std::polar(1.0, -alpha);
  return ComplexMetric4::diagonal(Complex(1.0), Complex(1.0), a, -b);
}

detail::Mat4<Complex> w_matrix() {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex mi(0.0, -r);
  detail::Mat4<Complex> w{};
  w[0] = Complex(1.0);
  w[5] = Complex(1.0);
  w[10] = mi;
  w[11] = Complex(r);
  w[14] = Complex(r);
  w[15] = mi;
  return w;
}

ComplexMetric4 apply_w(const ComplexMetric4& g) {
  const auto w = w_matrix();
  const auto wt = detail::mat_transpose(w);
  const auto m = detail::mat_mul(wt, detail::mat_mul(g.entries(), w));
  return ComplexMetric4::from_entries(m);
}

Metric4 rotoreflect(double alpha) {
  const ComplexMetric4 t = apply_w(PhaseMetric{alpha}.expand());
  detail::Mat4<double> re;
  double residue = 0.0;
  for (int k = 0; k < 16; ++k) {
    const Complex v = t.entries()[k];
    residue = std::max(residue, std::abs(v.imag()));
    re[k] = v.real();
  }
  if (residue > kImagTol)
    throw NumericError("rotoreflection left an imaginary residue");
  return Metric4::from_entries(re);
}

double interference_density(double alpha, double beta) {
  const ComplexMetric4 g3 =
      superpose(PhaseMetric{alpha}.expand(), PhaseMetric{beta}.expand());
  return volume_element(g3);
}

double interference_closed_form(double alpha, double beta) {
  return std::abs(std::cos(0.5 * (alpha - beta)));
}

}  // namespace cml
