// Truncated Taylor-series arithmetic over complex scalars and kets, used to
// extract exact small-t expansions of geodesic-frame quantities.
#pragma once

#include <cmath>
#include <vector>

#include "spinphase/types.hpp"

namespace spinphase::detail {

// Coefficients c[k] of sum_k c[k] t^k, truncated at a fixed order.
struct ScalarSeries {
  std::vector<Complex> c;

  explicit ScalarSeries(int order) : c(order + 1, Complex(0.0)) {}
  int order() const { return static_cast<int>(c.size()) - 1; }
};

inline ScalarSeries constant(double v, int order) {
  ScalarSeries s(order);
  s.c[0] = v;
  return s;
}

inline ScalarSeries add(const ScalarSeries& a, const ScalarSeries& b) {
  ScalarSeries out(a.order());
  for (int k = 0; k <= a.order(); ++k) out.c[k] = a.c[k] + b.c[k];
  return out;
}

inline ScalarSeries sub(const ScalarSeries& a, const ScalarSeries& b) {
  ScalarSeries out(a.order());
  for (int k = 0; k <= a.order(); ++k) out.c[k] = a.c[k] - b.c[k];
  return out;
}

inline ScalarSeries mul(const ScalarSeries& a, const ScalarSeries& b) {
  ScalarSeries out(a.order());
  for (int k = 0; k <= a.order(); ++k)
    for (int j = 0; j <= k; ++j) out.c[k] += a.c[j] * b.c[k - j];
  return out;
}

inline ScalarSeries conjugate(const ScalarSeries& a) {
  ScalarSeries out(a.order());
  for (int k = 0; k <= a.order(); ++k) out.c[k] = std::conj(a.c[k]);
  return out;
}

// 1/a with a.c[0] != 0.
inline ScalarSeries inverse(const ScalarSeries& a) {
  ScalarSeries out(a.order());
  out.c[0] = 1.0 / a.c[0];
  for (int k = 1; k <= a.order(); ++k) {
    Complex acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += a.c[j] * out.c[k - j];
    out.c[k] = -acc / a.c[0];
  }
  return out;
}

// sqrt(a) with a.c[0] real positive.
inline ScalarSeries sqrt(const ScalarSeries& a) {
  ScalarSeries out(a.order());
  const double r0 = std::sqrt(a.c[0].real());
  out.c[0] = r0;
  for (int k = 1; k <= a.order(); ++k) {
    Complex acc = 0.0;
    for (int j = 1; j < k; ++j) acc += out.c[j] * out.c[k - j];
    out.c[k] = (a.c[k] - acc) / (2.0 * r0);
  }
  return out;
}

// p(x) = sum_m poly[m] x^m for a series x with x.c[0] = 0 (Horner).
inline ScalarSeries compose_poly(const std::vector<double>& poly,
                                 const ScalarSeries& x) {
  ScalarSeries out(x.order());
  for (int m = static_cast<int>(poly.size()) - 1; m >= 0; --m) {
    out = mul(out, x);
    out.c[0] += poly[m];
  }
  return out;
}

// Ket-valued series.
struct VectorSeries {
  std::vector<Vector> c;

  VectorSeries(int order, int dim) : c(order + 1, Vector::Zero(dim)) {}
  int order() const { return static_cast<int>(c.size()) - 1; }
};

inline VectorSeries scale(const VectorSeries& a, const ScalarSeries& s) {
  VectorSeries out(a.order(), static_cast<int>(a.c[0].size()));
  for (int k = 0; k <= a.order(); ++k)
    for (int j = 0; j <= k; ++j) out.c[k] += s.c[j] * a.c[k - j];
  return out;
}

inline VectorSeries sub(const VectorSeries& a, const VectorSeries& b) {
  VectorSeries out(a.order(), static_cast<int>(a.c[0].size()));
  for (int k = 0; k <= a.order(); ++k) out.c[k] = a.c[k] - b.c[k];
  return out;
}

// <ref | a(t)> as a scalar series.
inline ScalarSeries inner(const Vector& ref, const VectorSeries& a) {
  ScalarSeries out(a.order());
  for (int k = 0; k <= a.order(); ++k) out.c[k] = ref.dot(a.c[k]);
  return out;
}

// <a(t) | b(t)> (first argument conjugated).
inline ScalarSeries inner(const VectorSeries& a, const VectorSeries& b) {
  ScalarSeries out(a.order());
  for (int k = 0; k <= a.order(); ++k)
    for (int j = 0; j <= k; ++j) out.c[k] += a.c[j].dot(b.c[k - j]);
  return out;
}

}  // namespace spinphase::detail
