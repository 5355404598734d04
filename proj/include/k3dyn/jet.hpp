#pragma once

#include <array>
#include <complex>

namespace k3dyn {

/// First-order forward-mode jet in three complex variables.
struct Jet {
  using Complex = std::complex<double>;

  Complex v;
  std::array<Complex, 3> d{};

  Jet() = default;
  Jet(Complex value) : v(value) {}  // NOLINT: constants lift implicitly
  Jet(double value) : v(value) {}   // NOLINT
  Jet(Complex value, int seed) : v(value) { d[seed] = 1.0; }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < 3; ++i) d[i] += o.d[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < 3; ++i) d[i] -= o.d[i];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    for (int i = 0; i < 3; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    const Complex inv = 1.0 / o.v;
    v *= inv;
    for (int i = 0; i < 3; ++i) d[i] = (d[i] - v * o.d[i]) * inv;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
  friend Jet operator-(const Jet& a) {
    Jet r;
    r.v = -a.v;
    for (int i = 0; i < 3; ++i) r.d[i] = -a.d[i];
    return r;
  }
};

}  // namespace k3dyn
