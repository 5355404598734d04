#pragma once

// The Wehler surface X = {F = 0} in P1 x P1 x P1, F of multidegree (2,2,2).
//
// Coordinates come in homogeneous pairs (w0, w1) with affine value w1/w0.
// Coefficient c[i][j][k] multiplies x^i y^j z^k in the affine chart, so the
// tri-homogeneous lift is sum c_ijk m_i(x) m_j(y) m_k(z) with
// m_e(w) = w0^(2-e) w1^e. Axes are numbered 0, 1, 2 (x, y, z); the Vieta
// involution along axis a is s_{a+1}, and T = s1 o s2 o s3.
//
// The involution uses the factorization lift: given the current root w of
// A s1^2 + B s1 s0 + C s0^2, the conjugate w' is scaled so that the quadratic
// equals (w0 s1 - w1 s0)(w0' s1 - w1' s0). In the chart |w0| >= |w1| this is
// the root-sum form divided by w0^2, otherwise the reciprocal-sum form divided
// by w1^2. The lift is holomorphic and nowhere zero off degenerate fibers and
// rescales like the pullback matrix of the involution.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "k3dyn/errors.hpp"
#include "k3dyn/jet.hpp"
#include "k3dyn/random.hpp"
#include "k3dyn/rational.hpp"

namespace k3dyn::surface {

using Complex = std::complex<double>;

inline constexpr double kMembershipTolerance = 1e-10;
/// Relative size of (A, B, C) below which a fiber counts as degenerate.
inline constexpr double kDegenerateTolerance = 1e-12;

inline constexpr int coeff_index(int i, int j, int k) { return 9 * i + 3 * j + k; }

struct ScreenWitness {
  std::string kind;  // "singular_point" or "degenerate_fiber"
  std::array<std::array<Complex, 2>, 3> point;
  double residual = 0;
  double gradient_norm = 0;
};

struct ScreenReport {
  bool pass = true;
  std::size_t samples = 0;
  std::vector<ScreenWitness> flagged;
  std::vector<std::string> warnings;
};

class WehlerCoefficients {
 public:
  /// Throws ErrorKind::invalid_argument for the zero polynomial.
  explicit WehlerCoefficients(std::array<Rational, 27> c);

  const Rational& exact(int idx) const { return c_[idx]; }
  const Rational& exact(int i, int j, int k) const { return c_[coeff_index(i, j, k)]; }
  double value(int idx) const { return d_[idx]; }
  /// max |c_ijk|, the reference scale for floating tolerances.
  double scale() const { return scale_; }
  const std::array<Rational, 27>& all() const { return c_; }

  std::optional<std::uint64_t> seed;
  std::optional<long long> bound;
  std::optional<ScreenReport> screen;

 private:
  std::array<Rational, 27> c_;
  std::array<double, 27> d_{};
  double scale_ = 0;
};

template <class S>
struct Pair {
  S w0{};
  S w1{};
};

template <class S>
using Point = std::array<Pair<S>, 3>;

using FloatPoint = Point<Complex>;
using ExactPoint = Point<Rational>;

template <class S>
struct FiberQuadratic {
  S A{};
  S B{};
  S C{};
};

// ---- scalar helpers -------------------------------------------------------

inline double magnitude(const Complex& z) { return std::abs(z); }
inline double magnitude(const Jet& z) { return std::abs(z.v); }
inline bool mag_ge(const Complex& a, const Complex& b) { return std::abs(a) >= std::abs(b); }
inline bool mag_ge(const Jet& a, const Jet& b) { return std::abs(a.v) >= std::abs(b.v); }
inline bool mag_ge(const Rational& a, const Rational& b) { return cmp(abs(a), abs(b)) >= 0; }
inline double log_magnitude(const Complex& z) { return std::log(std::abs(z)); }
inline double log_magnitude(const Jet& z) { return std::log(std::abs(z.v)); }
inline double log_magnitude(const Rational& q) { return log_abs(q); }

template <class S>
S coefficient(const WehlerCoefficients& c, int idx);
template <>
inline Complex coefficient<Complex>(const WehlerCoefficients& c, int idx) { return c.value(idx); }
template <>
inline Jet coefficient<Jet>(const WehlerCoefficients& c, int idx) { return Jet(Complex(c.value(idx))); }
template <>
inline Rational coefficient<Rational>(const WehlerCoefficients& c, int idx) { return c.exact(idx); }

template <class S>
S one() {
  return S(1.0);
}
template <>
inline Rational one<Rational>() {
  return Rational(1);
}

// ---- polynomial evaluation ------------------------------------------------

/// F = A w1^2 + B w1 w0 + C w0^2 with w the pair on `axis`.
template <class S>
FiberQuadratic<S> fiber_quadratic(const WehlerCoefficients& c, int axis, const Point<S>& p) {
  const int a = (axis + 1) % 3;
  const int b = (axis + 2) % 3;
  auto mono = [](const Pair<S>& w) { return std::array<S, 3>{w.w0 * w.w0, w.w0 * w.w1, w.w1 * w.w1}; };
  const auto ma = mono(p[a]);
  const auto mb = mono(p[b]);
  std::array<S, 3> coef{};
  for (int e = 0; e < 3; ++e)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        std::array<int, 3> exps{};
        exps[axis] = e;
        exps[a] = i;
        exps[b] = j;
        const int idx = coeff_index(exps[0], exps[1], exps[2]);
        if (c.exact(idx) == 0) continue;
        coef[e] += coefficient<S>(c, idx) * ma[i] * mb[j];
      }
  return {coef[2], coef[1], coef[0]};
}

template <class S>
S evaluate(const FiberQuadratic<S>& q, const Pair<S>& w) {
  return q.A * w.w1 * w.w1 + q.B * w.w1 * w.w0 + q.C * w.w0 * w.w0;
}

/// Value of the tri-homogeneous lift of F at the given lifts.
template <class S>
S eval_F(const WehlerCoefficients& c, const Point<S>& p) {
  return evaluate(fiber_quadratic(c, 0, p), p[0]);
}

// ---- Vieta conjugation ----------------------------------------------------

enum class VietaForm { sum, product, reciprocal_sum };

/// Unnormalized conjugate root from one closed form; may vanish where that
/// form degenerates.
template <class S>
Pair<S> vieta_conjugate(const FiberQuadratic<S>& q, const Pair<S>& w, VietaForm form) {
  switch (form) {
    case VietaForm::sum: return {q.A * w.w0, -(q.B * w.w0 + q.A * w.w1)};
    case VietaForm::product: return {q.A * w.w1, q.C * w.w0};
    case VietaForm::reciprocal_sum: return {-(q.B * w.w1 + q.C * w.w0), q.C * w.w1};
  }
  return {};
}

/// Factorization lift of the conjugate root (see the header comment).
template <class S>
Pair<S> lift_conjugate(const FiberQuadratic<S>& q, const Pair<S>& w) {
  if (mag_ge(w.w0, w.w1)) {
    const S inv = one<S>() / w.w0;
    return {q.A * inv, -(q.B * w.w0 + q.A * w.w1) * inv * inv};
  }
  const S inv = one<S>() / w.w1;
  return {-(q.B * w.w1 + q.C * w.w0) * inv * inv, q.C * inv};
}

/// Rescales so the larger component is exactly 1; returns log of the squared
/// max-norm that was divided out.
template <class S>
double normalize_pair(Pair<S>& w) {
  if (mag_ge(w.w0, w.w1)) {
    const double ls = 2.0 * log_magnitude(w.w0);
    w.w1 = w.w1 / w.w0;
    w.w0 = one<S>();
    return ls;
  }
  const double ls = 2.0 * log_magnitude(w.w1);
  w.w0 = w.w0 / w.w1;
  w.w1 = one<S>();
  return ls;
}

inline bool magnitude_is_zero(const Pair<Complex>& w) { return w.w0 == 0.0 && w.w1 == 0.0; }
inline bool magnitude_is_zero(const Pair<Rational>& w) { return w.w0 == 0 && w.w1 == 0; }
inline bool magnitude_is_zero(const Pair<Jet>& w) { return w.w0.v == 0.0 && w.w1.v == 0.0; }

template <class S>
Point<S> normalized(Point<S> p) {
  for (auto& w : p) {
    if (magnitude_is_zero(w)) throw Error(ErrorKind::invalid_argument, "homogeneous pair is zero");
    normalize_pair(w);
  }
  return p;
}

inline bool is_degenerate(const FiberQuadratic<Rational>& q, double) { return q.A == 0 && q.B == 0 && q.C == 0; }
inline bool is_degenerate(const FiberQuadratic<Complex>& q, double scale) {
  return std::max({std::abs(q.A), std::abs(q.B), std::abs(q.C)}) <= kDegenerateTolerance * scale;
}
inline bool is_degenerate(const FiberQuadratic<Jet>& q, double scale) {
  return std::max({std::abs(q.A.v), std::abs(q.B.v), std::abs(q.C.v)}) <= kDegenerateTolerance * scale;
}

// ---- involutions and the automorphism -------------------------------------

template <class S>
struct Step {
  Point<S> point;
  /// log of the squared max-norm removed on each axis by renormalization.
  std::array<double, 3> log_scale{};
};

std::string stage_name(int axis);

/// Applies the Vieta involution along `axis` to a normalized point.
/// Throws ErrorKind::degenerate_fiber when A = B = C = 0 on the fiber.
template <class S>
Step<S> involution_step(const WehlerCoefficients& c, int axis, const Point<S>& p) {
  if (axis < 0 || axis > 2) throw Error(ErrorKind::invalid_argument, "axis must be 0, 1 or 2");
  const auto q = fiber_quadratic(c, axis, p);
  if (is_degenerate(q, c.scale()))
    throw Error(ErrorKind::degenerate_fiber, stage_name(axis) + ": involution is indeterminate on this fiber");
  Step<S> out{p, {}};
  Pair<S> w = lift_conjugate(q, p[axis]);
  if (magnitude_is_zero(w))
    throw Error(ErrorKind::degenerate_fiber, stage_name(axis) + ": both Vieta denominators vanish");
  out.log_scale[axis] = normalize_pair(w);
  out.point[axis] = w;
  return out;
}

template <class S>
Point<S> involution(const WehlerCoefficients& c, int axis, const Point<S>& p) {
  return involution_step(c, axis, p).point;
}

/// Axes in application order: T applies s3 first, T^{-1} applies s1 first.
inline std::array<int, 3> stage_axes(bool inverse) {
  return inverse ? std::array<int, 3>{0, 1, 2} : std::array<int, 3>{2, 1, 0};
}

template <class S>
Step<S> automorphism_step(const WehlerCoefficients& c, const Point<S>& p, bool inverse = false) {
  Step<S> out{p, {}};
  for (int axis : stage_axes(inverse)) {
    auto s = involution_step(c, axis, out.point);
    out.point = std::move(s.point);
    out.log_scale[axis] += s.log_scale[axis];
  }
  return out;
}

template <class S>
Point<S> automorphism(const WehlerCoefficients& c, const Point<S>& p, bool inverse = false) {
  return automorphism_step(c, p, inverse).point;
}

// ---- construction and sampling --------------------------------------------

/// Integer coefficients uniform in [-bound, bound] from `seed`; the zero
/// polynomial is redrawn. Runs smoothness_screen with `screen_samples`.
WehlerCoefficients random_wehler(std::uint64_t seed, long long coeff_bound, std::size_t screen_samples = 1000);

/// The same surface with c000 shifted so that the rational point `p` lies on it.
WehlerCoefficients through_point(const WehlerCoefficients& c, const ExactPoint& p);

/// Both roots of the fiber quadratic, as homogeneous pairs.
std::array<Pair<Complex>, 2> fiber_roots(const FiberQuadratic<Complex>& q);
/// Rational roots when the discriminant is a rational square.
std::optional<std::array<Pair<Rational>, 2>> rational_fiber_roots(const FiberQuadratic<Rational>& q);

/// Random point of X: Fubini-Study pairs on the two other axes, one of the two
/// roots on `axis`.
FloatPoint sample_point(const WehlerCoefficients& c, Rng& rng, int axis = 2);

FloatPoint to_float(const ExactPoint& p);
double residual(const WehlerCoefficients& c, const FloatPoint& p);

/// Chordal distance on P1, max over the three factors.
double point_distance(const FloatPoint& a, const FloatPoint& b);

// ---- charts, tangent maps, holomorphic 2-form -----------------------------

/// Affine chart of a point: t_a = w1/w0 when flip[a] == 0, t_a = w0/w1 otherwise.
struct ChartPoint {
  std::array<int, 3> flip{};
  std::array<Complex, 3> t{};
};

ChartPoint to_chart(const FloatPoint& p);
FloatPoint from_chart(const ChartPoint& c);

/// Tangent frame: the coordinate with the largest gradient component is
/// dependent; the other two, in cyclic order after it, are free.
struct Frame {
  int dependent = 0;
  std::array<int, 2> free{};
  std::array<Complex, 3> gradient{};
};

Frame frame_at(const WehlerCoefficients& c, const ChartPoint& cp);
std::array<Complex, 3> chart_gradient(const WehlerCoefficients& c, const ChartPoint& cp);

using Mat2 = std::array<std::array<Complex, 2>, 2>;
using Mat3 = std::array<std::array<Complex, 3>, 3>;

Mat2 multiply(const Mat2& a, const Mat2& b);
Complex det(const Mat2& m);

/// Ambient derivative of a composition of involutions between chart coordinates.
struct AmbientMap {
  ChartPoint in;
  ChartPoint out;
  Mat3 jacobian{};
};
AmbientMap ambient_map(const WehlerCoefficients& c, const ChartPoint& in, std::span<const int> axes);

struct TangentMap {
  Mat2 matrix{};
  Frame in_frame;
  Frame out_frame;
  ChartPoint in;
  ChartPoint out;
  /// J with (map)^* Omega = J Omega at the source point.
  Complex omega_jacobian;
};

/// Differential of the composition of involutions along `axes` (application
/// order) restricted to the tangent planes, in the frames at source and image.
/// Throws ErrorKind::singular_point where the gradient of F vanishes.
TangentMap tangent_of(const WehlerCoefficients& c, const FloatPoint& p, std::span<const int> axes);
TangentMap tangent_map(const WehlerCoefficients& c, const FloatPoint& p, bool inverse = false);
Complex omega_jacobian(const WehlerCoefficients& c, const FloatPoint& p, bool inverse = false);

/// Re-solves the dependent coordinate of `guess` so the point lies on X,
/// choosing the root nearest to the guess.
ChartPoint solve_dependent(const WehlerCoefficients& c, ChartPoint guess, int dependent);

/// Screens for singular points (F and grad F vanishing) and degenerate fibers:
/// the eight coordinate vertices are checked exactly, then sampled fibers on
/// all axes with Newton refinement of grad F = 0 near low-gradient samples.
ScreenReport smoothness_screen(const WehlerCoefficients& c, std::size_t n_samples, std::uint64_t seed = 0);

// ---- serialization --------------------------------------------------------

std::string to_json(const WehlerCoefficients& c, int indent = 2);
WehlerCoefficients from_json(const std::string& text);

}  // namespace k3dyn::surface
