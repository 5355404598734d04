#include "k3dyn/picard.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <optional>

#include "json.hpp"

namespace k3dyn::picard {

namespace {

const Matrix3 kGram = {{{0, 2, 2}, {2, 0, 2}, {2, 2, 0}}};

long long det3(const Matrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Real and complex roots of a monic cubic by Durand-Kerner; used only where
// the exact factorization path does not apply.
std::array<std::complex<double>, 3> cubic_roots(const std::array<long long, 4>& c) {
  using C = std::complex<double>;
  auto p = [&](C x) { return ((x + double(c[1])) * x + double(c[2])) * x + double(c[3]); };
  std::array<C, 3> z = {C(0.4, 0.9), C(0.4, 0.9) * C(0.4, 0.9), C(0.4, 0.9) * C(0.4, 0.9) * C(0.4, 0.9)};
  for (int it = 0; it < 500; ++it) {
    for (int i = 0; i < 3; ++i) {
      C denom = 1.0;
      for (int j = 0; j < 3; ++j)
        if (j != i) denom *= z[i] - z[j];
      z[i] -= p(z[i]) / denom;
    }
  }
  return z;
}

struct Factorization {
  long long root;  // integer root r
  long long s;     // quadratic factor x^2 - s x + q
  long long q;
};

std::optional<Factorization> factor_integer_root(const std::array<long long, 4>& c) {
  const long long c3 = c[3];
  std::vector<long long> candidates;
  if (c3 == 0) {
    candidates.push_back(0);
  } else {
    for (long long d = 1; d * d <= std::llabs(c3); ++d)
      if (c3 % d == 0) {
        for (long long v : {d, -d, c3 / d, -(c3 / d)}) candidates.push_back(v);
      }
  }
  for (long long r : candidates) {
    if (((r + c[1]) * r + c[2]) * r + c[3] != 0) continue;
    // synthetic division: x^3 + c1 x^2 + c2 x + c3 = (x - r)(x^2 + b1 x + b0)
    long long b1 = c[1] + r;
    long long b0 = c[2] + r * b1;
    return Factorization{r, -b1, b0};
  }
  return std::nullopt;
}

std::optional<long long> exact_sqrt(long long n) {
  if (n < 0) return std::nullopt;
  auto r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(n))));
  for (long long t = std::max(0LL, r - 2); t <= r + 2; ++t)
    if (t * t == n) return t;
  return std::nullopt;
}

using lattice::QuadraticClass;

QuadraticClass kernel_vector(const IsometryMatrix& m, const QSqrt5& eigenvalue) {
  std::array<std::array<QSqrt5, 3>, 3> n;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) n[i][j] = QSqrt5(static_cast<long>(m(i, j))) - (i == j ? eigenvalue : QSqrt5(0L));
  // A simple eigenvalue leaves rank 2, so some cross product of two rows spans the kernel.
  for (auto [r, s] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    const auto& a = n[r];
    const auto& b = n[s];
    QuadraticClass v;
    v.coords = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    if (v.is_zero()) continue;
    QSqrt5 lead;
    for (const auto& x : v.coords)
      if (!x.is_zero()) {
        lead = x;
        break;
      }
    for (auto& x : v.coords) x /= lead;
    return v;
  }
  throw Error(ErrorKind::unsupported, "eigenvalue is not simple");
}

QSqrt5 pair_q(const QuadraticClass& u, const QuadraticClass& v) {
  return lattice::pairing(lattice::IntersectionForm::wehler(), u, v);
}

}  // namespace

IsometryMatrix::IsometryMatrix(const Matrix3& m) : m_(m) {
  if (!preserves_wehler_form(m)) throw Error(ErrorKind::invariant_violation, "matrix does not preserve the Wehler form");
  long long d = det3(m);
  if (d != 1 && d != -1) throw Error(ErrorKind::invariant_violation, "isometry must have determinant +-1");
}

IsometryMatrix IsometryMatrix::identity() { return IsometryMatrix({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}); }

long long IsometryMatrix::det() const { return det3(m_); }

IsometryMatrix operator*(const IsometryMatrix& a, const IsometryMatrix& b) {
  return IsometryMatrix(multiply(a.m_, b.m_));
}

Matrix3 multiply(const Matrix3& a, const Matrix3& b) {
  Matrix3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Matrix3 transpose(const Matrix3& a) {
  Matrix3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = a[j][i];
  return t;
}

bool preserves_wehler_form(const Matrix3& m) { return multiply(transpose(m), multiply(kGram, m)) == kGram; }

IsometryMatrix involution_isometry(int i) {
  if (i < 1 || i > 3) throw Error(ErrorKind::invalid_argument, "involution index must be 1, 2 or 3");
  Matrix3 m = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const int c = i - 1;
  for (int r = 0; r < 3; ++r) m[r][c] = (r == c) ? -1 : 2;
  return IsometryMatrix(m);
}

IsometryMatrix automorphism_action(std::array<int, 3> order, bool inverse) {
  std::array<bool, 3> seen{};
  for (int o : order) {
    if (o < 1 || o > 3 || seen[o - 1]) throw Error(ErrorKind::invalid_argument, "order must be a permutation of 1,2,3");
    seen[o - 1] = true;
  }
  const auto m0 = involution_isometry(order[0]);
  const auto m1 = involution_isometry(order[1]);
  const auto m2 = involution_isometry(order[2]);
  return inverse ? m0 * m1 * m2 : m2 * m1 * m0;
}

std::array<long long, 4> char_poly(const IsometryMatrix& m) {
  const auto& a = m.entries();
  long long minors = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) minors += a[i][i] * a[j][j] - a[i][j] * a[j][i];
  return {1, -m.trace(), minors, -m.det()};
}

double spectral_radius(const IsometryMatrix& m) {
  const auto c = char_poly(m);
  if (auto f = factor_integer_root(c)) {
    double radius = std::fabs(static_cast<double>(f->root));
    double disc = static_cast<double>(f->s * f->s - 4 * f->q);
    if (disc >= 0) {
      double sq = std::sqrt(disc);
      radius = std::max({radius, std::fabs((f->s + sq) / 2), std::fabs((f->s - sq) / 2)});
    } else {
      radius = std::max(radius, std::sqrt(std::fabs(static_cast<double>(f->q))));
    }
    return radius;
  }
  double radius = 0;
  for (auto z : cubic_roots(c)) radius = std::max(radius, std::abs(z));
  return radius;
}

bool is_hyperbolic(const IsometryMatrix& m) {
  const auto c = char_poly(m);
  if (auto f = factor_integer_root(c)) {
    if (std::llabs(f->root) > 1) return true;
    const long long disc = f->s * f->s - 4 * f->q;
    if (disc < 0) return std::llabs(f->q) > 1;  // complex pair of modulus sqrt(q)
    // real roots (s +- sqrt(disc))/2: some root exceeds 1 in modulus iff
    // |s| + sqrt(disc) > 2, i.e. disc > (2 - |s|)^2 when |s| < 2.
    const long long as = std::llabs(f->s);
    if (as >= 2) return !(as == 2 && disc == 0);
    return disc > (2 - as) * (2 - as);
  }
  return spectral_radius(m) > 1.0 + 1e-12;
}

double entropy(const IsometryMatrix& m) { return is_hyperbolic(m) ? std::log(spectral_radius(m)) : 0.0; }

QuadraticClass nef_side(const QuadraticClass& v) {
  auto g = lattice::IntersectionForm::wehler();
  int positive = 0;
  int negative = 0;
  for (int i = 0; i < 3; ++i) {
    QuadraticClass h;
    h.coords.assign(3, QSqrt5(0L));
    h.coords[i] = QSqrt5(1L);
    int s = lattice::pairing(g, v, h).sign();
    positive += s > 0;
    negative += s < 0;
  }
  if (positive == 3) return v;
  if (negative == 3) {
    QuadraticClass w = v;
    for (auto& x : w.coords) x = -x;
    return w;
  }
  throw Error(ErrorKind::precondition, "class has no nef-side representative (mixed pairings with h_i)");
}

EigenData spectral_data(const IsometryMatrix& m) {
  if (!is_hyperbolic(m)) throw Error(ErrorKind::precondition, "spectral_data: isometry is not hyperbolic");
  const auto c = char_poly(m);
  auto f = factor_integer_root(c);
  if (!f) throw Error(ErrorKind::unsupported, "characteristic polynomial has no rational root");
  const long long disc = f->s * f->s - 4 * f->q;
  if (disc <= 0 || disc % 5 != 0 || !exact_sqrt(disc / 5))
    throw Error(ErrorKind::unsupported, "quadratic factor does not split over Q(sqrt5)");
  if (f->q != 1) throw Error(ErrorKind::unsupported, "quadratic factor is not reciprocal");
  const long long k = *exact_sqrt(disc / 5);

  EigenData out;
  // Roots (s +- k sqrt5)/2; the dominant one carries the sign of s.
  const Rational half(1, 2);
  const long long sign_s = f->s >= 0 ? 1 : -1;
  out.lambda = QSqrt5(Rational(static_cast<long>(f->s)) * half, Rational(static_cast<long>(sign_s * k)) * half);
  out.lambda_inverse = out.lambda.conjugate();
  out.third_eigenvalue = f->root;
  if (out.lambda * out.lambda_inverse * QSqrt5(static_cast<long>(out.third_eigenvalue)) !=
      QSqrt5(static_cast<long>(m.det())))
    throw Error(ErrorKind::invariant_violation, "eigenvalue product differs from the determinant");

  out.e_plus = nef_side(kernel_vector(m, out.lambda));
  out.e_minus_raw = nef_side(kernel_vector(m, out.lambda_inverse));
  QSqrt5 raw = pair_q(out.e_plus, out.e_minus_raw);
  if (!raw.is_rational()) throw Error(ErrorKind::invariant_violation, "eigenclass pairing is not rational");
  out.raw_pairing = raw.rational_part();
  out.normalization_factor = 1 / out.raw_pairing;
  out.e_minus = normalize_pair(out.e_plus, out.e_minus_raw).second;
  return out;
}

std::pair<QuadraticClass, QuadraticClass> normalize_pair(const QuadraticClass& e_plus, const QuadraticClass& e_minus) {
  if (nef_side(e_plus) != e_plus || nef_side(e_minus) != e_minus)
    throw Error(ErrorKind::precondition, "normalize_pair: classes must be on the nef side");
  QSqrt5 p = pair_q(e_plus, e_minus);
  if (p.is_zero()) throw Error(ErrorKind::precondition, "normalize_pair: degenerate pair, pairing is zero");
  QuadraticClass scaled = e_minus;
  QSqrt5 factor = p.inverse();
  for (auto& x : scaled.coords) x *= factor;
  return {e_plus, scaled};
}

const char* to_string(Rationality r) { return r == Rationality::rational ? "rational" : "irrational"; }

Rationality eigenline_rationality(const QuadraticClass& v) {
  if (v.is_zero()) throw Error(ErrorKind::invalid_argument, "eigenline_rationality: zero vector");
  // v = r + s sqrt5 spans a rational line iff r and s are proportional.
  const auto n = v.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = v.coords[i];
      const auto& b = v.coords[j];
      if (a.rational_part() * b.sqrt5_part() != a.sqrt5_part() * b.rational_part()) return Rationality::irrational;
    }
  return Rationality::rational;
}

namespace {

nlohmann::json scalar_json(const QSqrt5& x) {
  return {{"a", k3dyn::to_string(x.rational_part())}, {"b", k3dyn::to_string(x.sqrt5_part())}, {"float", x.to_double()}};
}

nlohmann::json class_json(const QuadraticClass& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v.coords) out.push_back(scalar_json(x));
  return out;
}

}  // namespace

std::string eigen_data_to_json(const EigenData& d, const std::array<int, 3>& order, bool inverse, int indent) {
  nlohmann::json out;
  out["convention"] = "T = s" + std::to_string(order[0]) + " o s" + std::to_string(order[1]) + " o s" +
                      std::to_string(order[2]) + " on points; pullback reverses the order";
  out["inverse"] = inverse;
  out["lambda"] = scalar_json(d.lambda);
  out["lambda_inverse"] = scalar_json(d.lambda_inverse);
  out["third_eigenvalue"] = d.third_eigenvalue;
  out["e_plus"] = class_json(d.e_plus);
  out["e_minus_raw"] = class_json(d.e_minus_raw);
  out["e_minus"] = class_json(d.e_minus);
  out["raw_pairing"] = k3dyn::to_string(d.raw_pairing);
  out["normalization_factor"] = k3dyn::to_string(d.normalization_factor);
  out["entropy"] = std::log(std::fabs(d.lambda.to_double()));
  return out.dump(indent);
}

}  // namespace k3dyn::picard
