#pragma once

// Action of the three Wehler involutions and their composition on
// NS(X) = Z h1 + Z h2 + Z h3, with exact spectral data in Q(sqrt 5).
//
// Convention: T = s1 o s2 o s3 on points, so T^* = M3 M2 M1 on classes.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3dyn/lattice.hpp"
#include "k3dyn/quadratic_field.hpp"

namespace k3dyn::picard {

using Matrix3 = std::array<std::array<long long, 3>, 3>;

/// Integral 3x3 isometry of the Wehler Gram matrix. Construction checks
/// M^t G M = G and det M = +-1 (ErrorKind::invariant_violation otherwise).
class IsometryMatrix {
 public:
  explicit IsometryMatrix(const Matrix3& m);
  static IsometryMatrix identity();

  const Matrix3& entries() const { return m_; }
  long long operator()(int i, int j) const { return m_[i][j]; }
  long long trace() const { return m_[0][0] + m_[1][1] + m_[2][2]; }
  long long det() const;

  template <class Scalar>
  lattice::DivisorClass<Scalar> apply(const lattice::DivisorClass<Scalar>& v) const {
    lattice::DivisorClass<Scalar> out;
    out.coords.assign(3, Scalar{});
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (m_[i][j] != 0) out.coords[i] += Scalar(static_cast<long>(m_[i][j])) * v.coords[j];
    return out;
  }

  friend IsometryMatrix operator*(const IsometryMatrix& a, const IsometryMatrix& b);
  friend bool operator==(const IsometryMatrix&, const IsometryMatrix&) = default;

 private:
  Matrix3 m_;
};

Matrix3 multiply(const Matrix3& a, const Matrix3& b);
Matrix3 transpose(const Matrix3& a);
bool preserves_wehler_form(const Matrix3& m);

/// Pullback of the i-th Vieta involution (i in 1..3): fixes h_j, h_k and sends
/// h_i to -h_i + 2 h_j + 2 h_k.
IsometryMatrix involution_isometry(int i);

/// For T = s_{o[0]} o s_{o[1]} o s_{o[2]} returns T^* = M_{o[2]} M_{o[1]} M_{o[0]};
/// with `inverse` the pullback of T^{-1}, namely M_{o[0]} M_{o[1]} M_{o[2]}.
IsometryMatrix automorphism_action(std::array<int, 3> order = {1, 2, 3}, bool inverse = false);

/// Coefficients (c0, c1, c2, c3) of c0 x^3 + c1 x^2 + c2 x + c3, with c0 = 1.
std::array<long long, 4> char_poly(const IsometryMatrix& m);

struct EigenData {
  QSqrt5 lambda;
  QSqrt5 lambda_inverse;
  long long third_eigenvalue = 0;
  lattice::QuadraticClass e_plus;
  /// Nef-side representative of the conjugate eigenline before rescaling.
  lattice::QuadraticClass e_minus_raw;
  /// e_minus = normalization_factor * e_minus_raw, so that <e_plus, e_minus> = 1.
  lattice::QuadraticClass e_minus;
  Rational raw_pairing;
  Rational normalization_factor;
};

bool is_hyperbolic(const IsometryMatrix& m);
double spectral_radius(const IsometryMatrix& m);

/// Factors the characteristic polynomial as (x - r)(x^2 - s x + 1) with an
/// integer root r and a real quadratic factor splitting in Q(sqrt 5).
/// Throws ErrorKind::precondition for non-hyperbolic input and
/// ErrorKind::unsupported when the splitting field is not Q(sqrt 5).
EigenData spectral_data(const IsometryMatrix& m);

/// Rescales e_minus so that <e_plus, e_minus> = 1 exactly. Throws
/// ErrorKind::precondition for a zero pairing or a class off the nef side.
std::pair<lattice::QuadraticClass, lattice::QuadraticClass> normalize_pair(const lattice::QuadraticClass& e_plus,
                                                                           const lattice::QuadraticClass& e_minus);

/// Natural-log topological entropy log(spectral radius); zero when not hyperbolic.
double entropy(const IsometryMatrix& m);

enum class Rationality { rational, irrational };
const char* to_string(Rationality r);
Rationality eigenline_rationality(const lattice::QuadraticClass& v);

/// Multiplies by the sign that makes <v, h_i> > 0 for all i. Throws
/// ErrorKind::precondition when no sign does.
lattice::QuadraticClass nef_side(const lattice::QuadraticClass& v);

std::string eigen_data_to_json(const EigenData& data, const std::array<int, 3>& order, bool inverse, int indent = 2);

}  // namespace k3dyn::picard
