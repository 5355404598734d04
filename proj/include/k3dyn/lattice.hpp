#pragma once

// Exact intersection theory on small integral lattices: signatures,
// definiteness, adjunction genus, null loci and the contraction criteria
// (negative definiteness plus Artin's genus bound) applied per connected
// component of a null locus.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "k3dyn/errors.hpp"
#include "k3dyn/quadratic_field.hpp"
#include "k3dyn/rational.hpp"

namespace k3dyn::lattice {

using IntMatrix = std::vector<std::vector<long long>>;

/// Symmetric integral Gram matrix. Construction rejects non-square or
/// non-symmetric input with ErrorKind::not_symmetric.
class IntersectionForm {
 public:
  explicit IntersectionForm(IntMatrix gram);

  std::size_t rank() const { return gram_.size(); }
  long long operator()(std::size_t i, std::size_t j) const { return gram_[i][j]; }
  const IntMatrix& gram() const { return gram_; }
  bool is_even() const;

  /// <u, v> = u^t G v over any scalar ring containing the integers.
  template <class Scalar>
  Scalar pair(std::span<const Scalar> u, std::span<const Scalar> v) const {
    check_size(u.size());
    check_size(v.size());
    Scalar total{};
    for (std::size_t i = 0; i < rank(); ++i) {
      if (u[i] == Scalar{}) continue;
      Scalar row{};
      for (std::size_t j = 0; j < rank(); ++j)
        if (gram_[i][j] != 0) row += Scalar(static_cast<long>(gram_[i][j])) * v[j];
      total += u[i] * row;
    }
    return total;
  }

  /// The Neron-Severi lattice of a generic (2,2,2) surface in the basis h1, h2, h3.
  static IntersectionForm wehler();

 private:
  void check_size(std::size_t n) const;
  IntMatrix gram_;
};

template <class Scalar>
struct DivisorClass {
  std::vector<Scalar> coords;

  std::size_t size() const { return coords.size(); }
  std::span<const Scalar> span() const { return coords; }
  bool is_zero() const {
    for (const auto& c : coords)
      if (!(c == Scalar{})) return false;
    return true;
  }
  friend bool operator==(const DivisorClass&, const DivisorClass&) = default;
};

using RationalClass = DivisorClass<Rational>;
using QuadraticClass = DivisorClass<QSqrt5>;

RationalClass make_class(std::initializer_list<long> coords);

template <class Scalar>
Scalar pairing(const IntersectionForm& form, const DivisorClass<Scalar>& u, const DivisorClass<Scalar>& v) {
  return form.pair<Scalar>(u.span(), v.span());
}

/// Curves C_i given by their classes and canonical degrees K.C_i.
struct CurveConfig {
  IntersectionForm form;
  std::vector<RationalClass> classes;
  std::vector<long long> k_dot;

  CurveConfig(IntersectionForm f, std::vector<RationalClass> c, std::vector<long long> k);

  std::size_t size() const { return classes.size(); }
  /// (C_i . C_j); integral because classes are integral.
  IntMatrix induced_gram() const;
  /// The configuration restricted to `indices`, presented in its own basis.
  CurveConfig restrict_to(std::span<const std::size_t> indices) const;
  /// A configuration whose lattice is the induced Gram itself (basis = the curves).
  static CurveConfig from_gram(IntMatrix gram, std::vector<long long> k_dot);
};

struct Signature {
  int pos = 0;
  int zero = 0;
  int neg = 0;
  int rank() const { return pos + zero + neg; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Counts by exact rational congruence diagonalization; no floating eigenvalues.
Signature signature(const IntersectionForm& form);
bool is_negative_definite(const IntersectionForm& form);

struct Genus {
  Rational value;
  /// False when K.C + C^2 is odd, which cannot happen for a curve on a smooth surface.
  bool integral = true;
};

Genus arithmetic_genus(long long c_sq, long long k_dot_c);

enum class CurveKind { minus_two, minus_one, other };
const char* to_string(CurveKind kind);
CurveKind classify_null_curve(long long c_sq, long long k_dot_c);

/// Indices i with <alpha, C_i> = 0.
std::vector<std::size_t> null_locus(const RationalClass& alpha, const CurveConfig& curves);

enum class HodgeVerdict { zero, negative, violation };
const char* to_string(HodgeVerdict verdict);

/// Requires <alpha,alpha> > 0 and <alpha,v> = 0 (ErrorKind::precondition otherwise).
HodgeVerdict hodge_index_check(const IntersectionForm& form, const RationalClass& alpha, const RationalClass& v);

struct ArtinResult {
  bool pass = true;
  long r_max = 0;
  std::size_t combinations_checked = 0;
  std::optional<std::vector<long>> witness;
  std::optional<Rational> witness_genus;
};

/// Checks p_a(Z) <= 0 for every Z = sum r_i C_i with 0 <= r_i <= r_max, not all
/// zero, in odometer order (last index fastest). Throws
/// ErrorKind::not_negative_definite when the configuration is not contractible.
ArtinResult artin_test(const CurveConfig& curves, long r_max);

long long euler_char_k3(long long l_sq);

enum class KummerVerdict { not_kummer, inconclusive };
const char* to_string(KummerVerdict verdict);
KummerVerdict kummer_screen(int picard_rank);

enum class ContractionVerdict { rational_singularities, contractible_only, not_contractible };
const char* to_string(ContractionVerdict verdict);

struct ComponentReport {
  std::vector<std::size_t> curves;
  std::vector<CurveKind> kinds;
  Signature signature;
  bool negative_definite = false;
  std::optional<ArtinResult> artin;
  ContractionVerdict verdict = ContractionVerdict::not_contractible;
};

struct ContractionReport {
  Rational alpha_square;
  std::vector<std::size_t> null_curves;
  std::vector<ComponentReport> components;
  long r_max = 0;
};

/// Null locus of a nef class with positive square, grouped into connected
/// components (adjacent when the pairing is nonzero), with a contractibility
/// verdict per component.
ContractionReport contraction_report(const RationalClass& alpha, const CurveConfig& curves, long r_max);

/// {"gram": [[...]], "classes": [[...]], "k_dot": [...], "alpha": [...]}; "alpha"
/// is optional and defaults to the all-ones vector.
struct ContractionInput {
  CurveConfig curves;
  RationalClass alpha;
};
ContractionInput parse_contraction_input(const std::string& json_text);
std::string report_to_json(const ContractionReport& report, int indent = 2);

}  // namespace k3dyn::lattice
