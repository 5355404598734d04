#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "k3dyn/lattice.hpp"

using namespace k3dyn;
using namespace k3dyn::lattice;

namespace {

// Symmetric Jacobi eigenvalue sweep in doubles, an oracle independent of the
// exact congruence diagonalization.
Signature float_signature(const IntMatrix& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<double>(g[i][j]);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-22) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  Signature s;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i][i] > 1e-9) ++s.pos;
    else if (a[i][i] < -1e-9) ++s.neg;
    else ++s.zero;
  }
  return s;
}

IntMatrix congruence(const IntMatrix& g, const IntMatrix& m) {
  const std::size_t n = g.size();
  IntMatrix out(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) out[i][j] += m[k][i] * g[k][l] * m[l][j];
  return out;
}

// Unimodular matrix as a product of elementary row operations.
IntMatrix random_unimodular(std::size_t n, std::mt19937_64& rng) {
  IntMatrix m(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  std::uniform_int_distribution<int> idx(0, static_cast<int>(n) - 1), coef(-2, 2);
  for (int step = 0; step < 6; ++step) {
    const int i = idx(rng), j = idx(rng);
    if (i == j) {
      for (auto& v : m[i]) v = -v;
      continue;
    }
    const int k = coef(rng);
    for (std::size_t c = 0; c < n; ++c) m[i][c] += k * m[j][c];
  }
  return m;
}

}  // namespace

TEST_CASE("signature fixtures") {
  CHECK(signature(IntersectionForm::wehler()) == Signature{1, 0, 2});
  CHECK(signature(IntersectionForm(IntMatrix{{1, 0}, {0, 1}})) == Signature{2, 0, 0});
  CHECK(signature(IntersectionForm(IntMatrix{{0, 1}, {1, 0}})) == Signature{1, 0, 1});
  CHECK(float_signature(IntersectionForm::wehler().gram()) == Signature{1, 0, 2});
}

TEST_CASE("signature matches a floating eigenvalue oracle and is congruence invariant") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> entry(-4, 4), size(1, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(size(rng));
    IntMatrix g(n, std::vector<long long>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) g[i][j] = g[j][i] = entry(rng);
    const auto s = signature(IntersectionForm(g));
    CHECK(static_cast<std::size_t>(s.rank()) == n);
    CHECK(s == float_signature(g));
    const auto moved = congruence(g, random_unimodular(n, rng));
    CHECK(signature(IntersectionForm(moved)) == s);
  }
}

TEST_CASE("non-symmetric Gram is rejected") {
  try {
    IntersectionForm(IntMatrix{{0, 1}, {2, 0}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_symmetric);
  }
  CHECK(IntersectionForm::wehler().is_even());
}

TEST_CASE("negative definiteness") {
  CHECK(is_negative_definite(IntersectionForm(IntMatrix{{-2}})));
  CHECK(is_negative_definite(IntersectionForm(IntMatrix{{-2, 1}, {1, -2}})));
  CHECK_FALSE(is_negative_definite(IntersectionForm(IntMatrix{{-1, 2}, {2, -1}})));
}

TEST_CASE("arithmetic genus and curve kinds") {
  CHECK(arithmetic_genus(0, 0).value == 1);
  CHECK(arithmetic_genus(-2, 0).value == 0);
  CHECK(arithmetic_genus(-1, -1).value == 0);
  CHECK_FALSE(arithmetic_genus(-1, 0).integral);
  CHECK(classify_null_curve(-2, 0) == CurveKind::minus_two);
  CHECK(classify_null_curve(-1, -1) == CurveKind::minus_one);
  CHECK(classify_null_curve(0, 0) == CurveKind::other);
}

TEST_CASE("null locus by direct pairing") {
  const auto g = IntersectionForm::wehler();
  CHECK(null_locus(make_class({1, 1, 1}), CurveConfig(g, {make_class({1, -1, 0})}, {0})) ==
        std::vector<std::size_t>{0});
  CHECK(null_locus(make_class({1, 1, 1}), CurveConfig(g, {}, {})).empty());
  CHECK(null_locus(make_class({1, 0, 0}), CurveConfig(g, {make_class({0, 1, 0})}, {0})).empty());
}

TEST_CASE("Hodge index check") {
  const auto g = IntersectionForm::wehler();
  const auto alpha = make_class({1, 1, 1});
  CHECK(hodge_index_check(g, alpha, make_class({1, -1, 0})) == HodgeVerdict::negative);
  CHECK(hodge_index_check(g, alpha, make_class({0, 0, 0})) == HodgeVerdict::zero);
  CHECK_THROWS_AS(hodge_index_check(g, alpha, make_class({1, 0, 0})), Error);

  // q(v) = 4(v1 v2 + v1 v3 + v2 v3) on the plane v1 + v2 + v3 = 0 equals
  // -2(v1^2 + v2^2 + v3^2), which is negative off the origin.
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-1000, 1000);
  int violations = 0;
  for (int i = 0; i < 20000; ++i) {
    const long a = d(rng), b = d(rng);
    const auto v = make_class({a, b, -a - b});
    const auto verdict = hodge_index_check(g, alpha, v);
    const bool zero = a == 0 && b == 0;
    if (verdict == HodgeVerdict::violation) ++violations;
    CHECK((verdict == HodgeVerdict::zero) == zero);
    CHECK(pairing(g, v, v) == Rational(-2 * (a * a + b * b + (a + b) * (a + b))));
  }
  CHECK(violations == 0);
}

TEST_CASE("Artin test") {
  SUBCASE("single (-2)-curve, closed form 1 - r^2") {
    for (long r = 1; r <= 5; ++r) {
      const auto res = artin_test(CurveConfig::from_gram({{-2}}, {0}), r);
      CHECK(res.pass);
      CHECK(res.combinations_checked == static_cast<std::size_t>(r));
    }
  }
  SUBCASE("A2 chain, all 15 combinations") {
    const auto res = artin_test(CurveConfig::from_gram({{-2, 1}, {1, -2}}, {0, 0}), 3);
    CHECK(res.pass);
    CHECK(res.combinations_checked == 15);
    // Oracle: p_a(Z) = 1 + Z^2/2 with Z^2 = -2 r1^2 + 2 r1 r2 - 2 r2^2 < 0.
    for (long r1 = 0; r1 <= 3; ++r1)
      for (long r2 = 0; r2 <= 3; ++r2)
        if (r1 || r2) CHECK(1 + (-2 * r1 * r1 + 2 * r1 * r2 - 2 * r2 * r2) / 2 <= 0);
  }
  SUBCASE("non negative definite input errors") {
    try {
      artin_test(CurveConfig::from_gram({{0}}, {0}), 2);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::not_negative_definite);
    }
  }
  SUBCASE("two (-2)-curves meeting twice error") {
    // Two (-2)-curves meeting twice: Z = C1 + C2 has Z^2 = 0, so the form is
    // not negative definite and the configuration errors before enumeration.
    CHECK_THROWS_AS(artin_test(CurveConfig::from_gram({{-2, 2}, {2, -2}}, {0, 0}), 2), Error);
  }
}

TEST_CASE("Euler characteristic and Kummer screen") {
  CHECK(euler_char_k3(0) == 2);
  CHECK(euler_char_k3(-2) == 1);
  CHECK(euler_char_k3(4) == 4);
  CHECK(kummer_screen(3) == KummerVerdict::not_kummer);
  CHECK(kummer_screen(17) == KummerVerdict::inconclusive);
  CHECK_THROWS_AS(kummer_screen(21), Error);
}

TEST_CASE("contraction report") {
  SUBCASE("single (-2)-class orthogonal to alpha") {
    const IntersectionForm form(IntMatrix{{2, 0}, {0, -2}});
    CurveConfig cc(form, {make_class({0, 1})}, {0});
    const auto rep = contraction_report(make_class({1, 0}), cc, 3);
    REQUIRE(rep.components.size() == 1);
    CHECK(rep.components[0].verdict == ContractionVerdict::rational_singularities);
    CHECK(rep.components[0].kinds[0] == CurveKind::minus_two);
  }
  SUBCASE("no null curves") {
    const auto g = IntersectionForm::wehler();
    const auto rep = contraction_report(make_class({1, 1, 1}), CurveConfig(g, {make_class({1, 0, 0})}, {0}), 2);
    CHECK(rep.null_curves.empty());
    CHECK(rep.components.empty());
  }
  SUBCASE("component with an isotropic combination is not contractible") {
    const IntersectionForm form(IntMatrix{{2, 0, 0}, {0, -2, 2}, {0, 2, -2}});
    CurveConfig cc(form, {make_class({0, 1, 0}), make_class({0, 0, 1})}, {0, 0});
    const auto rep = contraction_report(make_class({1, 0, 0}), cc, 2);
    REQUIRE(rep.components.size() == 1);
    CHECK(rep.components[0].verdict == ContractionVerdict::not_contractible);
    CHECK_FALSE(rep.components[0].negative_definite);
  }
  SUBCASE("contraction verdicts do not depend on curve order") {
    const IntersectionForm form(IntMatrix{{4, 0, 0, 0}, {0, -2, 1, 0}, {0, 1, -2, 0}, {0, 0, 0, -2}});
    std::vector<RationalClass> cls = {make_class({0, 1, 0, 0}), make_class({0, 0, 1, 0}), make_class({0, 0, 0, 1})};
    const auto a = contraction_report(make_class({1, 0, 0, 0}), CurveConfig(form, cls, {0, 0, 0}), 2);
    std::reverse(cls.begin(), cls.end());
    const auto b = contraction_report(make_class({1, 0, 0, 0}), CurveConfig(form, cls, {0, 0, 0}), 2);
    REQUIRE(a.components.size() == 2);
    REQUIRE(b.components.size() == 2);
    std::multiset<std::pair<std::size_t, int>> va, vb;
    for (const auto& c : a.components) va.insert({c.curves.size(), static_cast<int>(c.verdict)});
    for (const auto& c : b.components) vb.insert({c.curves.size(), static_cast<int>(c.verdict)});
    CHECK(va == vb);
  }
  SUBCASE("json input round trip") {
    const auto in = parse_contraction_input(R"({"gram": [[2,0],[0,-2]], "classes": [[0,1]], "k_dot": [0], "alpha": [1,0]})");
    const auto rep = contraction_report(in.alpha, in.curves, 2);
    const auto js = report_to_json(rep);
    CHECK(js.find("rational_singularities") != std::string::npos);
    CHECK_THROWS_AS(parse_contraction_input(R"({"gram": [[2]], "classes": [], "k_dot": [], "extra": 1})"), Error);
  }
}
