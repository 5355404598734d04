#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "json.hpp"
#include "k3dyn/picard.hpp"

using namespace k3dyn;
using namespace k3dyn::picard;

namespace {

const Matrix3 kGram = {{{0, 2, 2}, {2, 0, 2}, {2, 2, 0}}};

// Faddeev-LeVerrier: M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k)/k.
std::array<long long, 4> leverrier(const Matrix3& a) {
  std::array<long long, 4> c{1, 0, 0, 0};
  Matrix3 m{};
  for (int i = 0; i < 3; ++i) m[i][i] = 1;
  for (int k = 1; k <= 3; ++k) {
    const Matrix3 am = multiply(a, m);
    long long tr = 0;
    for (int i = 0; i < 3; ++i) tr += am[i][i];
    c[k] = -tr / k;
    m = am;
    for (int i = 0; i < 3; ++i) m[i][i] += c[k];
  }
  return c;
}

lattice::QuadraticClass qclass(QSqrt5 a, QSqrt5 b, QSqrt5 c) { return {{a, b, c}}; }

QSqrt5 q(long a, long b, long den = 1) { return {Rational(a, den), Rational(b, den)}; }

QSqrt5 gram_pair(const lattice::QuadraticClass& u, const lattice::QuadraticClass& v) {
  return lattice::pairing(lattice::IntersectionForm::wehler(), u, v);
}

}  // namespace

TEST_CASE("involution isometries match a brute-force search") {
  // Matrices fixing h2, h3 with small entries that preserve the Gram and
  // send h1 to an isotropic class other than h1.
  int found = 0;
  Matrix3 hit{};
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c) {
        Matrix3 m = {{{a, 0, 0}, {b, 1, 0}, {c, 0, 1}}};
        if (!preserves_wehler_form(m)) continue;
        if (a == 1 && b == 0 && c == 0) continue;
        ++found;
        hit = m;
      }
  CHECK(found == 1);
  CHECK(hit == involution_isometry(1).entries());
  CHECK(involution_isometry(1).entries() == Matrix3{{{-1, 0, 0}, {2, 1, 0}, {2, 0, 1}}});
  for (int i = 1; i <= 3; ++i) {
    const auto m = involution_isometry(i);
    CHECK(m * m == IsometryMatrix::identity());
    CHECK(multiply(multiply(transpose(m.entries()), kGram), m.entries()) == kGram);
    CHECK(m.det() == -1);
  }
}

TEST_CASE("automorphism action") {
  const auto t = automorphism_action();
  const auto oracle = multiply(multiply(involution_isometry(3).entries(), involution_isometry(2).entries()),
                               involution_isometry(1).entries());
  CHECK(t.entries() == oracle);
  CHECK(t.entries() == Matrix3{{{15, 6, 2}, {10, 3, 2}, {-6, -2, -1}}});
  CHECK(t.trace() == 17);
  CHECK(t.det() == -1);
  CHECK(t * automorphism_action({1, 2, 3}, true) == IsometryMatrix::identity());
  CHECK_THROWS_AS(IsometryMatrix(Matrix3{{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}}), Error);
}

TEST_CASE("characteristic polynomial against Faddeev-LeVerrier") {
  CHECK(char_poly(automorphism_action()) == std::array<long long, 4>{1, -17, -17, 1});
  CHECK(char_poly(IsometryMatrix::identity()) == std::array<long long, 4>{1, -3, 3, -1});
  // (x-1)^2 (x+1) = x^3 - x^2 - x + 1
  CHECK(char_poly(involution_isometry(1)) == std::array<long long, 4>{1, -1, -1, 1});
  for (const std::array<int, 3> order : {std::array<int, 3>{1, 2, 3}, {2, 3, 1}, {3, 1, 2}, {1, 3, 2}}) {
    for (bool inv : {false, true}) {
      const auto m = automorphism_action(order, inv);
      CHECK(char_poly(m) == leverrier(m.entries()));
    }
  }
}

TEST_CASE("spectral data") {
  const auto t = automorphism_action();
  const auto d = spectral_data(t);
  CHECK(d.lambda == q(9, 4));
  CHECK(d.lambda_inverse == q(9, -4));
  CHECK(d.lambda * d.lambda_inverse == QSqrt5(1));
  CHECK(d.third_eigenvalue == -1);
  CHECK(std::fabs(d.lambda.to_double() - 17.944272) < 1e-6);

  // Exact kernel oracle: e_plus = (1, (sqrt5-1)/2, (sqrt5-3)/2) up to scale.
  const auto expected = qclass(QSqrt5(1), q(-1, 1, 2), q(-3, 1, 2));
  const auto ratio = d.e_plus.coords[0] / expected.coords[0];
  for (int i = 0; i < 3; ++i) CHECK(d.e_plus.coords[i] == ratio * expected.coords[i]);
  const auto te = t.apply(d.e_plus);
  for (int i = 0; i < 3; ++i) CHECK(te.coords[i] == d.lambda * d.e_plus.coords[i]);
  const auto tm = t.apply(d.e_minus);
  for (int i = 0; i < 3; ++i) CHECK(tm.coords[i] == d.lambda_inverse * d.e_minus.coords[i]);

  CHECK(gram_pair(d.e_plus, d.e_plus).is_zero());
  CHECK(gram_pair(d.e_minus, d.e_minus).is_zero());
  CHECK(d.raw_pairing == 10);
  CHECK(gram_pair(d.e_plus, d.e_minus) == QSqrt5(1));
  for (int i = 0; i < 3; ++i) {
    lattice::QuadraticClass h{{QSqrt5(0), QSqrt5(0), QSqrt5(0)}};
    h.coords[i] = QSqrt5(1);
    CHECK(gram_pair(d.e_plus, h).sign() > 0);
    CHECK(gram_pair(d.e_minus, h).sign() > 0);
  }
}

TEST_CASE("normalize_pair") {
  const auto ep = qclass(QSqrt5(1), q(-1, 1, 2), q(-3, 1, 2));
  const auto em_raw = qclass(QSqrt5(-1), q(1, 1, 2), q(3, 1, 2));
  CHECK(gram_pair(ep, em_raw) == QSqrt5(10));
  const auto t = automorphism_action();
  const auto tm = t.apply(em_raw);
  for (int i = 0; i < 3; ++i) CHECK(tm.coords[i] == q(9, -4) * em_raw.coords[i]);
  const auto [p1, m1] = normalize_pair(ep, em_raw);
  CHECK(gram_pair(p1, m1) == QSqrt5(1));
  for (int i = 0; i < 3; ++i) CHECK(m1.coords[i] == em_raw.coords[i] * QSqrt5(Rational(1, 10)));
  const auto [p2, m2] = normalize_pair(p1, m1);
  CHECK(p2 == p1);
  CHECK(m2 == m1);
  CHECK_THROWS_AS(normalize_pair(ep, ep), Error);
}

TEST_CASE("hyperbolicity, spectral radius and entropy") {
  CHECK(is_hyperbolic(automorphism_action()));
  CHECK_FALSE(is_hyperbolic(involution_isometry(1)));
  CHECK_FALSE(is_hyperbolic(IsometryMatrix::identity()));
  CHECK(std::fabs(entropy(automorphism_action()) - std::log(9 + 4 * std::sqrt(5.0))) < 1e-12);
  CHECK(std::fabs(entropy(automorphism_action()) - 2.887270) < 1e-6);
  CHECK(entropy(IsometryMatrix::identity()) == 0);
  CHECK(entropy(involution_isometry(1)) == 0);
  CHECK(std::fabs(spectral_radius(automorphism_action()) - 17.94427191) < 1e-8);
  CHECK_THROWS_AS(spectral_data(involution_isometry(2)), Error);
}

TEST_CASE("eigenline rationality") {
  CHECK(eigenline_rationality(qclass(QSqrt5(1), q(-1, 1, 2), q(-3, 1, 2))) == Rationality::irrational);
  CHECK(eigenline_rationality(qclass(QSqrt5(1), QSqrt5(1), QSqrt5(1))) == Rationality::rational);
  CHECK(eigenline_rationality(qclass(q(0, 1), q(0, 2), q(0, 3))) == Rationality::rational);
}

TEST_CASE("every composition order is a hyperbolic isometry with the same entropy") {
  const double h = std::log(9 + 4 * std::sqrt(5.0));
  for (const std::array<int, 3> order :
       {std::array<int, 3>{1, 2, 3}, {1, 3, 2}, {2, 1, 3}, {2, 3, 1}, {3, 1, 2}, {3, 2, 1}}) {
    for (bool inv : {false, true}) {
      const auto m = automorphism_action(order, inv);
      CHECK(preserves_wehler_form(m.entries()));
      CHECK(std::fabs(entropy(m) - h) < 1e-12);
      const auto d = spectral_data(m);
      CHECK(gram_pair(d.e_plus, d.e_minus) == QSqrt5(1));
    }
  }
}

TEST_CASE("eigen data json") {
  const auto d = spectral_data(automorphism_action());
  const auto j = nlohmann::json::parse(eigen_data_to_json(d, {1, 2, 3}, false));
  CHECK(j["lambda"]["a"] == "9");
  CHECK(j["lambda"]["b"] == "4");
  CHECK(j["raw_pairing"] == "10");
  CHECK(j["normalization_factor"] == "1/10");
  CHECK(j["third_eigenvalue"] == -1);
}
