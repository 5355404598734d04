#include "k3dyn/surface.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace k3dyn::surface {

WehlerCoefficients::WehlerCoefficients(std::array<Rational, 27> c) : c_(std::move(c)) {
  for (int i = 0; i < 27; ++i) {
    d_[i] = c_[i].get_d();
    scale_ = std::max(scale_, std::fabs(d_[i]));
  }
  if (scale_ == 0) throw Error(ErrorKind::invalid_argument, "Wehler polynomial is identically zero");
}

std::string stage_name(int axis) { return "stage s" + std::to_string(axis + 1); }

WehlerCoefficients random_wehler(std::uint64_t seed, long long coeff_bound, std::size_t screen_samples) {
  if (coeff_bound < 1) throw Error(ErrorKind::invalid_argument, "random_wehler: coeff_bound must be at least 1");
  Rng rng(seed);
  std::array<Rational, 27> c;
  bool nonzero = false;
  while (!nonzero) {
    for (auto& x : c) {
      x = static_cast<long>(uniform_int(rng, -coeff_bound, coeff_bound));
      nonzero = nonzero || x != 0;
    }
  }
  WehlerCoefficients w(std::move(c));
  w.seed = seed;
  w.bound = coeff_bound;
  w.screen = smoothness_screen(w, screen_samples, seed);
  return w;
}

WehlerCoefficients through_point(const WehlerCoefficients& c, const ExactPoint& p) {
  const Rational m = p[0].w0 * p[0].w0 * p[1].w0 * p[1].w0 * p[2].w0 * p[2].w0;
  if (m == 0) throw Error(ErrorKind::invalid_argument, "through_point: the constant monomial vanishes at p");
  auto coeffs = c.all();
  coeffs[0] -= eval_F(c, p) / m;
  WehlerCoefficients out(std::move(coeffs));
  out.seed = c.seed;
  out.bound = c.bound;
  return out;
}

std::array<Pair<Complex>, 2> fiber_roots(const FiberQuadratic<Complex>& q) {
  const Complex disc = q.B * q.B - 4.0 * q.A * q.C;
  const Complex sq = std::sqrt(disc);
  const Complex plus = q.B + sq;
  const Complex minus = q.B - sq;
  const Complex qq = -0.5 * (std::abs(plus) >= std::abs(minus) ? plus : minus);
  if (qq == 0.0) {
    // B = 0 and A C = 0: a double root at 0 or at infinity.
    if (q.A != 0.0) return {Pair<Complex>{1.0, 0.0}, Pair<Complex>{1.0, 0.0}};
    return {Pair<Complex>{0.0, 1.0}, Pair<Complex>{0.0, 1.0}};
  }
  // t1 = qq / A and t2 = C / qq, written projectively.
  return {Pair<Complex>{q.A, qq}, Pair<Complex>{qq, q.C}};
}

std::optional<std::array<Pair<Rational>, 2>> rational_fiber_roots(const FiberQuadratic<Rational>& q) {
  const Rational disc = q.B * q.B - 4 * q.A * q.C;
  if (sgn(disc) < 0) return std::nullopt;
  const Integer& num = disc.get_num();
  const Integer& den = disc.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rational sq(rn, rd);
  sq.canonicalize();
  if (q.A != 0) {
    return std::array<Pair<Rational>, 2>{Pair<Rational>{2 * q.A, -q.B + sq}, Pair<Rational>{2 * q.A, -q.B - sq}};
  }
  if (q.B != 0) return std::array<Pair<Rational>, 2>{Pair<Rational>{0, 1}, Pair<Rational>{q.B, -q.C}};
  if (q.C != 0) return std::array<Pair<Rational>, 2>{Pair<Rational>{0, 1}, Pair<Rational>{0, 1}};
  return std::nullopt;
}

FloatPoint sample_point(const WehlerCoefficients& c, Rng& rng, int axis) {
  FloatPoint p;
  for (int a = 0; a < 3; ++a) {
    if (a == axis) {
      p[a] = {1.0, 0.0};
      continue;
    }
    auto w = fubini_study_pair(rng);
    p[a] = {w[0], w[1]};
  }
  const auto q = fiber_quadratic(c, axis, p);
  const auto roots = fiber_roots(q);
  p[axis] = roots[rng() & 1U];
  return normalized(p);
}

FloatPoint to_float(const ExactPoint& p) {
  FloatPoint out;
  // Ratios keep huge heights representable.
  for (int a = 0; a < 3; ++a) {
    const auto& w = p[a];
    if (w.w0 == 0 && w.w1 == 0) throw Error(ErrorKind::invalid_argument, "homogeneous pair is zero");
    if (cmp(abs(w.w0), abs(w.w1)) >= 0) out[a] = {1.0, Rational(w.w1 / w.w0).get_d()};
    else out[a] = {Rational(w.w0 / w.w1).get_d(), 1.0};
  }
  return out;
}

double residual(const WehlerCoefficients& c, const FloatPoint& p) { return std::abs(eval_F(c, normalized(p))); }

double point_distance(const FloatPoint& a, const FloatPoint& b) {
  double worst = 0;
  for (int i = 0; i < 3; ++i) {
    const auto& u = a[i];
    const auto& v = b[i];
    const double nu = std::sqrt(std::norm(u.w0) + std::norm(u.w1));
    const double nv = std::sqrt(std::norm(v.w0) + std::norm(v.w1));
    worst = std::max(worst, std::abs(u.w0 * v.w1 - u.w1 * v.w0) / (nu * nv));
  }
  return worst;
}

ChartPoint to_chart(const FloatPoint& p) {
  ChartPoint cp;
  for (int a = 0; a < 3; ++a) {
    const auto& w = p[a];
    if (std::abs(w.w0) >= std::abs(w.w1)) {
      cp.flip[a] = 0;
      cp.t[a] = w.w1 / w.w0;
    } else {
      cp.flip[a] = 1;
      cp.t[a] = w.w0 / w.w1;
    }
  }
  return cp;
}

FloatPoint from_chart(const ChartPoint& cp) {
  FloatPoint p;
  for (int a = 0; a < 3; ++a) p[a] = cp.flip[a] == 0 ? Pair<Complex>{1.0, cp.t[a]} : Pair<Complex>{cp.t[a], 1.0};
  return p;
}

namespace {

Point<Jet> jet_point(const std::array<int, 3>& flip, const std::array<Jet, 3>& t) {
  Point<Jet> p;
  for (int a = 0; a < 3; ++a) p[a] = flip[a] == 0 ? Pair<Jet>{Jet(1.0), t[a]} : Pair<Jet>{t[a], Jet(1.0)};
  return p;
}

std::array<Jet, 3> seeded(const ChartPoint& cp) {
  return {Jet(cp.t[0], 0), Jet(cp.t[1], 1), Jet(cp.t[2], 2)};
}

int chart_sign(const ChartPoint& cp) { return ((cp.flip[0] + cp.flip[1] + cp.flip[2]) % 2 == 0) ? 1 : -1; }

}  // namespace

std::array<Complex, 3> chart_gradient(const WehlerCoefficients& c, const ChartPoint& cp) {
  const Jet f = eval_F(c, jet_point(cp.flip, seeded(cp)));
  return f.d;
}

Frame frame_at(const WehlerCoefficients& c, const ChartPoint& cp) {
  Frame fr;
  fr.gradient = chart_gradient(c, cp);
  int best = 0;
  for (int a = 1; a < 3; ++a)
    if (std::abs(fr.gradient[a]) > std::abs(fr.gradient[best])) best = a;
  fr.dependent = best;
  fr.free = {(best + 1) % 3, (best + 2) % 3};
  return fr;
}

Mat2 multiply(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

Complex det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

AmbientMap ambient_map(const WehlerCoefficients& c, const ChartPoint& in, std::span<const int> axes) {
  AmbientMap out;
  out.in = in;
  std::array<int, 3> flip = in.flip;
  std::array<Jet, 3> t = seeded(in);
  for (int axis : axes) {
    const Point<Jet> p = jet_point(flip, t);
    const auto q = fiber_quadratic(c, axis, p);
    if (is_degenerate(q, c.scale()))
      throw Error(ErrorKind::degenerate_fiber, stage_name(axis) + ": involution is indeterminate on this fiber");
    const Pair<Jet> w = lift_conjugate(q, p[axis]);
    if (std::abs(w.w0.v) >= std::abs(w.w1.v)) {
      flip[axis] = 0;
      t[axis] = w.w1 / w.w0;
    } else {
      flip[axis] = 1;
      t[axis] = w.w0 / w.w1;
    }
  }
  out.out.flip = flip;
  for (int i = 0; i < 3; ++i) {
    out.out.t[i] = t[i].v;
    for (int j = 0; j < 3; ++j) out.jacobian[i][j] = t[i].d[j];
  }
  return out;
}

TangentMap tangent_of(const WehlerCoefficients& c, const FloatPoint& p, std::span<const int> axes) {
  TangentMap tm;
  tm.in = to_chart(normalized(p));
  tm.in_frame = frame_at(c, tm.in);
  const auto& g = tm.in_frame.gradient;
  const int d = tm.in_frame.dependent;
  if (std::abs(g[d]) <= 1e-13 * c.scale())
    throw Error(ErrorKind::singular_point, "tangent map: gradient of F vanishes at the point");

  const AmbientMap am = ambient_map(c, tm.in, axes);
  tm.out = am.out;
  tm.out_frame = frame_at(c, tm.out);
  const auto& g_out = tm.out_frame.gradient;
  const int d_out = tm.out_frame.dependent;
  if (std::abs(g_out[d_out]) <= 1e-13 * c.scale())
    throw Error(ErrorKind::singular_point, "tangent map: gradient of F vanishes at the image point");

  for (int col = 0; col < 2; ++col) {
    std::array<Complex, 3> e{};
    const int a = tm.in_frame.free[col];
    e[a] = 1.0;
    e[d] = -g[a] / g[d];
    for (int row = 0; row < 2; ++row) {
      const int r = tm.out_frame.free[row];
      Complex sum = 0.0;
      for (int k = 0; k < 3; ++k) sum += am.jacobian[r][k] * e[k];
      tm.matrix[row][col] = sum;
    }
  }
  // Omega = sign(chart) dt_a ^ dt_b / F_d with (d, a, b) cyclic.
  tm.omega_jacobian =
      det(tm.matrix) * static_cast<double>(chart_sign(tm.in) * chart_sign(tm.out)) * g[d] / g_out[d_out];
  return tm;
}

TangentMap tangent_map(const WehlerCoefficients& c, const FloatPoint& p, bool inverse) {
  const auto axes = stage_axes(inverse);
  return tangent_of(c, p, axes);
}

Complex omega_jacobian(const WehlerCoefficients& c, const FloatPoint& p, bool inverse) {
  return tangent_map(c, p, inverse).omega_jacobian;
}

ChartPoint solve_dependent(const WehlerCoefficients& c, ChartPoint guess, int dependent) {
  const FloatPoint p = from_chart(guess);
  const auto q = fiber_quadratic(c, dependent, p);
  if (is_degenerate(q, c.scale()))
    throw Error(ErrorKind::degenerate_fiber, "solve_dependent: degenerate fiber");
  const auto roots = fiber_roots(q);
  double best = HUGE_VAL;
  Pair<Complex> chosen = p[dependent];
  for (const auto& r : roots) {
    FloatPoint trial = p;
    trial[dependent] = r;
    const double dist = point_distance(trial, p);
    if (dist < best) {
      best = dist;
      chosen = r;
    }
  }
  guess.t[dependent] = guess.flip[dependent] == 0 ? chosen.w1 / chosen.w0 : chosen.w0 / chosen.w1;
  return guess;
}

namespace {

// Complex-analytic Hessian of F in chart coordinates by central differences of
// the jet gradient.
Mat3 chart_hessian(const WehlerCoefficients& c, const ChartPoint& cp) {
  Mat3 h{};
  const double step = 1e-6;
  for (int j = 0; j < 3; ++j) {
    ChartPoint plus = cp;
    ChartPoint minus = cp;
    plus.t[j] += step;
    minus.t[j] -= step;
    const auto gp = chart_gradient(c, plus);
    const auto gm = chart_gradient(c, minus);
    for (int i = 0; i < 3; ++i) h[i][j] = (gp[i] - gm[i]) / (2 * step);
  }
  return h;
}

std::optional<std::array<Complex, 3>> solve3(Mat3 a, std::array<Complex, 3> b) {
  for (int k = 0; k < 3; ++k) {
    int piv = k;
    for (int i = k + 1; i < 3; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (std::abs(a[piv][k]) < 1e-300) return std::nullopt;
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (int i = k + 1; i < 3; ++i) {
      const Complex f = a[i][k] / a[k][k];
      for (int j = k; j < 3; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::array<Complex, 3> x{};
  for (int k = 2; k >= 0; --k) {
    Complex s = b[k];
    for (int j = k + 1; j < 3; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

double max_abs(const std::array<Complex, 3>& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

ScreenWitness witness(const std::string& kind, const FloatPoint& p, double res, double grad) {
  ScreenWitness w;
  w.kind = kind;
  for (int a = 0; a < 3; ++a) w.point[a] = {p[a].w0, p[a].w1};
  w.residual = res;
  w.gradient_norm = grad;
  return w;
}

bool already_flagged(const ScreenReport& r, const FloatPoint& p) {
  for (const auto& w : r.flagged) {
    FloatPoint q;
    for (int a = 0; a < 3; ++a) q[a] = {w.point[a][0], w.point[a][1]};
    if (point_distance(p, q) < 1e-6) return true;
  }
  return false;
}

}  // namespace

ScreenReport smoothness_screen(const WehlerCoefficients& c, std::size_t n_samples, std::uint64_t seed) {
  ScreenReport report;
  report.samples = n_samples;
  if (n_samples == 0) report.warnings.push_back("no samples requested; screen passes vacuously");
  const double tol = 1e-9 * c.scale();

  auto check_singular = [&](const ChartPoint& cp) {
    const FloatPoint p = from_chart(cp);
    const double res = std::abs(eval_F(c, p));
    const double grad = max_abs(chart_gradient(c, cp));
    if (res <= tol && grad <= tol && !already_flagged(report, p)) {
      report.flagged.push_back(witness("singular_point", normalized(p), res, grad));
      report.pass = false;
    }
  };

  // Coordinate vertices: small integer coefficients make these evaluations exact.
  for (int mask = 0; mask < 8; ++mask) {
    ChartPoint cp;
    for (int a = 0; a < 3; ++a) cp.flip[a] = (mask >> a) & 1;
    check_singular(cp);
  }

  for (std::size_t s = 0; s < n_samples; ++s) {
    Rng rng(sub_seed(seed, s));
    const int axis = static_cast<int>(s % 3);
    FloatPoint base;
    for (int a = 0; a < 3; ++a) {
      auto w = fubini_study_pair(rng);
      base[a] = {w[0], w[1]};
    }
    const auto q = fiber_quadratic(c, axis, base);
    if (is_degenerate(q, 1e4 * c.scale())) {  // within 1e-8 relative
      if (!already_flagged(report, base)) {
        report.flagged.push_back(witness("degenerate_fiber", normalized(base), 0.0, 0.0));
        report.pass = false;
      }
      continue;
    }
    for (const auto& root : fiber_roots(q)) {
      FloatPoint p = base;
      p[axis] = root;
      ChartPoint cp = to_chart(normalized(p));
      if (max_abs(chart_gradient(c, cp)) > 0.05 * c.scale()) continue;
      // Newton on grad F = 0 from low-gradient samples.
      for (int it = 0; it < 30; ++it) {
        const auto g = chart_gradient(c, cp);
        if (max_abs(g) <= 1e-14 * c.scale()) break;
        auto dx = solve3(chart_hessian(c, cp), g);
        if (!dx) break;
        for (int a = 0; a < 3; ++a) cp.t[a] -= (*dx)[a];
        if (max_abs(cp.t) > 10.0) break;
      }
      if (max_abs(cp.t) <= 10.0) check_singular(cp);
    }
  }
  return report;
}

namespace {

using nlohmann::json;

json screen_json(const ScreenReport& r) {
  json s;
  s["pass"] = r.pass;
  s["samples"] = r.samples;
  s["warnings"] = r.warnings;
  json flagged = json::array();
  for (const auto& w : r.flagged) {
    json pt = json::array();
    for (const auto& pair : w.point)
      pt.push_back({pair[0].real(), pair[0].imag(), pair[1].real(), pair[1].imag()});
    flagged.push_back({{"kind", w.kind}, {"point", pt}, {"residual", w.residual}, {"gradient_norm", w.gradient_norm}});
  }
  s["flagged"] = flagged;
  return s;
}

}  // namespace

std::string to_json(const WehlerCoefficients& c, int indent) {
  json out;
  json arr = json::array();
  for (int i = 0; i < 3; ++i) {
    json plane = json::array();
    for (int j = 0; j < 3; ++j) {
      json row = json::array();
      for (int k = 0; k < 3; ++k) row.push_back(k3dyn::to_string(c.exact(i, j, k)));
      plane.push_back(row);
    }
    arr.push_back(plane);
  }
  out["c"] = arr;
  if (c.seed) out["seed"] = *c.seed;
  if (c.bound) out["bound"] = *c.bound;
  if (c.screen) out["screen"] = screen_json(*c.screen);
  return out.dump(indent);
}

WehlerCoefficients from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::invalid_argument, std::string("surface file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("c")) throw Error(ErrorKind::invalid_argument, "surface file: missing \"c\"");
  for (const auto& [key, _] : doc.items())
    if (key != "c" && key != "seed" && key != "bound" && key != "screen")
      throw Error(ErrorKind::invalid_argument, "surface file: unknown key '" + key + "'");
  const json& arr = doc["c"];
  std::array<Rational, 27> c;
  if (!arr.is_array() || arr.size() != 3) throw Error(ErrorKind::invalid_argument, "surface file: \"c\" must be 3x3x3");
  for (int i = 0; i < 3; ++i) {
    if (!arr[i].is_array() || arr[i].size() != 3) throw Error(ErrorKind::invalid_argument, "surface file: \"c\" must be 3x3x3");
    for (int j = 0; j < 3; ++j) {
      if (!arr[i][j].is_array() || arr[i][j].size() != 3)
        throw Error(ErrorKind::invalid_argument, "surface file: \"c\" must be 3x3x3");
      for (int k = 0; k < 3; ++k) {
        const json& v = arr[i][j][k];
        if (v.is_string()) c[coeff_index(i, j, k)] = parse_rational(v.get<std::string>());
        else if (v.is_number_integer()) c[coeff_index(i, j, k)] = static_cast<long>(v.get<long long>());
        else throw Error(ErrorKind::invalid_argument, "surface file: coefficients are rational strings");
      }
    }
  }
  WehlerCoefficients w(std::move(c));
  if (doc.contains("seed")) w.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("bound")) w.bound = doc["bound"].get<long long>();
  return w;
}

}  // namespace k3dyn::surface
