#include "k3dyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace k3dyn::dynamics {

using surface::ChartPoint;
using surface::Mat2;

std::string to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }
std::string to_string(Mode m) { return m == Mode::exact ? "exact" : "floating"; }

namespace {

template <class S>
void run_orbit(const WehlerCoefficients& c, surface::Point<S> p, std::size_t n, Direction dir, OrbitRecord& rec,
               std::vector<surface::Point<S>>& store) {
  const bool inverse = dir == Direction::backward;
  store.push_back(p);
  for (std::size_t k = 0; k < n; ++k) {
    try {
      auto step = surface::automorphism_step(c, p, inverse);
      p = std::move(step.point);
      rec.renorm_logs.push_back(step.log_scale);
      store.push_back(p);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate_fiber) throw;
      rec.complete = false;
      rec.abort_reason = "step " + std::to_string(k) + ": " + e.what();
      return;
    }
  }
}

}  // namespace

OrbitRecord orbit(const WehlerCoefficients& c, const FloatPoint& p, std::size_t n, Direction dir) {
  OrbitRecord rec;
  rec.mode = Mode::floating;
  rec.direction = dir;
  run_orbit(c, surface::normalized(p), n, dir, rec, rec.points);
  return rec;
}

namespace {

// Exact iteration on primitive integer pairs. The renormalization logs are those
// of the floating factorization lift, obtained from big-integer logarithms.
struct IntegerSurface {
  std::array<Integer, 27> c;
  double log_denominator = 0;
};

IntegerSurface integer_surface(const WehlerCoefficients& w) {
  Integer l = 1;
  for (const auto& q : w.all()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
  IntegerSurface s;
  for (int i = 0; i < 27; ++i) {
    Rational scaled = w.exact(i) * l;
    s.c[i] = scaled.get_num();
  }
  s.log_denominator = log_abs(l);
  return s;
}

using IntPoint = std::array<std::array<Integer, 2>, 3>;

void make_primitive(std::array<Integer, 2>& w) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), w[0].get_mpz_t(), w[1].get_mpz_t());
  if (g > 1) {
    mpz_divexact(w[0].get_mpz_t(), w[0].get_mpz_t(), g.get_mpz_t());
    mpz_divexact(w[1].get_mpz_t(), w[1].get_mpz_t(), g.get_mpz_t());
  }
}

IntPoint to_integer_point(const ExactPoint& p) {
  IntPoint out;
  for (int a = 0; a < 3; ++a) {
    if (p[a].w0 == 0 && p[a].w1 == 0) throw Error(ErrorKind::invalid_argument, "homogeneous pair is zero");
    Integer l;
    mpz_lcm(l.get_mpz_t(), p[a].w0.get_den().get_mpz_t(), p[a].w1.get_den().get_mpz_t());
    out[a] = {Rational(p[a].w0 * l).get_num(), Rational(p[a].w1 * l).get_num()};
    make_primitive(out[a]);
  }
  return out;
}

double larger_log(const std::array<Integer, 2>& w) {
  return cmp(abs(w[0]), abs(w[1])) >= 0 ? log_abs(w[0]) : log_abs(w[1]);
}

// One Vieta involution on `axis`; returns the log squared norm removed.
double integer_involution(const IntegerSurface& s, int axis, IntPoint& p) {
  const int a = (axis + 1) % 3;
  const int b = (axis + 2) % 3;
  auto mono = [](const std::array<Integer, 2>& w) {
    return std::array<Integer, 3>{w[0] * w[0], w[0] * w[1], w[1] * w[1]};
  };
  const auto ma = mono(p[a]);
  const auto mb = mono(p[b]);
  std::array<Integer, 3> coef;
  for (int e = 0; e < 3; ++e)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        std::array<int, 3> exps{};
        exps[axis] = e;
        exps[a] = i;
        exps[b] = j;
        const auto& k = s.c[surface::coeff_index(exps[0], exps[1], exps[2])];
        if (k == 0) continue;
        coef[e] += k * ma[i] * mb[j];
      }
  const Integer& A = coef[2];
  const Integer& B = coef[1];
  const Integer& C = coef[0];
  if (A == 0 && B == 0 && C == 0)
    throw Error(ErrorKind::degenerate_fiber, surface::stage_name(axis) + ": involution is indeterminate on this fiber");
  auto& w = p[axis];
  std::array<Integer, 2> v;
  double log_m;
  if (cmp(abs(w[0]), abs(w[1])) >= 0) {
    v = {A * w[0], -(B * w[0] + A * w[1])};
    log_m = log_abs(w[0]);
  } else {
    v = {-(B * w[1] + C * w[0]), C * w[1]};
    log_m = log_abs(w[1]);
  }
  const double log_k = s.log_denominator + 2 * larger_log(p[a]) + 2 * larger_log(p[b]);
  const double log_scale = 2 * (larger_log(v) - log_k - log_m);
  make_primitive(v);
  w = std::move(v);
  return log_scale;
}

ExactPoint to_exact(const IntPoint& p) {
  ExactPoint out;
  for (int a = 0; a < 3; ++a) out[a] = {Rational(p[a][0]), Rational(p[a][1])};
  return out;
}

}  // namespace

OrbitRecord orbit(const WehlerCoefficients& c, const ExactPoint& p, std::size_t n, Direction dir) {
  OrbitRecord rec;
  rec.mode = Mode::exact;
  rec.direction = dir;
  const auto s = integer_surface(c);
  IntPoint q = to_integer_point(p);
  rec.exact_points.push_back(to_exact(q));
  const auto axes = surface::stage_axes(dir == Direction::backward);
  for (std::size_t k = 0; k < n; ++k) {
    std::array<double, 3> logs{};
    try {
      for (int axis : axes) logs[axis] = integer_involution(s, axis, q);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate_fiber) throw;
      rec.complete = false;
      rec.abort_reason = "step " + std::to_string(k) + ": " + e.what();
      break;
    }
    rec.renorm_logs.push_back(logs);
    rec.exact_points.push_back(to_exact(q));
  }
  for (const auto& e : rec.exact_points) rec.points.push_back(surface::to_float(e));
  return rec;
}

std::vector<std::array<double, 3>> lifted_log_norms(const OrbitRecord& rec) {
  std::vector<std::array<double, 3>> out;
  std::array<double, 3> ell{};
  out.push_back(ell);
  const auto axes = surface::stage_axes(rec.direction == Direction::backward);
  for (const auto& r : rec.renorm_logs) {
    for (int a : axes) {
      const int b = (a + 1) % 3;
      const int d = (a + 2) % 3;
      ell[a] = -ell[a] + 2 * ell[b] + 2 * ell[d] + r[a];
    }
    out.push_back(ell);
  }
  return out;
}

double log_height(const ExactPoint& p) {
  double h = 0;
  for (const auto& w : p) {
    if (w.w0 == 0) continue;  // the point at infinity has height 1
    if (w.w0.get_den() == 1 && w.w1.get_den() == 1) {
      // Integer pairs from orbit() are already primitive.
      Integer g;
      mpz_gcd(g.get_mpz_t(), w.w0.get_num_mpz_t(), w.w1.get_num_mpz_t());
      if (g == 1) {
        h += std::max(log_abs(w.w0.get_num()), w.w1 == 0 ? 0.0 : log_abs(w.w1.get_num()));
        continue;
      }
    }
    const Rational t = w.w1 / w.w0;
    const double ln = t == 0 ? 0.0 : log_abs(t.get_num());
    h += std::max(ln, log_abs(t.get_den()));
  }
  return h;
}

// ---- Lyapunov ---------------------------------------------------------------

namespace {

double block_bootstrap_half_width(const std::vector<double>& x, std::uint64_t seed, std::size_t reps = 200) {
  const std::size_t n = x.size();
  if (n < 2) return 0;
  const std::size_t block = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(double(n)))));
  const std::size_t n_blocks = (n + block - 1) / block;
  Rng rng(seed);
  std::vector<double> means;
  means.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    double sum = 0;
    std::size_t count = 0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const auto start = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long long>(n - block)));
      for (std::size_t i = start; i < start + block && count < n; ++i, ++count) sum += x[i];
    }
    means.push_back(sum / double(count));
  }
  double m = 0;
  for (double v : means) m += v;
  m /= double(reps);
  double var = 0;
  for (double v : means) var += (v - m) * (v - m);
  var /= double(reps - 1);
  return 1.96 * std::sqrt(var);
}

}  // namespace

LyapunovEstimate cocycle_exponent(const std::function<Mat2(std::size_t)>& step, std::size_t n, std::uint64_t seed,
                                  std::size_t burn_in) {
  LyapunovEstimate est;
  std::array<Complex, 2> v{Complex(1.0 / std::sqrt(2.0), 0.0), Complex(0.0, 1.0 / std::sqrt(2.0))};
  for (std::size_t k = 0; k < burn_in + n; ++k) {
    const Mat2 m = step(k);
    std::array<Complex, 2> w{m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
    const double norm = std::hypot(std::abs(w[0]), std::abs(w[1]));
    if (!(norm > 0) || !std::isfinite(norm))
      throw Error(ErrorKind::estimator, "cocycle_exponent: tangent vector collapsed at step " + std::to_string(k));
    v = {w[0] / norm, w[1] / norm};
    if (k >= burn_in) est.increments.push_back(std::log(norm));
  }
  est.n = n;
  double sum = 0;
  for (double x : est.increments) sum += x;
  est.lambda_plus = n ? sum / double(n) : 0.0;
  est.half_width = block_bootstrap_half_width(est.increments, seed);
  return est;
}

LyapunovEstimate lyapunov(const WehlerCoefficients& c, const FloatPoint& p, std::size_t n, std::uint64_t seed) {
  if (n < 10) throw Error(ErrorKind::invalid_argument, "lyapunov: n must be at least 10");
  FloatPoint cur = surface::normalized(p);
  auto step = [&](std::size_t) {
    const auto tm = surface::tangent_map(c, cur);
    cur = surface::normalized(surface::from_chart(tm.out));
    return tm.matrix;
  };
  return cocycle_exponent(step, n, seed);
}

LyapunovEstimate lyapunov_periodic(const WehlerCoefficients& c, const std::vector<FloatPoint>& cycle, std::size_t n,
                                   std::uint64_t seed) {
  if (cycle.empty()) throw Error(ErrorKind::invalid_argument, "lyapunov_periodic: empty cycle");
  if (n < 10) throw Error(ErrorKind::invalid_argument, "lyapunov_periodic: n must be at least 10");
  std::vector<Mat2> maps;
  for (const auto& q : cycle) maps.push_back(surface::tangent_map(c, q).matrix);
  // Round n to whole cycles so the mean is over complete periods.
  const std::size_t k = cycle.size();
  const std::size_t total = ((n + k - 1) / k) * k;
  const std::size_t burn = std::min<std::size_t>(20, total / 10) * k;
  auto est = cocycle_exponent([&](std::size_t j) { return maps[j % k]; }, total, seed, burn);
  return est;
}

// ---- periodic points --------------------------------------------------------

bool is_saddle(const SaddlePoint& s, double margin) {
  return std::abs(s.multipliers[0]) > 1 + margin && std::abs(s.multipliers[1]) < 1 - margin;
}

namespace {

struct FixedPointEval {
  std::array<Complex, 2> residual{};
  Mat2 jacobian{};
};

std::vector<int> repeated_axes(int period) {
  std::vector<int> axes;
  const auto one = surface::stage_axes(false);
  for (int i = 0; i < period; ++i) axes.insert(axes.end(), one.begin(), one.end());
  return axes;
}

// Residual of T^k(p) - p on the free coordinates of `fr`, both expressed in the
// chart of `cp`, and its Jacobian.
FixedPointEval fixed_point_eval(const WehlerCoefficients& c, const ChartPoint& cp, const surface::Frame& fr,
                                const std::vector<int>& axes) {
  auto am = surface::ambient_map(c, cp, axes);
  for (int i = 0; i < 3; ++i) {
    if (am.out.flip[i] == cp.flip[i]) continue;
    const Complex t = am.out.t[i];
    if (std::abs(t) < 1e-300) throw Error(ErrorKind::chart_failure, "periodic_points: image leaves the chart");
    am.out.t[i] = 1.0 / t;
    const Complex dt = -1.0 / (t * t);
    for (int j = 0; j < 3; ++j) am.jacobian[i][j] *= dt;
  }
  const auto g = surface::chart_gradient(c, cp);
  const int d = fr.dependent;
  FixedPointEval ev;
  for (int col = 0; col < 2; ++col) {
    std::array<Complex, 3> e{};
    const int a = fr.free[col];
    e[a] = 1.0;
    e[d] = -g[a] / g[d];
    for (int row = 0; row < 2; ++row) {
      const int r = fr.free[row];
      Complex s = 0;
      for (int j = 0; j < 3; ++j) s += am.jacobian[r][j] * e[j];
      ev.jacobian[row][col] = s - (row == col ? 1.0 : 0.0);
    }
  }
  for (int row = 0; row < 2; ++row) ev.residual[row] = am.out.t[fr.free[row]] - cp.t[fr.free[row]];
  return ev;
}

double norm2(const std::array<Complex, 2>& v) { return std::hypot(std::abs(v[0]), std::abs(v[1])); }

std::optional<FloatPoint> newton_periodic(const WehlerCoefficients& c, FloatPoint p, const std::vector<int>& axes,
                                          double tol, std::size_t max_steps) {
  for (std::size_t it = 0; it < max_steps; ++it) {
    const ChartPoint cp = surface::to_chart(surface::normalized(p));
    const auto fr = surface::frame_at(c, cp);
    const auto ev = fixed_point_eval(c, cp, fr, axes);
    const double r0 = norm2(ev.residual);
    if (!std::isfinite(r0)) return std::nullopt;
    if (r0 < 1e-3 * tol) break;
    const Complex det = surface::det(ev.jacobian);
    if (std::abs(det) < 1e-300) return std::nullopt;
    const std::array<Complex, 2> delta{
        -(ev.jacobian[1][1] * ev.residual[0] - ev.jacobian[0][1] * ev.residual[1]) / det,
        -(-ev.jacobian[1][0] * ev.residual[0] + ev.jacobian[0][0] * ev.residual[1]) / det};
    double scale = 1.0;
    bool accepted = false;
    for (int half = 0; half < 30 && !accepted; ++half, scale *= 0.5) {
      ChartPoint trial = cp;
      trial.t[fr.free[0]] += scale * delta[0];
      trial.t[fr.free[1]] += scale * delta[1];
      try {
        trial = surface::solve_dependent(c, trial, fr.dependent);
        const double r1 = norm2(fixed_point_eval(c, trial, fr, axes).residual);
        if (std::isfinite(r1) && r1 < r0) {
          p = surface::from_chart(trial);
          accepted = true;
        }
      } catch (const Error&) {
      }
    }
    if (!accepted) break;
  }
  return p;
}

double periodic_residual(const WehlerCoefficients& c, const FloatPoint& p, int k) {
  FloatPoint q = surface::normalized(p);
  for (int i = 0; i < k; ++i) q = surface::automorphism(c, q);
  return surface::point_distance(q, p);
}

}  // namespace

std::array<Complex, 2> cycle_multipliers(const WehlerCoefficients& c, const std::vector<FloatPoint>& cycle) {
  Mat2 m{{{1.0, 0.0}, {0.0, 1.0}}};
  for (const auto& q : cycle) m = surface::multiply(surface::tangent_map(c, q).matrix, m);
  const Complex tr = m[0][0] + m[1][1];
  const Complex dt = surface::det(m);
  const Complex disc = std::sqrt(tr * tr - 4.0 * dt);
  Complex big = 0.5 * (tr + disc);
  if (std::abs(0.5 * (tr - disc)) > std::abs(big)) big = 0.5 * (tr - disc);
  // Small root from the product, which is better conditioned than the difference.
  const Complex small = std::abs(big) > 0 ? dt / big : Complex(0.0);
  return {big, small};
}

std::vector<SaddlePoint> periodic_points(const WehlerCoefficients& c, int period, std::size_t n_seeds, double tol,
                                         const PeriodicSearchOptions& opts) {
  if (period < 1) throw Error(ErrorKind::invalid_argument, "periodic_points: period must be at least 1");
  const auto axes = repeated_axes(period);
  std::vector<SaddlePoint> found;
  auto known = [&](const FloatPoint& q) {
    for (const auto& s : found)
      for (const auto& r : s.cycle)
        if (surface::point_distance(q, r) < opts.dedup_distance) return true;
    return false;
  };
  for (std::size_t i = 0; i < n_seeds; ++i) {
    Rng rng(sub_seed(opts.seed, i));
    try {
      const FloatPoint start = surface::sample_point(c, rng, static_cast<int>(i % 3));
      const auto p = newton_periodic(c, start, axes, tol, opts.max_newton_steps);
      if (!p) continue;
      const FloatPoint q = surface::normalized(*p);
      const double res = periodic_residual(c, q, period);
      if (!(res < tol)) continue;
      bool minimal = true;
      for (int j = 1; j < period && minimal; ++j)
        if (period % j == 0 && periodic_residual(c, q, j) < std::max(tol, 1e-8)) minimal = false;
      if (!minimal || known(q)) continue;
      SaddlePoint s;
      s.point = q;
      s.period = period;
      s.residual = res;
      s.seed_index = i;
      FloatPoint r = q;
      for (int j = 0; j < period; ++j) {
        s.cycle.push_back(r);
        r = surface::automorphism(c, r);
      }
      s.multipliers = cycle_multipliers(c, s.cycle);
      if (opts.saddles_only && !is_saddle(s)) continue;
      found.push_back(std::move(s));
    } catch (const Error&) {
      // Seeds that run into degenerate fibers or singular charts are dropped.
    }
  }
  return found;
}

DimPlus dim_plus(double entropy, double lyap) {
  if (!(lyap > 0)) throw Error(ErrorKind::invalid_argument, "dim_plus: Lyapunov exponent must be positive");
  DimPlus d;
  d.value = entropy / lyap;
  d.flagged = d.value > 2.0;
  return d;
}

// ---- volume sampling ----------------------------------------------------------

double dvol_proposal_density(const WehlerCoefficients& c, const FloatPoint& p) {
  const ChartPoint cp = surface::to_chart(surface::normalized(p));
  const auto g = surface::chart_gradient(c, cp);
  auto rho = [](Complex t) {
    const double s = 1.0 + std::norm(t);
    return 1.0 / (std::numbers::pi * s * s);
  };
  double sum = 0;
  for (int d = 0; d < 3; ++d) sum += rho(cp.t[(d + 1) % 3]) * rho(cp.t[(d + 2) % 3]) * std::norm(g[d]);
  return sum / 3.0;
}

WeightedSample dvol_sample(const WehlerCoefficients& c, std::size_t n, std::uint64_t seed, double weight_cap) {
  WeightedSample out;
  out.provenance.push_back("dvol_sample seed=" + std::to_string(seed) + " n=" + std::to_string(n));
  double running = 0;
  std::size_t accepted_points = 0;
  std::size_t i = 0;
  const std::size_t max_draws = 4 * n + 1000;
  while (out.points.size() < n) {
    if (i >= max_draws)
      throw Error(ErrorKind::estimator, "dvol_sample: too many rejected draws; is the surface smooth?");
    Rng rng(sub_seed(seed, i));
    const int axis = static_cast<int>(i % 3);
    const std::size_t draw = i++;
    FloatPoint base;
    for (int a = 0; a < 3; ++a) {
      auto w = fubini_study_pair(rng);
      base[a] = {w[0], w[1]};
    }
    const auto q = surface::fiber_quadratic(c, axis, base);
    if (surface::is_degenerate(q, c.scale())) {
      ++out.rejected;
      continue;
    }
    std::array<FloatPoint, 2> pts;
    std::array<double, 2> w{};
    bool ok = true;
    const auto roots = surface::fiber_roots(q);
    for (int s = 0; s < 2 && ok; ++s) {
      pts[s] = base;
      pts[s][axis] = roots[s];
      pts[s] = surface::normalized(pts[s]);
      const double dens = dvol_proposal_density(c, pts[s]);
      w[s] = 1.0 / dens;
      if (!(dens > 0) || !std::isfinite(w[s])) ok = false;
      if (ok && accepted_points >= 100 && w[s] > weight_cap * running / double(accepted_points)) ok = false;
    }
    if (!ok) {
      ++out.rejected;
      continue;
    }
    for (int s = 0; s < 2 && out.points.size() < n; ++s) {
      out.points.push_back(pts[s]);
      out.weights.push_back(w[s]);
      out.draw.push_back(draw);
      running += w[s];
      ++accepted_points;
    }
  }
  out.draws = i;
  double total = 0;
  for (double w : out.weights) total += w;
  for (double& w : out.weights) w /= total;
  if (out.rejected) out.provenance.push_back("rejected draws: " + std::to_string(out.rejected));
  return out;
}

}  // namespace k3dyn::dynamics
