#include "k3dyn/currents.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "k3dyn/picard.hpp"

namespace k3dyn::currents {

std::string to_string(Sign s) { return s == Sign::plus ? "plus" : "minus"; }

double lambda() { return 9.0 + 4.0 * std::sqrt(5.0); }

ClassWeights eigen_weights(Sign s) {
  static const picard::EigenData data = picard::spectral_data(picard::automorphism_action());
  const auto& cls = s == Sign::plus ? data.e_plus : data.e_minus;
  ClassWeights w;
  for (int i = 0; i < 3; ++i) w.a[i] = cls.coords[i].to_double();
  return w;
}

std::array<double, 3> stage_weights(const ClassWeights& w, Sign s) {
  const auto axes = surface::stage_axes(s == Sign::minus);
  std::array<double, 3> out{};
  std::array<double, 3> v = w.a;
  for (int j = 2; j >= 0; --j) {
    const int axis = axes[j];
    out[axis] = v[axis];
    const auto m = picard::involution_isometry(axis + 1);
    std::array<double, 3> next{};
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) next[r] += static_cast<double>(m(r, k)) * v[k];
    v = next;
  }
  return out;
}

double green_sum(const std::vector<double>& terms, std::size_t N) {
  // Horner form, so g_N(p) = (d_0 + g_{N-1}(T p)) / lambda holds bit for bit.
  const double lam = lambda();
  double g = 0;
  for (std::size_t n = std::min(N, terms.size()); n-- > 0;) g = (g + terms[n]) / lam;
  return g;
}

double tail_bound(const std::vector<double>& terms, std::size_t N) {
  double worst = 0;
  for (std::size_t n = 0; n < std::min(N, terms.size()); ++n) worst = std::max(worst, std::fabs(terms[n]));
  const double lam = lambda();
  return worst * std::pow(lam, -static_cast<double>(N)) / (1.0 - 1.0 / lam);
}

namespace {

template <class S>
GreenEvaluation run_green(const WehlerCoefficients& c, surface::Point<S> p, const ClassWeights& w, Sign s,
                          std::size_t N) {
  const auto sw = stage_weights(w, s);
  const bool inverse = s == Sign::minus;
  GreenEvaluation ev;
  p = surface::normalized(p);
  for (std::size_t n = 0; n < N; ++n) {
    try {
      auto step = surface::automorphism_step(c, p, inverse);
      double d = 0;
      for (int a = 0; a < 3; ++a) d += sw[a] * step.log_scale[a];
      ev.terms.push_back(d);
      const double low = std::min({step.log_scale[0], step.log_scale[1], step.log_scale[2]});
      if (!ev.flagged_step && !(low >= kLiftLogFloor && std::isfinite(d))) {
        ev.flagged_step = n;
        ev.flag_reason = "lift log norm " + std::to_string(low) + " at step " + std::to_string(n) +
                         ": the lift nearly vanishes";
      }
      p = std::move(step.point);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate_fiber) throw;
      ev.complete = false;
      ev.flag_reason = e.what();
      break;
    }
  }
  ev.n_terms = ev.terms.size();
  ev.value = green_sum(ev.terms, ev.n_terms);
  ev.tail_bound = tail_bound(ev.terms, ev.n_terms);
  return ev;
}

}  // namespace

GreenEvaluation green_value(const WehlerCoefficients& c, const FloatPoint& p, const ClassWeights& w, Sign s,
                            std::size_t N) {
  return run_green(c, p, w, s, N);
}

GreenEvaluation green_value(const WehlerCoefficients& c, const ExactPoint& p, const ClassWeights& w, Sign s,
                            std::size_t N) {
  const auto sw = stage_weights(w, s);
  const auto rec = dynamics::orbit(c, p, N, s == Sign::plus ? dynamics::Direction::forward : dynamics::Direction::backward);
  GreenEvaluation ev;
  for (std::size_t n = 0; n < rec.renorm_logs.size(); ++n) {
    const auto& logs = rec.renorm_logs[n];
    double d = 0;
    for (int a = 0; a < 3; ++a) d += sw[a] * logs[a];
    ev.terms.push_back(d);
    const double low = std::min({logs[0], logs[1], logs[2]});
    if (!ev.flagged_step && !(low >= kLiftLogFloor)) {
      ev.flagged_step = n;
      ev.flag_reason = "lift log norm " + std::to_string(low) + " at step " + std::to_string(n);
    }
  }
  ev.complete = rec.complete;
  if (!rec.complete) ev.flag_reason = rec.abort_reason;
  ev.n_terms = ev.terms.size();
  ev.value = green_sum(ev.terms, ev.n_terms);
  ev.tail_bound = tail_bound(ev.terms, ev.n_terms);
  return ev;
}

std::optional<double> local_potential(const WehlerCoefficients& c, const ChartPoint& cp, const ClassWeights& w,
                                      Sign s, std::size_t N) {
  const auto ev = green_value(c, surface::from_chart(cp), w, s, N);
  if (!ev.usable()) return std::nullopt;
  double u = ev.value;
  for (int a = 0; a < 3; ++a) u += w.a[a] * 2.0 * std::log(std::max(1.0, std::abs(cp.t[a])));
  return u;
}

// ---- Hoelder ----------------------------------------------------------------------

HolderReport holder_fit(const std::vector<double>& scales, const std::vector<double>& oscillation) {
  HolderReport rep;
  rep.scales = scales;
  rep.oscillation = oscillation;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (oscillation[i] > 1e-13 && std::isfinite(oscillation[i])) {
      xs.push_back(std::log(scales[i]));
      ys.push_back(std::log(oscillation[i]));
    }
  }
  if (xs.size() < 3) {
    rep.degenerate = true;
    rep.note = "fewer than three scales above the floating noise floor";
    return rep;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) {
    rep.degenerate = true;
    rep.note = "all scales equal";
    return rep;
  }
  rep.beta = sxy / sxx;
  rep.intercept = my - rep.beta * mx;
  rep.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  rep.reliable = rep.r_squared > 0.9;
  if (!rep.reliable) rep.note = "R^2 <= 0.9";
  return rep;
}

HolderReport holder_core(std::size_t n_points, const std::function<std::optional<double>(std::size_t, Complex)>& f,
                         const std::vector<double>& scales, int directions) {
  if (scales.size() < 4) throw Error(ErrorKind::invalid_argument, "holder: at least four scales are required");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!(scales[i] < scales[i - 1]) || !(scales[i] > 0))
      throw Error(ErrorKind::invalid_argument, "holder: scales must be positive and strictly decreasing");
  if (directions < 1) throw Error(ErrorKind::invalid_argument, "holder: directions must be positive");

  std::vector<std::optional<double>> center(n_points);
  for (std::size_t i = 0; i < n_points; ++i) center[i] = f(i, 0.0);

  std::vector<double> osc;
  std::size_t pairs = 0, excluded = 0;
  for (double r : scales) {
    double sum = 0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < n_points; ++i) {
      if (!center[i]) {
        ++excluded;
        continue;
      }
      double worst = 0;
      bool ok = true;
      for (int j = 0; j < directions && ok; ++j) {
        const double theta = 2.0 * std::numbers::pi * (j + 0.5) / directions;
        const auto v = f(i, std::polar(r, theta));
        if (!v) ok = false;
        else worst = std::max(worst, std::fabs(*v - *center[i]));
      }
      if (!ok) {
        ++excluded;
        continue;
      }
      sum += worst;
      ++used;
      pairs += static_cast<std::size_t>(directions);
    }
    osc.push_back(used ? sum / static_cast<double>(used) : 0.0);
  }
  auto rep = holder_fit(scales, osc);
  rep.pairs = pairs;
  rep.excluded = excluded;
  return rep;
}

HolderReport holder_estimate(const WehlerCoefficients& c, const std::vector<FloatPoint>& base, const ClassWeights& w,
                             Sign s, const std::vector<double>& scales, std::size_t N, int directions) {
  std::vector<ChartPoint> charts;
  std::vector<surface::Frame> frames;
  for (const auto& p : base) {
    charts.push_back(surface::to_chart(surface::normalized(p)));
    frames.push_back(surface::frame_at(c, charts.back()));
  }
  auto f = [&](std::size_t i, Complex offset) -> std::optional<double> {
    try {
      ChartPoint cp = charts[i];
      if (offset != 0.0) {
        cp.t[frames[i].free[0]] += offset;
        cp = surface::solve_dependent(c, cp, frames[i].dependent);
      }
      return local_potential(c, cp, w, s, N);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  return holder_core(base.size(), f, scales, directions);
}

HolderReport holder_harness(const std::function<double(Complex)>& f, const std::vector<Complex>& centers,
                            const std::vector<double>& scales, int directions) {
  return holder_core(
      centers.size(), [&](std::size_t i, Complex off) -> std::optional<double> { return f(centers[i] + off); },
      scales, directions);
}

// ---- sub-mean value ------------------------------------------------------------

namespace {

SubmeanVerdict verdict(double center, double mean, double r) {
  SubmeanVerdict v;
  v.center = center;
  v.circle_mean = mean;
  v.allowance = kSubmeanTolerance + kSubmeanCurvature * r * r;
  v.pass = center <= mean + v.allowance;
  return v;
}

}  // namespace

SubmeanVerdict submean_check(const WehlerCoefficients& c, const FloatPoint& p, const ClassWeights& w, Sign s,
                             double r, std::size_t n_circle, std::size_t N) {
  if (!(r > 0) || n_circle < 3) throw Error(ErrorKind::invalid_argument, "submean_check: need r > 0 and n_circle >= 3");
  const ChartPoint cp = surface::to_chart(surface::normalized(p));
  const auto fr = surface::frame_at(c, cp);
  SubmeanVerdict flagged;
  flagged.flagged = true;
  const auto u0 = local_potential(c, cp, w, s, N);
  if (!u0) {
    flagged.note = "center: flagged lift";
    return flagged;
  }
  double sum = 0;
  for (std::size_t j = 0; j < n_circle; ++j) {
    ChartPoint q = cp;
    q.t[fr.free[0]] += std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_circle));
    std::optional<double> u;
    try {
      q = surface::solve_dependent(c, q, fr.dependent);
      u = local_potential(c, q, w, s, N);
    } catch (const Error& e) {
      throw Error(ErrorKind::chart_failure, std::string("submean_check: ") + e.what());
    }
    if (!u) {
      flagged.note = "circle: flagged lift";
      return flagged;
    }
    sum += *u;
  }
  return verdict(*u0, sum / static_cast<double>(n_circle), r);
}

SubmeanVerdict submean_harness(const std::function<double(Complex)>& u, Complex center, double r,
                               std::size_t n_circle) {
  if (!(r > 0) || n_circle < 3) throw Error(ErrorKind::invalid_argument, "submean_harness: need r > 0 and n_circle >= 3");
  double sum = 0;
  for (std::size_t j = 0; j < n_circle; ++j)
    sum += u(center + std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_circle)));
  return verdict(u(center), sum / static_cast<double>(n_circle), r);
}

// ---- L1 invariance ----------------------------------------------------------------

namespace {

double eval_real(const expr::Expression& u, const FloatPoint& p) {
  const double v = u.evaluate(p).real();
  if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "test function is not finite on the sample: " + u.text());
  return v;
}

}  // namespace

L1Report l1_contraction_test(const WehlerCoefficients& c, const dynamics::WeightedSample& sample,
                             const expr::Expression& u, bool centered, std::uint64_t seed, std::size_t bootstrap) {
  if (!u.real_valued() || !u.bounded())
    throw Error(ErrorKind::invalid_argument, "l1_contraction_test: u must be real-valued and bounded");
  const std::size_t n = sample.points.size();
  std::vector<double> fu(n), fv(n);
  for (std::size_t i = 0; i < n; ++i) {
    fu[i] = eval_real(u, sample.points[i]);
    fv[i] = eval_real(u, surface::automorphism(c, sample.points[i]));
  }
  // Points of one draw are contiguous; resample whole draws.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    if (groups.empty() || sample.draw[i] != sample.draw[groups.back().first]) groups.push_back({i, i + 1});
    else groups.back().second = i + 1;
  }

  auto norms = [&](const std::vector<double>& count) {
    double wsum = 0, mean = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (count[g] == 0) continue;
      for (std::size_t i = groups[g].first; i < groups[g].second; ++i) {
        wsum += count[g] * sample.weights[i];
        mean += count[g] * sample.weights[i] * fu[i];
      }
    }
    mean = centered && wsum > 0 ? mean / wsum : 0.0;
    double a = 0, b = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (count[g] == 0) continue;
      for (std::size_t i = groups[g].first; i < groups[g].second; ++i) {
        a += count[g] * sample.weights[i] * std::fabs(fu[i] - mean);
        b += count[g] * sample.weights[i] * std::fabs(fv[i] - mean);
      }
    }
    return std::array<double, 3>{wsum > 0 ? a / wsum : 0.0, wsum > 0 ? b / wsum : 0.0, mean};
  };

  L1Report rep;
  rep.centered = centered;
  rep.n = n;
  const auto full = norms(std::vector<double>(groups.size(), 1.0));
  rep.norm_u = full[0];
  rep.norm_uT = full[1];
  rep.mean = full[2];

  Rng rng(seed);
  std::vector<double> diffs;
  std::vector<double> count(groups.size());
  for (std::size_t b = 0; b < bootstrap && !groups.empty(); ++b) {
    std::fill(count.begin(), count.end(), 0.0);
    for (std::size_t g = 0; g < groups.size(); ++g)
      count[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long long>(groups.size()) - 1))] += 1.0;
    const auto r = norms(count);
    diffs.push_back(r[0] - r[1]);
  }
  if (diffs.size() > 1) {
    double m = 0;
    for (double d : diffs) m += d;
    m /= static_cast<double>(diffs.size());
    double var = 0;
    for (double d : diffs) var += (d - m) * (d - m);
    rep.standard_error = std::sqrt(var / static_cast<double>(diffs.size() - 1));
  }
  const double gap = std::fabs(rep.norm_u - rep.norm_uT);
  rep.pass = gap <= 3.0 * rep.standard_error || gap <= 1e-12;
  rep.contraction_factor = rep.norm_u > 0 ? rep.norm_uT / (lambda() * rep.norm_u) : 0.0;
  return rep;
}

L1Report l1_contraction_test(const WehlerCoefficients& c, const expr::Expression& u, std::size_t n_mc,
                             std::uint64_t seed, bool centered) {
  const auto sample = dynamics::dvol_sample(c, n_mc, seed);
  return l1_contraction_test(c, sample, u, centered, sub_seed(seed, 0xb007));
}

const std::vector<std::string>& test_function_panel() {
  static const std::vector<std::string> panel = {
      "clip(re(x), -1, 1)",
      "fs(y) - 1/2",
      "clip(im(z) * re(x), -2, 2)",
      "cos(re(x) + im(y))",
      "sin(pi * fs(z)) * clip(re(y), -1, 1)",
  };
  return panel;
}

// ---- saddle measure ----------------------------------------------------------------

MeasureSample measure_sample(const WehlerCoefficients& c, int period_cap, std::size_t n_seeds, double tol,
                             std::uint64_t seed) {
  if (period_cap < 1) throw Error(ErrorKind::invalid_argument, "measure_sample: period cap must be at least 1");
  MeasureSample out;
  for (int k = 1; k <= period_cap; ++k) {
    dynamics::PeriodicSearchOptions opts;
    opts.seed = sub_seed(seed, static_cast<std::uint64_t>(k));
    const auto saddles = dynamics::periodic_points(c, k, n_seeds, tol, opts);
    for (const auto& s : saddles) {
      for (const auto& q : s.cycle) {
        out.sample.points.push_back(q);
        out.sample.weights.push_back(1.0);
        out.sample.draw.push_back(out.orbits);
        out.period.push_back(k);
      }
      ++out.orbits;
    }
    out.sample.provenance.push_back("period " + std::to_string(k) + ": " + std::to_string(saddles.size()) +
                                    " saddle orbits from " + std::to_string(n_seeds) + " seeds");
  }
  if (out.sample.points.empty())
    throw Error(ErrorKind::estimator, "measure_sample: no saddle orbits found; try a larger period cap or more seeds");
  for (double& w : out.sample.weights) w /= static_cast<double>(out.sample.points.size());
  out.sample.draws = out.orbits;
  return out;
}

double pushforward_gap(const WehlerCoefficients& c, const dynamics::WeightedSample& s, const expr::Expression& f) {
  double a = 0, b = 0;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    a += s.weights[i] * eval_real(f, s.points[i]);
    b += s.weights[i] * eval_real(f, surface::automorphism(c, s.points[i]));
  }
  return std::fabs(a - b);
}

double ramification_mass(const WehlerCoefficients& c, const dynamics::WeightedSample& s, double threshold) {
  double mass = 0, total = 0;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto g = surface::chart_gradient(c, surface::to_chart(surface::normalized(s.points[i])));
    double lo = HUGE_VAL, hi = 0;
    for (const auto& x : g) {
      lo = std::min(lo, std::abs(x));
      hi = std::max(hi, std::abs(x));
    }
    total += s.weights[i];
    if (hi > 0 && lo / hi < threshold) mass += s.weights[i];
  }
  return total > 0 ? mass / total : 0.0;
}

}  // namespace k3dyn::currents
