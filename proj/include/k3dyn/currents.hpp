#pragma once

// Green potentials of the invariant currents eta_+ and eta_-.
//
// The potential is accumulated from the renormalization logs of the lifted
// iteration: at step n the stages of T (or T^-1) each divide out a squared
// max-norm, and d_n weighs these logs by the class weights pushed through the
// remaining stages. g_N = sum_{n<N} lambda^-(n+1) d_n converges geometrically.
// The result is the potential of the normalized lift; on an affine chart the
// local potential adds sum_i a_i log max(1, |t_i|)^2, which is plurisubharmonic
// in the chart. It differs from any other local potential of eta_+- by a smooth
// (pluriharmonic plus bounded) term.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "k3dyn/dynamics.hpp"
#include "k3dyn/expression.hpp"
#include "k3dyn/surface.hpp"

namespace k3dyn::currents {

using surface::ChartPoint;
using surface::Complex;
using surface::ExactPoint;
using surface::FloatPoint;
using surface::WehlerCoefficients;

enum class Sign { plus, minus };
std::string to_string(Sign s);

/// Coordinates of a class in the basis h1, h2, h3.
struct ClassWeights {
  std::array<double, 3> a{};
};

/// e_plus for Sign::plus, the normalized e_minus for Sign::minus.
ClassWeights eigen_weights(Sign s);

/// Weight of each axis' renormalization log in d_n, indexed by axis.
std::array<double, 3> stage_weights(const ClassWeights& w, Sign s);

/// 9 + 4 sqrt 5
double lambda();

/// A stage whose lifted pair has log squared norm below this has nearly
/// vanished; the step is flagged.
inline constexpr double kLiftLogFloor = -30.0;

struct GreenEvaluation {
  double value = 0;
  std::vector<double> terms;
  std::size_t n_terms = 0;
  double tail_bound = 0;
  /// False when a degenerate fiber stopped the iteration before N steps.
  bool complete = true;
  std::optional<std::size_t> flagged_step;
  std::string flag_reason;

  bool usable() const { return complete && !flagged_step; }
};

/// g_N at p (normalized first). N = 0 gives value 0.
GreenEvaluation green_value(const WehlerCoefficients& c, const FloatPoint& p, const ClassWeights& w, Sign s,
                            std::size_t N);
/// Exact-mode iteration with rational points; logs are taken in floating point.
GreenEvaluation green_value(const WehlerCoefficients& c, const ExactPoint& p, const ClassWeights& w, Sign s,
                            std::size_t N);

/// sum_{n<N} lambda^-(n+1) terms[n]
double green_sum(const std::vector<double>& terms, std::size_t N);
double tail_bound(const std::vector<double>& terms, std::size_t N);

/// Local potential at a chart point: g_N + sum_i a_i log max(1, |t_i|)^2.
/// nullopt if the evaluation was flagged or incomplete.
std::optional<double> local_potential(const WehlerCoefficients& c, const ChartPoint& cp, const ClassWeights& w,
                                      Sign s, std::size_t N);

// ---- Hoelder exponent ----------------------------------------------------------

struct HolderReport {
  double beta = 0;
  double intercept = 0;
  double r_squared = 0;
  bool reliable = false;
  bool degenerate = false;
  std::vector<double> scales;
  std::vector<double> oscillation;
  std::size_t pairs = 0;
  std::size_t excluded = 0;
  std::string note;
};

/// Least-squares fit of log oscillation against log scale.
HolderReport holder_fit(const std::vector<double>& scales, const std::vector<double>& oscillation);

/// Oscillation at scale r: mean over base points of max over `directions`
/// of |f(p + r e^{i theta}) - f(p)|, where f(point, offset) moves along the
/// first free coordinate of the point's frame. f returns nullopt to exclude.
HolderReport holder_core(std::size_t n_points,
                         const std::function<std::optional<double>(std::size_t, Complex)>& f,
                         const std::vector<double>& scales, int directions = 8);

HolderReport holder_estimate(const WehlerCoefficients& c, const std::vector<FloatPoint>& base, const ClassWeights& w,
                             Sign s, const std::vector<double>& scales, std::size_t N = 20, int directions = 8);

/// Same estimator on a function of one complex variable around `centers`.
HolderReport holder_harness(const std::function<double(Complex)>& f, const std::vector<Complex>& centers,
                            const std::vector<double>& scales, int directions = 8);

// ---- sub-mean value check ----------------------------------------------------------

struct SubmeanVerdict {
  bool pass = false;
  bool flagged = false;
  double center = 0;
  double circle_mean = 0;
  double allowance = 0;
  std::string note;
};

/// Tolerance on center <= circle mean: 1e-6 plus this times r^2.
inline constexpr double kSubmeanTolerance = 1e-6;
inline constexpr double kSubmeanCurvature = 1.0;

/// u(center) against the mean of u over the circle of radius r in the fiber
/// disc through p: the first free coordinate varies, the second is fixed and
/// the dependent one is re-solved on X. u is the chart-local potential.
SubmeanVerdict submean_check(const WehlerCoefficients& c, const FloatPoint& p, const ClassWeights& w, Sign s,
                             double r, std::size_t n_circle, std::size_t N = 20);

SubmeanVerdict submean_harness(const std::function<double(Complex)>& u, Complex center, double r,
                               std::size_t n_circle);

// ---- L1 invariance ----------------------------------------------------------------

struct L1Report {
  double norm_u = 0;
  double norm_uT = 0;
  double mean = 0;
  double standard_error = 0;
  /// lambda^-1 * |u o T|_1 / |u|_1: the factor applied to the rescaled pullback.
  double contraction_factor = 0;
  bool pass = false;
  bool centered = true;
  std::size_t n = 0;
};

L1Report l1_contraction_test(const WehlerCoefficients& c, const dynamics::WeightedSample& sample,
                             const expr::Expression& u, bool centered = true, std::uint64_t seed = 0,
                             std::size_t bootstrap = 200);
L1Report l1_contraction_test(const WehlerCoefficients& c, const expr::Expression& u, std::size_t n_mc,
                             std::uint64_t seed, bool centered = true);

/// Fixed panel of bounded test functions.
const std::vector<std::string>& test_function_panel();

// ---- saddle measure ----------------------------------------------------------------

struct MeasureSample {
  dynamics::WeightedSample sample;
  std::vector<int> period;
  std::size_t orbits = 0;
};

/// Equal weights on every point of every saddle orbit of period 1..period_cap.
MeasureSample measure_sample(const WehlerCoefficients& c, int period_cap, std::size_t n_seeds, double tol,
                             std::uint64_t seed = 0);

/// |mean f - mean f o T| under a weighted sample.
double pushforward_gap(const WehlerCoefficients& c, const dynamics::WeightedSample& s, const expr::Expression& f);

/// Share of sample weight within `threshold` of a ramification curve, using
/// min_d |dF/dt_d| / max_d |dF/dt_d| as the proximity measure.
double ramification_mass(const WehlerCoefficients& c, const dynamics::WeightedSample& s, double threshold = 0.1);

}  // namespace k3dyn::currents
