#pragma once

// Orbits of T = s1 o s2 o s3, tangent cocycles, saddle periodic points and
// importance samples of the volume form.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "k3dyn/surface.hpp"

namespace k3dyn::dynamics {

using surface::Complex;
using surface::ExactPoint;
using surface::FloatPoint;
using surface::WehlerCoefficients;

enum class Direction { forward, backward };
enum class Mode { exact, floating };

std::string to_string(Direction d);
std::string to_string(Mode m);

struct OrbitRecord {
  Mode mode = Mode::floating;
  Direction direction = Direction::forward;
  /// Normalized points; in exact mode these are the float images of exact_points.
  std::vector<FloatPoint> points;
  std::vector<ExactPoint> exact_points;
  /// renorm_logs[k][axis]: log of the squared max-norm removed on `axis` during step k.
  std::vector<std::array<double, 3>> renorm_logs;
  bool complete = true;
  std::string abort_reason;

  std::size_t steps() const { return renorm_logs.size(); }
};

/// n applications of T (or T^{-1}). A degenerate fiber ends the record early
/// with complete = false.
OrbitRecord orbit(const WehlerCoefficients& c, const FloatPoint& p, std::size_t n,
                  Direction dir = Direction::forward);
OrbitRecord orbit(const WehlerCoefficients& c, const ExactPoint& p, std::size_t n,
                  Direction dir = Direction::forward);

/// Log squared norms of the unnormalized lifted iterate, per axis, for k = 0..steps.
/// Their size grows like lambda^k.
std::vector<std::array<double, 3>> lifted_log_norms(const OrbitRecord& rec);

/// Sum over the three factors of log max(|num|, |den|) of the affine coordinate.
double log_height(const ExactPoint& p);

// ---- Lyapunov exponents -----------------------------------------------------

struct LyapunovEstimate {
  double lambda_plus = 0;
  std::size_t n = 0;
  double half_width = 0;
  /// Per-step log growth of the tracked tangent vector.
  std::vector<double> increments;
};

/// Top exponent of a 2x2 cocycle, one normalized vector, block-bootstrap
/// half-width (95%, block length sqrt(n)).
LyapunovEstimate cocycle_exponent(const std::function<surface::Mat2(std::size_t)>& step, std::size_t n,
                                  std::uint64_t seed = 0, std::size_t burn_in = 0);

/// Along the floating orbit of p. Requires n >= 10.
LyapunovEstimate lyapunov(const WehlerCoefficients& c, const FloatPoint& p, std::size_t n, std::uint64_t seed = 0);

/// Along a stored periodic cycle, re-using the cycle points instead of
/// iterating, so rounding cannot push the orbit off the saddle.
LyapunovEstimate lyapunov_periodic(const WehlerCoefficients& c, const std::vector<FloatPoint>& cycle, std::size_t n,
                                   std::uint64_t seed = 0);

// ---- periodic points --------------------------------------------------------

struct SaddlePoint {
  FloatPoint point;
  int period = 1;
  /// Eigenvalues of dT^period, |m1| >= |m2|.
  std::array<Complex, 2> multipliers{};
  double residual = 0;
  std::vector<FloatPoint> cycle;
  std::size_t seed_index = 0;
};

bool is_saddle(const SaddlePoint& s, double margin = 1e-6);

struct PeriodicSearchOptions {
  std::size_t max_newton_steps = 50;
  std::uint64_t seed = 0;
  bool saddles_only = true;
  /// Orbits closer than this (chordal) are the same orbit.
  double dedup_distance = 1e-6;
};

/// Damped Newton on T^k(p) = p in the chart of p's largest gradient component,
/// from n_seeds deterministic samples. Deduplicates orbits; returns points with
/// chordal |T^k p - p| < tol, period-minimal, ordered by discovery.
std::vector<SaddlePoint> periodic_points(const WehlerCoefficients& c, int period, std::size_t n_seeds, double tol,
                                         const PeriodicSearchOptions& opts = {});

/// Multipliers of the cycle through p, from the product of tangent maps.
std::array<Complex, 2> cycle_multipliers(const WehlerCoefficients& c, const std::vector<FloatPoint>& cycle);

struct DimPlus {
  double value = 0;
  bool flagged = false;  // value > 2 is impossible on a surface
};

DimPlus dim_plus(double entropy, double lyap);

// ---- volume sampling ----------------------------------------------------------

struct WeightedSample {
  std::vector<FloatPoint> points;
  std::vector<double> weights;
  /// Index of the draw that produced each point (both sheets share a draw).
  std::vector<std::size_t> draw;
  std::size_t draws = 0;
  std::size_t rejected = 0;
  std::vector<std::string> provenance;
};

/// Ratio d(proposal)/dVol at p, up to a constant, for the three-axis mixture.
double dvol_proposal_density(const WehlerCoefficients& c, const FloatPoint& p);

/// Multiple-importance sample of dVol = Omega ^ conj(Omega): draw axis d in
/// turn, Fubini-Study pairs on the other two axes, keep both sheets; weight
/// 1 / mean_d(rho rho |dF/dt_d|^2). Weights above `weight_cap` times the
/// running mean reject the draw. Weights sum to 1.
WeightedSample dvol_sample(const WehlerCoefficients& c, std::size_t n, std::uint64_t seed, double weight_cap = 1e4);

}  // namespace k3dyn::dynamics
