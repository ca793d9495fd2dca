#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chse/drive/decay.hpp"

namespace chse::sweep {

// Qubit drive angles in units of π: U0 = exp(−iπθ1 Z),
// U1 = exp(−iπθ2 (cos(πθ3) Z + sin(πθ3) X)).
struct QubitAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.5;
};

// (θ_X, θ_Z) pair, also in units of π: θ1 = θ_Z, θ2 = θ_X, θ3 = 1/2.
inline QubitAngles from_xz(double theta_x, double theta_z) { return {theta_z, theta_x, 0.5}; }

// cos(πx) and sin(πx), exact when 2x is an integer.
template <RealScalar R>
R cos_pi(double x);
template <RealScalar R>
R sin_pi(double x);

// (A0, A1) = (U0, U1) in closed form.
template <RealScalar R>
std::pair<CMatrix<R>, CMatrix<R>> qubit_gates(const QubitAngles& angles, const PrecisionPolicy& policy);

template <RealScalar R>
drive::DriveSpec<R> qubit_drive(const QubitAngles& angles, const PrecisionPolicy& policy, unsigned m = 1);

struct FitResult {
  double gamma = 0.0;  // −slope
  double intercept = 0.0;
  double residual = 0.0;  // RMS in the fitted coordinates
  double stderr_gamma = 0.0;
  std::size_t first = 0;  // window [first, last) into the series
  std::size_t last = 0;
};

// Least squares y = intercept − gamma·x. min_points must be at least 3.
FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points = 4);

// Window of a series of `size` points that drops the first 20%.
std::pair<std::size_t, std::size_t> default_window(std::size_t size);

// Fit on (log T, log Δ). state < 0 uses the state-averaged Δ. The default
// window drops the first 20% of points.
FitResult powerlaw_fit(const std::vector<drive::DecayPoint>& points, std::optional<std::pair<std::size_t, std::size_t>> window = {},
                       int state = -1);

// |γ_n − γ_m| / γ_m; empty when γ_m is zero.
std::optional<double> zeta(const FitResult& fit_n, const FitResult& fit_m);
inline bool zeta_converged(const std::optional<double>& z) { return z && *z < 0.1; }

struct GammaMapOptions {
  std::vector<double> theta1;  // units of π
  std::vector<double> theta2;
  double theta3 = 0.5;
  int k = 2;
  unsigned n_max = 200;
  unsigned n_ref = 0;  // 0 picks 0.8·n_max
  unsigned n_states = 2;
  std::uint64_t seed = 1;
  drive::LadderOptions ladder{512, 4096, 1e-3};
  unsigned threads = 1;
};

struct GammaPoint {
  QubitAngles angles;
  int k = 2;
  FitResult fit;
  std::optional<double> zeta;
  bool converged = false;
  std::string final_delta;
  unsigned bits = 0;
  std::vector<std::string> flags;
};

// Random initial states used by gamma_map for a given seed.
std::vector<std::vector<std::complex<double>>> initial_states(unsigned n_states, std::uint64_t seed);

// One grid point: averaged decay series, fit, ζ against the n_ref prefix.
GammaPoint gamma_point(const QubitAngles& angles, const GammaMapOptions& opts,
                       const std::vector<std::vector<std::complex<double>>>& states);

// Points in row-major order (θ1 outer, θ2 inner).
std::vector<GammaPoint> gamma_map(const GammaMapOptions& opts);

}  // namespace chse::sweep
