#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mbe/field.hpp"

namespace mbe {

// ---------------------------------------------------------------------------
// Singular Beta integral  int_0^t (t-s)^{-a} s^{-b} ds = C_{a,b} t^{1-a-b}

/// C_{a,b} = int_0^1 (1-u)^{-a} u^{-b} du. Rejects a >= 1 or b >= 1.
double beta_integral_constant(double a, double b);

/// The t-dependent integral evaluated directly (not via the scaling law).
double beta_t_integral(double a, double b, double t);

struct BetaReport {
  double a = 0.0;
  double b = 0.0;
  double constant = 0.0;
  std::array<double, 3> times{0.5, 1.0, 2.0};
  std::array<double, 3> integrals{};
  /// max_t |I(t) / t^{1-a-b} - C| / C.
  double max_collapse_error = 0.0;
  double fitted_exponent = 0.0;
  double expected_exponent = 0.0;
};

BetaReport beta_scaling_report(double a, double b);

// ---------------------------------------------------------------------------
// Integrable Bihari inequality

/// Piecewise-linear function through (nodes, values) on [nodes.front(), nodes.back()].
struct TabulatedFunction {
  std::vector<double> nodes;
  std::vector<double> values;

  static TabulatedFunction constant(double a, double b, double value);
  double operator()(double t) const;
  /// Exact integral of the interpolant over [nodes.front(), t].
  double integral_to(double t) const;
  void validate(const char* what) const;
};

/// Non-negative non-decreasing omega(u) for u >= 0.
struct Nonlinearity {
  enum class Kind { identity, power, table };
  Kind kind = Kind::identity;
  double gamma = 1.0;
  /// Used by Kind::table; held constant beyond the last node.
  TabulatedFunction table;

  static Nonlinearity identity() { return {}; }
  static Nonlinearity power(double gamma);
  static Nonlinearity tabulated(TabulatedFunction t);
  double operator()(double u) const;
  void validate() const;
};

struct BihariProblem {
  double k = 1.0;
  double M = 1.0;
  TabulatedFunction h;
  Nonlinearity omega;
  /// Anchor u_0 > 0 of Omega(u) = int_{u_0}^u dy / omega(y).
  double anchor = 1.0;

  double start() const { return h.nodes.front(); }
  double end() const { return h.nodes.back(); }
  void validate() const;
};

/// Omega(u) by quadrature in log u. Rejects u <= 0 and a vanishing omega.
double bihari_omega(const BihariProblem& prob, double u);

struct BihariBound {
  bool in_domain = false;
  double value = 0.0;
  /// Omega(k) + M int_a^t h.
  double target = 0.0;
};

/// Omega^{-1}(Omega(k) + M int_a^t h), with in_domain = false when the target
/// leaves the range of Omega.
BihariBound bihari_bound(const BihariProblem& prob, double t);

/// Smallest t in [a, b] where the bound leaves its domain (b if it never does).
double bihari_domain_boundary(const BihariProblem& prob, double tolerance = 1e-9);

/// Solution of g' = (1 - rho(t)) M h(t) omega(g), g(a) = scale * k, by RK4.
/// rho = 0, scale = 1 is the equality solution V.
std::vector<double> bihari_trial_solution(const BihariProblem& prob, const TabulatedFunction& rho,
                                          double scale, const std::vector<double>& sample_times,
                                          int substeps = 64);

struct BihariVerifyReport {
  int trials = 0;
  int samples_per_trial = 100;
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> seeds;
  /// max over random trials and samples of g(t) - bound(t).
  double max_violation = 0.0;
  /// Same for the equality solution V.
  double equality_violation = 0.0;
  /// max |V(t) - bound(t)|: how tight the bound is on its extremal case.
  double equality_gap = 0.0;
  /// Smallest bound(t) - g(t) for g = V/2 at samples (strict inequality check).
  double half_scaled_min_slack = 0.0;
};

BihariVerifyReport bihari_verify(const BihariProblem& prob, int trials, std::uint64_t seed);

/// Bound at t for k -> 0+ (the k = 0 case itself is undefined for many omega).
std::vector<std::pair<double, double>> bihari_small_k_study(const BihariProblem& prob, double t,
                                                            const std::vector<double>& ks);

// ---------------------------------------------------------------------------
// Strauss bootstrap lemma

struct StraussCase {
  double c1 = 0.1;
  double c2 = 1.0;
  double gamma = 2.0;
  void validate() const;
};

struct StraussResult {
  bool condition_holds = false;
  /// c1 c2^{1/(gamma-1)} and (1 - 1/gamma) gamma^{-1/(gamma-1)}.
  double lhs = 0.0;
  double rhs = 0.0;
  /// c1 / (1 - 1/gamma).
  double bound = 0.0;
};

StraussResult strauss_check(const StraussCase& c);

struct FixedPointResult {
  /// True when m -> c1 + c2 m^gamma from 0 settles; false when it escapes.
  bool converged = false;
  /// Neither settled nor escaped within the iteration cap.
  bool undecided = false;
  double limit = 0.0;
  long iterations = 0;
};

FixedPointResult strauss_fixed_point(const StraussCase& c, long max_iterations = 2'000'000);

// ---------------------------------------------------------------------------
// Young and Gagliardo-Nirenberg spot checks on grid functions

/// h^d sum_j f(x_i - x_j) g(x_j) via the spectrum.
Field periodic_convolution(const Field& f, const Field& g);

struct YoungReport {
  double p = 1.0;
  double q = 1.0;
  double r = 1.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
};

YoungReport young_check(const Field& f, const Field& g, double p, double q);

/// u(lambda x) about the box centre, by sampling every lambda-th point (zero outside).
Field compress_about_center(const Field& u, int lambda);

struct GagliardoReport {
  double p = 0.0;
  double q = 0.0;
  double s = 0.0;
  double theta = 0.0;
  double lhs = 0.0;
  double lp = 0.0;
  double homogeneous = 0.0;
  double ratio = 0.0;
  std::vector<int> scales;
  std::vector<double> scale_ratios;
  /// max/min - 1 over scale_ratios.
  double scale_spread = 0.0;
};

GagliardoReport gagliardo_spot_check(const Field& u, double p, double q, double s, double theta,
                                     const std::vector<int>& scales = {1, 2});

void to_json(nlohmann::json& j, const BetaReport& r);
void to_json(nlohmann::json& j, const BihariVerifyReport& r);
void to_json(nlohmann::json& j, const StraussResult& r);
void to_json(nlohmann::json& j, const YoungReport& r);
void to_json(nlohmann::json& j, const GagliardoReport& r);

}  // namespace mbe
