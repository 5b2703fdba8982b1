#include "mbe/bounds_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "mbe/error.hpp"
#include "mbe/fft.hpp"
#include "mbe/fit.hpp"
#include "mbe/spectral.hpp"

namespace mbe {

namespace {

template <class F>
double integrate(F&& f, double a, double b) {
  if (a == b) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-12, &err);
}

}  // namespace

// --------------------------------------------------------------------------- Beta

double beta_t_integral(double a, double b, double t) {
  if (!(a < 1.0) || !(b < 1.0)) throw InvalidArgument("Beta integral diverges unless a < 1 and b < 1");
  if (!(t > 0.0)) throw InvalidArgument("Beta integral needs t > 0");
  const double half = 0.5 * t;
  // s in [0, t/2]: s = tau^{1/(1-b)} absorbs s^{-b} ds = dtau / (1-b).
  const double eb = 1.0 / (1.0 - b);
  const double left = integrate(
      [&](double tau) { return std::pow(t - std::pow(tau, eb), -a) / (1.0 - b); }, 0.0,
      std::pow(half, 1.0 - b));
  // r = t - s in [0, t/2]: r = tau^{1/(1-a)} absorbs r^{-a} dr.
  const double ea = 1.0 / (1.0 - a);
  const double right = integrate(
      [&](double tau) { return std::pow(t - std::pow(tau, ea), -b) / (1.0 - a); }, 0.0,
      std::pow(half, 1.0 - a));
  return left + right;
}

double beta_integral_constant(double a, double b) { return beta_t_integral(a, b, 1.0); }

BetaReport beta_scaling_report(double a, double b) {
  BetaReport r;
  r.a = a;
  r.b = b;
  r.constant = beta_integral_constant(a, b);
  r.expected_exponent = 1.0 - a - b;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    r.integrals[i] = beta_t_integral(a, b, r.times[i]);
    const double collapsed = r.integrals[i] / std::pow(r.times[i], r.expected_exponent);
    r.max_collapse_error = std::max(r.max_collapse_error, std::abs(collapsed - r.constant) / r.constant);
  }
  r.fitted_exponent = fit_log_log(r.times, r.integrals).slope;
  return r;
}

// --------------------------------------------------------------------------- Bihari

TabulatedFunction TabulatedFunction::constant(double a, double b, double value) {
  return {{a, b}, {value, value}};
}

void TabulatedFunction::validate(const char* what) const {
  if (nodes.size() < 2 || nodes.size() != values.size()) {
    throw InvalidArgument(std::string(what) + ": need >= 2 nodes with matching values");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!std::isfinite(nodes[i]) || !std::isfinite(values[i])) {
      throw InvalidArgument(std::string(what) + ": non-finite table entry");
    }
    if (i > 0 && !(nodes[i] > nodes[i - 1])) {
      throw InvalidArgument(std::string(what) + ": nodes must increase");
    }
  }
}

double TabulatedFunction::operator()(double t) const {
  if (t <= nodes.front()) return values.front();
  if (t >= nodes.back()) return values.back();
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - nodes.begin()) - 1;
  const double w = (t - nodes[i]) / (nodes[i + 1] - nodes[i]);
  return values[i] + w * (values[i + 1] - values[i]);
}

double TabulatedFunction::integral_to(double t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size() && nodes[i] < t; ++i) {
    const double right = std::min(t, nodes[i + 1]);
    sum += 0.5 * (values[i] + (*this)(right)) * (right - nodes[i]);
  }
  return sum;
}

Nonlinearity Nonlinearity::power(double gamma) {
  Nonlinearity n;
  n.kind = Kind::power;
  n.gamma = gamma;
  return n;
}

Nonlinearity Nonlinearity::tabulated(TabulatedFunction t) {
  Nonlinearity n;
  n.kind = Kind::table;
  n.table = std::move(t);
  return n;
}

double Nonlinearity::operator()(double u) const {
  switch (kind) {
    case Kind::identity: return u;
    case Kind::power: return std::pow(u, gamma);
    case Kind::table: return table(u);
  }
  return 0.0;
}

void Nonlinearity::validate() const {
  if (kind == Kind::power && !(gamma > 0.0)) throw InvalidArgument("omega power must be positive");
  if (kind == Kind::table) {
    table.validate("omega table");
    for (std::size_t i = 0; i < table.values.size(); ++i) {
      if (table.values[i] < 0.0) throw InvalidArgument("omega must be non-negative");
      if (i > 0 && table.values[i] < table.values[i - 1]) {
        throw InvalidArgument("omega must be non-decreasing");
      }
    }
  }
}

void BihariProblem::validate() const {
  if (!(k >= 0.0) || !(M >= 0.0)) throw InvalidArgument("Bihari problem needs k >= 0 and M >= 0");
  if (!(anchor > 0.0)) throw InvalidArgument("Omega anchor must be positive");
  h.validate("h table");
  omega.validate();
}

namespace {

// log(u) range explored when inverting Omega.
constexpr double kLogSpan = 690.0;

double omega_integrand(const BihariProblem& prob, double sigma) {
  const double y = prob.anchor * std::exp(sigma);
  const double w = prob.omega(y);
  if (!(w > 0.0)) {
    throw InvalidArgument("omega vanishes at u = " + std::to_string(y) + "; Omega diverges");
  }
  return y / w;
}

double omega_piece(const BihariProblem& prob, double s0, double s1) {
  return integrate([&](double s) { return omega_integrand(prob, s); }, s0, s1);
}

double omega_log(const BihariProblem& prob, double sigma) {
  double sum = 0.0;
  const double dir = sigma >= 0.0 ? 1.0 : -1.0;
  double s = 0.0;
  while (dir * (sigma - s) > 1.0) {
    sum += dir * omega_piece(prob, std::min(s, s + dir), std::max(s, s + dir));
    s += dir;
  }
  sum += dir * omega_piece(prob, std::min(s, sigma), std::max(s, sigma));
  return sum;
}

// Solves cum + int_{lo}^{x} integrand = target for x in [lo, hi].
double bisect_piece(const BihariProblem& prob, double lo, double hi, double cum_at_lo, double target) {
  const double base = lo;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cum_at_lo + omega_piece(prob, base, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Omega^{-1}(target) as log(u / anchor), or NaN when target is out of range.
double omega_inverse_log(const BihariProblem& prob, double target) {
  double cum = 0.0;
  double s = 0.0;
  if (target >= 0.0) {
    while (s < kLogSpan) {
      const double piece = omega_piece(prob, s, s + 1.0);
      if (cum + piece >= target) return bisect_piece(prob, s, s + 1.0, cum, target);
      cum += piece;
      s += 1.0;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
  while (s > -kLogSpan) {
    const double piece = omega_piece(prob, s - 1.0, s);
    if (cum - piece <= target) return bisect_piece(prob, s - 1.0, s, cum - piece, target);
    cum -= piece;
    s -= 1.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double bihari_omega(const BihariProblem& prob, double u) {
  if (!(u > 0.0)) {
    throw InvalidArgument("Omega(u) is only evaluated for u > 0 (k = 0 is a limit case)");
  }
  return omega_log(prob, std::log(u / prob.anchor));
}

BihariBound bihari_bound(const BihariProblem& prob, double t) {
  prob.validate();
  if (!(prob.k > 0.0)) {
    throw InvalidArgument("Omega(k) is undefined at k = 0; use bihari_small_k_study");
  }
  if (t < prob.start() || t > prob.end()) throw InvalidArgument("t outside the table of h");
  BihariBound b;
  b.target = bihari_omega(prob, prob.k) + prob.M * prob.h.integral_to(t);
  if (prob.M == 0.0 || t == prob.start()) {
    b.in_domain = true;
    b.value = prob.k;
    return b;
  }
  const double sigma = omega_inverse_log(prob, b.target);
  b.in_domain = std::isfinite(sigma);
  b.value = b.in_domain ? prob.anchor * std::exp(sigma) : std::numeric_limits<double>::infinity();
  return b;
}

double bihari_domain_boundary(const BihariProblem& prob, double tolerance) {
  if (bihari_bound(prob, prob.end()).in_domain) return prob.end();
  double lo = prob.start();
  double hi = prob.end();
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (bihari_bound(prob, mid).in_domain) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> bihari_trial_solution(const BihariProblem& prob, const TabulatedFunction& rho,
                                          double scale, const std::vector<double>& sample_times,
                                          int substeps) {
  std::vector<double> breaks = prob.h.nodes;
  breaks.insert(breaks.end(), rho.nodes.begin(), rho.nodes.end());
  breaks.insert(breaks.end(), sample_times.begin(), sample_times.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                              [&](double t) { return t < prob.start() || t > prob.end(); }),
               breaks.end());

  auto rhs = [&](double t, double g) {
    return (1.0 - rho(t)) * prob.M * prob.h(t) * prob.omega(std::max(g, 0.0));
  };
  const double span = prob.end() - prob.start();
  const int budget = substeps * 256;

  std::vector<double> out(sample_times.size(), std::numeric_limits<double>::quiet_NaN());
  double g = scale * prob.k;
  std::size_t next = 0;
  auto emit = [&](double t) {
    while (next < sample_times.size() && sample_times[next] <= t) {
      if (sample_times[next] == t) out[next] = g;
      ++next;
    }
  };
  emit(breaks.front());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double t0 = breaks[i];
    const double t1 = breaks[i + 1];
    const int n = std::max(2, static_cast<int>(std::ceil(budget * (t1 - t0) / span)));
    const double dt = (t1 - t0) / n;
    for (int s = 0; s < n; ++s) {
      const double t = t0 + s * dt;
      const double k1 = rhs(t, g);
      const double k2 = rhs(t + 0.5 * dt, g + 0.5 * dt * k1);
      const double k3 = rhs(t + 0.5 * dt, g + 0.5 * dt * k2);
      const double k4 = rhs(t + dt, g + dt * k3);
      g += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    emit(t1);
  }
  return out;
}

BihariVerifyReport bihari_verify(const BihariProblem& prob, int trials, std::uint64_t seed) {
  prob.validate();
  if (trials < 1) throw InvalidArgument("bihari_verify needs at least one trial");
  BihariVerifyReport r;
  r.trials = trials;
  r.base_seed = seed;

  // Stay strictly inside the domain of Omega^{-1}.
  const double boundary = bihari_domain_boundary(prob);
  const double stop = boundary < prob.end() ? prob.start() + 0.95 * (boundary - prob.start())
                                            : prob.end();
  std::vector<double> samples(static_cast<std::size_t>(r.samples_per_trial));
  std::vector<double> bounds(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = prob.start() + (stop - prob.start()) * static_cast<double>(i + 1) /
                                    static_cast<double>(samples.size());
    bounds[i] = bihari_bound(prob, samples[i]).value;
  }

  const TabulatedFunction none = TabulatedFunction::constant(prob.start(), prob.end(), 0.0);
  const std::vector<double> v = bihari_trial_solution(prob, none, 1.0, samples);
  r.equality_violation = -std::numeric_limits<double>::infinity();
  r.half_scaled_min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    r.equality_violation = std::max(r.equality_violation, v[i] - bounds[i]);
    r.equality_gap = std::max(r.equality_gap, std::abs(v[i] - bounds[i]));
    r.half_scaled_min_slack = std::min(r.half_scaled_min_slack, bounds[i] - 0.5 * v[i]);
  }

  r.max_violation = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(trial);
    r.seeds.push_back(s);
    std::mt19937_64 rng(s);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TabulatedFunction rho;
    for (int i = 0; i <= 10; ++i) {
      rho.nodes.push_back(prob.start() + (prob.end() - prob.start()) * i / 10.0);
      rho.values.push_back(unit(rng));
    }
    const double scale = 0.05 + 0.95 * unit(rng);
    const std::vector<double> g = bihari_trial_solution(prob, rho, scale, samples);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      r.max_violation = std::max(r.max_violation, g[i] - bounds[i]);
    }
  }
  return r;
}

std::vector<std::pair<double, double>> bihari_small_k_study(const BihariProblem& prob, double t,
                                                            const std::vector<double>& ks) {
  std::vector<std::pair<double, double>> out;
  for (double k : ks) {
    BihariProblem p = prob;
    p.k = k;
    const BihariBound b = bihari_bound(p, t);
    out.emplace_back(k, b.value);
  }
  return out;
}

// --------------------------------------------------------------------------- Strauss

void StraussCase::validate() const {
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw InvalidArgument("Strauss constants must be positive");
  if (!(gamma > 1.0)) throw InvalidArgument("Strauss exponent must exceed 1");
}

StraussResult strauss_check(const StraussCase& c) {
  c.validate();
  StraussResult r;
  const double inv = 1.0 / (c.gamma - 1.0);
  r.lhs = c.c1 * std::pow(c.c2, inv);
  r.rhs = (1.0 - 1.0 / c.gamma) * std::pow(c.gamma, -inv);
  r.condition_holds = r.lhs < r.rhs;
  r.bound = c.c1 / (1.0 - 1.0 / c.gamma);
  return r;
}

FixedPointResult strauss_fixed_point(const StraussCase& c, long max_iterations) {
  c.validate();
  // Beyond the minimiser of c1 + c2 m^gamma - m the map only increases the gap.
  const double escape = std::pow(c.gamma * c.c2, -1.0 / (c.gamma - 1.0));
  FixedPointResult r;
  double m = 0.0;
  for (long it = 1; it <= max_iterations; ++it) {
    const double next = c.c1 + c.c2 * std::pow(m, c.gamma);
    r.iterations = it;
    if (next > escape) {
      r.limit = next;
      return r;
    }
    if (next - m <= 1e-15 * next) {
      r.converged = true;
      r.limit = next;
      return r;
    }
    m = next;
  }
  r.undecided = true;
  r.limit = m;
  return r;
}

// --------------------------------------------------------------------------- Young / GN

Field periodic_convolution(const Field& f, const Field& g) {
  if (!(f.grid() == g.grid())) throw InvalidArgument("convolution operands on different grids");
  Spectrum a = forward(f);
  const Spectrum b = forward(g);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  a *= f.grid().cell_volume();
  return inverse(a);
}

YoungReport young_check(const Field& f, const Field& g, double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw InvalidArgument("Young exponents must be >= 1");
  const double inv_p = p == kInf ? 0.0 : 1.0 / p;
  const double inv_q = q == kInf ? 0.0 : 1.0 / q;
  const double inv_r = inv_p + inv_q - 1.0;
  if (inv_r < -1e-15) throw InvalidArgument("Young needs 1/p + 1/q >= 1");
  YoungReport r;
  r.p = p;
  r.q = q;
  r.r = inv_r <= 0.0 ? kInf : 1.0 / inv_r;
  r.lhs = lp_norm(periodic_convolution(f, g), r.r);
  r.rhs = lp_norm(f, p) * lp_norm(g, q);
  r.slack = r.rhs - r.lhs;
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-12);
  return r;
}

Field compress_about_center(const Field& u, int lambda) {
  if (lambda < 1) throw InvalidArgument("compression factor must be >= 1");
  const GridSpec& grid = u.grid();
  const int n = grid.points();
  const int c = n / 2;
  auto source = [&](int i) {
    const long j = static_cast<long>(c) + static_cast<long>(lambda) * (i - c);
    return (j >= 0 && j < n) ? static_cast<int>(j) : -1;
  };
  Field out(grid);
  if (grid.dimension() == 1) {
    for (int i = 0; i < n; ++i) {
      const int s = source(i);
      if (s >= 0) out[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(s)];
    }
    return out;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int si = source(i);
      const int sj = source(j);
      if (si >= 0 && sj >= 0) {
        out[static_cast<std::size_t>(i * n + j)] = u[static_cast<std::size_t>(si * n + sj)];
      }
    }
  }
  return out;
}

namespace {

GagliardoReport gagliardo_single(const Field& u, double p, double q, double s, double theta) {
  GagliardoReport r;
  r.p = p;
  r.q = q;
  r.s = s;
  r.theta = theta;
  r.lhs = lp_norm(u, q);
  r.lp = lp_norm(u, p);
  r.homogeneous = lp_norm(fractional_derivative(u, s), p);
  const double denom = std::pow(r.lp, 1.0 - theta) * std::pow(r.homogeneous, theta);
  if (!(denom > 0.0)) throw InvalidArgument("Gagliardo-Nirenberg check needs a non-constant field");
  r.ratio = r.lhs / denom;
  return r;
}

}  // namespace

GagliardoReport gagliardo_spot_check(const Field& u, double p, double q, double s, double theta,
                                     const std::vector<int>& scales) {
  if (!(p > 1.0) || !(q > p)) throw InvalidArgument("Gagliardo-Nirenberg needs 1 < p < q");
  if (!(theta > 0.0) || !(theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
  if (!(s >= 0.0)) throw InvalidArgument("s must be non-negative");
  const double d = u.grid().dimension();
  const double inv_q = q == kInf ? 0.0 : 1.0 / q;
  if (std::abs(inv_q - (1.0 / p - theta * s / d)) > 1e-12) {
    throw InvalidArgument("exponents violate 1/q = 1/p - theta s / d");
  }
  GagliardoReport r = gagliardo_single(u, p, q, s, theta);
  r.scales = scales;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int lambda : scales) {
    const double ratio = gagliardo_single(compress_about_center(u, lambda), p, q, s, theta).ratio;
    r.scale_ratios.push_back(ratio);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  r.scale_spread = scales.empty() ? 0.0 : hi / lo - 1.0;
  return r;
}

// --------------------------------------------------------------------------- JSON

namespace {

nlohmann::json exponent_json(double e) { return e == kInf ? nlohmann::json("inf") : nlohmann::json(e); }

}  // namespace

void to_json(nlohmann::json& j, const BetaReport& r) {
  j = nlohmann::json{{"a", r.a},
                     {"b", r.b},
                     {"constant", r.constant},
                     {"times", r.times},
                     {"integrals", r.integrals},
                     {"max_collapse_error", r.max_collapse_error},
                     {"fitted_exponent", r.fitted_exponent},
                     {"expected_exponent", r.expected_exponent}};
}

void to_json(nlohmann::json& j, const BihariVerifyReport& r) {
  j = nlohmann::json{{"trials", r.trials},
                     {"samples_per_trial", r.samples_per_trial},
                     {"base_seed", r.base_seed},
                     {"seeds", r.seeds},
                     {"max_violation", r.max_violation},
                     {"equality_violation", r.equality_violation},
                     {"equality_gap", r.equality_gap},
                     {"half_scaled_min_slack", r.half_scaled_min_slack}};
}

void to_json(nlohmann::json& j, const StraussResult& r) {
  j = nlohmann::json{{"condition_holds", r.condition_holds},
                     {"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"bound", r.bound}};
}

void to_json(nlohmann::json& j, const YoungReport& r) {
  j = nlohmann::json{{"p", exponent_json(r.p)}, {"q", exponent_json(r.q)}, {"r", exponent_json(r.r)},
                     {"lhs", r.lhs},            {"rhs", r.rhs},            {"slack", r.slack},
                     {"holds", r.holds}};
}

void to_json(nlohmann::json& j, const GagliardoReport& r) {
  j = nlohmann::json{{"p", r.p},
                     {"q", exponent_json(r.q)},
                     {"s", r.s},
                     {"theta", r.theta},
                     {"lhs", r.lhs},
                     {"lp", r.lp},
                     {"homogeneous", r.homogeneous},
                     {"ratio", r.ratio},
                     {"scales", r.scales},
                     {"scale_ratios", r.scale_ratios},
                     {"scale_spread", r.scale_spread}};
}

}  // namespace mbe
