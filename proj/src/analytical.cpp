// SPDX-License-Identifier: MIT
#include "kls/analytical.hpp"

#include "kls/types.hpp"

#include <cmath>
#include <string>

namespace kls {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::ParameterError, std::string(name) + " must be positive");
}

void require_time(double t, double t_end) {
  if (!(t >= 0.0) || t > t_end * (1.0 + 1e-12))
    throw Error(ErrorKind::ParameterError, "time " + std::to_string(t) + " outside [0, t_end]");
}

}  // namespace

double ahat_ev(double mu1, double eta_s, double tau_lambda, double t) {
  require_positive(eta_s, "eta_s");
  require_positive(tau_lambda, "tau_lambda");
  const double a = mu1 * tau_lambda, b = 2.0 * eta_s;
  if (std::abs(a - b) < 1e-8 * std::abs(a)) {
    const double s = 2.0 * t / tau_lambda;
    return std::exp(-s) * (1.0 + s);
  }
  return (a * std::exp(-2.0 * t / tau_lambda) - b * std::exp(-mu1 * t / eta_s)) / (a - b);
}

double bhat_ev(double c1, double eta_b, double tau_lambda, double t) {
  require_positive(eta_b, "eta_b");
  require_positive(tau_lambda, "tau_lambda");
  const double den = eta_b + c1 * tau_lambda;
  if (den == 0.0) throw Error(ErrorKind::ParameterError, "eta_b + c1 tau_lambda vanishes");
  return (c1 * tau_lambda * std::exp(t / tau_lambda) + eta_b * std::exp(-c1 * t / eta_b)) / den;
}

double BalloonParams::tau_lambda() const { return t_end / std::log(lambda_end); }

void BalloonParams::validate() const {
  require_positive(R, "R");
  require_positive(mu, "mu");
  require_positive(mu1, "mu1");
  require_positive(eta_s, "eta_s");
  require_positive(t_end, "t_end");
  if (!(lambda_end > 1.0)) throw Error(ErrorKind::ParameterError, "lambda_end must exceed 1");
}

PressureSplit balloon_pressure(const BalloonParams& p, double t) {
  p.validate();
  require_time(t, p.t_end);
  PressureSplit s;
  const double tau = p.tau_lambda();
  const double l = std::exp(t / tau);
  s.lambda = l;
  s.ahat = ahat_ev(p.mu1, p.eta_s, tau, t);
  s.p_el = 2.0 * p.mu / p.R * (1.0 / l - std::pow(l, -7));
  s.p_visc = 2.0 * p.mu1 / p.R * (1.0 / l - 1.0 / (l * l * l * s.ahat));
  s.p_total = s.p_el + s.p_visc;
  return s;
}

double PureBendParams::tau_b() const { return eta_b * (c + c1) / (c * c1); }

double PureBendParams::M_v() const {
  const double tb = tau_b();
  const double k_in = tb * (std::exp(-t_end / tb) + t_end / tb - 1.0) / c;
  return (c + c1) * kappa_end / (t_end + c1 * k_in);
}

void PureBendParams::validate() const {
  require_positive(c, "c");
  require_positive(c1, "c1");
  require_positive(eta_b, "eta_b");
  require_positive(t_end, "t_end");
  require_positive(S, "S");
}

PureBendState pure_bend_solution(const PureBendParams& p, double t) {
  p.validate();
  require_time(t, p.t_end);
  PureBendState s;
  const double tb = p.tau_b(), mv = p.M_v();
  s.M = mv * t;
  s.kappa_in = mv * tb / p.c * (std::exp(-t / tb) + t / tb - 1.0);
  s.kappa = (s.M + p.c1 * s.kappa_in) / (p.c + p.c1);
  // S - (2/κ) sin(Sκ/2) expanded near κ = 0 to avoid cancellation.
  const double x = 0.5 * p.S * s.kappa;
  const double chord = std::abs(x) < 1e-4 ? p.S * (x * x / 6.0 - std::pow(x, 4) / 120.0)
                                          : p.S - 2.0 / s.kappa * std::sin(x);
  s.u_y = -chord;
  s.p = -((p.c + p.c1) * std::pow(s.kappa, 3) - p.c1 * s.kappa * s.kappa * s.kappa_in);
  return s;
}

double SphereParams::tau_lambda() const { return t_end / std::log(lambda_end); }

void SphereParams::validate() const {
  require_positive(R, "R");
  require_positive(mu, "mu");
  require_positive(mu1, "mu1");
  require_positive(eta_s, "eta_s");
  require_positive(eta_b, "eta_b");
  require_positive(t_end, "t_end");
  if (!(c1 >= 0.0) || !(k >= 0.0)) throw Error(ErrorKind::ParameterError, "bending moduli must be nonnegative");
  if (!(lambda_end > 1.0)) throw Error(ErrorKind::ParameterError, "lambda_end must exceed 1");
}

PressureSplit sphere_pressure(const SphereParams& p, double t) {
  p.validate();
  require_time(t, p.t_end);
  PressureSplit s;
  const double tau = p.tau_lambda();
  const double l = std::exp(t / tau), R = p.R;
  s.lambda = l;
  s.ahat = ahat_ev(p.mu1, p.eta_s, tau, t);
  s.bhat = bhat_ev(p.c1, p.eta_b, tau, t);
  const double R3 = R * R * R;
  s.p_el = 2.0 / R3 *
           (p.mu * R * R * (1.0 / l - std::pow(l, -7)) + p.k * (p.H0 * R / (l * l) + p.H0 * p.H0 * R * R / l));
  s.p_visc = 2.0 / R3 *
             (p.mu1 * R * R * (1.0 / l - 1.0 / (l * l * l * s.ahat)) + p.c1 * s.ahat * (1.0 / l - s.bhat / (l * l)));
  s.p_total = s.p_el + s.p_visc;
  return s;
}

double relative_error(double numerical, double analytical) {
  if (analytical == 0.0 || !std::isfinite(analytical))
    throw Error(ErrorKind::UndefinedError, "relative error undefined for a zero reference value");
  return std::abs(numerical - analytical) / std::abs(analytical);
}

OrderFit fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2)
    throw Error(ErrorKind::ParameterError, "order fit needs at least two matching samples");
  const double n = static_cast<double>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(err[i] > 0.0))
      throw Error(ErrorKind::UndefinedError, "order fit needs positive step sizes and errors");
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw Error(ErrorKind::UndefinedError, "order fit needs distinct step sizes");
  OrderFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace kls
