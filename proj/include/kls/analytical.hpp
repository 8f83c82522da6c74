// SPDX-License-Identifier: MIT
// Closed-form reference solutions for the balloon, pure-bending strip and
// inflated sphere problems, plus error metrics and convergence-order fits.
#pragma once

#include <vector>

namespace kls {

// Intermediate metric evolution â_ev(t) for λ = exp(t/τ_λ) under a classical
// Neo-Hookean Maxwell branch; the removable pole μ₁τ_λ = 2η_s uses the limit.
double ahat_ev(double mu1, double eta_s, double tau_lambda, double t);
// Intermediate curvature evolution b̂_ev(t) under b = λB and a Koiter bending branch.
double bhat_ev(double c1, double eta_b, double tau_lambda, double t);

struct PressureSplit {
  double lambda = 1.0;
  double p_el = 0.0, p_visc = 0.0, p_total = 0.0;
  double ahat = 1.0, bhat = 1.0;
};

struct BalloonParams {
  double R = 1.0;
  double mu = 1.0, mu1 = 1.0, eta_s = 0.1;
  double lambda_end = 2.0, t_end = 1.0;

  double tau_lambda() const;
  void validate() const;
};

PressureSplit balloon_pressure(const BalloonParams& p, double t);

struct PureBendParams {
  double c = 1.0, c1 = 1.0, eta_b = 0.5;
  double t_end = 1.0, kappa_end = 0.5;
  double S = 3.141592653589793;  // strip length across the bending direction

  double tau_b() const;
  double M_v() const;
  void validate() const;
};

struct PureBendState {
  double kappa = 0.0, kappa_in = 0.0, M = 0.0, u_y = 0.0, p = 0.0;
};

PureBendState pure_bend_solution(const PureBendParams& p, double t);

struct SphereParams {
  double R = 1.0;
  double mu = 5.0, mu1 = 5.0, c1 = 1.0, k = 1.0, H0 = 1.0;
  double eta_s = 0.5, eta_b = 0.5;
  double lambda_end = 1.5874010519681994, t_end = 1.0;  // 4^{1/3}

  double tau_lambda() const;
  void validate() const;
};

PressureSplit sphere_pressure(const SphereParams& p, double t);

// |num − ana| / |ana|; throws UndefinedError when ana is zero.
double relative_error(double numerical, double analytical);

struct OrderFit {
  double slope = 0.0, intercept = 0.0;
};

// Least-squares line through (log h, log err).
OrderFit fit_order(const std::vector<double>& h, const std::vector<double>& err);

}  // namespace kls
