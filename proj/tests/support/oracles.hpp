#pragma once

// Reference values computed independently of the library: closed forms,
// GSL special functions and adaptive GSL quadrature.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_hermite.h>
#include <gsl/gsl_sf_legendre.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double gsl_quad(const std::function<double(double)>& f, double a, double b,
                       double rel = 1e-11) {
  gsl_set_error_handler_off();
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
  gsl_function F;
  F.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
  F.params = const_cast<std::function<double(double)>*>(&f);
  double r = 0.0, err = 0.0;
  gsl_integration_qag(&F, a, b, 0.0, rel, 2000, GSL_INTEG_GAUSS61, ws, &r, &err);
  gsl_integration_workspace_free(ws);
  return r;
}

inline double gsl_quad_inf(const std::function<double(double)>& f, double a, double rel = 1e-10) {
  gsl_set_error_handler_off();
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
  gsl_function F;
  F.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
  F.params = const_cast<std::function<double(double)>*>(&f);
  double r = 0.0, err = 0.0;
  gsl_integration_qagiu(&F, a, 0.0, rel, 2000, ws, &r, &err);
  gsl_integration_workspace_free(ws);
  return r;
}

// Wigner surmise written from the textbook closed forms.
inline double surmise(int beta, double s) {
  const double pi = std::numbers::pi;
  switch (beta) {
    case 1: return pi / 2.0 * s * std::exp(-pi * s * s / 4.0);
    case 2: return 32.0 / (pi * pi) * s * s * std::exp(-4.0 * s * s / pi);
    default:
      return std::pow(2.0, 18) / (std::pow(3.0, 6) * pi * pi * pi) * std::pow(s, 4) *
             std::exp(-64.0 * s * s / (9.0 * pi));
  }
}

inline double semicircle(double x, double radius) {
  if (std::abs(x) >= radius) return 0.0;
  return 2.0 / (std::numbers::pi * radius * radius) * std::sqrt(radius * radius - x * x);
}

// Integral of the semicircle density over [a, b].
inline double semicircle_mass(double a, double b, double radius) {
  auto cdf = [radius](double x) {
    const double t = std::clamp(x / radius, -1.0, 1.0);
    return 0.5 + (t * std::sqrt(1.0 - t * t) + std::asin(t)) / std::numbers::pi;
  };
  return cdf(b) - cdf(a);
}

// Sum of squared oscillator functions from GSL.
inline double hermite_kernel(int n, double x, double y) {
  double k = 0.0;
  for (int j = 0; j < n; ++j) k += gsl_sf_hermite_func(j, x) * gsl_sf_hermite_func(j, y);
  return k;
}

inline double sine_kernel_y2(double r) {
  if (r == 0.0) return 1.0;
  const double x = std::numbers::pi * r;
  return (std::sin(x) / x) * (std::sin(x) / x);
}

inline double conical_p0(double tau, double xi) { return gsl_sf_conicalP_0(tau, std::cosh(xi)); }

// Heat kernel of the hyperbolic plane for the generator Delta (McKean).
inline double mckean_kernel(double t, double rho) {
  auto g = [&](double u) {
    const double r = rho + u * u;
    const double d = 2.0 * std::sinh(0.5 * (r + rho)) * std::sinh(0.5 * (r - rho));
    if (u == 0.0) return rho > 0.0 ? 2.0 * rho * std::exp(-rho * rho / (4.0 * t)) / std::sqrt(std::sinh(rho)) : 0.0;
    return 2.0 * u * r * std::exp(-r * r / (4.0 * t)) / std::sqrt(d);
  };
  const double v = gsl_quad_inf(g, 0.0);
  return std::sqrt(2.0) * std::exp(-t / 4.0) / std::pow(4.0 * std::numbers::pi * t, 1.5) * v;
}

// One-channel conductance <1 / cosh^2(rho / 2)> after time s from the origin.
inline double mckean_mean_conductance(double s) {
  const double hi = 4.0 * s + 12.0 * std::sqrt(s) + 10.0;
  const double z = gsl_quad([&](double r) { return std::sinh(r) * mckean_kernel(s, r); }, 0.0, hi, 1e-9);
  const double g = gsl_quad(
      [&](double r) {
        const double c = std::cosh(0.5 * r);
        return std::sinh(r) * mckean_kernel(s, r) / (c * c);
      },
      0.0, hi, 1e-9);
  return g / z;
}

// Smallest-level density exponent of the chiral ensemble.
inline double chiral_alpha(int beta, int nu) { return beta * (nu + 1) - 1; }

// Poisson number variance and rigidity.
inline double poisson_sigma2(double L) { return L; }
inline double poisson_delta3(double L) { return L / 15.0; }

}  // namespace oracle
