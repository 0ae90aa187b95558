#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symrmt/ensembles.hpp"

namespace symrmt {

enum class UnfoldMethod { PolynomialStaircase, LocalMeanSpacing, Uniform };

struct UnfoldOptions {
  UnfoldMethod method = UnfoldMethod::PolynomialStaircase;
  int degree = 7;      // polynomial staircase
  int window = 10;     // local mean spacing, levels on each side
  double density = 0;  // uniform: levels per unit (0 selects N / 2pi for phases)
};

struct UnfoldedSpectrum {
  std::vector<double> levels;
  UnfoldMethod method = UnfoldMethod::PolynomialStaircase;
  int parameter = 0;  // degree or window
};

/// Smooth staircase xi(E) = sum_k c_k P_k((E - center) / half_width) (Legendre basis).
struct StaircaseFit {
  std::vector<double> coefficients;
  double center = 0.0;
  double half_width = 1.0;
  double lo = 0.0, hi = 0.0;  // data range

  double operator()(double e) const;
  double derivative(double e) const;
};

/// Least-squares fit of the staircase of the pooled levels (counts divided by
/// the number of spectra). Throws Numerical when the fit is not monotone.
StaircaseFit fit_staircase(const std::vector<Spectrum>& batch, int degree);

UnfoldedSpectrum unfold(const Spectrum& raw, const UnfoldOptions& opts);
/// Ensemble unfolding: one staircase fitted to the pooled batch.
std::vector<UnfoldedSpectrum> unfold_batch(const std::vector<Spectrum>& batch,
                                           const UnfoldOptions& opts);
/// z_i = lambda_i / Delta with Delta = 1 / rho_1(0).
std::vector<double> microscopic_rescale(const std::vector<double>& levels, double rho_at_zero);

/// Levels after dropping the given fraction at each edge.
std::vector<double> trim_edges(const std::vector<double>& levels, double fraction);

struct ObservableCurve {
  std::string observable;
  std::vector<double> abscissa;
  std::vector<double> value;
  std::vector<double> stderr_;
  std::size_t n_samples = 0;
};

/// Nearest-neighbour spacings of the trimmed unfolded levels, draw by draw.
std::vector<double> collect_spacings(const std::vector<UnfoldedSpectrum>& batch,
                                     double trim = 0.05);

/// Normalized histogram on [0, s_max); bin_width <= 0 selects Freedman-Diaconis.
ObservableCurve spacing_distribution(const std::vector<UnfoldedSpectrum>& batch,
                                     double bin_width = 0.0, double s_max = 4.0,
                                     double trim = 0.05);
ObservableCurve histogram_density(const std::vector<double>& samples, double lo, double hi,
                                  std::size_t bins, const std::string& name);

struct WignerConstants {
  double a;
  double b;
};
/// Constants of p(s) = a s^beta exp(-b s^2) with unit norm and unit mean.
WignerConstants wigner_constants(int beta);
double wigner_surmise(int beta, double s);

/// Power-law exponent of a density near the origin from samples restricted to
/// [lo, hi]: Poisson log-linear fit of log-spaced bin counts on
/// {1, log s, s^2} (with_curvature) or {1, log s}. A nonzero known_curvature
/// enters as a fixed c s^2 term of the log density.
struct SlopeFit {
  double slope;
  double stderr_;
  double curvature;
  std::size_t n_in_window;
};
SlopeFit fit_loglog_slope(const std::vector<double>& samples, double lo, double hi,
                          std::size_t bins = 25, bool with_curvature = true,
                          double known_curvature = 0.0);

/// Sigma^2(L): windows of length L started on a regular grid (step start_step)
/// over each trimmed sequence; stderr across draws (or blocks when few draws).
ObservableCurve number_variance(const std::vector<UnfoldedSpectrum>& batch,
                                const std::vector<double>& L, double trim = 0.05,
                                double start_step = 0.25);
/// Delta_3(L): closed-form least-squares line per window, averaged.
ObservableCurve spectral_rigidity(const std::vector<UnfoldedSpectrum>& batch,
                                  const std::vector<double>& L, double trim = 0.05,
                                  double start_step = 0.25);
/// Delta_3 of a single window [a, a + L] of a sorted sequence.
double window_delta3(const std::vector<double>& levels, double a, double L);

/// Two-point cluster function Y2(r) = 1 - R2(r) from pair counts of the
/// trimmed unfolded levels; r bins on [0, r_max).
ObservableCurve cluster_function(const std::vector<UnfoldedSpectrum>& batch, double r_max,
                                 std::size_t bins, double trim = 0.05);

/// Oscillator functions phi_0..phi_{N-1} at x, weight exp(-x^2/2) each.
struct HermiteKernel {
  int n;
  explicit HermiteKernel(int n);
  double operator()(double x, double y) const;  // K_N(x, y)
  double density(double x) const { return (*this)(x, x); }
  /// Points +-x with integral of the density between them equal to r.
  double half_separation(double r) const;
  /// Y2 at unfolded separation r about the origin.
  double y2(double r) const;
};

/// Sigma^2(L) = L - 2 int_0^L (L - r) Y2(r) dr for a given Y2.
double sigma2_from_y2(const std::function<double(double)>& y2, double L);
/// Delta_3(L) = (2 / L^4) int_0^L (L^3 - 2 L^2 r + r^3) Sigma^2(r) dr.
double delta3_from_sigma2(const std::function<double(double)>& sigma2, double L);

/// Poisson surrogate: Poisson(n) i.i.d. uniform levels on [0, n).
Spectrum poisson_surrogate(int n, std::uint64_t seed, std::uint64_t index);

}  // namespace symrmt
