#include "symrmt/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "symrmt/error.hpp"
#include "symrmt/quadrature.hpp"

namespace symrmt {

namespace {

/// Legendre values P_0..P_deg at t, and derivatives.
void legendre(double t, int deg, std::vector<double>& p, std::vector<double>* dp = nullptr) {
  p.assign(static_cast<std::size_t>(deg) + 1, 0.0);
  p[0] = 1.0;
  if (deg >= 1) p[1] = t;
  for (int k = 2; k <= deg; ++k)
    p[static_cast<std::size_t>(k)] =
        ((2.0 * k - 1.0) * t * p[static_cast<std::size_t>(k) - 1] -
         (k - 1.0) * p[static_cast<std::size_t>(k) - 2]) / k;
  if (dp) {
    dp->assign(p.size(), 0.0);
    // P'_k = k P_{k-1} + t P'_{k-1}
    for (int k = 1; k <= deg; ++k)
      (*dp)[static_cast<std::size_t>(k)] =
          k * p[static_cast<std::size_t>(k) - 1] + t * (*dp)[static_cast<std::size_t>(k) - 1];
  }
}

struct Units {
  // per-unit sums for windowed estimators
  std::vector<double> s1, s2, m;
};

/// Splits the trimmed sequences into statistical units: whole draws, or
/// contiguous blocks of window starts when there are fewer than 10 draws.
template <class F>
Units accumulate_windows(const std::vector<std::vector<double>>& seqs, double L, double step,
                         F&& per_window) {
  Units u;
  const bool blocks = seqs.size() < 10;
  const std::size_t nblocks = blocks ? 10 : 1;
  for (const auto& y : seqs) {
    const double lo = y.front(), hi = y.back();
    const auto nstart = static_cast<std::size_t>(std::floor((hi - L - lo) / step)) + 1;
    const std::size_t base = u.m.size();
    u.s1.resize(base + nblocks, 0.0);
    u.s2.resize(base + nblocks, 0.0);
    u.m.resize(base + nblocks, 0.0);
    for (std::size_t k = 0; k < nstart; ++k) {
      const double a = lo + static_cast<double>(k) * step;
      const double val = per_window(y, a);
      const std::size_t unit = base + (blocks ? k * nblocks / nstart : 0);
      u.s1[unit] += val;
      u.s2[unit] += val * val;
      u.m[unit] += 1.0;
    }
  }
  // drop empty units
  Units out;
  for (std::size_t i = 0; i < u.m.size(); ++i)
    if (u.m[i] > 0) {
      out.s1.push_back(u.s1[i]);
      out.s2.push_back(u.s2[i]);
      out.m.push_back(u.m[i]);
    }
  return out;
}

std::vector<std::vector<double>> trimmed_sequences(const std::vector<UnfoldedSpectrum>& batch,
                                                   double trim) {
  if (batch.empty()) fail(ErrorCode::InvalidArgument, "empty batch");
  std::vector<std::vector<double>> seqs;
  seqs.reserve(batch.size());
  for (const auto& u : batch) {
    auto y = trim_edges(u.levels, trim);
    if (y.size() >= 2) seqs.push_back(std::move(y));
  }
  if (seqs.empty()) fail(ErrorCode::InvalidArgument, "batch has no usable levels after trimming");
  return seqs;
}

void check_L_grid(const std::vector<std::vector<double>>& seqs, const std::vector<double>& L) {
  double span = std::numeric_limits<double>::infinity();
  for (const auto& y : seqs) span = std::min(span, y.back() - y.front());
  double prev = 0.0;
  for (double l : L) {
    if (!(l > prev)) fail(ErrorCode::InvalidArgument, "L grid must be positive and increasing");
    if (l > 0.25 * span)
      fail(ErrorCode::InvalidArgument, "L = " + std::to_string(l) +
                                           " exceeds a quarter of the unfolded span (" +
                                           std::to_string(span) + ")");
    prev = l;
  }
}

}  // namespace

double StaircaseFit::operator()(double e) const {
  std::vector<double> p;
  legendre((e - center) / half_width, static_cast<int>(coefficients.size()) - 1, p);
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += coefficients[k] * p[k];
  return s;
}

double StaircaseFit::derivative(double e) const {
  std::vector<double> p, dp;
  legendre((e - center) / half_width, static_cast<int>(coefficients.size()) - 1, p, &dp);
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += coefficients[k] * dp[k];
  return s / half_width;
}

StaircaseFit fit_staircase(const std::vector<Spectrum>& batch, int degree) {
  require(degree >= 1 && degree <= 15, "unfold: polynomial degree must be in [1, 15]");
  require(!batch.empty(), "unfold: empty batch");
  std::vector<double> pooled;
  for (const auto& s : batch) pooled.insert(pooled.end(), s.levels.begin(), s.levels.end());
  const double per = static_cast<double>(pooled.size()) / static_cast<double>(batch.size());
  if (per < 50.0 && batch.size() == 1)
    fail(ErrorCode::InvalidArgument, "unfold: polynomial staircase needs at least 50 levels");
  if (pooled.size() < 50) fail(ErrorCode::InvalidArgument, "unfold: too few levels");
  std::sort(pooled.begin(), pooled.end());

  StaircaseFit fit;
  fit.lo = pooled.front();
  fit.hi = pooled.back();
  fit.center = 0.5 * (fit.lo + fit.hi);
  fit.half_width = std::max(0.5 * (fit.hi - fit.lo), 1e-300);

  const std::size_t max_rows = 200000;
  const std::size_t stride = (pooled.size() + max_rows - 1) / max_rows;
  const auto rows = static_cast<Eigen::Index>((pooled.size() + stride - 1) / stride);
  Eigen::MatrixXd a(rows, degree + 1);
  Eigen::VectorXd b(rows);
  std::vector<double> p;
  const double inv_d = 1.0 / static_cast<double>(batch.size());
  Eigen::Index r = 0;
  for (std::size_t k = 0; k < pooled.size(); k += stride, ++r) {
    legendre((pooled[k] - fit.center) / fit.half_width, degree, p);
    for (int j = 0; j <= degree; ++j) a(r, j) = p[static_cast<std::size_t>(j)];
    b[r] = (static_cast<double>(k) + 0.5) * inv_d;
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  fit.coefficients.assign(c.data(), c.data() + c.size());

  const int probes = 2000;
  for (int i = 0; i <= probes; ++i) {
    const double e = fit.lo + (fit.hi - fit.lo) * i / probes;
    if (!(fit.derivative(e) > 0.0))
      fail(ErrorCode::Numerical,
           "unfold: fitted staircase of degree " + std::to_string(degree) +
               " is not monotone near E = " + std::to_string(e) + "; refit at a lower degree");
  }
  return fit;
}

std::vector<double> trim_edges(const std::vector<double>& levels, double fraction) {
  require(fraction >= 0.0 && fraction < 0.5, "trim fraction must be in [0, 0.5)");
  const auto n = levels.size();
  const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  if (2 * k >= n) return {};
  return std::vector<double>(levels.begin() + static_cast<std::ptrdiff_t>(k),
                             levels.end() - static_cast<std::ptrdiff_t>(k));
}

UnfoldedSpectrum unfold(const Spectrum& raw, const UnfoldOptions& opts) {
  return unfold_batch({raw}, opts).front();
}

std::vector<UnfoldedSpectrum> unfold_batch(const std::vector<Spectrum>& batch,
                                           const UnfoldOptions& opts) {
  if (batch.empty()) fail(ErrorCode::InvalidArgument, "unfold: empty batch");
  for (const auto& s : batch)
    if (!std::is_sorted(s.levels.begin(), s.levels.end()))
      fail(ErrorCode::InvalidArgument, "unfold: levels must be ascending");
  std::vector<UnfoldedSpectrum> out(batch.size());
  switch (opts.method) {
    case UnfoldMethod::PolynomialStaircase: {
      const StaircaseFit fit = fit_staircase(batch, opts.degree);
      for (std::size_t d = 0; d < batch.size(); ++d) {
        out[d].method = opts.method;
        out[d].parameter = opts.degree;
        out[d].levels.reserve(batch[d].levels.size());
        for (double e : batch[d].levels) out[d].levels.push_back(fit(e));
      }
      break;
    }
    case UnfoldMethod::LocalMeanSpacing: {
      require(opts.window >= 1, "unfold: window must be >= 1");
      for (std::size_t d = 0; d < batch.size(); ++d) {
        const auto& e = batch[d].levels;
        if (e.size() < 2) fail(ErrorCode::InvalidArgument, "unfold: too few levels");
        const std::size_t ns = e.size() - 1;
        std::vector<double> sp(ns);
        for (std::size_t i = 0; i < ns; ++i) sp[i] = e[i + 1] - e[i];
        std::vector<double> prefix(ns + 1, 0.0);
        for (std::size_t i = 0; i < ns; ++i) prefix[i + 1] = prefix[i] + sp[i];
        const auto w = static_cast<std::size_t>(opts.window);
        out[d].method = opts.method;
        out[d].parameter = opts.window;
        out[d].levels.assign(e.size(), 0.0);
        for (std::size_t i = 0; i < ns; ++i) {
          const std::size_t lo = i >= w ? i - w : 0;
          const std::size_t hi = std::min(ns, i + w + 1);
          const double mean = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
          if (!(mean > 0.0)) fail(ErrorCode::Numerical, "unfold: degenerate local spacing");
          out[d].levels[i + 1] = out[d].levels[i] + sp[i] / mean;
        }
      }
      break;
    }
    case UnfoldMethod::Uniform: {
      for (std::size_t d = 0; d < batch.size(); ++d) {
        const double rho = opts.density > 0.0
                               ? opts.density
                               : static_cast<double>(batch[d].levels.size()) / (2.0 * std::numbers::pi);
        out[d].method = opts.method;
        out[d].levels.reserve(batch[d].levels.size());
        for (double e : batch[d].levels) out[d].levels.push_back(e * rho);
      }
      break;
    }
  }
  // Mean interior spacing must be unity once there is enough data to tell.
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& u : out) {
    const auto y = trim_edges(u.levels, 0.1);
    if (y.size() >= 2) {
      sum += y.back() - y.front();
      count += y.size() - 1;
    }
  }
  // A prescribed density leaves the sample spacing free to fluctuate.
  const double tol = opts.method == UnfoldMethod::Uniform
                         ? std::max(0.02, 5.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(count, 1))))
                         : 0.02;
  if (count >= 2000 && std::abs(sum / static_cast<double>(count) - 1.0) > tol)
    fail(ErrorCode::Numerical, "unfold: mean interior spacing " +
                                   std::to_string(sum / static_cast<double>(count)) +
                                   " differs from 1 by more than " + std::to_string(tol));
  return out;
}

std::vector<double> microscopic_rescale(const std::vector<double>& levels, double rho_at_zero) {
  require(rho_at_zero > 0.0, "microscopic_rescale: density must be positive");
  std::vector<double> z(levels);
  for (double& v : z) v *= rho_at_zero;
  return z;
}

std::vector<double> collect_spacings(const std::vector<UnfoldedSpectrum>& batch, double trim) {
  std::vector<double> s;
  for (const auto& u : batch) {
    const auto y = trim_edges(u.levels, trim);
    for (std::size_t i = 1; i < y.size(); ++i) s.push_back(y[i] - y[i - 1]);
  }
  return s;
}

ObservableCurve histogram_density(const std::vector<double>& samples, double lo, double hi,
                                  std::size_t bins, const std::string& name) {
  if (samples.empty()) fail(ErrorCode::InvalidArgument, "histogram: no samples");
  require(hi > lo && bins >= 1, "histogram: invalid range");
  const double w = (hi - lo) / static_cast<double>(bins);
  std::vector<double> counts(bins, 0.0);
  for (double s : samples) {
    if (s < lo || s >= hi) continue;
    auto b = static_cast<std::size_t>((s - lo) / w);
    if (b >= bins) b = bins - 1;
    counts[b] += 1.0;
  }
  ObservableCurve c;
  c.observable = name;
  c.n_samples = samples.size();
  const double norm = 1.0 / (static_cast<double>(samples.size()) * w);
  for (std::size_t b = 0; b < bins; ++b) {
    c.abscissa.push_back(lo + (static_cast<double>(b) + 0.5) * w);
    c.value.push_back(counts[b] * norm);
    c.stderr_.push_back(std::sqrt(counts[b]) * norm);
  }
  return c;
}

ObservableCurve spacing_distribution(const std::vector<UnfoldedSpectrum>& batch, double bin_width,
                                     double s_max, double trim) {
  if (batch.empty()) fail(ErrorCode::InvalidArgument, "spacing_distribution: empty batch");
  auto s = collect_spacings(batch, trim);
  if (s.empty()) fail(ErrorCode::InvalidArgument, "spacing_distribution: no spacings");
  if (bin_width <= 0.0) {
    std::vector<double> sorted(s);
    std::sort(sorted.begin(), sorted.end());
    const double q1 = sorted[sorted.size() / 4], q3 = sorted[3 * sorted.size() / 4];
    bin_width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(sorted.size()));
    if (!(bin_width > 0.0)) bin_width = 0.1;
  }
  if (s_max <= 0.0) s_max = *std::max_element(s.begin(), s.end()) + bin_width;
  const auto bins = static_cast<std::size_t>(std::ceil(s_max / bin_width));
  return histogram_density(s, 0.0, bin_width * static_cast<double>(bins), bins, "ps");
}

WignerConstants wigner_constants(int beta) {
  if (beta != 1 && beta != 2 && beta != 4)
    fail(ErrorCode::InvalidArgument, "wigner_surmise: beta must be 1, 2 or 4");
  const double g1 = std::tgamma((beta + 1) / 2.0), g2 = std::tgamma((beta + 2) / 2.0);
  const double b = (g2 / g1) * (g2 / g1);
  const double a = 2.0 * std::pow(b, (beta + 1) / 2.0) / g1;
  return {a, b};
}

double wigner_surmise(int beta, double s) {
  require(s >= 0.0, "wigner_surmise: s must be non-negative");
  const auto c = wigner_constants(beta);
  return c.a * std::pow(s, beta) * std::exp(-c.b * s * s);
}

SlopeFit fit_loglog_slope(const std::vector<double>& samples, double lo, double hi,
                          std::size_t bins, bool with_curvature, double known_curvature) {
  require(lo > 0.0 && hi > lo && bins >= 3, "fit_loglog_slope: invalid window");
  const double llo = std::log(lo), lhi = std::log(hi);
  std::vector<double> counts(bins, 0.0);
  std::size_t inside = 0;
  for (double s : samples) {
    if (!(s >= lo && s < hi)) continue;
    auto b = static_cast<std::size_t>((std::log(s) - llo) / (lhi - llo) * static_cast<double>(bins));
    if (b >= bins) b = bins - 1;
    counts[b] += 1.0;
    ++inside;
  }
  if (inside < 10) fail(ErrorCode::Numerical, "fit_loglog_slope: fewer than 10 samples in window");
  const int p = with_curvature ? 3 : 2;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(bins), p);
  Eigen::VectorXd offset(static_cast<Eigen::Index>(bins)), y(static_cast<Eigen::Index>(bins));
  for (std::size_t b = 0; b < bins; ++b) {
    const double e0 = std::exp(llo + (lhi - llo) * static_cast<double>(b) / static_cast<double>(bins));
    const double e1 = std::exp(llo + (lhi - llo) * static_cast<double>(b + 1) / static_cast<double>(bins));
    const double mid = std::sqrt(e0 * e1);
    const auto i = static_cast<Eigen::Index>(b);
    x(i, 0) = 1.0;
    x(i, 1) = std::log(mid);
    if (with_curvature) x(i, 2) = mid * mid;
    offset[i] = std::log(e1 - e0) + known_curvature * mid * mid;
    y[i] = counts[b];
  }
  // Start from least squares on log(count + 1/2), then Newton on the Poisson likelihood.
  Eigen::VectorXd logy(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) logy[i] = std::log(y[i] + 0.5) - offset[i];
  Eigen::VectorXd coef = x.colPivHouseholderQr().solve(logy);
  Eigen::MatrixXd info;
  for (int it = 0; it < 100; ++it) {
    const Eigen::VectorXd mu = (x * coef + offset).array().exp().matrix();
    const Eigen::VectorXd grad = x.transpose() * (y - mu);
    info = x.transpose() * mu.asDiagonal() * x;
    const Eigen::VectorXd step = info.ldlt().solve(grad);
    coef += step;
    if (step.cwiseAbs().maxCoeff() < 1e-12) break;
  }
  const Eigen::VectorXd mu = (x * coef + offset).array().exp().matrix();
  info = x.transpose() * mu.asDiagonal() * x;
  const Eigen::MatrixXd cov = info.inverse();
  SlopeFit f;
  f.slope = coef[1];
  f.stderr_ = std::sqrt(cov(1, 1));
  f.curvature = with_curvature ? coef[2] : 0.0;
  f.n_in_window = inside;
  if (!std::isfinite(f.slope)) fail(ErrorCode::Numerical, "fit_loglog_slope: fit diverged");
  return f;
}

double window_delta3(const std::vector<double>& levels, double a, double L) {
  const auto first = std::lower_bound(levels.begin(), levels.end(), a);
  const auto last = std::lower_bound(levels.begin(), levels.end(), a + L);
  const double half = 0.5 * L;
  double i0 = 0.0, i1 = 0.0, i2 = 0.0;
  double k = 0.0;
  for (auto it = first; it != last; ++it) {
    k += 1.0;
    const double y = *it - a - half;
    i0 += half - y;
    i1 += 0.5 * (half * half - y * y);
    i2 += (2.0 * k - 1.0) * (half - y);
  }
  const double m = i2 - i0 * i0 / L - 12.0 * i1 * i1 / (L * L * L);
  return std::max(m, 0.0) / L;
}

ObservableCurve number_variance(const std::vector<UnfoldedSpectrum>& batch,
                                const std::vector<double>& L, double trim, double start_step) {
  const auto seqs = trimmed_sequences(batch, trim);
  check_L_grid(seqs, L);
  require(start_step > 0.0, "number_variance: start step must be positive");
  ObservableCurve c;
  c.observable = "sigma2";
  c.n_samples = seqs.size();
  for (double l : L) {
    const Units u = accumulate_windows(seqs, l, start_step, [l](const std::vector<double>& y, double a) {
      return static_cast<double>(std::lower_bound(y.begin(), y.end(), a + l) -
                                 std::lower_bound(y.begin(), y.end(), a));
    });
    const double m = std::accumulate(u.m.begin(), u.m.end(), 0.0);
    const double mean = std::accumulate(u.s1.begin(), u.s1.end(), 0.0) / m;
    const double sq = std::accumulate(u.s2.begin(), u.s2.end(), 0.0) / m;
    const double var = sq - mean * mean;
    // delta-method stderr across units
    const std::size_t nu = u.m.size();
    double zbar = 0.0;
    std::vector<double> z(nu);
    for (std::size_t i = 0; i < nu; ++i) {
      z[i] = u.s2[i] / u.m[i] - 2.0 * mean * u.s1[i] / u.m[i];
      zbar += z[i];
    }
    zbar /= static_cast<double>(nu);
    double ss = 0.0;
    for (double zi : z) ss += (zi - zbar) * (zi - zbar);
    const double se = nu > 1 ? std::sqrt(ss / static_cast<double>(nu - 1) / static_cast<double>(nu)) : 0.0;
    c.abscissa.push_back(l);
    c.value.push_back(var);
    c.stderr_.push_back(se);
  }
  return c;
}

ObservableCurve spectral_rigidity(const std::vector<UnfoldedSpectrum>& batch,
                                  const std::vector<double>& L, double trim, double start_step) {
  const auto seqs = trimmed_sequences(batch, trim);
  check_L_grid(seqs, L);
  require(start_step > 0.0, "spectral_rigidity: start step must be positive");
  ObservableCurve c;
  c.observable = "delta3";
  c.n_samples = seqs.size();
  for (double l : L) {
    const Units u = accumulate_windows(seqs, l, start_step, [l](const std::vector<double>& y, double a) {
      return window_delta3(y, a, l);
    });
    const double m = std::accumulate(u.m.begin(), u.m.end(), 0.0);
    const double mean = std::accumulate(u.s1.begin(), u.s1.end(), 0.0) / m;
    const std::size_t nu = u.m.size();
    double ss = 0.0, zbar = 0.0;
    for (std::size_t i = 0; i < nu; ++i) zbar += u.s1[i] / u.m[i];
    zbar /= static_cast<double>(nu);
    for (std::size_t i = 0; i < nu; ++i) {
      const double d = u.s1[i] / u.m[i] - zbar;
      ss += d * d;
    }
    const double se = nu > 1 ? std::sqrt(ss / static_cast<double>(nu - 1) / static_cast<double>(nu)) : 0.0;
    c.abscissa.push_back(l);
    c.value.push_back(mean);
    c.stderr_.push_back(se);
  }
  return c;
}

ObservableCurve cluster_function(const std::vector<UnfoldedSpectrum>& batch, double r_max,
                                 std::size_t bins, double trim) {
  const auto seqs = trimmed_sequences(batch, trim);
  require(r_max > 0.0 && bins >= 1, "cluster_function: invalid binning");
  const double w = r_max / static_cast<double>(bins);
  std::vector<std::vector<double>> per(seqs.size(), std::vector<double>(bins, 0.0));
  std::vector<double> refs(seqs.size(), 0.0);
  for (std::size_t d = 0; d < seqs.size(); ++d) {
    const auto& y = seqs[d];
    const double lo = y.front() + r_max, hi = y.back() - r_max;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] < lo || y[i] > hi) continue;
      refs[d] += 1.0;
      for (std::size_t j = i + 1; j < y.size() && y[j] - y[i] < r_max; ++j)
        per[d][static_cast<std::size_t>((y[j] - y[i]) / w)] += 1.0;
      for (std::size_t j = i; j-- > 0 && y[i] - y[j] < r_max;)
        per[d][static_cast<std::size_t>((y[i] - y[j]) / w)] += 1.0;
    }
  }
  const double total_refs = std::accumulate(refs.begin(), refs.end(), 0.0);
  if (!(total_refs > 0.0))
    fail(ErrorCode::InvalidArgument, "cluster_function: sequences shorter than 2 r_max");
  ObservableCurve c;
  c.observable = "y2";
  c.n_samples = seqs.size();
  for (std::size_t b = 0; b < bins; ++b) {
    double tot = 0.0;
    for (const auto& p : per) tot += p[b];
    const double r2 = tot / (total_refs * 2.0 * w);
    // stderr from per-draw ratio estimates
    double ss = 0.0;
    std::size_t nu = 0;
    for (std::size_t d = 0; d < seqs.size(); ++d) {
      if (refs[d] <= 0.0) continue;
      const double r2d = per[d][b] / (refs[d] * 2.0 * w);
      ss += refs[d] * (r2d - r2) * (r2d - r2);
      ++nu;
    }
    double se = 0.0;
    if (nu > 1) se = std::sqrt(ss / total_refs / static_cast<double>(nu - 1));
    else se = std::sqrt(tot) / (total_refs * 2.0 * w);
    c.abscissa.push_back((static_cast<double>(b) + 0.5) * w);
    c.value.push_back(1.0 - r2);
    c.stderr_.push_back(se);
  }
  return c;
}

HermiteKernel::HermiteKernel(int n_) : n(n_) {
  if (n < 1 || n > 200) fail(ErrorCode::InvalidArgument, "hermite kernel: N must be in [1, 200]");
}

double HermiteKernel::operator()(double x, double y) const {
  // phi_k = m_k exp(e_k), rescaled to keep the mantissas bounded.
  const double big = 1e150, ln_big = std::log(big);
  auto walk = [this, big, ln_big](double t, std::vector<double>& m, std::vector<double>& e) {
    m.resize(static_cast<std::size_t>(n));
    e.resize(static_cast<std::size_t>(n));
    double prev = 0.0, cur = std::pow(std::numbers::pi, -0.25);
    double ex = -0.5 * t * t;
    for (int k = 0; k < n; ++k) {
      m[static_cast<std::size_t>(k)] = cur;
      e[static_cast<std::size_t>(k)] = ex;
      const double next = std::sqrt(2.0 / (k + 1.0)) * t * cur - std::sqrt(k / (k + 1.0)) * prev;
      prev = cur;
      cur = next;
      if (std::abs(cur) > big) {
        cur /= big;
        prev /= big;
        ex += ln_big;
      }
    }
  };
  std::vector<double> mx, ex, my, ey;
  walk(x, mx, ex);
  walk(y, my, ey);
  double s = 0.0;
  for (std::size_t k = 0; k < mx.size(); ++k) s += mx[k] * my[k] * std::exp(ex[k] + ey[k]);
  return s;
}

double HermiteKernel::half_separation(double r) const {
  require(r >= 0.0, "hermite kernel: separation must be non-negative");
  if (r == 0.0) return 0.0;
  const QuadratureRule& gl = gauss_legendre(32);
  auto mass = [&](double x) {  // integral of density over [-x, x]
    double s = 0.0;
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const double t = 0.5 * x * (gl.nodes[i] + 1.0);
      s += gl.weights[i] * density(t);
    }
    return x * s;  // 2 * (x/2) * sum
  };
  double x = 0.5 * r / density(0.0);
  for (int it = 0; it < 50; ++it) {
    const double f = mass(x) - r;
    const double dx = f / (2.0 * density(x));
    x -= dx;
    if (std::abs(dx) < 1e-14 * std::max(1.0, x)) break;
  }
  return x;
}

double HermiteKernel::y2(double r) const {
  const double x = half_separation(r);
  const double k = (*this)(-x, x);
  return k * k / (density(-x) * density(x));
}

double sigma2_from_y2(const std::function<double(double)>& y2, double L) {
  require(L >= 0.0, "sigma2_from_y2: L must be non-negative");
  if (L == 0.0) return 0.0;
  const auto panels = static_cast<std::size_t>(std::ceil(4.0 * L));
  const QuadratureRule rule = composite_gauss_legendre(0.0, L, panels, 16);
  return L - 2.0 * integrate(rule, [&](double r) { return (L - r) * y2(r); });
}

double delta3_from_sigma2(const std::function<double(double)>& sigma2, double L) {
  require(L > 0.0, "delta3_from_sigma2: L must be positive");
  const auto panels = static_cast<std::size_t>(std::ceil(2.0 * L));
  const QuadratureRule rule = composite_gauss_legendre(0.0, L, panels, 16);
  const double v = integrate(rule, [&](double r) {
    return (L * L * L - 2.0 * L * L * r + r * r * r) * sigma2(r);
  });
  return 2.0 * v / (L * L * L * L);
}

Spectrum poisson_surrogate(int n, std::uint64_t seed, std::uint64_t index) {
  require(n >= 1, "poisson_surrogate: n must be >= 1");
  Rng rng(derive_seed(seed, index));
  std::poisson_distribution<int> count(n);
  std::uniform_real_distribution<double> u(0.0, static_cast<double>(n));
  Spectrum s;
  s.levels.resize(static_cast<std::size_t>(count(rng)));
  for (double& l : s.levels) l = u(rng);
  std::sort(s.levels.begin(), s.levels.end());
  return s;
}

}  // namespace symrmt
