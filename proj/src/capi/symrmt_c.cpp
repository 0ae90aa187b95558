#include "symrmt/symrmt.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "symrmt/cartan.hpp"
#include "symrmt/cs.hpp"
#include "symrmt/dmpk.hpp"
#include "symrmt/ensembles.hpp"
#include "symrmt/error.hpp"
#include "symrmt/lie.hpp"
#include "symrmt/parallel.hpp"
#include "symrmt/roots.hpp"
#include "symrmt/spectra.hpp"

struct symrmt_context {
  unsigned threads;
};

struct symrmt_table {
  std::vector<std::string> names;
  std::vector<bool> numeric;
  std::vector<std::vector<double>> numbers;
  std::vector<std::vector<std::string>> strings;
  std::vector<std::pair<std::string, std::string>> meta;
  std::size_t rows = 0;
};

struct symrmt_batch {
  std::vector<symrmt::Spectrum> spectra;
};

namespace {

thread_local std::string last_error;

symrmt_status map_code(symrmt::ErrorCode code) {
  switch (code) {
    case symrmt::ErrorCode::InvalidArgument: return SYMRMT_ERR_INVALID_ARGUMENT;
    case symrmt::ErrorCode::ChamberBoundary: return SYMRMT_ERR_CHAMBER_BOUNDARY;
    case symrmt::ErrorCode::Domain: return SYMRMT_ERR_DOMAIN;
    case symrmt::ErrorCode::NonSemisimple: return SYMRMT_ERR_NON_SEMISIMPLE;
    case symrmt::ErrorCode::NotAtRootValues: return SYMRMT_ERR_NOT_AT_ROOT_VALUES;
    case symrmt::ErrorCode::Numerical: return SYMRMT_ERR_NUMERICAL;
    case symrmt::ErrorCode::Io: return SYMRMT_ERR_IO;
  }
  return SYMRMT_ERR_INTERNAL;
}

template <class F>
symrmt_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return SYMRMT_OK;
  } catch (const symrmt::Error& e) {
    last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SYMRMT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SYMRMT_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return SYMRMT_ERR_INTERNAL;
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_vector(const std::vector<double>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v[i]);
    s += buf;
  }
  return s + ")";
}

class TableBuilder {
 public:
  explicit TableBuilder(std::vector<std::pair<std::string, bool>> columns) {
    for (auto& [name, numeric] : columns) {
      t_->names.push_back(name);
      t_->numeric.push_back(numeric);
    }
    t_->numbers.resize(t_->names.size());
    t_->strings.resize(t_->names.size());
  }
  ~TableBuilder() { delete t_; }

  // Appends a row given as numbers for numeric columns and strings otherwise.
  void row(const std::vector<double>& nums, const std::vector<std::string>& strs) {
    std::size_t ni = 0, si = 0;
    for (std::size_t c = 0; c < t_->names.size(); ++c) {
      if (t_->numeric[c]) {
        t_->numbers[c].push_back(nums.at(ni++));
      } else {
        t_->strings[c].push_back(strs.at(si++));
      }
    }
    ++t_->rows;
  }
  void meta(const std::string& k, const std::string& v) { t_->meta.emplace_back(k, v); }
  void meta(const std::string& k, double v) { t_->meta.emplace_back(k, fmt(v)); }

  symrmt_table* release() {
    auto* t = t_;
    t_ = nullptr;
    return t;
  }

 private:
  symrmt_table* t_ = new symrmt_table;
};

void need(const void* p, const char* what) {
  if (!p) symrmt::fail(symrmt::ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

symrmt_table* curve_table(const symrmt::ObservableCurve& c) {
  TableBuilder tb({{"abscissa", true}, {"value", true}, {"stderr", true}});
  for (std::size_t i = 0; i < c.abscissa.size(); ++i)
    tb.row({c.abscissa[i], c.value[i], c.stderr_[i]}, {});
  tb.meta("observable", c.observable);
  tb.meta("n_samples", std::to_string(c.n_samples));
  return tb.release();
}

const char* observable_name(symrmt_observable o) {
  switch (o) {
    case SYMRMT_OBS_SPACING: return "ps";
    case SYMRMT_OBS_SIGMA2: return "sigma2";
    case SYMRMT_OBS_DELTA3: return "delta3";
    case SYMRMT_OBS_Y2: return "y2";
  }
  return "?";
}

const char* unfold_name(symrmt_unfold u) {
  switch (u) {
    case SYMRMT_UNFOLD_POLYNOMIAL: return "polynomial";
    case SYMRMT_UNFOLD_LOCAL: return "local";
    case SYMRMT_UNFOLD_UNIFORM: return "uniform";
  }
  return "?";
}

// Dominant regular direction of the chamber (descending coordinates).
std::vector<double> chamber_direction(const symrmt::RootSystem& rs) {
  const std::size_t d = rs.ambient_dim();
  std::vector<double> c(d);
  for (std::size_t i = 0; i < d; ++i) c[i] = static_cast<double>(d - i);
  if (rs.family() == symrmt::Family::A) {
    const double mean = (static_cast<double>(d) + 1.0) / 2.0;
    for (auto& v : c) v -= mean;
  }
  return c;
}

}  // namespace

extern "C" {

const char* symrmt_version(void) { return SYMRMT_VERSION_STRING; }

const char* symrmt_status_string(symrmt_status status) {
  switch (status) {
    case SYMRMT_OK: return "ok";
    case SYMRMT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SYMRMT_ERR_CHAMBER_BOUNDARY: return "chamber boundary";
    case SYMRMT_ERR_DOMAIN: return "domain error";
    case SYMRMT_ERR_NON_SEMISIMPLE: return "non-semisimple";
    case SYMRMT_ERR_NOT_AT_ROOT_VALUES: return "not at root values";
    case SYMRMT_ERR_NUMERICAL: return "numerical failure";
    case SYMRMT_ERR_IO: return "i/o error";
    case SYMRMT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* symrmt_last_error(void) { return last_error.c_str(); }

// ---- context

symrmt_status symrmt_context_create(unsigned threads, symrmt_context** out) {
  return guarded([&] {
    need(out, "out");
    *out = new symrmt_context{threads == 0 ? symrmt::default_thread_count() : threads};
  });
}

void symrmt_context_destroy(symrmt_context* ctx) { delete ctx; }

unsigned symrmt_context_threads(const symrmt_context* ctx) { return ctx ? ctx->threads : 0; }

// ---- tables

void symrmt_table_destroy(symrmt_table* table) { delete table; }
size_t symrmt_table_rows(const symrmt_table* t) { return t ? t->rows : 0; }
size_t symrmt_table_columns(const symrmt_table* t) { return t ? t->names.size() : 0; }

const char* symrmt_table_column_name(const symrmt_table* t, size_t column) {
  if (!t || column >= t->names.size()) return nullptr;
  return t->names[column].c_str();
}

int symrmt_table_column_is_numeric(const symrmt_table* t, size_t column) {
  if (!t || column >= t->names.size()) return 0;
  return t->numeric[column] ? 1 : 0;
}

double symrmt_table_number(const symrmt_table* t, size_t row, size_t column) {
  if (!t || column >= t->names.size() || row >= t->rows || !t->numeric[column])
    return std::numeric_limits<double>::quiet_NaN();
  return t->numbers[column][row];
}

const char* symrmt_table_string(const symrmt_table* t, size_t row, size_t column) {
  if (!t || column >= t->names.size() || row >= t->rows || t->numeric[column]) return nullptr;
  return t->strings[column][row].c_str();
}

size_t symrmt_table_meta_count(const symrmt_table* t) { return t ? t->meta.size() : 0; }

const char* symrmt_table_meta_key(const symrmt_table* t, size_t i) {
  if (!t || i >= t->meta.size()) return nullptr;
  return t->meta[i].first.c_str();
}

const char* symrmt_table_meta_value(const symrmt_table* t, size_t i) {
  if (!t || i >= t->meta.size()) return nullptr;
  return t->meta[i].second.c_str();
}

const char* symrmt_table_meta_find(const symrmt_table* t, const char* key) {
  if (!t || !key) return nullptr;
  for (const auto& [k, v] : t->meta)
    if (k == key) return v.c_str();
  return nullptr;
}

// ---- batches

void symrmt_ensemble_params_default(symrmt_ensemble_params* p) {
  if (!p) return;
  p->kind = "gaussian";
  p->beta = 2;
  p->n = 100;
  p->p = 0;
  p->q = 0;
  p->v = 1.0;
  p->seed = 0;
}

symrmt_status symrmt_batch_create(symrmt_batch** out) {
  return guarded([&] {
    need(out, "out");
    *out = new symrmt_batch;
  });
}

void symrmt_batch_destroy(symrmt_batch* batch) { delete batch; }

symrmt_status symrmt_batch_append(symrmt_batch* batch, const double* levels, size_t count,
                                  int degeneracy_stride) {
  return guarded([&] {
    need(batch, "batch");
    if (count > 0) need(levels, "levels");
    symrmt::require(degeneracy_stride == 1 || degeneracy_stride == 2,
                    "degeneracy stride must be 1 or 2");
    symrmt::Spectrum s;
    s.levels.assign(levels, levels + count);
    for (double v : s.levels) symrmt::require(std::isfinite(v), "levels must be finite");
    std::sort(s.levels.begin(), s.levels.end());
    s.degeneracy_stride = degeneracy_stride;
    batch->spectra.push_back(std::move(s));
  });
}

size_t symrmt_batch_size(const symrmt_batch* batch) { return batch ? batch->spectra.size() : 0; }

symrmt_status symrmt_batch_levels(const symrmt_batch* batch, size_t draw, const double** levels,
                                  size_t* count) {
  return guarded([&] {
    need(batch, "batch");
    need(levels, "levels");
    need(count, "count");
    symrmt::require(draw < batch->spectra.size(), "draw index out of range");
    *levels = batch->spectra[draw].levels.data();
    *count = batch->spectra[draw].levels.size();
  });
}

int symrmt_batch_stride(const symrmt_batch* batch, size_t draw) {
  if (!batch || draw >= batch->spectra.size()) return 0;
  return batch->spectra[draw].degeneracy_stride;
}

int symrmt_batch_is_zero_mode(const symrmt_batch* batch, size_t draw, size_t index) {
  if (!batch || draw >= batch->spectra.size()) return 0;
  const auto& lv = batch->spectra[draw].levels;
  if (index >= lv.size()) return 0;
  double scale = 0.0;
  for (double v : lv) scale = std::max(scale, std::abs(v));
  return std::abs(lv[index]) <= 1e-9 * scale ? 1 : 0;
}

symrmt_status symrmt_sample(symrmt_context* ctx, const symrmt_ensemble_params* params,
                            size_t draws, symrmt_batch** out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(params, "params");
    need(out, "out");
    need(params->kind, "kind");
    symrmt::require(draws >= 1, "draws must be at least 1");
    symrmt::EnsembleSpec spec;
    spec.kind = symrmt::parse_ensemble_kind(params->kind);
    spec.beta = params->beta;
    spec.n = params->n;
    spec.p = params->p;
    spec.q = params->q;
    spec.v = params->v;
    spec.seed = params->seed;
    spec.validate();
    auto b = std::make_unique<symrmt_batch>();
    b->spectra = symrmt::sample_spectra(spec, draws, ctx->threads);
    *out = b.release();
  });
}

symrmt_status symrmt_poisson_surrogate(symrmt_context* ctx, int n, uint64_t seed, size_t draws,
                                       symrmt_batch** out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out, "out");
    symrmt::require(n >= 2, "surrogate size must be at least 2");
    symrmt::require(draws >= 1, "draws must be at least 1");
    auto b = std::make_unique<symrmt_batch>();
    b->spectra.resize(draws);
    symrmt::parallel_for(
        draws, [&](std::size_t i) { b->spectra[i] = symrmt::poisson_surrogate(n, seed, i); },
        ctx->threads);
    *out = b.release();
  });
}

// ---- statistics

void symrmt_stats_params_default(symrmt_stats_params* p) {
  if (!p) return;
  p->observable = SYMRMT_OBS_SPACING;
  p->unfold = SYMRMT_UNFOLD_POLYNOMIAL;
  p->degree = 7;
  p->window = 10;
  p->density = 0.0;
  p->trim = 0.05;
  p->bin_width = 0.0;
  p->s_max = 0.0;
  p->l_max = 10.0;
  p->l_step = 0.5;
  p->r_max = 3.0;
  p->bins = 30;
}

symrmt_status symrmt_stats(symrmt_context* ctx, const symrmt_batch* batch,
                           const symrmt_stats_params* params, symrmt_table** out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(batch, "batch");
    need(params, "params");
    need(out, "out");
    symrmt::require(!batch->spectra.empty(), "empty input: no spectra");
    symrmt::require(params->trim >= 0.0 && params->trim < 0.5, "trim must lie in [0, 0.5)");
    symrmt::UnfoldOptions uo;
    switch (params->unfold) {
      case SYMRMT_UNFOLD_POLYNOMIAL: uo.method = symrmt::UnfoldMethod::PolynomialStaircase; break;
      case SYMRMT_UNFOLD_LOCAL: uo.method = symrmt::UnfoldMethod::LocalMeanSpacing; break;
      case SYMRMT_UNFOLD_UNIFORM: uo.method = symrmt::UnfoldMethod::Uniform; break;
      default: symrmt::fail(symrmt::ErrorCode::InvalidArgument, "unknown unfolding method");
    }
    uo.degree = params->degree;
    uo.window = params->window;
    uo.density = params->density;
    const auto unfolded = symrmt::unfold_batch(batch->spectra, uo);

    symrmt::ObservableCurve curve;
    switch (params->observable) {
      case SYMRMT_OBS_SPACING:
        curve = symrmt::spacing_distribution(unfolded, params->bin_width, params->s_max,
                                             params->trim);
        break;
      case SYMRMT_OBS_SIGMA2:
      case SYMRMT_OBS_DELTA3: {
        symrmt::require(params->l_step > 0.0 && params->l_max >= params->l_step,
                        "L grid needs 0 < l_step <= l_max");
        std::vector<double> L;
        const auto count = static_cast<std::size_t>(std::floor(params->l_max / params->l_step + 1e-9));
        for (std::size_t i = 1; i <= count; ++i) L.push_back(params->l_step * i);
        curve = params->observable == SYMRMT_OBS_SIGMA2
                    ? symrmt::number_variance(unfolded, L, params->trim)
                    : symrmt::spectral_rigidity(unfolded, L, params->trim);
        break;
      }
      case SYMRMT_OBS_Y2:
        curve = symrmt::cluster_function(unfolded, params->r_max, params->bins, params->trim);
        break;
      default: symrmt::fail(symrmt::ErrorCode::InvalidArgument, "unknown observable");
    }
    symrmt_table* t = curve_table(curve);
    t->meta[0].second = observable_name(params->observable);
    t->meta.emplace_back("unfold", unfold_name(params->unfold));
    t->meta.emplace_back("unfold_parameter", std::to_string(unfolded.front().parameter));
    t->meta.emplace_back("trim", fmt(params->trim));
    t->meta.emplace_back("draws", std::to_string(batch->spectra.size()));
    *out = t;
  });
}

// ---- classification

symrmt_status symrmt_classify(const char* cartan_class, int n, int p, int q, symrmt_table** out) {
  return guarded([&] {
    need(out, "out");
    if (!cartan_class) {
      TableBuilder tb({{"class", false},
                       {"compact", false},
                       {"noncompact", false},
                       {"inherited", false},
                       {"restricted", false},
                       {"m_o", false},
                       {"m_l", false},
                       {"m_s", false},
                       {"tag_positive", false},
                       {"tag_zero", false},
                       {"tag_negative", false}});
      for (const auto& r : symrmt::catalog_rows()) {
        tb.row({}, {symrmt::to_string(r.cartan_class), r.compact_name, r.noncompact_name,
                    r.inherited_family, r.restricted_family, r.m_o, r.m_l, r.m_s, r.tags[0],
                    r.tags[1], r.tags[2]});
      }
      tb.meta("rows", std::to_string(symrmt::catalog_rows().size()));
      *out = tb.release();
      return;
    }
    const auto cls = symrmt::parse_cartan_class(cartan_class);
    symrmt::CatalogParams cp;
    cp.n = n;
    cp.p = p;
    cp.q = q;
    const auto entries = symrmt::catalog_lookup(cls, cp);
    TableBuilder tb({{"class", false},
                     {"curvature", false},
                     {"space", false},
                     {"family", false},
                     {"rank", true},
                     {"m_o", true},
                     {"m_l", true},
                     {"m_s", true},
                     {"tag", false},
                     {"laguerre_lambda", true},
                     {"jacobi_sigma", true},
                     {"rho", false}});
    for (const auto& e : entries) {
      const auto rs = e.root_system();
      const std::string space = e.curvature == symrmt::Curvature::Negative ? e.noncompact_name
                                                                            : e.compact_name;
      tb.row({static_cast<double>(e.rank), static_cast<double>(e.mult.m_o),
              static_cast<double>(e.mult.m_l), static_cast<double>(e.mult.m_s),
              e.laguerre_lambda(), e.jacobi_sigma()},
             {symrmt::to_string(e.cartan_class), symrmt::to_string(e.curvature), space,
              std::string(symrmt::to_string(e.family)) + "_" + std::to_string(e.rank), e.tag,
              fmt_vector(symrmt::rho_vector(rs))});
    }
    const auto& row = symrmt::catalog_row(cls);
    tb.meta("compact", row.compact_name);
    tb.meta("noncompact", row.noncompact_name);
    tb.meta("restricted", row.restricted_family);
    *out = tb.release();
  });
}

// ---- DMPK

void symrmt_dmpk_params_default(symrmt_dmpk_params* p) {
  if (!p) return;
  p->method = SYMRMT_DMPK_SDE;
  p->n = 2;
  p->beta = 2;
  p->s = nullptr;
  p->s_count = 0;
  p->walkers = 10000;
  p->dt = 1e-3;
  p->delta_s = 0.005;
  p->seed = 0;
  p->k_factor = 12.0;
  p->k_nodes = 400;
  p->histogram_bins = 0;
  p->histogram_max = 0.0;
}

symrmt_status symrmt_dmpk(symrmt_context* ctx, const symrmt_dmpk_params* params,
                          symrmt_table** conductance, symrmt_table** histogram) {
  return guarded([&] {
    need(ctx, "ctx");
    need(params, "params");
    need(conductance, "conductance");
    need(params->s, "s");
    symrmt::require(params->s_count >= 1, "at least one s value is required");
    symrmt::require(params->beta == 1 || params->beta == 2 || params->beta == 4,
                    "beta must be one of {1, 2, 4}");
    const std::vector<double> s(params->s, params->s + params->s_count);
    TableBuilder tb({{"s", true}, {"mean_g", true}, {"var_g", true}, {"stderr_g", true},
                     {"samples", true}});
    tb.meta("n", std::to_string(params->n));
    tb.meta("beta", std::to_string(params->beta));
    tb.meta("gamma", symrmt::dmpk_gamma(params->beta, params->n));
    tb.meta("seed", std::to_string(params->seed));
    std::vector<std::vector<symrmt::DMPKState>> ensembles;

    switch (params->method) {
      case SYMRMT_DMPK_EXACT: {
        symrmt::require(params->beta == 2, "the exact solution requires beta = 2");
        symrmt::require(params->n >= 1 && params->n <= 4, "the exact solution requires 1 <= N <= 4");
        symrmt::require(params->k_nodes >= 16 && params->k_nodes % 16 == 0,
                        "k_nodes must be a positive multiple of 16");
        symrmt::ExactOptions eo;
        eo.k_factor = params->k_factor;
        eo.k_order = 16;
        eo.k_panels = params->k_nodes / 16;
        eo.seed = params->seed;
        tb.meta("method", "exact");
        tb.meta("k_factor", eo.k_factor);
        tb.meta("k_nodes", std::to_string(params->k_nodes));
        tb.meta("conical_nodes", std::to_string(eo.conical_nodes));
        tb.meta("x_nodes", std::to_string(eo.x_panels * eo.x_order));
        tb.meta("cancellation_limit", eo.cancellation_limit);
        for (double sv : s) {
          const auto m = symrmt::exact_beta2_moments(params->n, sv, eo);
          const double samples = params->n <= 2 ? 0.0 : static_cast<double>(eo.mc_samples);
          tb.row({sv, m.mean_g, m.var_g, m.stderr_g, samples}, {});
        }
        break;
      }
      case SYMRMT_DMPK_SDE: {
        symrmt::SdeOptions so;
        so.n = params->n;
        so.beta = params->beta;
        so.s_points = s;
        so.walkers = params->walkers;
        so.dt = params->dt;
        so.seed = params->seed;
        so.threads = ctx->threads;
        tb.meta("method", "sde");
        tb.meta("walkers", std::to_string(so.walkers));
        tb.meta("dt", so.dt);
        tb.meta("eta", so.eta);
        tb.meta("max_depth", std::to_string(so.max_depth));
        tb.meta("epsilon", so.epsilon);
        ensembles = symrmt::mc_dmpk_evolve(so);
        break;
      }
      case SYMRMT_DMPK_SLICES: {
        symrmt::require(params->beta == 2, "transfer-matrix slices are implemented for beta = 2");
        symrmt::SliceOptions so;
        so.n = params->n;
        so.s_points = s;
        so.delta_s = params->delta_s;
        so.wires = params->walkers;
        so.seed = params->seed;
        so.threads = ctx->threads;
        tb.meta("method", "slices");
        tb.meta("wires", std::to_string(so.wires));
        tb.meta("delta_s", so.delta_s);
        tb.meta("reorthogonalize_every", std::to_string(so.reorthogonalize_every));
        ensembles = symrmt::mc_transfer_product(so);
        break;
      }
      default: symrmt::fail(symrmt::ErrorCode::InvalidArgument, "unknown DMPK method");
    }

    for (const auto& ens : ensembles) {
      const auto st = symrmt::conductance_stats(ens);
      tb.row({ens.front().s, st.mean, st.variance, st.stderr_, static_cast<double>(st.samples)},
             {});
    }
    symrmt_table* hist = nullptr;
    if (histogram && params->histogram_bins > 0 && !ensembles.empty()) {
      TableBuilder hb({{"s", true}, {"ln1p_lambda", true}, {"density", true}, {"stderr", true}});
      double hi = params->histogram_max;
      if (!(hi > 0.0)) {
        for (const auto& ens : ensembles)
          for (const auto& st : ens)
            for (double l : st.lambda) hi = std::max(hi, std::log1p(l));
        hi = hi > 0.0 ? hi * (1.0 + 1e-12) : 1.0;
      }
      hb.meta("bins", std::to_string(params->histogram_bins));
      hb.meta("max", hi);
      for (const auto& ens : ensembles) {
        std::vector<double> v;
        for (const auto& st : ens)
          for (double l : st.lambda) v.push_back(std::log1p(l));
        const auto c = symrmt::histogram_density(v, 0.0, hi, params->histogram_bins, "ln1p_lambda");
        for (std::size_t i = 0; i < c.abscissa.size(); ++i)
          hb.row({ens.front().s, c.abscissa[i], c.value[i], c.stderr_[i]}, {});
      }
      hist = hb.release();
    }
    *conductance = tb.release();
    if (histogram) *histogram = hist;
  });
}

// ---- Calogero-Sutherland

void symrmt_cs_params_default(symrmt_cs_params* p) {
  if (!p) return;
  static const double hs[] = {0.04, 0.02, 0.01};
  p->family = "C";
  p->rank = 2;
  p->m_o = 2;
  p->m_l = 1;
  p->m_s = 0;
  p->potential = "II";
  p->a = 1.0;
  p->h = hs;
  p->h_count = 3;
}

symrmt_status symrmt_cs_check(symrmt_context* ctx, const symrmt_cs_params* params,
                              symrmt_table** out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(params, "params");
    need(out, "out");
    need(params->family, "family");
    need(params->potential, "potential");
    need(params->h, "h");
    symrmt::Multiplicities m;
    m.m_o = params->m_o;
    m.m_l = params->m_l;
    m.m_s = params->m_s;
    auto rs = symrmt::build_root_system(symrmt::parse_family(params->family), params->rank, m);
    const auto type = symrmt::parse_potential_type(params->potential);
    const auto model = symrmt::CSModel::at_root_values(rs, type, params->a);

    // Box around a regular chamber point, clear of every wall.
    auto dir = chamber_direction(model.roots);
    double lo_q = std::numeric_limits<double>::infinity(), hi_q = 0.0;
    for (const auto& r : model.roots.positive_roots()) {
      const double v = symrmt::q_dot_alpha(dir, r.vector);
      lo_q = std::min(lo_q, v);
      hi_q = std::max(hi_q, v);
    }
    double scale = 1.0 / lo_q;
    if (type == symrmt::PotentialType::III)
      scale = std::min(scale, 0.6 * 3.141592653589793 / (params->a * hi_q));
    for (auto& v : dir) v *= scale;
    const double w = 0.25 * lo_q * scale;
    std::vector<double> lo(dir.size()), hi(dir.size());
    for (std::size_t i = 0; i < dir.size(); ++i) {
      lo[i] = dir[i] - w;
      hi[i] = dir[i] + w;
    }
    const double sigma = w / 3.0;
    const auto center = dir;
    auto f = [center, sigma](std::span<const double> q) {
      double r2 = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) r2 += (q[i] - center[i]) * (q[i] - center[i]);
      return std::exp(-0.5 * r2 / (sigma * sigma));
    };
    const std::vector<double> hs(params->h, params->h + params->h_count);
    const auto study = symrmt::op_mapping_convergence(model, lo, hi, hs, f);

    TableBuilder tb({{"h", true}, {"residual", true}});
    for (const auto& pt : study.points) tb.row({pt.h, pt.residual}, {});
    tb.meta("family", params->family);
    tb.meta("rank", std::to_string(params->rank));
    tb.meta("multiplicities", "(" + std::to_string(m.m_o) + "," + std::to_string(m.m_l) + "," +
                                  std::to_string(m.m_s) + ")");
    tb.meta("potential", symrmt::to_string(type));
    tb.meta("a", params->a);
    tb.meta("g2_short", model.coupling(symrmt::RootKind::Short));
    tb.meta("g2_ordinary", model.coupling(symrmt::RootKind::Ordinary));
    tb.meta("g2_long", model.coupling(symrmt::RootKind::Long));
    tb.meta("rho_shift", model.rho_shift());
    tb.meta("center", fmt_vector(center));
    tb.meta("half_width", w);
    tb.meta("sigma", sigma);
    tb.meta("slope", study.slope);
    *out = tb.release();
  });
}

// ---- Lie fixtures

symrmt_status symrmt_lie_fixtures(symrmt_table** out) {
  return guarded([&] {
    need(out, "out");
    const auto results = symrmt::run_lie_fixtures();
    TableBuilder tb({{"name", false}, {"pass", true}, {"error", true}, {"detail", false}});
    std::size_t passed = 0;
    for (const auto& r : results) {
      tb.row({r.pass ? 1.0 : 0.0, r.error}, {r.name, r.detail});
      passed += r.pass ? 1 : 0;
    }
    tb.meta("fixtures", std::to_string(results.size()));
    tb.meta("passed", std::to_string(passed));
    *out = tb.release();
  });
}

}  // extern "C"
