#ifndef SYMRMT_SYMRMT_H
#define SYMRMT_SYMRMT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SYMRMT_BUILDING_LIBRARY)
#    define SYMRMT_API __declspec(dllexport)
#  else
#    define SYMRMT_API __declspec(dllimport)
#  endif
#else
#  define SYMRMT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum symrmt_status {
  SYMRMT_OK = 0,
  SYMRMT_ERR_INVALID_ARGUMENT = 1,
  SYMRMT_ERR_CHAMBER_BOUNDARY = 2,
  SYMRMT_ERR_DOMAIN = 3,
  SYMRMT_ERR_NON_SEMISIMPLE = 4,
  SYMRMT_ERR_NOT_AT_ROOT_VALUES = 5,
  SYMRMT_ERR_NUMERICAL = 6,
  SYMRMT_ERR_IO = 7,
  SYMRMT_ERR_INTERNAL = 8
} symrmt_status;

SYMRMT_API const char* symrmt_version(void);
SYMRMT_API const char* symrmt_status_string(symrmt_status status);
/* Message of the last failed call on this thread ("" when none). */
SYMRMT_API const char* symrmt_last_error(void);

/* ---- context ------------------------------------------------------------ */

typedef struct symrmt_context symrmt_context;

/* threads = 0 selects RMT_THREADS or the hardware concurrency. */
SYMRMT_API symrmt_status symrmt_context_create(unsigned threads, symrmt_context** out);
SYMRMT_API void symrmt_context_destroy(symrmt_context* ctx);
SYMRMT_API unsigned symrmt_context_threads(const symrmt_context* ctx);

/* ---- tables ------------------------------------------------------------- */

/* Rectangular result with named columns; each column holds either numbers or
   strings. Key/value metadata describes how the table was produced. */
typedef struct symrmt_table symrmt_table;

SYMRMT_API void symrmt_table_destroy(symrmt_table* table);
SYMRMT_API size_t symrmt_table_rows(const symrmt_table* table);
SYMRMT_API size_t symrmt_table_columns(const symrmt_table* table);
SYMRMT_API const char* symrmt_table_column_name(const symrmt_table* table, size_t column);
SYMRMT_API int symrmt_table_column_is_numeric(const symrmt_table* table, size_t column);
/* NaN for string columns or out-of-range indices. */
SYMRMT_API double symrmt_table_number(const symrmt_table* table, size_t row, size_t column);
/* NULL for numeric columns or out-of-range indices. */
SYMRMT_API const char* symrmt_table_string(const symrmt_table* table, size_t row, size_t column);
SYMRMT_API size_t symrmt_table_meta_count(const symrmt_table* table);
SYMRMT_API const char* symrmt_table_meta_key(const symrmt_table* table, size_t index);
SYMRMT_API const char* symrmt_table_meta_value(const symrmt_table* table, size_t index);
/* Value for key, or NULL. */
SYMRMT_API const char* symrmt_table_meta_find(const symrmt_table* table, const char* key);

/* ---- spectra batches ---------------------------------------------------- */

typedef struct symrmt_batch symrmt_batch;

typedef struct symrmt_ensemble_params {
  const char* kind; /* "gaussian", "circular", "chiral" */
  int beta;         /* 1, 2, 4 */
  int n;            /* matrix size (gaussian, circular) */
  int p, q;         /* chiral blocks, p >= q >= 1 */
  double v;         /* Gaussian scale, > 0 */
  uint64_t seed;
} symrmt_ensemble_params;

SYMRMT_API void symrmt_ensemble_params_default(symrmt_ensemble_params* params);

SYMRMT_API symrmt_status symrmt_batch_create(symrmt_batch** out);
SYMRMT_API void symrmt_batch_destroy(symrmt_batch* batch);
/* Appends one spectrum; levels must be finite (they are sorted on entry). */
SYMRMT_API symrmt_status symrmt_batch_append(symrmt_batch* batch, const double* levels,
                                             size_t count, int degeneracy_stride);
SYMRMT_API size_t symrmt_batch_size(const symrmt_batch* batch);
/* Pointer valid until the batch is modified or destroyed. */
SYMRMT_API symrmt_status symrmt_batch_levels(const symrmt_batch* batch, size_t draw,
                                             const double** levels, size_t* count);
SYMRMT_API int symrmt_batch_stride(const symrmt_batch* batch, size_t draw);
/* 1 when the level is an exact zero mode (|level| <= 1e-9 max |level|), else 0. */
SYMRMT_API int symrmt_batch_is_zero_mode(const symrmt_batch* batch, size_t draw, size_t index);

/* draws spectra with seeds derived from params->seed and the draw index. */
SYMRMT_API symrmt_status symrmt_sample(symrmt_context* ctx, const symrmt_ensemble_params* params,
                                       size_t draws, symrmt_batch** out);
/* Poisson(n) uniform levels on [0, n) per draw. */
SYMRMT_API symrmt_status symrmt_poisson_surrogate(symrmt_context* ctx, int n, uint64_t seed,
                                                  size_t draws, symrmt_batch** out);

/* ---- statistics --------------------------------------------------------- */

typedef enum symrmt_observable {
  SYMRMT_OBS_SPACING = 0, /* p(s) */
  SYMRMT_OBS_SIGMA2 = 1,  /* number variance */
  SYMRMT_OBS_DELTA3 = 2,  /* spectral rigidity */
  SYMRMT_OBS_Y2 = 3       /* two-point cluster function */
} symrmt_observable;

typedef enum symrmt_unfold {
  SYMRMT_UNFOLD_POLYNOMIAL = 0,
  SYMRMT_UNFOLD_LOCAL = 1,
  SYMRMT_UNFOLD_UNIFORM = 2
} symrmt_unfold;

typedef struct symrmt_stats_params {
  symrmt_observable observable;
  symrmt_unfold unfold;
  int degree;         /* polynomial staircase degree */
  int window;         /* local mean spacing half-window */
  double density;     /* uniform unfolding density, 0 = automatic */
  double trim;        /* fraction dropped at each edge */
  double bin_width;   /* p(s): <= 0 selects Freedman-Diaconis */
  double s_max;       /* p(s): <= 0 covers all spacings */
  double l_max;       /* sigma2, delta3: L grid up to l_max */
  double l_step;
  double r_max;       /* y2 */
  size_t bins;        /* y2 */
} symrmt_stats_params;

SYMRMT_API void symrmt_stats_params_default(symrmt_stats_params* params);
/* Columns abscissa, value, stderr; metadata observable, unfold, n_samples. */
SYMRMT_API symrmt_status symrmt_stats(symrmt_context* ctx, const symrmt_batch* batch,
                                      const symrmt_stats_params* params, symrmt_table** out);

/* ---- classification ----------------------------------------------------- */

/* One row per (class, curvature). cartan_class NULL lists all classes with
   their formula rows; otherwise n, p, q instantiate the chosen class. */
SYMRMT_API symrmt_status symrmt_classify(const char* cartan_class, int n, int p, int q,
                                         symrmt_table** out);

/* ---- DMPK --------------------------------------------------------------- */

typedef enum symrmt_dmpk_method {
  SYMRMT_DMPK_EXACT = 0,
  SYMRMT_DMPK_SDE = 1,
  SYMRMT_DMPK_SLICES = 2
} symrmt_dmpk_method;

typedef struct symrmt_dmpk_params {
  symrmt_dmpk_method method;
  int n;
  int beta;
  const double* s;  /* increasing s values */
  size_t s_count;
  size_t walkers;   /* SDE walkers or slice wires */
  double dt;        /* SDE base step */
  double delta_s;   /* slice thickness */
  uint64_t seed;
  double k_factor;  /* exact: k_max = k_factor sqrt(N/s) */
  size_t k_nodes;   /* exact: composite nodes on [0, k_max] (multiple of 16) */
  size_t histogram_bins; /* ln(1 + lambda) histogram, 0 = none */
  double histogram_max;
} symrmt_dmpk_params;

SYMRMT_API void symrmt_dmpk_params_default(symrmt_dmpk_params* params);
/* conductance: columns s, mean_g, var_g, stderr_g, samples.
   histogram (optional, may be NULL): columns s, ln1p_lambda (bin centre), density, stderr. */
SYMRMT_API symrmt_status symrmt_dmpk(symrmt_context* ctx, const symrmt_dmpk_params* params,
                                     symrmt_table** conductance, symrmt_table** histogram);

/* ---- Calogero-Sutherland ------------------------------------------------ */

typedef struct symrmt_cs_params {
  const char* family; /* "A", "B", "C", "D", "BC" */
  int rank;
  int m_o, m_l, m_s;
  const char* potential; /* "I", "II", "III" */
  double a;
  const double* h;
  size_t h_count;
} symrmt_cs_params;

SYMRMT_API void symrmt_cs_params_default(symrmt_cs_params* params);
/* Columns h, residual; metadata slope and root-value couplings. */
SYMRMT_API symrmt_status symrmt_cs_check(symrmt_context* ctx, const symrmt_cs_params* params,
                                         symrmt_table** out);

/* ---- Lie fixtures ------------------------------------------------------- */

/* Columns name, pass (1/0), error, detail. */
SYMRMT_API symrmt_status symrmt_lie_fixtures(symrmt_table** out);

#ifdef __cplusplus
}
#endif

#endif
