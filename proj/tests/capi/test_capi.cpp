#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "symrmt/symrmt.h"

namespace {

struct Table {
  symrmt_table* t = nullptr;
  ~Table() { symrmt_table_destroy(t); }
};

struct Batch {
  symrmt_batch* b = nullptr;
  ~Batch() { symrmt_batch_destroy(b); }
};

struct Context {
  symrmt_context* c = nullptr;
  explicit Context(unsigned threads) { REQUIRE(symrmt_context_create(threads, &c) == SYMRMT_OK); }
  ~Context() { symrmt_context_destroy(c); }
};

std::vector<std::string> column_names(const symrmt_table* t) {
  std::vector<std::string> out;
  for (size_t c = 0; c < symrmt_table_columns(t); ++c) out.emplace_back(symrmt_table_column_name(t, c));
  return out;
}

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::strlen(symrmt_version()) > 0);
  CHECK(std::string(symrmt_status_string(SYMRMT_OK)) != "");
  CHECK(std::string(symrmt_status_string(SYMRMT_ERR_DOMAIN)) != std::string(symrmt_status_string(SYMRMT_OK)));
}

TEST_CASE("null handles are rejected") {
  CHECK(symrmt_context_create(1, nullptr) == SYMRMT_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(symrmt_last_error()) > 0);
  CHECK(symrmt_batch_create(nullptr) == SYMRMT_ERR_INVALID_ARGUMENT);
  symrmt_table_destroy(nullptr);
  symrmt_batch_destroy(nullptr);
  symrmt_context_destroy(nullptr);
  CHECK(symrmt_table_rows(nullptr) == 0);
  CHECK(std::isnan(symrmt_table_number(nullptr, 0, 0)));
  CHECK(symrmt_table_string(nullptr, 0, 0) == nullptr);
  CHECK(symrmt_table_meta_find(nullptr, "x") == nullptr);
}

TEST_CASE("sampling and batches") {
  Context ctx(2);
  symrmt_ensemble_params p;
  symrmt_ensemble_params_default(&p);
  p.kind = "gaussian";
  p.beta = 4;
  p.n = 6;
  p.seed = 11;
  Batch b;
  REQUIRE(symrmt_sample(ctx.c, &p, 5, &b.b) == SYMRMT_OK);
  CHECK(symrmt_batch_size(b.b) == 5);
  const double* lv = nullptr;
  size_t count = 0;
  REQUIRE(symrmt_batch_levels(b.b, 0, &lv, &count) == SYMRMT_OK);
  CHECK(count == 6);
  CHECK(symrmt_batch_stride(b.b, 0) == 2);
  for (size_t i = 1; i < count; ++i) CHECK(lv[i] >= lv[i - 1]);
  CHECK(symrmt_batch_levels(b.b, 9, &lv, &count) == SYMRMT_ERR_INVALID_ARGUMENT);

  p.beta = 3;
  Batch bad;
  CHECK(symrmt_sample(ctx.c, &p, 5, &bad.b) == SYMRMT_ERR_INVALID_ARGUMENT);
  CHECK(std::string(symrmt_last_error()).find("{1, 2, 4}") != std::string::npos);
  CHECK(bad.b == nullptr);

  p.kind = "chiral";
  p.beta = 2;
  p.p = 5;
  p.q = 3;
  Batch ch;
  REQUIRE(symrmt_sample(ctx.c, &p, 2, &ch.b) == SYMRMT_OK);
  REQUIRE(symrmt_batch_levels(ch.b, 0, &lv, &count) == SYMRMT_OK);
  int zero = 0;
  for (size_t i = 0; i < count; ++i) zero += symrmt_batch_is_zero_mode(ch.b, 0, i);
  CHECK(zero == 2);

  Batch own;
  REQUIRE(symrmt_batch_create(&own.b) == SYMRMT_OK);
  const double lv3[] = {3.0, 1.0, 2.0};
  REQUIRE(symrmt_batch_append(own.b, lv3, 3, 1) == SYMRMT_OK);
  REQUIRE(symrmt_batch_levels(own.b, 0, &lv, &count) == SYMRMT_OK);
  CHECK(lv[0] == 1.0);
  const double bad_lv[] = {1.0, NAN};
  CHECK(symrmt_batch_append(own.b, bad_lv, 2, 1) == SYMRMT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("statistics tables are identical across thread counts") {
  auto run = [](unsigned threads) {
    Context ctx(threads);
    symrmt_ensemble_params p;
    symrmt_ensemble_params_default(&p);
    p.kind = "gaussian";
    p.beta = 1;
    p.n = 40;
    p.seed = 3;
    Batch b;
    REQUIRE(symrmt_sample(ctx.c, &p, 30, &b.b) == SYMRMT_OK);
    symrmt_stats_params sp;
    symrmt_stats_params_default(&sp);
    sp.observable = SYMRMT_OBS_SIGMA2;
    sp.l_max = 6.0;
    Table t;
    const auto st = symrmt_stats(ctx.c, b.b, &sp, &t.t);
    INFO(std::string(symrmt_last_error()));
    REQUIRE(st == SYMRMT_OK);
    CHECK(column_names(t.t) == std::vector<std::string>{"abscissa", "value", "stderr"});
    std::vector<double> v;
    for (size_t r = 0; r < symrmt_table_rows(t.t); ++r)
      for (size_t c = 0; c < 3; ++c) v.push_back(symrmt_table_number(t.t, r, c));
    CHECK(std::string(symrmt_table_meta_find(t.t, "observable")) == "sigma2");
    return v;
  };
  const auto a = run(1), b = run(4);
  REQUIRE(!a.empty());
  CHECK(a == b);
}

TEST_CASE("classification tables") {
  Table all;
  REQUIRE(symrmt_classify(nullptr, 0, 0, 0, &all.t) == SYMRMT_OK);
  CHECK(symrmt_table_rows(all.t) == 12);
  CHECK(symrmt_table_column_is_numeric(all.t, 0) == 0);
  Table one;
  REQUIRE(symrmt_classify("AIII", 0, 5, 3, &one.t) == SYMRMT_OK);
  CHECK(symrmt_table_rows(one.t) == 3);
  const auto names = column_names(one.t);
  size_t fam = 0, mo = 0;
  for (size_t c = 0; c < names.size(); ++c) {
    if (names[c] == "family") fam = c;
    if (names[c] == "m_s") mo = c;
  }
  CHECK(std::string(symrmt_table_string(one.t, 0, fam)) == "BC_3");
  CHECK(symrmt_table_number(one.t, 0, mo) == 4.0);
  CHECK(std::isnan(symrmt_table_number(one.t, 0, fam)));
  CHECK(symrmt_table_string(one.t, 0, mo) == nullptr);
  Table bad;
  CHECK(symrmt_classify("AIV", 3, 0, 0, &bad.t) == SYMRMT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("dmpk exact route and guards") {
  Context ctx(1);
  symrmt_dmpk_params p;
  symrmt_dmpk_params_default(&p);
  const double s[] = {0.0, 1.0};
  p.method = SYMRMT_DMPK_EXACT;
  p.n = 1;
  p.s = s;
  p.s_count = 2;
  Table t;
  REQUIRE(symrmt_dmpk(ctx.c, &p, &t.t, nullptr) == SYMRMT_OK);
  CHECK(symrmt_table_rows(t.t) == 2);
  CHECK(symrmt_table_number(t.t, 0, 1) == 1.0);
  CHECK(symrmt_table_number(t.t, 1, 1) < 1.0);
  p.beta = 1;
  Table bad;
  CHECK(symrmt_dmpk(ctx.c, &p, &bad.t, nullptr) == SYMRMT_ERR_INVALID_ARGUMENT);
}

TEST_CASE("cs check and lie fixtures") {
  Context ctx(1);
  symrmt_cs_params p;
  symrmt_cs_params_default(&p);
  Table t;
  REQUIRE(symrmt_cs_check(ctx.c, &p, &t.t) == SYMRMT_OK);
  CHECK(std::stod(symrmt_table_meta_find(t.t, "slope")) == doctest::Approx(2.0).epsilon(0.15));
  p.potential = "V";
  Table bad;
  CHECK(symrmt_cs_check(ctx.c, &p, &bad.t) != SYMRMT_OK);

  Table fx;
  REQUIRE(symrmt_lie_fixtures(&fx.t) == SYMRMT_OK);
  for (size_t r = 0; r < symrmt_table_rows(fx.t); ++r) CHECK(symrmt_table_number(fx.t, r, 1) == 1.0);
}
