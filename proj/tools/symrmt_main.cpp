#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "symrmt/symrmt.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void validation(const std::string& msg) { throw CliError{kExitValidation, msg}; }
[[noreturn]] void internal(const std::string& msg) { throw CliError{kExitInternal, msg}; }

void check(symrmt_status st) {
  if (st == SYMRMT_OK) return;
  std::string msg = std::string(symrmt_status_string(st)) + ": " + symrmt_last_error();
  switch (st) {
    case SYMRMT_ERR_NUMERICAL:
    case SYMRMT_ERR_IO:
    case SYMRMT_ERR_INTERNAL: internal(msg);
    default: validation(msg);
  }
}

struct ContextDeleter {
  void operator()(symrmt_context* c) const { symrmt_context_destroy(c); }
};
struct TableDeleter {
  void operator()(symrmt_table* t) const { symrmt_table_destroy(t); }
};
struct BatchDeleter {
  void operator()(symrmt_batch* b) const { symrmt_batch_destroy(b); }
};
using Context = std::unique_ptr<symrmt_context, ContextDeleter>;
using Table = std::unique_ptr<symrmt_table, TableDeleter>;
using Batch = std::unique_ptr<symrmt_batch, BatchDeleter>;

Context make_context() {
  symrmt_context* c = nullptr;
  check(symrmt_context_create(0, &c));
  return Context(c);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    internal("sha256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

// ---- CSV

struct Csv {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_meta(const std::string& k, const std::string& v) { meta.emplace_back(k, v); }

  std::string render() const {
    std::ostringstream os;
    for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
    return os.str();
  }
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

Csv table_to_csv(const symrmt_table* t, const std::string& prefix_col = "",
                 const std::string& prefix_val = "") {
  Csv csv;
  for (std::size_t i = 0; i < symrmt_table_meta_count(t); ++i)
    csv.add_meta(symrmt_table_meta_key(t, i), symrmt_table_meta_value(t, i));
  const std::size_t cols = symrmt_table_columns(t);
  if (!prefix_col.empty()) csv.header.push_back(prefix_col);
  for (std::size_t c = 0; c < cols; ++c) csv.header.push_back(symrmt_table_column_name(t, c));
  for (std::size_t r = 0; r < symrmt_table_rows(t); ++r) {
    std::vector<std::string> row;
    if (!prefix_col.empty()) row.push_back(prefix_val);
    for (std::size_t c = 0; c < cols; ++c) {
      if (symrmt_table_column_is_numeric(t, c))
        row.push_back(fmt(symrmt_table_number(t, r, c)));
      else
        row.push_back(csv_field(symrmt_table_string(t, r, c)));
    }
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Csv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) validation("cannot open input '" + path + "'");
  Csv csv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos && line.size() > 2) {
        const auto key = line.substr(2, colon - 2);
        auto val = line.substr(colon + 1);
        if (!val.empty() && val[0] == ' ') val.erase(0, 1);
        csv.add_meta(key, val);
      }
      continue;
    }
    if (csv.header.empty())
      csv.header = split_csv_line(line);
    else
      csv.rows.push_back(split_csv_line(line));
  }
  return csv;
}

// ---- run bookkeeping

struct Run {
  std::string command;
  json parameters = json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> outputs;  // path, content
};

void record_options(Run& run, const CLI::App* sub) {
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (name == "help" || name == "config" || name.empty()) continue;
    if (opt->count() > 0) {
      const auto res = opt->reduced_results();
      if (opt->get_expected_max() == 0)
        run.parameters[name] = true;
      else if (res.size() == 1)
        run.parameters[name] = res.front();
      else
        run.parameters[name] = res;
    } else if (!opt->get_default_str().empty()) {
      run.parameters[name] = opt->get_default_str();
    }
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) internal("cannot write '" + path + "'");
  out << content;
  if (!out) internal("write failed for '" + path + "'");
}

// Writes the outputs (stdout when the path is empty) and the manifest.
void finish(const Run& run, const std::string& manifest_path) {
  json files = json::array();
  for (const auto& [path, content] : run.outputs) {
    if (path.empty()) {
      std::cout << content;
    } else {
      write_file(path, content);
      files.push_back({{"path", path}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
    }
  }
  if (manifest_path.empty()) return;
  json m;
  m["command"] = run.command;
  m["parameters"] = run.parameters;
  m["seed"] = run.seed ? json(*run.seed) : json(nullptr);
  m["version"] = symrmt_version();
  m["outputs"] = files;
  write_file(manifest_path, m.dump(2) + "\n");
}

struct Common {
  std::optional<std::uint64_t> seed;
  bool strict = false;
  std::string out;
  std::string manifest;
};

void add_common(CLI::App* sub, Common& c, bool seeded) {
  if (seeded) {
    sub->add_option("--seed", c.seed, "Seed for all randomness");
    sub->add_flag("--strict", c.strict, "Require an explicit --seed");
  }
  sub->add_option("--out,-o", c.out, "Output CSV (stdout when omitted)");
  sub->add_option("--manifest", c.manifest, "JSON manifest path (default <out>.manifest.json)");
}

std::uint64_t resolve_seed(const Common& c, Run& run) {
  if (c.seed) {
    run.seed = c.seed;
    return *c.seed;
  }
  if (c.strict) validation("--strict requires an explicit --seed");
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "symrmt: no --seed given, using OS entropy seed " << s << '\n';
  run.seed = s;
  run.parameters["seed"] = std::to_string(s);
  return s;
}

std::string manifest_path(const Common& c) {
  if (!c.manifest.empty()) return c.manifest;
  if (c.out.empty()) return "";
  return c.out + ".manifest.json";
}

// ---- sample

struct SampleArgs {
  Common common;
  std::string kind = "gaussian";
  int beta = 2;
  int n = 100;
  int p = 0;
  int q = 0;
  double v = 1.0;
  std::size_t draws = 1;
};

std::string render_batch(const symrmt_batch* b, const SampleArgs& a, std::uint64_t seed) {
  Csv csv;
  csv.add_meta("command", "sample");
  csv.add_meta("kind", a.kind);
  csv.add_meta("beta", std::to_string(a.beta));
  if (a.kind == "chiral") {
    csv.add_meta("p", std::to_string(a.p));
    csv.add_meta("q", std::to_string(a.q));
  } else {
    csv.add_meta("n", std::to_string(a.n));
  }
  csv.add_meta("v", fmt(a.v));
  csv.add_meta("seed", std::to_string(seed));
  csv.add_meta("draws", std::to_string(symrmt_batch_size(b)));
  csv.add_meta("degeneracy_stride",
               std::to_string(symrmt_batch_size(b) ? symrmt_batch_stride(b, 0) : 1));
  csv.add_meta("version", symrmt_version());
  csv.header = {"draw", "index", "level", "zero_mode"};
  for (std::size_t d = 0; d < symrmt_batch_size(b); ++d) {
    const double* lv = nullptr;
    std::size_t count = 0;
    check(symrmt_batch_levels(b, d, &lv, &count));
    for (std::size_t i = 0; i < count; ++i)
      csv.rows.push_back({std::to_string(d), std::to_string(i), fmt(lv[i]),
                          std::to_string(symrmt_batch_is_zero_mode(b, d, i))});
  }
  return csv.render();
}

int run_sample(const SampleArgs& a, const CLI::App* sub) {
  Run run;
  run.command = "sample";
  record_options(run, sub);
  const std::uint64_t seed = resolve_seed(a.common, run);
  if (a.draws < 1) validation("--draws must be at least 1");
  auto ctx = make_context();
  symrmt_ensemble_params p;
  symrmt_ensemble_params_default(&p);
  p.kind = a.kind.c_str();
  p.beta = a.beta;
  p.n = a.n;
  p.p = a.p;
  p.q = a.q;
  p.v = a.v;
  p.seed = seed;
  symrmt_batch* raw = nullptr;
  check(symrmt_sample(ctx.get(), &p, a.draws, &raw));
  Batch b(raw);
  run.outputs.emplace_back(a.common.out, render_batch(b.get(), a, seed));
  finish(run, manifest_path(a.common));
  return kExitOk;
}

// ---- stats

struct StatsArgs {
  Common common;
  std::string in;
  std::string surrogate;
  int n = 1000;
  std::size_t draws = 20;
  std::string observable = "ps";
  std::string unfold = "polynomial";
  int degree = 7;
  int window = 10;
  double density = 0.0;
  double trim = 0.05;
  double bin_width = 0.0;
  double s_max = 4.0;
  double l_max = 10.0;
  double l_step = 0.5;
  double r_max = 3.0;
  std::size_t bins = 30;
  bool drop_zero_modes = false;
};

Batch batch_from_csv(const Csv& csv, bool drop_zero_modes) {
  auto column = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < csv.header.size(); ++i)
      if (csv.header[i] == name) return static_cast<int>(i);
    return -1;
  };
  if (csv.header.empty()) validation("empty input: no header or spectrum rows");
  std::vector<std::string> missing;
  for (const char* req : {"draw", "level"})
    if (column(req) < 0) missing.push_back(req);
  if (!missing.empty()) {
    std::string m = "input schema mismatch, missing columns:";
    for (const auto& c : missing) m += " " + c;
    validation(m);
  }
  if (csv.rows.empty()) validation("empty input: no spectrum rows");
  const int cd = column("draw"), cl = column("level"), cz = column("zero_mode");
  int stride = 1;
  for (const auto& [k, v] : csv.meta)
    if (k == "degeneracy_stride") stride = std::atoi(v.c_str());
  if (stride != 1 && stride != 2) stride = 1;

  std::map<long long, std::vector<double>> draws;
  std::vector<long long> order;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    if (row.size() != csv.header.size())
      validation("row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                 " fields, header has " + std::to_string(csv.header.size()));
    if (drop_zero_modes && cz >= 0 && row[static_cast<std::size_t>(cz)] == "1") continue;
    char* end = nullptr;
    const long long d = std::strtoll(row[static_cast<std::size_t>(cd)].c_str(), &end, 10);
    if (*end) validation("row " + std::to_string(r + 1) + ": draw is not an integer");
    const double lv = std::strtod(row[static_cast<std::size_t>(cl)].c_str(), &end);
    if (*end || !std::isfinite(lv))
      validation("row " + std::to_string(r + 1) + ": level is not a finite number");
    if (!draws.count(d)) order.push_back(d);
    draws[d].push_back(lv);
  }
  symrmt_batch* raw = nullptr;
  check(symrmt_batch_create(&raw));
  Batch b(raw);
  for (long long d : order)
    check(symrmt_batch_append(b.get(), draws[d].data(), draws[d].size(), stride));
  return b;
}

int run_stats(const StatsArgs& a, const CLI::App* sub) {
  Run run;
  run.command = "stats";
  record_options(run, sub);
  symrmt_stats_params sp;
  symrmt_stats_params_default(&sp);
  static const std::map<std::string, symrmt_observable> obs{{"ps", SYMRMT_OBS_SPACING},
                                                            {"sigma2", SYMRMT_OBS_SIGMA2},
                                                            {"delta3", SYMRMT_OBS_DELTA3},
                                                            {"y2", SYMRMT_OBS_Y2}};
  static const std::map<std::string, symrmt_unfold> unf{{"polynomial", SYMRMT_UNFOLD_POLYNOMIAL},
                                                        {"local", SYMRMT_UNFOLD_LOCAL},
                                                        {"uniform", SYMRMT_UNFOLD_UNIFORM}};
  sp.observable = obs.at(a.observable);
  sp.unfold = unf.at(a.unfold);
  sp.degree = a.degree;
  sp.window = a.window;
  sp.density = a.density;
  sp.trim = a.trim;
  sp.bin_width = a.bin_width;
  sp.s_max = a.s_max;
  sp.l_max = a.l_max;
  sp.l_step = a.l_step;
  sp.r_max = a.r_max;
  sp.bins = a.bins;

  auto ctx = make_context();
  Batch batch;
  std::string source;
  if (!a.surrogate.empty()) {
    if (!a.in.empty()) validation("--in and --surrogate are mutually exclusive");
    const std::uint64_t seed = resolve_seed(a.common, run);
    symrmt_batch* raw = nullptr;
    check(symrmt_poisson_surrogate(ctx.get(), a.n, seed, a.draws, &raw));
    batch.reset(raw);
    source = "surrogate:poisson";
    // surrogate levels have unit density
    if (sp.unfold == SYMRMT_UNFOLD_UNIFORM && sp.density == 0.0) sp.density = 1.0;
  } else {
    if (a.in.empty()) validation("either --in or --surrogate poisson is required");
    const Csv csv = read_csv(a.in);
    batch = batch_from_csv(csv, a.drop_zero_modes);
    source = a.in;
  }
  symrmt_table* raw = nullptr;
  check(symrmt_stats(ctx.get(), batch.get(), &sp, &raw));
  Table t(raw);
  Csv csv = table_to_csv(t.get());
  csv.meta.insert(csv.meta.begin(), {"command", "stats"});
  csv.add_meta("source", source);
  if (run.seed) csv.add_meta("seed", std::to_string(*run.seed));
  csv.add_meta("version", symrmt_version());
  run.outputs.emplace_back(a.common.out, csv.render());
  finish(run, manifest_path(a.common));
  return kExitOk;
}

// ---- classify

struct ClassifyArgs {
  Common common;
  std::string cls;
  bool all = false;
  int n = 3;
  int p = 3;
  int q = 2;
  std::string format = "text";
};

std::string render_text(const symrmt_table* t) {
  const std::size_t cols = symrmt_table_columns(t);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head;
  for (std::size_t c = 0; c < cols; ++c) head.push_back(symrmt_table_column_name(t, c));
  cells.push_back(head);
  for (std::size_t r = 0; r < symrmt_table_rows(t); ++r) {
    std::vector<std::string> row;
    for (std::size_t c = 0; c < cols; ++c) {
      if (symrmt_table_column_is_numeric(t, c)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%g", symrmt_table_number(t, r, c));
        row.push_back(buf);
      } else {
        const std::string s = symrmt_table_string(t, r, c);
        row.push_back(s.empty() ? "-" : s);
      }
    }
    cells.push_back(row);
  }
  std::vector<std::size_t> width(cols, 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < cols; ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream os;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < cols; ++c) {
      os << row[c];
      if (c + 1 < cols) os << std::string(width[c] - row[c].size() + 2, ' ');
    }
    os << '\n';
  }
  return os.str();
}

int run_classify(const ClassifyArgs& a, const CLI::App* sub) {
  Run run;
  run.command = "classify";
  record_options(run, sub);
  if (a.all == !a.cls.empty()) validation("give exactly one of --class X or --all");
  if (a.format != "text" && a.format != "csv") validation("--format must be text or csv");
  symrmt_table* raw = nullptr;
  check(symrmt_classify(a.all ? nullptr : a.cls.c_str(), a.n, a.p, a.q, &raw));
  Table t(raw);
  std::string body;
  if (a.format == "csv") {
    body = table_to_csv(t.get()).render();
  } else {
    body = render_text(t.get());
    if (!a.all) {
      const std::size_t cols = symrmt_table_columns(t.get());
      std::size_t cm_s = 0, cm_l = 0, cl = 0, cs = 0;
      for (std::size_t c = 0; c < cols; ++c) {
        const std::string name = symrmt_table_column_name(t.get(), c);
        if (name == "m_s") cm_s = c;
        if (name == "m_l") cm_l = c;
        if (name == "laguerre_lambda") cl = c;
        if (name == "jacobi_sigma") cs = c;
      }
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "Laguerre/Jacobi parameters: lambda = rho = (m_s + m_l - 1)/2 = %g, "
                    "sigma = (m_l - 1)/2 = %g  (m_s = %g, m_l = %g)\n",
                    symrmt_table_number(t.get(), 0, cl), symrmt_table_number(t.get(), 0, cs),
                    symrmt_table_number(t.get(), 0, cm_s), symrmt_table_number(t.get(), 0, cm_l));
      body += buf;
    }
  }
  run.outputs.emplace_back(a.common.out, body);
  finish(run, manifest_path(a.common));
  return kExitOk;
}

// ---- dmpk

struct DmpkArgs {
  Common common;
  int n = 2;
  int beta = 2;
  std::vector<double> s{1.0};
  std::string method = "sde";
  std::string compare;
  std::size_t walkers = 10000;
  double dt = 1e-3;
  double delta_s = 0.005;
  double k_factor = 12.0;
  std::size_t k_nodes = 400;
  std::size_t histogram_bins = 0;
  double histogram_max = 0.0;
  std::string histogram_out;
};

symrmt_dmpk_method parse_method(const std::string& m) {
  if (m == "exact") return SYMRMT_DMPK_EXACT;
  if (m == "sde") return SYMRMT_DMPK_SDE;
  if (m == "slices") return SYMRMT_DMPK_SLICES;
  validation("unknown method '" + m + "' (expected exact, sde or slices)");
}

int run_dmpk(const DmpkArgs& a, const CLI::App* sub) {
  Run run;
  run.command = "dmpk";
  record_options(run, sub);
  if (a.method == "exact" && a.beta != 2)
    validation("--method exact requires beta = 2 (the closed-form solution exists only for beta = 2)");
  if (!a.compare.empty() && a.compare == a.method)
    validation("--compare must name a method different from --method");
  if (!a.histogram_out.empty() && a.histogram_bins == 0)
    validation("--histogram-out needs --histogram-bins > 0");
  const std::uint64_t seed = resolve_seed(a.common, run);
  auto ctx = make_context();

  std::vector<std::string> methods{a.method};
  if (!a.compare.empty()) methods.push_back(a.compare);
  Csv out;
  Csv hist;
  std::vector<Table> tables;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    symrmt_dmpk_params p;
    symrmt_dmpk_params_default(&p);
    p.method = parse_method(methods[mi]);
    p.n = a.n;
    p.beta = a.beta;
    p.s = a.s.data();
    p.s_count = a.s.size();
    p.walkers = a.walkers;
    p.dt = a.dt;
    p.delta_s = a.delta_s;
    p.seed = mi == 0 ? seed : seed ^ 0x9e3779b97f4a7c15ULL;
    p.k_factor = a.k_factor;
    p.k_nodes = a.k_nodes;
    p.histogram_bins = a.histogram_bins;
    p.histogram_max = a.histogram_max;
    symrmt_table* cond = nullptr;
    symrmt_table* h = nullptr;
    check(symrmt_dmpk(ctx.get(), &p, &cond, a.histogram_bins > 0 ? &h : nullptr));
    tables.emplace_back(cond);
    Table ht(h);
    Csv part = table_to_csv(cond, "method", methods[mi]);
    for (const auto& [k, v] : part.meta) out.add_meta(methods[mi] + "." + k, v);
    out.header = part.header;
    for (auto& r : part.rows) out.rows.push_back(std::move(r));
    if (ht) {
      Csv hp = table_to_csv(ht.get(), "method", methods[mi]);
      for (const auto& [k, v] : hp.meta) hist.add_meta(methods[mi] + "." + k, v);
      hist.header = hp.header;
      for (auto& r : hp.rows) hist.rows.push_back(std::move(r));
    }
  }
  out.meta.insert(out.meta.begin(), {"command", "dmpk"});
  out.add_meta("seed", std::to_string(seed));
  out.add_meta("version", symrmt_version());

  bool all_agree = true;
  if (tables.size() == 2) {
    for (std::size_t r = 0; r < symrmt_table_rows(tables[0].get()); ++r) {
      const double s = symrmt_table_number(tables[0].get(), r, 0);
      const double m1 = symrmt_table_number(tables[0].get(), r, 1);
      const double m2 = symrmt_table_number(tables[1].get(), r, 1);
      const double e1 = symrmt_table_number(tables[0].get(), r, 3);
      const double e2 = symrmt_table_number(tables[1].get(), r, 3);
      const double comb = std::sqrt(e1 * e1 + e2 * e2);
      const double z = comb > 0.0 ? std::abs(m1 - m2) / comb : (m1 == m2 ? 0.0 : INFINITY);
      const bool ok = z <= 3.0;
      all_agree = all_agree && ok;
      char buf[256];
      std::snprintf(buf, sizeof buf, "s=%s diff=%.6g combined_stderr=%.6g z=%.3f %s",
                    fmt(s).c_str(), m1 - m2, comb, z, ok ? "agree" : "disagree");
      out.add_meta("compare", buf);
      std::cerr << "compare " << methods[0] << " vs " << methods[1] << ": " << buf << '\n';
    }
    out.add_meta("verdict", all_agree ? "agree within 3 combined stderr"
                                      : "disagree beyond 3 combined stderr");
  }
  run.outputs.emplace_back(a.common.out, out.render());
  if (!hist.header.empty()) {
    hist.meta.insert(hist.meta.begin(), {"command", "dmpk histogram of ln(1 + lambda)"});
    hist.add_meta("seed", std::to_string(seed));
    run.outputs.emplace_back(a.histogram_out, hist.render());
  }
  finish(run, manifest_path(a.common));
  return kExitOk;
}

// ---- cs-check

struct CsArgs {
  Common common;
  std::string family = "C";
  int rank = 2;
  int m_o = 2;
  int m_l = 1;
  int m_s = 0;
  std::string potential = "II";
  double a = 1.0;
  std::vector<double> h{0.04, 0.02, 0.01};
};

int run_cs(const CsArgs& a, const CLI::App* sub) {
  Run run;
  run.command = "cs-check";
  record_options(run, sub);
  auto ctx = make_context();
  symrmt_cs_params p;
  symrmt_cs_params_default(&p);
  p.family = a.family.c_str();
  p.rank = a.rank;
  p.m_o = a.m_o;
  p.m_l = a.m_l;
  p.m_s = a.m_s;
  p.potential = a.potential.c_str();
  p.a = a.a;
  p.h = a.h.data();
  p.h_count = a.h.size();
  symrmt_table* raw = nullptr;
  check(symrmt_cs_check(ctx.get(), &p, &raw));
  Table t(raw);
  Csv csv = table_to_csv(t.get());
  csv.meta.insert(csv.meta.begin(), {"command", "cs-check"});
  csv.add_meta("version", symrmt_version());
  run.outputs.emplace_back(a.common.out, csv.render());
  finish(run, manifest_path(a.common));
  return kExitOk;
}

// ---- lie-fixtures

int run_lie(const Common& c, const CLI::App* sub) {
  Run run;
  run.command = "lie-fixtures";
  record_options(run, sub);
  symrmt_table* raw = nullptr;
  check(symrmt_lie_fixtures(&raw));
  Table t(raw);
  std::ostringstream os;
  bool all = true;
  for (std::size_t r = 0; r < symrmt_table_rows(t.get()); ++r) {
    const bool pass = symrmt_table_number(t.get(), r, 1) == 1.0;
    all = all && pass;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", symrmt_table_number(t.get(), r, 2));
    os << (pass ? "PASS " : "FAIL ") << symrmt_table_string(t.get(), r, 0) << "  error=" << buf
       << "  " << symrmt_table_string(t.get(), r, 3) << '\n';
  }
  os << symrmt_table_meta_find(t.get(), "passed") << "/" << symrmt_table_meta_find(t.get(), "fixtures")
     << " fixtures passed\n";
  run.outputs.emplace_back(c.out, os.str());
  finish(run, manifest_path(c));
  return all ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random matrices, symmetric spaces, DMPK transport and Calogero-Sutherland models"};
  app.set_version_flag("--version", std::string(symrmt_version()));
  app.set_config("--config", "", "TOML/INI file mirroring the flags (flags win)");
  app.require_subcommand(1);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Sample ensemble spectra");
  add_common(sample, sa.common, true);
  sample->add_option("--kind", sa.kind, "gaussian, circular or chiral")->capture_default_str();
  sample->add_option("--beta", sa.beta, "Dyson index, one of {1, 2, 4}")->capture_default_str();
  sample->add_option("--n", sa.n, "Matrix size")->capture_default_str();
  sample->add_option("--p", sa.p, "Chiral block rows");
  sample->add_option("--q", sa.q, "Chiral block columns");
  sample->add_option("--v", sa.v, "Gaussian scale")->capture_default_str();
  sample->add_option("--draws", sa.draws, "Number of spectra")->capture_default_str();

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "Unfold spectra and compute an observable");
  add_common(stats, st.common, true);
  stats->add_option("--in,-i", st.in, "Spectrum CSV as written by sample");
  stats->add_option("--surrogate", st.surrogate, "Generate input instead")
      ->check(CLI::IsMember({"poisson"}));
  stats->add_option("--n", st.n, "Surrogate mean level count")->capture_default_str();
  stats->add_option("--draws", st.draws, "Surrogate spectra")->capture_default_str();
  stats->add_option("--observable", st.observable, "ps, sigma2, delta3 or y2")
      ->check(CLI::IsMember({"ps", "sigma2", "delta3", "y2"}))
      ->capture_default_str();
  stats->add_option("--unfold", st.unfold, "polynomial, local or uniform")
      ->check(CLI::IsMember({"polynomial", "local", "uniform"}))
      ->capture_default_str();
  stats->add_option("--degree", st.degree, "Staircase polynomial degree")->capture_default_str();
  stats->add_option("--window", st.window, "Local unfolding half-window")->capture_default_str();
  stats->add_option("--density", st.density, "Uniform unfolding density (0 = N/2pi, or 1 for surrogates)")
      ->capture_default_str();
  stats->add_option("--trim", st.trim, "Edge fraction dropped per side")->capture_default_str();
  stats->add_option("--bin-width", st.bin_width, "p(s) bin width (0 = Freedman-Diaconis)")
      ->capture_default_str();
  stats->add_option("--smax", st.s_max, "p(s) upper limit")->capture_default_str();
  stats->add_option("--Lmax", st.l_max, "Largest L for sigma2/delta3")->capture_default_str();
  stats->add_option("--Lstep", st.l_step, "L grid step")->capture_default_str();
  stats->add_option("--rmax", st.r_max, "Y2 range")->capture_default_str();
  stats->add_option("--bins", st.bins, "Y2 bins")->capture_default_str();
  stats->add_flag("--drop-zero-modes", st.drop_zero_modes, "Skip rows flagged as zero modes");

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Print the symmetric-space catalog");
  add_common(classify, ca.common, false);
  classify->add_option("--class", ca.cls, "Cartan class label");
  classify->add_flag("--all", ca.all, "All twelve classes");
  classify->add_option("--n", ca.n, "N for N-parametrized classes")->capture_default_str();
  classify->add_option("--p", ca.p, "p for (p, q) classes")->capture_default_str();
  classify->add_option("--q", ca.q, "q for (p, q) classes")->capture_default_str();
  classify->add_option("--format", ca.format, "text or csv")->capture_default_str();

  DmpkArgs da;
  auto* dmpk = app.add_subcommand("dmpk", "Conductance of a disordered wire");
  add_common(dmpk, da.common, true);
  dmpk->add_option("--n", da.n, "Channels")->capture_default_str();
  dmpk->add_option("--beta", da.beta, "Symmetry index")->capture_default_str();
  dmpk->add_option("--s", da.s, "Lengths L/l (increasing)")->delimiter(',')->capture_default_str();
  dmpk->add_option("--method", da.method, "exact, sde or slices")
      ->check(CLI::IsMember({"exact", "sde", "slices"}))
      ->capture_default_str();
  dmpk->add_option("--compare", da.compare, "Second method for an agreement verdict")
      ->check(CLI::IsMember({"exact", "sde", "slices"}));
  dmpk->add_option("--walkers", da.walkers, "SDE walkers or slice wires")->capture_default_str();
  dmpk->add_option("--dt", da.dt, "SDE base step")->capture_default_str();
  dmpk->add_option("--delta-s", da.delta_s, "Slice thickness")->capture_default_str();
  dmpk->add_option("--k-factor", da.k_factor, "Exact: k_max = factor sqrt(N/s)")
      ->capture_default_str();
  dmpk->add_option("--k-nodes", da.k_nodes, "Exact: k nodes (multiple of 16)")
      ->capture_default_str();
  dmpk->add_option("--histogram-bins", da.histogram_bins, "ln(1 + lambda) histogram bins");
  dmpk->add_option("--histogram-max", da.histogram_max, "Histogram upper edge (0 = auto)");
  dmpk->add_option("--histogram-out", da.histogram_out, "Histogram CSV (stdout when omitted)");

  CsArgs cs;
  auto* csc = app.add_subcommand("cs-check", "Calogero-Sutherland mapping convergence");
  add_common(csc, cs.common, false);
  csc->add_option("--family", cs.family, "A, B, C, D or BC")->capture_default_str();
  csc->add_option("--rank", cs.rank, "Rank")->capture_default_str();
  csc->add_option("--mo", cs.m_o, "Ordinary root multiplicity")->capture_default_str();
  csc->add_option("--ml", cs.m_l, "Long root multiplicity")->capture_default_str();
  csc->add_option("--ms", cs.m_s, "Short root multiplicity")->capture_default_str();
  csc->add_option("--potential", cs.potential, "I, II or III")->capture_default_str();
  csc->add_option("--a", cs.a, "Scale")->capture_default_str();
  csc->add_option("--steps", cs.h, "Grid steps h")->delimiter(',')->capture_default_str();

  Common lc;
  auto* lie = app.add_subcommand("lie-fixtures", "Killing-form and Casimir fixtures");
  add_common(lie, lc, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*sample) return run_sample(sa, sample);
    if (*stats) return run_stats(st, stats);
    if (*classify) return run_classify(ca, classify);
    if (*dmpk) return run_dmpk(da, dmpk);
    if (*csc) return run_cs(cs, csc);
    if (*lie) return run_lie(lc, lie);
  } catch (const CliError& e) {
    std::cerr << "symrmt: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "symrmt: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
