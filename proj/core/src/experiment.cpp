#include "kloosterlab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "kloosterlab/bounds.hpp"
#include "kloosterlab/errors.hpp"
#include "kloosterlab/kloosterman.hpp"
#include "kloosterlab/rng.hpp"
#include "kloosterlab/statistics.hpp"

#include "json.hpp"

namespace kloosterlab::cli {

namespace {

using report::Report;
using report::Row;

// ---- parameter plumbing ----

void validate_keys(const std::string& kind, const std::map<std::string, std::string>& params,
                   std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* name : allowed)
      if (key == name) ok = true;
    if (!ok) throw UsageError(kind + ": unknown parameter '" + key + "'");
  }
}

bool has(const std::map<std::string, std::string>& params, const std::string& key) {
  return params.find(key) != params.end();
}

std::string get_string(const std::map<std::string, std::string>& params, const std::string& key,
                       const std::string& fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::int64_t parse_i64(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("parameter '" + key + "': expected an integer, got '" + text + "'");
  }
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("parameter '" + key + "': expected a number, got '" + text + "'");
  }
}

std::int64_t get_i64(const std::map<std::string, std::string>& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw UsageError("missing required parameter '" + key + "'");
  return parse_i64(key, it->second);
}

std::int64_t get_i64_or(const std::map<std::string, std::string>& params, const std::string& key,
                        std::int64_t fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : parse_i64(key, it->second);
}

std::uint64_t get_u64(const std::map<std::string, std::string>& params, const std::string& key) {
  std::int64_t v = get_i64(params, key);
  if (v < 0) throw UsageError("parameter '" + key + "' must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

std::uint64_t get_u64_or(const std::map<std::string, std::string>& params, const std::string& key,
                         std::uint64_t fallback) {
  if (!has(params, key)) return fallback;
  return get_u64(params, key);
}

double get_double(const std::map<std::string, std::string>& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw UsageError("missing required parameter '" + key + "'");
  return parse_double(key, it->second);
}

bool get_bool_or(const std::map<std::string, std::string>& params, const std::string& key,
                 bool fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw UsageError("parameter '" + key + "': expected true/false, got '" + v + "'");
}

std::uint64_t get_prime(const std::map<std::string, std::string>& params, const std::string& key) {
  const std::uint64_t p = get_u64(params, key);
  if (!is_prime(p)) throw UsageError("parameter '" + key + "' = " + std::to_string(p) + " is not prime");
  return p;
}

TableMethod parse_method(const std::string& text) {
  if (text == "naive") return TableMethod::naive;
  if (text == "dft") return TableMethod::dft;
  throw UsageError("method must be 'naive' or 'dft', got '" + text + "'");
}

std::string cache_dir(const std::map<std::string, std::string>& params) {
  if (has(params, "cache")) return params.at("cache");
  if (const char* env = std::getenv("KLOOSTERLAB_CACHE")) return env;
  return {};
}

KloostermanTable obtain_table(std::uint64_t p, std::uint64_t b, TableMethod method,
                              const std::string& cache) {
  if (!cache.empty()) {
    if (auto cached = load_cached_table(cache, p, b)) return std::move(*cached);
  }
  KloostermanTable table = build_table(static_cast<std::int64_t>(b), PrimeModulus(p), method);
  if (!cache.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cache, ec);
    try {
      save_table(table, table_cache_path(cache, p, b));
    } catch (const std::exception&) {
      // a broken cache never fails the experiment
    }
  }
  return table;
}

// Full period (1..p-1) is the default scan for the distribution experiments.
IntervalSpec interval_or_full_period(const std::map<std::string, std::string>& params,
                                     std::uint64_t p) {
  IntervalSpec iv;
  iv.start = get_i64_or(params, "M", 0);
  iv.length = get_u64_or(params, "N", p - 1);
  return iv;
}

// ---- per-kind executors ----

Report run_table(const std::map<std::string, std::string>& params) {
  validate_keys("table", params, {"p", "b", "method", "cache"});
  const std::uint64_t p = get_prime(params, "p");
  const std::int64_t b = get_i64_or(params, "b", 1);
  const TableMethod method = parse_method(get_string(params, "method", "dft"));
  const std::uint64_t br = reduce_mod(b, p);
  if (br == 0) throw UsageError("table: twist b is divisible by p");
  if (method == TableMethod::naive && p > 100000)
    throw CostGuardError("table: naive method refused for p > 1e5");

  const KloostermanTable table = obtain_table(p, br, method, cache_dir(params));
  double sum = 0.0;
  double max_abs = 0.0;
  for (std::uint64_t a = 0; a < p; ++a) {
    sum += table.values[a];
    if (a >= 1) max_abs = std::max(max_abs, std::fabs(table.values[a]));
  }

  Report rep;
  rep.kind = "table";
  Row row;
  row.add("kind", std::string("table"))
      .add("p", p)
      .add("b", br)
      .add("method", std::string(table.method == TableMethod::naive ? "naive" : "dft"))
      .add("value0", table.values[0])
      .add("sum", sum)
      .add("max_abs", max_abs)
      .add("weil_bound", weil_bound(p))
      .add("ratio", bound_ratio(max_abs, weil_bound(p)));
  rep.rows.push_back(std::move(row));
  return rep;
}

Report run_vst(const std::map<std::string, std::string>& params) {
  validate_keys("vst", params, {"p", "k", "cache"});
  const std::uint64_t p = get_prime(params, "p");
  const auto k = static_cast<unsigned>(get_u64(params, "k"));
  const KloostermanTable table = obtain_table(p, 1, TableMethod::dft, cache_dir(params));
  const BoundReport bound = full_period_sum(table, k);

  Report rep;
  rep.kind = "vst";
  Row row;
  row.add("kind", std::string("vst"))
      .add("p", p)
      .add("k", static_cast<std::uint64_t>(k))
      .add("observed", bound.observed)
      .add("bound", bound.bound)
      .add("ratio", bound.ratio);
  rep.rows.push_back(std::move(row));
  return rep;
}

Row interval_row(std::uint64_t p, std::uint64_t h, unsigned k, const IntervalSpec& iv,
                 double observed) {
  const unsigned r_star = omega_r_star(p, iv.length);
  const double bound = static_cast<double>(k) * k * omega_r(p, iv.length, r_star);
  Row row;
  row.add("kind", std::string("interval"))
      .add("p", p)
      .add("h", h)
      .add("k", static_cast<std::uint64_t>(k))
      .add("M", iv.start)
      .add("N", iv.length)
      .add("observed", observed)
      .add("bound_omega_r", bound)
      .add("r_star", static_cast<std::uint64_t>(r_star))
      .add("ratio", bound_ratio(std::fabs(observed), bound));
  return row;
}

Report run_interval(const std::map<std::string, std::string>& params) {
  validate_keys("interval", params, {"p", "h", "k", "M", "N", "samples", "seed", "cache"});
  const std::uint64_t p = get_prime(params, "p");
  const auto k = static_cast<unsigned>(get_u64(params, "k"));
  const std::uint64_t n = get_u64(params, "N");
  const KloostermanTable table = obtain_table(p, 1, TableMethod::dft, cache_dir(params));

  Report rep;
  rep.kind = "interval";
  if (has(params, "samples")) {
    if (has(params, "h") || has(params, "M"))
      throw UsageError("interval: 'samples' replaces fixed 'h'/'M'");
    const std::uint64_t samples = get_u64(params, "samples");
    const std::uint64_t seed = get_u64_or(params, "seed", 42);
    rep.seed = seed;
    SplitMix64 rng(seed);
    for (std::uint64_t i = 0; i < samples; ++i) {
      const std::uint64_t h = 1 + rng.below(p - 1);
      const auto m = static_cast<std::int64_t>(rng.below(p));
      IntervalSpec iv{m, n};
      const double value = interval_sum(table, static_cast<std::int64_t>(h), iv, k).value;
      rep.rows.push_back(interval_row(p, h, k, iv, value));
    }
  } else {
    const std::uint64_t h = get_u64_or(params, "h", 1);
    IntervalSpec iv{get_i64_or(params, "M", 0), n};
    const double value = interval_sum(table, static_cast<std::int64_t>(h), iv, k).value;
    rep.rows.push_back(interval_row(p, h, k, iv, value));
  }
  return rep;
}

Report run_moments(const std::map<std::string, std::string>& params) {
  validate_keys("moments", params, {"p", "h", "M", "N", "alpha", "signed", "cache"});
  const std::uint64_t p = get_prime(params, "p");
  const double alpha = get_double(params, "alpha");
  const bool signed_variant = get_bool_or(params, "signed", false);
  const std::uint64_t h = get_u64_or(params, "h", 1);
  const IntervalSpec iv = interval_or_full_period(params, p);
  const KloostermanTable table = obtain_table(p, 1, TableMethod::dft, cache_dir(params));

  MomentReport moment;
  if (signed_variant) {
    if (alpha < 1.0 || alpha != std::floor(alpha))
      throw UsageError("moments: the signed variant requires integer alpha >= 1");
    moment = signed_moment(table, static_cast<std::int64_t>(h), iv,
                           static_cast<unsigned>(alpha));
  } else {
    moment = abs_moment(table, static_cast<std::int64_t>(h), iv, alpha);
  }

  Report rep;
  rep.kind = "moments";
  Row row;
  row.add("kind", std::string("moments"))
      .add("p", p)
      .add("h", h)
      .add("M", iv.start)
      .add("N", iv.length)
      .add("alpha", alpha)
      .add("variant", std::string(signed_variant ? "signed" : "abs"))
      .add("observed", moment.observed)
      .add("main_term", moment.main_term)
      .add("ratio", moment.ratio)
      .add("error", moment.error)
      .add("error_scale", moment.error_scale)
      .add("a0_hits", moment.zero_index_hits);
  rep.rows.push_back(std::move(row));
  return rep;
}

Report run_signs(const std::map<std::string, std::string>& params) {
  validate_keys("signs", params, {"p", "h", "M", "N", "cache"});
  const std::uint64_t p = get_prime(params, "p");
  const std::uint64_t h = get_u64_or(params, "h", 1);
  const IntervalSpec iv = interval_or_full_period(params, p);
  const KloostermanTable table = obtain_table(p, 1, TableMethod::dft, cache_dir(params));
  const SignCountReport counts = sign_count(table, static_cast<std::int64_t>(h), iv);

  Report rep;
  rep.kind = "signs";
  Row row;
  row.add("kind", std::string("signs"))
      .add("p", p)
      .add("h", h)
      .add("M", iv.start)
      .add("N", iv.length)
      .add("positives", counts.positives)
      .add("negatives", counts.negatives)
      .add("zero_bucket", counts.zero_bucket)
      .add("main_term", counts.main_term)
      .add("error", static_cast<double>(counts.positives) - counts.main_term);
  rep.rows.push_back(std::move(row));
  return rep;
}

Report run_extremes(const std::map<std::string, std::string>& params) {
  validate_keys("extremes", params, {"p", "h", "M", "N", "delta", "cache"});
  const std::uint64_t p = get_prime(params, "p");
  const double delta = get_double(params, "delta");
  const std::uint64_t h = get_u64_or(params, "h", 1);
  const IntervalSpec iv = interval_or_full_period(params, p);
  const KloostermanTable table = obtain_table(p, 1, TableMethod::dft, cache_dir(params));

  Report rep;
  rep.kind = "extremes";
  auto add_row = [&](const char* variant, const CountReport& count) {
    Row row;
    row.add("kind", std::string("extremes"))
        .add("p", p)
        .add("h", h)
        .add("M", iv.start)
        .add("N", iv.length)
        .add("delta", delta)
        .add("variant", std::string(variant))
        .add("observed", count.observed)
        .add("main_term", count.main_term)
        .add("ratio", bound_ratio(static_cast<double>(count.observed), count.main_term));
    rep.rows.push_back(std::move(row));
  };
  add_row("small", small_value_count(table, static_cast<std::int64_t>(h), iv, delta));
  add_row("large", large_value_count(table, static_cast<std::int64_t>(h), iv, delta));
  return rep;
}

Report run_cdf(const std::map<std::string, std::string>& params) {
  validate_keys("cdf", params, {"p", "h", "M", "N", "cache"});
  const std::uint64_t p = get_prime(params, "p");
  const std::uint64_t h = get_u64_or(params, "h", 1);
  const IntervalSpec iv = interval_or_full_period(params, p);
  const KloostermanTable table = obtain_table(p, 1, TableMethod::dft, cache_dir(params));
  const double disc = empirical_cdf_discrepancy(table, static_cast<std::int64_t>(h), iv);
  const double scale = 10.0 * std::pow(static_cast<double>(p), -0.25);

  Report rep;
  rep.kind = "cdf";
  Row row;
  row.add("kind", std::string("cdf"))
      .add("p", p)
      .add("h", h)
      .add("M", iv.start)
      .add("N", iv.length)
      .add("grid", static_cast<std::uint64_t>(4096))
      .add("discrepancy", disc)
      .add("bound", scale)
      .add("ratio", bound_ratio(disc, scale));
  rep.rows.push_back(std::move(row));
  return rep;
}

MultiSumSpec parse_multisum_spec(const std::map<std::string, std::string>& params,
                                 std::uint64_t /*p*/) {
  MultiSumSpec spec;
  // polys = "a:b|a:b|...", orders = "k|k|...".
  std::stringstream polys(get_string(params, "polys", ""));
  std::string item;
  while (std::getline(polys, item, '|')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw UsageError("multisum: polys entries must look like 'scale:offset'");
    spec.polys.push_back({parse_i64("polys", item.substr(0, colon)),
                          parse_i64("polys", item.substr(colon + 1))});
  }
  std::stringstream orders(get_string(params, "orders", ""));
  while (std::getline(orders, item, '|')) {
    const std::int64_t k = parse_i64("orders", item);
    if (k < 0) throw UsageError("multisum: orders must be nonnegative");
    spec.orders.push_back(static_cast<unsigned>(k));
  }
  if (spec.polys.empty() || spec.polys.size() != spec.orders.size())
    throw UsageError("multisum: polys and orders must be nonempty lists of equal length");
  spec.twist = get_i64_or(params, "h", 0);
  return spec;
}

Report run_multisum(const std::map<std::string, std::string>& params) {
  validate_keys("multisum", params, {"p", "polys", "orders", "h", "cache"});
  const std::uint64_t p = get_prime(params, "p");
  if (!has(params, "polys") || !has(params, "orders"))
    throw UsageError("multisum: 'polys' and 'orders' are required");
  const MultiSumSpec spec = parse_multisum_spec(params, p);
  const KloostermanTable table = obtain_table(p, 1, TableMethod::dft, cache_dir(params));
  const MultiSumReport result = multilinear_sum(table, spec);

  Report rep;
  rep.kind = "multisum";
  Row row;
  row.add("kind", std::string("multisum"))
      .add("p", p)
      .add("s", static_cast<std::uint64_t>(spec.polys.size()))
      .add("polys", get_string(params, "polys", ""))
      .add("orders", get_string(params, "orders", ""))
      .add("h", spec.twist)
      .add("value_re", result.value.real())
      .add("value_im", result.value.imag())
      .add("abs", std::abs(result.value))
      .add("excluded", result.excluded)
      .add("distinct_applies", result.distinct_applies)
      .add("distinct_bound", result.distinct.bound)
      .add("distinct_ratio", result.distinct.ratio)
      .add("grouped_applies", result.grouped_applies)
      .add("grouped_bound", result.grouped.bound)
      .add("grouped_ratio", result.grouped.ratio);
  rep.rows.push_back(std::move(row));
  return rep;
}

Report run_gm(const std::map<std::string, std::string>& params) {
  validate_keys("gm", params, {"p", "m", "h", "r", "k", "cache"});
  const std::uint64_t p = get_prime(params, "p");
  WindowMomentSpec spec;
  spec.window = get_u64(params, "h");
  spec.order = static_cast<unsigned>(get_u64(params, "r"));
  spec.multiplier = get_i64_or(params, "m", 1);
  spec.cheb_order = static_cast<unsigned>(get_u64(params, "k"));
  const KloostermanTable table = obtain_table(p, 1, TableMethod::dft, cache_dir(params));

  const double moment = window_moment(table, spec);
  const double max_moment = window_max_moment(table, spec);
  const WindowMomentBounds bounds = window_moment_bounds(p, spec.window, spec.order, spec.cheb_order);

  Report rep;
  rep.kind = "gm";
  Row row;
  row.add("kind", std::string("gm"))
      .add("p", p)
      .add("m", spec.multiplier)
      .add("h", spec.window)
      .add("r", static_cast<std::uint64_t>(spec.order))
      .add("k", static_cast<std::uint64_t>(spec.cheb_order))
      .add("moment", moment)
      .add("moment_bound", bounds.moment)
      .add("moment_ratio", bound_ratio(moment, bounds.moment))
      .add("max_moment", max_moment)
      .add("max_moment_bound", bounds.max_moment)
      .add("max_moment_ratio", bound_ratio(max_moment, bounds.max_moment));
  rep.rows.push_back(std::move(row));
  return rep;
}

Report run_horizontal(const std::map<std::string, std::string>& params) {
  validate_keys("horizontal", params, {"x", "h", "k", "M", "N"});
  const std::uint64_t x = get_u64(params, "x");
  const std::uint64_t h = get_u64_or(params, "h", 1);
  const auto k = static_cast<unsigned>(get_u64_or(params, "k", 1));
  IntervalSpec iv{get_i64_or(params, "M", 0), get_u64(params, "N")};
  const HorizontalReport result = horizontal_scan(iv, x, static_cast<std::int64_t>(h), k);

  Report rep;
  rep.kind = "horizontal";
  Row row;
  row.add("kind", std::string("horizontal"))
      .add("x", x)
      .add("h", h)
      .add("k", static_cast<std::uint64_t>(k))
      .add("M", iv.start)
      .add("N", iv.length)
      .add("primes", result.prime_count)
      .add("u_sum", result.u_sum)
      .add("positive_pairs", result.positive_pairs)
      .add("negative_pairs", result.negative_pairs)
      .add("zero_pairs", result.zero_pairs)
      .add("sign_main_term", result.sign_main_term)
      .add("sign_error", static_cast<double>(result.positive_pairs) - result.sign_main_term);
  rep.rows.push_back(std::move(row));
  return rep;
}

Report run_bounds(const std::map<std::string, std::string>& params) {
  validate_keys("bounds", params, {"p", "N", "k", "h", "r", "orders"});
  const std::uint64_t p = get_prime(params, "p");

  Report rep;
  rep.kind = "bounds";
  auto add = [&](const std::string& name, report::Value n_value, report::Value h_value,
                 report::Value r_value, report::Value k_value, report::Value orders_value,
                 double value) {
    Row row;
    row.add("kind", std::string("bounds"))
        .add("name", name)
        .add("p", p)
        .add("N", std::move(n_value))
        .add("h", std::move(h_value))
        .add("r", std::move(r_value))
        .add("k", std::move(k_value))
        .add("orders", std::move(orders_value))
        .add("value", value);
    rep.rows.push_back(std::move(row));
  };
  const report::Value none{};

  add("weil", none, none, none, none, none, weil_bound(p));

  if (has(params, "N")) {
    const std::uint64_t n = get_u64(params, "N");
    for (unsigned r = 1; r <= 8; ++r)
      add("omega_r", n, none, static_cast<std::uint64_t>(r), none, none, omega_r(p, n, r));
    const unsigned r_star = omega_r_star(p, n);
    add("omega_r_min", n, none, static_cast<std::uint64_t>(r_star), none, none,
        omega_r(p, n, r_star));
  }
  if (has(params, "k")) {
    const auto k = static_cast<unsigned>(get_u64(params, "k"));
    add("katz", none, none, none, static_cast<std::uint64_t>(k), none, katz_bound(p, k));
    if (has(params, "h") && has(params, "r")) {
      const std::uint64_t h = get_u64(params, "h");
      const auto r = static_cast<unsigned>(get_u64(params, "r"));
      const WindowMomentBounds wb = window_moment_bounds(p, h, r, k);
      add("window_moment", none, h, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(k),
          none, wb.moment);
      add("window_max_moment", none, h, static_cast<std::uint64_t>(r),
          static_cast<std::uint64_t>(k), none, wb.max_moment);
      add("partition_max_moment", none, h, static_cast<std::uint64_t>(r),
          static_cast<std::uint64_t>(k), none, partition_max_moment_bound(p, h, r, k));
    }
  }
  if (has(params, "orders")) {
    std::vector<unsigned> orders;
    std::stringstream ss(params.at("orders"));
    std::string item;
    while (std::getline(ss, item, '|'))
      orders.push_back(static_cast<unsigned>(parse_i64("orders", item)));
    add("multilinear_distinct", none, none, none, none, params.at("orders"),
        multilinear_distinct_bound(p, orders));
    add("multilinear_grouped", none, none, none, none, params.at("orders"),
        multilinear_grouped_bound(p, orders));
  }
  return rep;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::filesystem::path file(path);
  if (file.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
  }
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

void emit_error_record(int exit_code, const std::string& kind, const std::string& message) {
  nlohmann::ordered_json record;
  record["error"]["exit"] = exit_code;
  record["error"]["kind"] = kind;
  record["error"]["message"] = message;
  std::cerr << record.dump() << "\n";
}

// Sort key for aggregate reports: (kind, p-or-x, canonical params).
std::string sort_key(const ExperimentConfig& config) {
  std::uint64_t p = 0;
  for (const char* key : {"p", "x"}) {
    auto it = config.params.find(key);
    if (it != config.params.end()) {
      try {
        p = std::stoull(it->second);
      } catch (const std::exception&) {
      }
      break;
    }
  }
  char p_part[32];
  std::snprintf(p_part, sizeof p_part, "%020llu", static_cast<unsigned long long>(p));
  std::string key = kind_name(config.kind) + "|" + p_part + "|";
  for (const auto& [k, v] : config.params) key += k + "=" + v + ";";
  return key;
}

}  // namespace

Kind parse_kind(const std::string& name) {
  if (name == "table") return Kind::table;
  if (name == "vst") return Kind::vst;
  if (name == "interval") return Kind::interval;
  if (name == "moments") return Kind::moments;
  if (name == "signs") return Kind::signs;
  if (name == "extremes") return Kind::extremes;
  if (name == "cdf") return Kind::cdf;
  if (name == "multisum") return Kind::multisum;
  if (name == "gm") return Kind::gm;
  if (name == "horizontal") return Kind::horizontal;
  if (name == "bounds") return Kind::bounds;
  throw UsageError("unknown experiment kind '" + name + "'");
}

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::table: return "table";
    case Kind::vst: return "vst";
    case Kind::interval: return "interval";
    case Kind::moments: return "moments";
    case Kind::signs: return "signs";
    case Kind::extremes: return "extremes";
    case Kind::cdf: return "cdf";
    case Kind::multisum: return "multisum";
    case Kind::gm: return "gm";
    case Kind::horizontal: return "horizontal";
    case Kind::bounds: return "bounds";
  }
  return "unknown";
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw UsageError("unknown format '" + name + "' (expected csv or json)");
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  ExperimentConfig config;
  bool have_kind = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string{};
      const auto e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(line_no) + ": empty key");
    if (key == "kind") {
      config.kind = parse_kind(value);
      have_kind = true;
    } else if (key == "output") {
      config.output = value;
    } else if (key == "format") {
      config.format = parse_format(value);
    } else {
      config.params[key] = value;
    }
  }
  if (!have_kind) throw UsageError(path + ": missing 'kind'");
  return config;
}

report::Report execute(const ExperimentConfig& config) {
  switch (config.kind) {
    case Kind::table: return run_table(config.params);
    case Kind::vst: return run_vst(config.params);
    case Kind::interval: return run_interval(config.params);
    case Kind::moments: return run_moments(config.params);
    case Kind::signs: return run_signs(config.params);
    case Kind::extremes: return run_extremes(config.params);
    case Kind::cdf: return run_cdf(config.params);
    case Kind::multisum: return run_multisum(config.params);
    case Kind::gm: return run_gm(config.params);
    case Kind::horizontal: return run_horizontal(config.params);
    case Kind::bounds: return run_bounds(config.params);
  }
  throw UsageError("unhandled experiment kind");
}

namespace {

RunOutcome classify_and_record(const std::exception& e, bool emit) {
  int code = 1;
  std::string kind = "internal";
  if (dynamic_cast<const UsageError*>(&e) != nullptr) {
    code = 2;
    kind = "usage";
  } else if (dynamic_cast<const CostGuardError*>(&e) != nullptr) {
    code = 3;
    kind = "cost_guard";
  } else if (dynamic_cast<const std::domain_error*>(&e) != nullptr ||
             dynamic_cast<const std::invalid_argument*>(&e) != nullptr) {
    code = 2;
    kind = "usage";
  }
  if (emit) emit_error_record(code, kind, e.what());
  return {code, e.what()};
}

}  // namespace

RunOutcome run(const ExperimentConfig& config) {
  try {
    const report::Report rep = execute(config);
    const std::string text =
        config.format == Format::csv ? report::to_csv(rep) : report::to_json(rep);
    write_text(config.output, text);
    return {0, ""};
  } catch (const std::exception& e) {
    return classify_and_record(e, true);
  }
}

RunOutcome sweep(const std::vector<ExperimentConfig>& configs, unsigned workers,
                 const std::string& aggregate_output, Format aggregate_format) {
  // Validate outputs before any computation starts.
  std::set<std::string> outputs;
  for (const auto& config : configs) {
    if (config.output.empty())
      return classify_and_record(UsageError("sweep: every config needs an output path"), true);
    if (!outputs.insert(config.output).second)
      return classify_and_record(UsageError("sweep: duplicate output path " + config.output), true);
    if (!aggregate_output.empty() && config.output == aggregate_output)
      return classify_and_record(
          UsageError("sweep: config output collides with the aggregate path"), true);
  }

  // Deterministic processing order regardless of scheduling.
  std::vector<std::size_t> order(configs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const std::string ka = sort_key(configs[a]);
    const std::string kb = sort_key(configs[b]);
    return ka != kb ? ka < kb : a < b;
  });

  struct Slot {
    bool ok = false;
    report::Report report;
    RunOutcome outcome;
  };
  std::vector<Slot> slots(configs.size());

  if (workers == 0) workers = 1;
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= configs.size()) break;
      const ExperimentConfig& config = configs[order[i]];
      Slot& slot = slots[order[i]];
      try {
        slot.report = execute(config);
        const std::string text =
            config.format == Format::csv ? report::to_csv(slot.report) : report::to_json(slot.report);
        write_text(config.output, text);
        slot.ok = true;
      } catch (const std::exception& e) {
        slot.outcome = classify_and_record(e, false);
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<report::Report> ordered;
  ordered.reserve(configs.size());
  int exit_code = 0;
  std::string message;
  for (std::size_t i : order) {
    if (slots[i].ok) {
      ordered.push_back(slots[i].report);
    } else {
      exit_code = std::max(exit_code, slots[i].outcome.exit_code);
      if (message.empty()) message = slots[i].outcome.message;
    }
  }

  try {
    const std::string text = aggregate_format == Format::csv ? report::aggregate_csv(ordered)
                                                             : report::aggregate_json(ordered);
    write_text(aggregate_output, text);
  } catch (const std::exception& e) {
    return classify_and_record(e, true);
  }
  if (exit_code != 0) emit_error_record(exit_code, "sweep_child", message);
  return {exit_code, message};
}

}  // namespace kloosterlab::cli
