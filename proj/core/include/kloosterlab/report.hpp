#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace kloosterlab::report {

// Deterministic numeric formatting for report files: fixed six decimals for
// mid-range magnitudes (guaranteeing >= 6 significant digits), scientific
// notation outside that range. glibc's conversion is correctly rounded
// (round-half-even), so identical inputs give identical bytes.
std::string format_number(double v);

using Value = std::variant<std::monostate, std::int64_t, std::uint64_t, double, std::string, bool>;

std::string value_to_csv(const Value& v);

struct Row {
  std::vector<std::pair<std::string, Value>> fields;

  Row& add(std::string name, Value v) {
    fields.emplace_back(std::move(name), std::move(v));
    return *this;
  }
};

// One experiment's output: uniformly-shaped rows plus the seed used for any
// sampled sweep (recorded in the report header).
struct Report {
  std::string kind;
  std::optional<std::uint64_t> seed;
  std::vector<Row> rows;
};

std::string to_csv(const Report& report);
std::string to_json(const Report& report);

// Aggregates for sweep runs; blocks appear in the order given.
std::string aggregate_csv(std::span<const Report> reports);
std::string aggregate_json(std::span<const Report> reports);

}  // namespace kloosterlab::report
