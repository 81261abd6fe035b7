#include "kloosterlab/report.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace kloosterlab::report {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  if (v == 0.0) return "0.000000";
  char buf[64];
  const double a = std::fabs(v);
  if (a >= 0.1 && a < 1e9)
    std::snprintf(buf, sizeof buf, "%.6f", v);
  else
    std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string value_to_csv(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(std::uint64_t x) const { return std::to_string(x); }
    std::string operator()(double x) const { return format_number(x); }
    std::string operator()(const std::string& x) const { return x; }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
  };
  return std::visit(Visitor{}, v);
}

std::string to_csv(const Report& report) {
  std::string out;
  if (report.seed) out += "# seed=" + std::to_string(*report.seed) + "\n";
  if (report.rows.empty()) return out;
  const Row& head = report.rows.front();
  for (std::size_t i = 0; i < head.fields.size(); ++i) {
    if (i) out += ',';
    out += head.fields[i].first;
  }
  out += '\n';
  for (const Row& row : report.rows) {
    for (std::size_t i = 0; i < row.fields.size(); ++i) {
      if (i) out += ',';
      out += value_to_csv(row.fields[i].second);
    }
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::ordered_json report_to_json_object(const Report& report) {
  nlohmann::ordered_json obj;
  obj["kind"] = report.kind;
  if (report.seed) obj["seed"] = *report.seed;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const Row& row : report.rows) {
    nlohmann::ordered_json r;
    for (const auto& [name, value] : row.fields) {
      if (std::holds_alternative<std::monostate>(value))
        r[name] = nullptr;
      else if (const auto* i = std::get_if<std::int64_t>(&value))
        r[name] = *i;
      else if (const auto* u = std::get_if<std::uint64_t>(&value))
        r[name] = *u;
      else if (const auto* d = std::get_if<double>(&value))
        r[name] = *d;
      else if (const auto* s = std::get_if<std::string>(&value))
        r[name] = *s;
      else if (const auto* b = std::get_if<bool>(&value))
        r[name] = *b;
    }
    rows.push_back(std::move(r));
  }
  obj["rows"] = std::move(rows);
  return obj;
}

}  // namespace

std::string to_json(const Report& report) {
  return report_to_json_object(report).dump(2) + "\n";
}

std::string aggregate_csv(std::span<const Report> reports) {
  std::string out;
  for (const Report& report : reports) {
    out += to_csv(report);
  }
  return out;
}

std::string aggregate_json(std::span<const Report> reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Report& report : reports) arr.push_back(report_to_json_object(report));
  return arr.dump(2) + "\n";
}

}  // namespace kloosterlab::report
