#include "kloosterlab/kloosterman.hpp"

#include <array>
#include <bit>
#include <complex>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kloosterlab/dft.hpp"
#include "kloosterlab/errors.hpp"
#include "kloosterlab/parallel.hpp"

namespace kloosterlab {

namespace {

constexpr std::uint64_t kNaiveLimit = 100000;  // naive table refused above this

constexpr char kCacheMagic[4] = {'K', 'L', 'T', 'B'};
constexpr std::uint32_t kCacheVersion = 1;

}  // namespace

double kloosterman_naive(std::int64_t a, std::int64_t b, PrimeModulus pm) {
  const std::uint64_t p = pm.value();
  const std::uint64_t ar = reduce_mod(a, p);
  const std::uint64_t br = reduce_mod(b, p);
  const std::vector<std::uint64_t> inv = inverse_table(p);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(p);
  double sum = 0.0;
  std::uint64_t ax = 0;
  for (std::uint64_t x = 1; x < p; ++x) {
    ax += ar;
    if (ax >= p) ax -= p;
    std::uint64_t idx = ax + mul_mod(br, inv[x], p);
    if (idx >= p) idx -= p;
    sum += std::cos(step * static_cast<double>(idx));
  }
  return sum;
}

namespace {

KloostermanTable build_table_naive(std::uint64_t b, PrimeModulus pm, unsigned threads) {
  const std::uint64_t p = pm.value();
  const std::vector<std::uint64_t> inv = inverse_table(p);

  std::vector<std::uint64_t> c(p, 0);  // c[x] = b*inv(x) mod p
  for (std::uint64_t x = 1; x < p; ++x) c[x] = mul_mod(b, inv[x], p);

  std::vector<double> cos_tab(p);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(p);
  for (std::uint64_t j = 0; j < p; ++j) cos_tab[j] = std::cos(step * static_cast<double>(j));

  std::vector<double> values(p, 0.0);
  parallel_chunks(
      p,
      [&](std::size_t begin, std::size_t end) {
        for (std::uint64_t a = begin; a < end; ++a) {
          double sum = 0.0;
          std::uint64_t ax = 0;
          for (std::uint64_t x = 1; x < p; ++x) {
            ax += a;
            if (ax >= p) ax -= p;
            std::uint64_t idx = ax + c[x];
            if (idx >= p) idx -= p;
            sum += cos_tab[idx];
          }
          values[a] = sum;
        }
      },
      threads);
  return KloostermanTable{pm, b, TableMethod::naive, std::move(values)};
}

KloostermanTable build_table_dft(std::uint64_t b, PrimeModulus pm) {
  const std::uint64_t p = pm.value();
  const std::vector<std::uint64_t> inv = inverse_table(p);

  // g[x] = e(b*inv(x)/p), g[0] = 0; then S(a,b;p) = sum_x g[x] e(ax/p).
  std::vector<std::complex<double>> g(p, {0.0, 0.0});
  const double step = 2.0 * std::numbers::pi / static_cast<double>(p);
  for (std::uint64_t x = 1; x < p; ++x) {
    std::uint64_t idx = mul_mod(b, inv[x], p);
    g[x] = std::polar(1.0, step * static_cast<double>(idx));
  }

  PrimeDft plan(p);
  std::vector<std::complex<double>> out(p);
  plan.transform(g, out);

  std::vector<double> values(p);
  for (std::uint64_t a = 0; a < p; ++a) values[a] = out[a].real();
  return KloostermanTable{pm, b, TableMethod::dft, std::move(values)};
}

}  // namespace

KloostermanTable build_table(std::int64_t b, PrimeModulus pm, TableMethod method,
                             unsigned threads) {
  const std::uint64_t p = pm.value();
  const std::uint64_t br = reduce_mod(b, p);
  if (br == 0) throw std::domain_error("build_table: twist b is divisible by p");
  if (method == TableMethod::naive) {
    if (p > kNaiveLimit)
      throw CostGuardError("build_table: naive method refused for p > " +
                           std::to_string(kNaiveLimit) + " (got p = " + std::to_string(p) + ")");
    return build_table_naive(br, pm, threads);
  }
  return build_table_dft(br, pm);
}

AngleTable build_angles(const KloostermanTable& table, std::int64_t h) {
  const std::uint64_t p = table.p.value();
  if (table.b != 1) throw std::domain_error("build_angles: base table must have twist b = 1");
  const std::uint64_t hr = reduce_mod(h, p);
  if (hr == 0) throw std::domain_error("build_angles: twist h is divisible by p");

  AngleTable angles{table.p, hr, std::vector<double>(p)};
  std::uint64_t idx = 0;
  for (std::uint64_t a = 0; a < p; ++a) {
    angles.theta[a] = std::acos(table.cos_ratio(idx));
    idx += hr;
    if (idx >= p) idx -= p;
  }
  return angles;
}

// ---- binary cache ----

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* b) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t get_u64(const unsigned char* b) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace

void save_table(const KloostermanTable& table, const std::filesystem::path& file) {
  std::string blob;
  blob.reserve(25 + table.values.size() * 8);
  blob.append(kCacheMagic, 4);
  put_u32(blob, kCacheVersion);
  put_u64(blob, table.p.value());
  put_u64(blob, table.b);
  blob.push_back(static_cast<char>(table.method));
  for (double v : table.values) put_u64(blob, std::bit_cast<std::uint64_t>(v));

  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_table: cannot open " + file.string());
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw std::runtime_error("save_table: write failed for " + file.string());
}

KloostermanTable load_table(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("load_table: cannot open " + file.string());
  std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (blob.size() < 25) throw std::runtime_error("load_table: truncated header");
  const auto* bytes = reinterpret_cast<const unsigned char*>(blob.data());
  if (std::memcmp(bytes, kCacheMagic, 4) != 0) throw std::runtime_error("load_table: bad magic");
  if (get_u32(bytes + 4) != kCacheVersion)
    throw std::runtime_error("load_table: unsupported version");
  const std::uint64_t p = get_u64(bytes + 8);
  const std::uint64_t b = get_u64(bytes + 16);
  const unsigned char method_byte = bytes[24];
  if (method_byte > 1) throw std::runtime_error("load_table: bad method byte");
  if (blob.size() != 25 + p * 8) throw std::runtime_error("load_table: size mismatch");

  PrimeModulus pm(p);
  std::vector<double> values(p);
  for (std::uint64_t a = 0; a < p; ++a)
    values[a] = std::bit_cast<double>(get_u64(bytes + 25 + a * 8));
  return KloostermanTable{pm, b, static_cast<TableMethod>(method_byte), std::move(values)};
}

std::filesystem::path table_cache_path(const std::filesystem::path& dir, std::uint64_t p,
                                       std::uint64_t b) {
  return dir / ("kloosterman_p" + std::to_string(p) + "_b" + std::to_string(b) + ".klt");
}

std::optional<KloostermanTable> load_cached_table(const std::filesystem::path& dir,
                                                  std::uint64_t p, std::uint64_t b) {
  const auto file = table_cache_path(dir, p, b);
  std::error_code ec;
  if (!std::filesystem::exists(file, ec) || ec) return std::nullopt;
  try {
    KloostermanTable table = load_table(file);
    if (table.p.value() != p || table.b != b) return std::nullopt;
    return table;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace kloosterlab
