#include "harness/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "harness/dataset.hpp"
#include "harness/filter_handle.hpp"

namespace fxlt::harness {
namespace {

using Clock = std::chrono::steady_clock;

// Keeps probe results observable so lookups are not optimized away.
volatile std::uint64_t g_sink = 0;

double nanosSince(Clock::time_point start) {
  const auto d = std::chrono::duration<double, std::nano>(Clock::now() - start).count();
  return std::max(d, 1.0);
}

struct FxltVariant {
  bool coupled = true;
  bool cached = false;
  bool legacy = false;
};

FxltVariant variantOf(const std::string& label) {
  if (label == "fxlt-cached") return {true, true, false};
  if (label == "fxlt-nocoupling") return {false, false, false};
  if (label == "fxlt-legacy") return {true, false, true};
  return {};
}

bool isFxlt(const std::string& label) { return label.rfind("fxlt", 0) == 0; }

// Probe order shared by every structure: a seeded permutation cycled to length.
std::vector<std::uint32_t> probeOrder(std::uint64_t n, std::uint64_t probes, std::uint64_t seed) {
  std::vector<std::uint32_t> order(n);
  for (std::uint64_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
  std::mt19937_64 rng(seed ^ 0x5bd1e995ull);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::uint32_t> out(probes);
  for (std::uint64_t i = 0; i < probes; ++i) out[i] = order[i % n];
  return out;
}

template <class Probe>
double meanProbeNanos(const std::vector<std::uint32_t>& order, unsigned threads, Probe&& probe,
                      std::ostream& log, const std::string& label) {
  if (threads <= 1) {
    std::uint64_t sink = 0;
    const auto start = Clock::now();
    for (const std::uint32_t i : order) sink += probe(i);
    const double total = nanosSince(start);
    g_sink = g_sink + sink;
    return total / static_cast<double>(order.size());
  }

  std::vector<double> means(threads, 0.0);
  std::vector<std::uint64_t> sinks(threads, 0);
  std::vector<std::thread> pool;
  const std::size_t chunk = (order.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      const std::size_t begin = std::min(order.size(), t * chunk);
      const std::size_t end = std::min(order.size(), begin + chunk);
      if (begin == end) return;
      std::uint64_t sink = 0;
      const auto start = Clock::now();
      for (std::size_t i = begin; i < end; ++i) sink += probe(order[i]);
      means[t] = nanosSince(start) / static_cast<double>(end - begin);
      sinks[t] = sink;
    });
  }
  for (auto& th : pool) th.join();
  for (const auto s : sinks) g_sink = g_sink + s;
  double sum = 0.0;
  unsigned used = 0;
  for (unsigned t = 0; t < threads; ++t) {
    if (means[t] > 0.0) {
      log << label << " thread " << t << " mean_nanos=" << formatDouble(means[t]) << "\n";
      sum += means[t];
      ++used;
    }
  }
  return used ? sum / used : 1.0;
}

BenchRecord benchFxlt(const BenchOptions& o, const std::string& label, std::uint64_t n,
                      const std::vector<std::string>& keys, const std::vector<std::string>& values,
                      std::ostream& log) {
  const FxltVariant v = variantOf(label);
  fxlt_build_config cfg;
  fxlt_build_config_init(&cfg);
  cfg.k = o.k;
  cfg.q = o.q;
  cfg.c = o.c > 0.0 ? o.c : defaultC(label, o.k);
  cfg.coupled = v.coupled;
  cfg.cache_hashes = v.cached;
  cfg.legacy_peel = v.legacy;
  cfg.value_width = o.valueWidth;
  cfg.master_seed = o.seed;

  BenchRecord r{label, n, cfg.c, o.k, o.mode, 0.0, 0, 0, false};
  fxlt_build_stats stats{};
  std::optional<Filter> filter;
  const auto start = Clock::now();
  try {
    filter.emplace(Filter::build(cfg, keys, values, &stats));
  } catch (const ApiError& e) {
    log << label << " n=" << n << ": " << e.what() << "\n";
  }
  const double buildNanos = nanosSince(start);
  r.peakAuxBytes = stats.peak_aux_bytes;
  if (!filter) {
    r.wallNanos = buildNanos;
    return r;
  }
  r.success = true;
  r.finalBytes = filter->info().core_bytes;
  if (o.mode == "build") {
    r.wallNanos = buildNanos;
    return r;
  }
  const auto order = probeOrder(n, std::max<std::uint64_t>(o.probes, n), o.seed);
  const Filter& f = *filter;
  r.wallNanos = meanProbeNanos(
      order, o.threads,
      [&](std::uint32_t i) -> std::uint64_t {
        const auto hit = f.lookup(keys[i]);
        return hit ? hit->size() + 1 : 0;
      },
      log, label);
  return r;
}

template <class Map>
BenchRecord benchStd(const BenchOptions& o, const std::string& label, std::uint64_t n,
                     const std::vector<std::string>& keys, const std::vector<std::string>& values,
                     std::size_t overhead, std::ostream& log) {
  BenchRecord r{label, n, 0.0, o.k, o.mode, 0.0, 0, 0, true};
  Map map;
  const auto start = Clock::now();
  if constexpr (requires { map.reserve(n); }) map.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) map.emplace(keys[i], values[i]);
  const double buildNanos = nanosSince(start);
  r.finalBytes = n * (o.keyBytes + o.valueWidth + overhead);
  if (o.mode == "build") {
    r.wallNanos = buildNanos;
    return r;
  }
  const auto order = probeOrder(n, std::max<std::uint64_t>(o.probes, n), o.seed);
  r.wallNanos = meanProbeNanos(
      order, o.threads,
      [&](std::uint32_t i) -> std::uint64_t {
        const auto it = map.find(keys[i]);
        return it == map.end() ? 0 : it->second.size() + 1;
      },
      log, label);
  return r;
}

}  // namespace

bool isKnownStructure(const std::string& label) {
  static const std::unordered_set<std::string> known = {
      "fxlt", "fxlt-cached", "fxlt-nocoupling", "fxlt-legacy", "hashmap-std", "ordered-std"};
  return known.contains(label);
}

double defaultC(const std::string& structure, std::uint32_t k) {
  if (structure == "fxlt-nocoupling") return k == 4 ? 1.35 : 1.25;
  return k == 4 ? 1.12 : 1.15;
}

std::vector<std::string> syntheticKeys(std::uint64_t n, std::uint32_t keyBytes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> keys;
  keys.reserve(n);
  std::unordered_set<std::string> seen;
  seen.reserve(n);
  while (keys.size() < n) {
    std::string key(keyBytes, '\0');
    for (std::uint32_t b = 0; b < keyBytes; b += 8) {
      const std::uint64_t word = rng();
      for (std::uint32_t j = 0; j < 8 && b + j < keyBytes; ++j) {
        key[b + j] = static_cast<char>((word >> (8 * j)) & 0xFF);
      }
    }
    if (seen.insert(key).second) keys.push_back(std::move(key));
  }
  return keys;
}

std::vector<BenchRecord> runBench(const BenchOptions& o, std::ostream& log) {
  if (o.mode != "build" && o.mode != "lookup") {
    throw std::invalid_argument("mode must be build or lookup");
  }
  for (const auto& s : o.structures) {
    if (!isKnownStructure(s)) throw std::invalid_argument("unknown structure '" + s + "'");
  }
  std::vector<BenchRecord> records;
  bool noted = false;
  for (const std::uint64_t n : o.nList) {
    const auto keys = syntheticKeys(n, o.keyBytes, o.seed);
    std::vector<std::string> values(n);
    for (std::uint64_t i = 0; i < n; ++i) values[i] = encodeLe(i, o.valueWidth);

    for (const auto& s : o.structures) {
      if (isFxlt(s)) {
        records.push_back(benchFxlt(o, s, n, keys, values, log));
      } else {
        if (!noted) {
          log << "note: hashmap-std is std::unordered_map and ordered-std is std::map; their "
                 "final_bytes are estimates n*(key+value+"
              << kHashmapEntryOverhead << ") and n*(key+value+" << kOrderedEntryOverhead << ")\n";
          noted = true;
        }
        if (s == "hashmap-std") {
          records.push_back(benchStd<std::unordered_map<std::string, std::string>>(
              o, s, n, keys, values, kHashmapEntryOverhead, log));
        } else {
          records.push_back(benchStd<std::map<std::string, std::string>>(
              o, s, n, keys, values, kOrderedEntryOverhead, log));
        }
      }
    }
  }
  return records;
}

std::vector<double> cGrid(double cMin, double cMax, double cStep) {
  if (!(cMin < cMax)) throw std::invalid_argument("c-min must be smaller than c-max");
  if (!(cStep > 0.0)) throw std::invalid_argument("c-step must be positive");
  const auto steps = static_cast<std::size_t>(std::floor((cMax - cMin) / cStep + 1e-9));
  std::vector<double> grid;
  for (std::size_t i = 0; i <= steps; ++i) {
    // Round to 1e-9 so printed grid values are clean.
    grid.push_back(std::round((cMin + static_cast<double>(i) * cStep) * 1e9) / 1e9);
  }
  return grid;
}

std::vector<BoundaryRow> runBoundary(const BoundaryOptions& o) {
  if (o.trials == 0) throw std::invalid_argument("trials must be positive");
  const auto grid = cGrid(o.cMin, o.cMax, o.cStep);
  std::vector<BoundaryRow> rows;
  for (const std::uint64_t n : o.nList) {
    const auto keys = syntheticKeys(n, 32, o.seed);
    const std::vector<std::string> values(n);
    for (const double c : grid) {
      BoundaryRow row{o.k, n, c, o.trials, 0};
      for (std::uint32_t t = 0; t < o.trials; ++t) {
        fxlt_build_config cfg;
        fxlt_build_config_init(&cfg);
        cfg.k = o.k;
        cfg.c = c;
        cfg.coupled = o.coupled;
        cfg.value_width = 0;
        cfg.max_retries = 1;
        cfg.master_seed = o.seed + 0x9e3779b97f4a7c15ull * (t + 1);
        try {
          Filter::build(cfg, keys, values);
          ++row.successes;
        } catch (const ApiError& e) {
          if (e.status() != FXLT_ERR_BUILD_EXHAUSTED) throw;
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string formatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string toCsv(const BenchRecord& r) {
  std::ostringstream out;
  out << r.structure << ',' << r.n << ',' << formatDouble(r.c) << ',' << r.k << ',' << r.phase
      << ',' << formatDouble(r.wallNanos) << ',' << r.peakAuxBytes << ',' << r.finalBytes << ','
      << (r.success ? 1 : 0);
  return out.str();
}

std::string toCsv(const BoundaryRow& r) {
  std::ostringstream out;
  out << r.k << ',' << r.n << ',' << formatDouble(r.c) << ',' << r.trials << ',' << r.successes
      << ',' << formatDouble(static_cast<double>(r.successes) / r.trials);
  return out.str();
}

BenchRecord parseBenchCsv(const std::string& row) {
  std::vector<std::string> f;
  std::stringstream ss(row);
  std::string field;
  while (std::getline(ss, field, ',')) f.push_back(field);
  if (f.size() != 9) throw std::invalid_argument("expected 9 fields: " + row);
  BenchRecord r;
  r.structure = f[0];
  r.n = std::stoull(f[1]);
  std::from_chars(f[2].data(), f[2].data() + f[2].size(), r.c);
  r.k = static_cast<std::uint32_t>(std::stoul(f[3]));
  r.phase = f[4];
  std::from_chars(f[5].data(), f[5].data() + f[5].size(), r.wallNanos);
  r.peakAuxBytes = std::stoull(f[6]);
  r.finalBytes = std::stoull(f[7]);
  r.success = f[8] == "1";
  return r;
}

}  // namespace fxlt::harness
