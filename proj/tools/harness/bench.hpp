#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace fxlt::harness {

inline constexpr const char* kBenchCsvHeader =
    "structure,n,c,k,phase,wall_nanos,peak_aux_bytes,final_bytes,success";
inline constexpr const char* kBoundaryCsvHeader = "k,n,c,trials,successes,success_fraction";
inline constexpr const char* kFprCsvHeader =
    "trials,positives,measured_fpr,theoretical_fpr,ratio";

// Per-entry bookkeeping assumed by the baseline memory estimates, on top of
// the key and value bytes themselves (64-bit libstdc++ layout).
inline constexpr std::size_t kHashmapEntryOverhead = 88;  // node link, cached hash, 2 strings, bucket
inline constexpr std::size_t kOrderedEntryOverhead = 96;  // rb-node header, 2 strings

struct BenchRecord {
  std::string structure;
  std::uint64_t n = 0;
  double c = 0.0;
  std::uint32_t k = 0;
  std::string phase;  // build | lookup
  double wallNanos = 0.0;  // total for build, mean per probe for lookup
  std::uint64_t peakAuxBytes = 0;
  std::uint64_t finalBytes = 0;
  bool success = false;
};

struct BenchOptions {
  std::string mode = "build";
  std::vector<std::uint64_t> nList;
  std::vector<std::string> structures;
  std::uint32_t k = 3;
  std::uint32_t q = 8;
  double c = 0.0;  // 0 selects a per-structure default
  std::uint64_t seed = 1;
  std::uint32_t keyBytes = 32;
  std::uint32_t valueWidth = 8;
  std::uint64_t probes = 1'000'000;
  unsigned threads = 0;
};

struct BoundaryOptions {
  std::uint32_t k = 4;
  std::vector<std::uint64_t> nList;
  double cMin = 1.0;
  double cMax = 1.2;
  double cStep = 0.01;
  std::uint32_t trials = 10;
  std::uint64_t seed = 1;
  bool coupled = true;
};

struct BoundaryRow {
  std::uint32_t k = 0;
  std::uint64_t n = 0;
  double c = 0.0;
  std::uint32_t trials = 0;
  std::uint32_t successes = 0;
};

bool isKnownStructure(const std::string& label);

/// Distinct fixed-width random keys, reproducible from seed.
std::vector<std::string> syntheticKeys(std::uint64_t n, std::uint32_t keyBytes, std::uint64_t seed);

/// Default c for a structure label when none is given.
double defaultC(const std::string& structure, std::uint32_t k);

std::vector<BenchRecord> runBench(const BenchOptions& options, std::ostream& log);

/// Inclusive grid min, min+step, ... <= max.
std::vector<double> cGrid(double cMin, double cMax, double cStep);

std::vector<BoundaryRow> runBoundary(const BoundaryOptions& options);

std::string toCsv(const BenchRecord& r);
std::string toCsv(const BoundaryRow& r);
BenchRecord parseBenchCsv(const std::string& row);

std::string formatDouble(double v);

}  // namespace fxlt::harness
