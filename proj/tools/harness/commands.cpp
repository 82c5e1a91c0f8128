#include "harness/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "harness/bench.hpp"
#include "harness/dataset.hpp"
#include "harness/filter_handle.hpp"

namespace fxlt::harness {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint64_t> parseNList(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    // Accept 1e5-style shorthand.
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("bad n-list entry '" + item + "'");
    }
    if (used != item.size() || v < 1 || v != std::floor(v)) {
      throw UsageError("bad n-list entry '" + item + "'");
    }
    out.push_back(static_cast<std::uint64_t>(v));
  }
  if (out.empty()) throw UsageError("n-list is empty");
  return out;
}

std::vector<std::string> parseLabels(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!isKnownStructure(item)) throw UsageError("unknown structure '" + item + "'");
    out.push_back(item);
  }
  if (out.empty()) throw UsageError("structures list is empty");
  return out;
}

std::ofstream openCsv(const std::string& path) {
  std::ofstream csv(path, std::ios::trunc);
  if (!csv) throw DataError(DataErrorKind::Io, 0, "cannot open " + path);
  return csv;
}

int exitFor(const ApiError& e) {
  switch (e.status()) {
    case FXLT_ERR_BUILD_EXHAUSTED: return kExitBuild;
    case FXLT_ERR_INVALID_ARGUMENT: return kExitUsage;
    default: return kExitData;
  }
}

struct BuildFlags {
  std::string input, output;
  std::uint32_t k = 3, q = 8, valueWidth = 8, maxRetries = 100;
  double c = 1.15;
  bool noCoupling = false, cacheHashes = false;
  std::uint64_t seed = 0;
};

int cmdBuild(const BuildFlags& f, std::ostream& out) {
  const KvDataset data = ingestTsv(f.input, f.valueWidth);
  fxlt_build_config cfg;
  fxlt_build_config_init(&cfg);
  cfg.k = f.k;
  cfg.q = f.q;
  cfg.c = f.c;
  cfg.coupled = f.noCoupling ? 0 : 1;
  cfg.cache_hashes = f.cacheHashes ? 1 : 0;
  cfg.value_width = f.valueWidth;
  cfg.master_seed = f.seed;
  cfg.max_retries = f.maxRetries;

  fxlt_build_stats stats{};
  const Filter filter = Filter::build(cfg, data.keys, data.values, &stats);
  filter.save(f.output);
  const fxlt_info& info = filter.info();
  out << "n=" << info.n << "\n"
      << "m=" << info.m << "\n"
      << "attempts=" << stats.attempts << "\n"
      << "slots_per_key=" << (info.n ? formatDouble(info.slots_per_key) : "n/a") << "\n"
      << "bytes_written=" << info.serialized_bytes << "\n";
  return kExitOk;
}

struct QueryFlags {
  std::string filter, key, keysFile;
};

int cmdQuery(const QueryFlags& f, std::ostream& out) {
  const Filter filter = Filter::load(f.filter);
  auto answer = [&](std::string_view key) {
    if (const auto hit = filter.lookup(key)) {
      out << "FOUND " << formatValue(*hit) << "\n";
    } else {
      out << "NOT_FOUND\n";
    }
  };
  if (!f.keysFile.empty()) {
    std::ifstream in(f.keysFile, std::ios::binary);
    if (!in) throw DataError(DataErrorKind::Io, 0, "cannot open " + f.keysFile);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      answer(line);
    }
  } else {
    answer(f.key);
  }
  return kExitOk;
}

struct FprFlags {
  std::string filter, exclude, csv;
  std::uint64_t trials = 0, seed = 1;
  std::uint32_t valueWidth = 8;
};

int cmdFpr(const FprFlags& f, std::ostream& out) {
  if (f.trials == 0) throw UsageError("trials must be positive");
  const Filter filter = Filter::load(f.filter);
  std::unordered_set<std::string> excluded;
  if (!f.exclude.empty()) {
    KvDataset data = ingestTsv(f.exclude, filter.info().value_width);
    excluded.insert(std::make_move_iterator(data.keys.begin()),
                    std::make_move_iterator(data.keys.end()));
  }

  std::mt19937_64 rng(f.seed);
  std::uint64_t positives = 0;
  std::uint64_t done = 0;
  std::string key(32, '\0');
  while (done < f.trials) {
    for (std::size_t b = 0; b < key.size(); b += 8) {
      const std::uint64_t word = rng();
      for (std::size_t j = 0; j < 8; ++j) key[b + j] = static_cast<char>((word >> (8 * j)) & 0xFF);
    }
    if (!excluded.empty() && excluded.contains(key)) continue;
    ++done;
    if (filter.lookup(key)) ++positives;
  }

  double theoretical = 0.0;
  fxlt_fpr_theoretical(filter.info().k, filter.info().q, &theoretical);
  const double measured = static_cast<double>(positives) / static_cast<double>(f.trials);
  const double ratio = measured / theoretical;
  out << "trials=" << f.trials << "\n"
      << "positives=" << positives << "\n"
      << "measured_fpr=" << formatDouble(measured) << "\n"
      << "theoretical_fpr=" << formatDouble(theoretical) << "\n"
      << "ratio=" << formatDouble(ratio) << "\n";
  if (!f.csv.empty()) {
    auto csv = openCsv(f.csv);
    csv << kFprCsvHeader << "\n"
        << f.trials << ',' << positives << ',' << formatDouble(measured) << ','
        << formatDouble(theoretical) << ',' << formatDouble(ratio) << "\n";
  }
  return kExitOk;
}

struct BenchFlags {
  BenchOptions options;
  std::string nList, structures, csv;
};

int cmdBench(BenchFlags& f, std::ostream& out, std::ostream& err) {
  f.options.nList = parseNList(f.nList);
  f.options.structures = parseLabels(f.structures);
  auto csv = openCsv(f.csv);
  csv << kBenchCsvHeader << "\n";
  for (const auto& record : runBench(f.options, err)) {
    csv << toCsv(record) << "\n";
    out << toCsv(record) << "\n";
  }
  return kExitOk;
}

struct BoundaryFlags {
  BoundaryOptions options;
  std::string nList, csv;
  bool noCoupling = false;
};

int cmdBoundary(BoundaryFlags& f, std::ostream& out) {
  if (!(f.options.cMin < f.options.cMax)) throw UsageError("c-min must be smaller than c-max");
  if (!(f.options.cStep > 0.0)) throw UsageError("c-step must be positive");
  if (f.options.trials == 0) throw UsageError("trials must be positive");
  f.options.nList = parseNList(f.nList);
  f.options.coupled = !f.noCoupling;
  auto csv = openCsv(f.csv);
  csv << kBoundaryCsvHeader << "\n";
  for (const auto& row : runBoundary(f.options)) {
    csv << toCsv(row) << "\n";
    out << toCsv(row) << "\n";
  }
  return kExitOk;
}

}  // namespace

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuse XORier Lookup Table: build, query and benchmark static probabilistic maps",
               "fxlt"};
  app.require_subcommand(1);

  BuildFlags build;
  auto* buildCmd = app.add_subcommand("build", "Build a filter from a key<TAB>value file");
  buildCmd->add_option("--input", build.input, "TSV input")->required();
  buildCmd->add_option("--output", build.output, "Filter file to write")->required();
  buildCmd->add_option("--k", build.k, "Hash functions (3 or 4)")->check(CLI::IsMember({3, 4}));
  buildCmd->add_option("--q", build.q, "Bits per index slot")->check(CLI::Range(2, 32));
  buildCmd->add_option("--c", build.c, "Slots per key")->check(CLI::Range(1.0, 1000.0));
  buildCmd->add_flag("--no-coupling", build.noCoupling, "Hash over the whole table");
  buildCmd->add_flag("--cache-hashes", build.cacheHashes, "Cache neighborhoods while building");
  buildCmd->add_option("--seed", build.seed, "Master seed");
  buildCmd->add_option("--max-retries", build.maxRetries, "Seed attempts")->check(CLI::Range(1u, 1u << 30));
  buildCmd->add_option("--value-width", build.valueWidth, "Bytes per value")->check(CLI::Range(0, 65535));

  QueryFlags query;
  auto* queryCmd = app.add_subcommand("query", "Look up keys in a filter");
  queryCmd->add_option("--filter", query.filter, "Filter file")->required();
  auto* keyOpt = queryCmd->add_option("--key", query.key, "Single key");
  auto* keysOpt = queryCmd->add_option("--keys-file", query.keysFile, "One key per line");
  keyOpt->excludes(keysOpt);
  queryCmd->require_option(2, 2);

  FprFlags fpr;
  auto* fprCmd = app.add_subcommand("fpr", "Measure the false-positive rate on random absent keys");
  fprCmd->add_option("--filter", fpr.filter, "Filter file")->required();
  fprCmd->add_option("--trials", fpr.trials, "Probe count")->required();
  fprCmd->add_option("--exclude", fpr.exclude, "TSV dataset whose keys are never probed");
  fprCmd->add_option("--seed", fpr.seed, "Probe seed");
  fprCmd->add_option("--csv", fpr.csv, "Write a CSV row here");

  BenchFlags bench;
  auto* benchCmd = app.add_subcommand("bench", "Build/lookup benchmarks, one CSV row per structure and n");
  benchCmd->add_option("--mode", bench.options.mode, "build or lookup")
      ->check(CLI::IsMember({"build", "lookup"}))
      ->required();
  benchCmd->add_option("--n-list", bench.nList, "Comma-separated key counts")->required();
  benchCmd->add_option("--structures", bench.structures,
                       "fxlt,fxlt-cached,fxlt-nocoupling,fxlt-legacy,hashmap-std,ordered-std")
      ->required();
  benchCmd->add_option("--csv", bench.csv, "Output CSV")->required();
  benchCmd->add_option("--k", bench.options.k)->check(CLI::IsMember({3, 4}));
  benchCmd->add_option("--q", bench.options.q)->check(CLI::Range(2, 32));
  benchCmd->add_option("--c", bench.options.c, "Slots per key (default per structure)")
      ->check(CLI::Range(1.0, 1000.0));
  benchCmd->add_option("--seed", bench.options.seed);
  benchCmd->add_option("--key-bytes", bench.options.keyBytes)->check(CLI::Range(1, 1 << 20));
  benchCmd->add_option("--value-width", bench.options.valueWidth)->check(CLI::Range(0, 65535));
  benchCmd->add_option("--probes", bench.options.probes, "Lookup probes")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  benchCmd->add_option("--threads", bench.options.threads, "Shard lookup probes over threads");

  BoundaryFlags boundary;
  auto* boundaryCmd = app.add_subcommand("boundary", "Build success fraction over an (n, c) grid");
  boundaryCmd->add_option("--k", boundary.options.k)->check(CLI::IsMember({3, 4}))->required();
  boundaryCmd->add_option("--n-list", boundary.nList)->required();
  boundaryCmd->add_option("--c-min", boundary.options.cMin)->required();
  boundaryCmd->add_option("--c-max", boundary.options.cMax)->required();
  boundaryCmd->add_option("--c-step", boundary.options.cStep)->required();
  boundaryCmd->add_option("--trials", boundary.options.trials)->required();
  boundaryCmd->add_option("--csv", boundary.csv)->required();
  boundaryCmd->add_option("--seed", boundary.options.seed);
  boundaryCmd->add_flag("--no-coupling", boundary.noCoupling);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (buildCmd->parsed()) return cmdBuild(build, out);
    if (queryCmd->parsed()) return cmdQuery(query, out);
    if (fprCmd->parsed()) return cmdFpr(fpr, out);
    if (benchCmd->parsed()) return cmdBench(bench, out, err);
    if (boundaryCmd->parsed()) return cmdBoundary(boundary, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ApiError& e) {
    err << "error: " << e.what() << "\n";
    return exitFor(e);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace fxlt::harness
