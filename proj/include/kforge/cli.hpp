#pragma once

// Command driver: configuration, deterministic JSON reports and the on-disk
// cache of field tables.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kforge/cyclotomic.hpp"

namespace kforge {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitInternal = 3 };

struct RunConfig {
  std::string command;
  std::string omega = "1:1,2:-1";
  u64 p = 5;
  unsigned n = 0;
  u64 M = 5;
  std::vector<u64> s;
  std::vector<u64> q;
  u64 limit = 100;
  u64 seed = 42;
  std::vector<u64> etas{1, 3, 5, 7};
  std::vector<u64> aux_primes{3, 7, 11};
  bool self_test = false;
  bool timing = false;
  std::string cache_dir;
  std::string out;
};

using Json = nlohmann::ordered_json;

/// Runs one command. Throws DomainError for configuration problems and lets
/// InternalInconsistency escape; every mathematical check lands in the report.
Json run_command(const RunConfig& config);

/// Overall status of a report: kExitPass or kExitCheckFailed.
int report_exit_code(const Json& report);

/// Full driver used by the executable: runs, writes the report, maps errors to exit codes.
int run_and_write(const RunConfig& config, std::ostream& out, std::ostream& err);

/// One JSON file per conductor with Phi_m, the unit group and an FNV-1a
/// checksum; a mismatching or unreadable file is ignored and rewritten.
class JsonFieldStore : public FieldTableStore {
 public:
  explicit JsonFieldStore(std::filesystem::path dir);
  std::optional<FieldTables> load(u64 m) override;
  void save(const FieldTables& tables) override;
  std::filesystem::path path_for(u64 m) const;

 private:
  std::filesystem::path dir_;
};

std::string fnv1a_hex(const std::string& data);

/// KFORGE_CACHE if set, otherwise the configured directory (may be empty).
std::string effective_cache_dir(const RunConfig& config);

}  // namespace kforge
