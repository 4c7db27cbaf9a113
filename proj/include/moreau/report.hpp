#pragma once

// Scenario configuration, catalog registry and machine-readable reports.
//
// Exit-code contract of a run: 0 when every suite passes, 1 on any residual
// failure, 2 on configuration or usage errors (reported as UsageError).

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "moreau/suites.hpp"

namespace moreau {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

/// Name -> factory tables for geometries and phi entries. A factory receives
/// the ambient dimension, the JSON parameters of the entry, and an Rng for
/// randomly generated parameters.
class Registry {
 public:
  using GeometryMaker = std::function<LegendreFunction(Index, const Json&, Rng&)>;
  using PhiMaker = std::function<ConvexFunction(Index, const Json&, Rng&)>;

  void add_geometry(const std::string& name, GeometryMaker make);
  void add_phi(const std::string& name, PhiMaker make);
  bool has_geometry(const std::string& name) const { return geometries_.count(name) > 0; }
  bool has_phi(const std::string& name) const { return phis_.count(name) > 0; }
  std::vector<std::string> geometry_names() const;
  std::vector<std::string> phi_names() const;

  /// Throws UsageError naming the entry when unknown or malformed.
  LegendreFunction make_geometry(const Json& spec, Index n, Rng& rng) const;
  ConvexFunction make_phi(const Json& spec, Index n, Rng& rng) const;

  static Registry standard();

 private:
  std::map<std::string, GeometryMaker> geometries_;
  std::map<std::string, PhiMaker> phis_;
};

/// Geometries and phi entries of the registry with their flags, plus the
/// ledger pairings whose two names are both registered.
Json list_catalog(const Registry& registry, const PairingLedger& ledger);

/// Human-readable form of list_catalog.
std::string format_catalog(const Json& catalog);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  /// key=value pairs for ToleranceProfile fields.
  std::vector<std::string> tol_overrides;
  /// Frame vectors, one per row; replaces the config's frame entry.
  std::optional<std::string> frame_csv;
  /// Directory for resolving relative paths in the config.
  std::string base_dir = ".";
};

struct RunOutcome {
  Json report;
  std::string csv;
  bool ok = false;
  int exit_code() const { return ok ? 0 : 1; }
};

/// Parse, validate and execute a config. UsageError on malformed input.
RunOutcome run_config(const Json& config, const RunOverrides& overrides = {},
                      const Registry& registry = Registry::standard());

/// Reads and parses a JSON file; UsageError when missing or malformed.
Json load_json_file(const std::string& path);
/// Rows of comma-separated reals, no header.
std::vector<Vec> load_csv_vectors(const std::string& path);

/// Applies `key=value` to a tolerance profile; UsageError on unknown keys.
void apply_tol_override(ToleranceProfile& tol, const std::string& assignment);

/// JSON with non-finite reals encoded as the strings "inf", "-inf", "nan".
Json json_number(double v);
Json json_vector(const Vec& v);
Json report_to_json(const DecompositionReport& r, std::size_t index, const std::string& error);
Json suite_to_json(const SuiteReport& s);

}  // namespace moreau
