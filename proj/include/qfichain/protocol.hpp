#pragma once

#include "qfichain/chain_model.hpp"
#include "qfichain/dynamics.hpp"
#include "qfichain/measures.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qfi::protocol {

/// Raised for malformed or inconsistent configurations (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Protocol {
  equilibrium,
  single_kick,
  kick_grid,
  kick_periodic,
  global_quench,
  beyond_sc,
};

enum class Source { simulation, semiclassical, beyond_sc, oracle, asymptotic };

std::string to_string(Protocol p);
std::string to_string(Source s);

struct ProtocolConfig {
  Protocol protocol = Protocol::equilibrium;
  ChainModel model{0.5, 1.0};

  // subsystem geometry: half_width for kick windows, explicit sizes otherwise
  std::optional<Eigen::Index> half_width;
  std::vector<Eigen::Index> sizes;

  std::vector<double> times;
  std::vector<double> betas;          // equilibrium scan
  double initial_beta = std::numeric_limits<double>::infinity();  // kick protocols

  KickKind kick_kind = KickKind::spin_flip_z;
  std::optional<double> kick_period;          // kick_periodic (default r / vmax)
  std::optional<Eigen::Index> grid_spacing;   // kick_grid (default 2r)

  QuenchPair quench{{0.0, 1.0}, {0.4, 1.0}};
  std::vector<double> ratios;  // beyond_sc: r/t values

  IntegrationConfig measure;
  std::vector<Source> sources{Source::simulation};
  Eigen::Index pad = 8;
  std::string output = "qfi.csv";

  /// Parses the strict JSON config document; unknown keys are rejected.
  static ProtocolConfig from_json_text(const std::string& text);
  static ProtocolConfig from_json_file(const std::string& path);

  /// Canonical serialization used for the provenance hash.
  std::string canonical_json() const;
  std::string config_hash() const;
};

/// One CSV row; missing quantities render as nan.
struct CsvRow {
  double time = 0.0;
  Eigen::Index subsystem_left = 0;
  Eigen::Index subsystem_right = 0;
  double variance = std::nan("");
  double i_half = std::nan("");
  double i_third = std::nan("");
  double qfi_over4 = std::nan("");
  double qfi_err = std::nan("");
  double chi = std::nan("");
  double lower = std::nan("");
  double upper = std::nan("");
  Source source = Source::simulation;
  // sweep support
  std::string axis_name;
  double axis_value = std::nan("");
};

/// Deterministic evaluation of one configuration: every requested source is
/// written to its own CSV file (source tag inserted before the extension).
/// Returns the list of files written; warnings land in `log`.
std::vector<std::string> run(const ProtocolConfig& config, std::ostream& log);

/// Cross-product expansion of one axis ("model.h", "quench.h", ...); merged
/// CSV per source with the axis column filled.
std::vector<std::string> sweep(const ProtocolConfig& base, const std::string& axis,
                               const std::vector<double>& values, std::ostream& log);

/// Oracle-equivalence suite; prints one line per check with the maximal
/// deviation.  Returns true when every check passes.
bool validate(bool quick, std::ostream& out);

/// In-memory row computation (used by run/sweep and the tests).
std::vector<CsvRow> compute_rows(const ProtocolConfig& config, std::ostream& log);

std::string csv_header();
void write_csv(const std::string& path, const std::vector<CsvRow>& rows,
               const ProtocolConfig& config);

}  // namespace qfi::protocol
