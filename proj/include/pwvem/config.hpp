#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pwvem/element.hpp"
#include "pwvem/postproc.hpp"

namespace pwvem {

/// Raised for malformed configs and flag values; the CLI maps it to the
/// usage exit code.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ExperimentKind { Table1, VoronoiH, PConv, Pollution, Singular, Patch, InfSup };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment(std::string_view name);

/// Fully resolved run description. Unset optionals take the per-experiment
/// defaults in resolve().
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Table1;
  std::optional<double> k;
  std::vector<int> p_list;
  // "structured:2,4" | "voronoi:16,64" | "chevron:4" | "file:a.mesh,b.mesh",
  // several joined by ';'
  std::string mesh;
  std::vector<Variant> variants;
  std::vector<double> xi_list;  // singular experiment
  double hk = 3.0;               // pollution experiment
  int lloyd = 20;
  std::filesystem::path out = "out";
  double offset = 0.0;
  unsigned long long seed = 1;
  std::string evaluation = "auto";  // auto | projection | basis
  int cells = 20;                   // infsup: number of random cells
};

/// key = value pairs, in file order.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parse "key = value" lines; '#' starts a comment. Throws ParseError with
/// the line number on malformed lines.
KeyValues parse_key_values(std::istream& in);
KeyValues read_config_file(const std::filesystem::path& path);

/// Apply pairs onto `config` in order (later wins). Unknown keys and bad
/// values throw UsageError.
void apply(ExperimentConfig& config, const KeyValues& values);

/// Fill per-experiment defaults and validate (odd p, xi range, mesh spec).
ExperimentConfig resolve(ExperimentConfig config);

/// Echo in the same key = value format, readable by read_config_file.
void write_config(std::ostream& out, const ExperimentConfig& config);

std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

}  // namespace pwvem
