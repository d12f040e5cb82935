#ifndef TBMO_IO_HPP
#define TBMO_IO_HPP

#include "tbmo/experiments.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tbmo {

/// Everything a CLI run depends on.
struct RunConfig {
    ModelParameters model{sweep_base()};
    SolverSettings solver;
    std::size_t levels{100};  ///< eps levels of a ladder
    std::size_t weights{100}; ///< weight vectors of the weight-based methods
    std::uint64_t seed{0};
    std::string output_dir; ///< empty: fall back to TBMO_OUTPUT_DIR, then "."

    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

/// Malformed document, unknown key or invalid value. The message starts with the key path.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parses a JSON document. Whitespace-only text yields the defaults.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
/// JSON text that parse_config maps back to an identical RunConfig.
std::string serialize_config(const RunConfig& cfg);

/// Output directory after applying the environment fallback.
std::filesystem::path resolve_output_dir(const RunConfig& cfg);

inline constexpr std::string_view kOutputDirEnv = "TBMO_OUTPUT_DIR";

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// Key/value lines written as "# key: value" above the CSV header.
using Provenance = std::vector<std::pair<std::string, std::string>>;

Provenance config_provenance(std::string_view command, const RunConfig& cfg);

void write_trajectory_csv(const Trajectory& traj, std::ostream& out, const Provenance& prov = {});
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path, const Provenance& prov = {});

/// Rows sorted by level (eps, or w1 for the weight-based methods).
void write_front_csv(const TradeoffFront& front, std::ostream& out, const Provenance& prov = {});
void write_front_csv(const TradeoffFront& front, const std::filesystem::path& path, const Provenance& prov = {});

/// Columns method,hypervolume,successful_solves,points,flagged.
void write_comparison_csv(const ComparisonReport& report, std::ostream& out, const Provenance& prov = {});

/// Three-row text table, one line per method.
std::string comparison_table(const ComparisonReport& report);

/// Parsed CSV: comment lines, header names and numeric or text cells.
struct CsvTable {
    Provenance provenance;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

struct FrontRow {
    double eps{0.0};
    ObjectivePoint objectives;
    SolveStatus status{SolveStatus::converged};
    std::size_t evaluations{0};
};

std::vector<FrontRow> read_front_csv(const std::filesystem::path& path);

} // namespace tbmo

#endif // TBMO_IO_HPP
