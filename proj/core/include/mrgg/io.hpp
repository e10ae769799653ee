#pragma once

#include "mrgg/envelope.hpp"
#include "mrgg/inference.hpp"
#include "mrgg/latent.hpp"
#include "mrgg/latitude.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mrgg {

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Graph container: adjacency as base64 of bit rows (each row padded to whole
/// bytes, most significant bit first), optional latent points (row-major).
struct GraphFile {
  Graph graph;
  int dimension = 3;
  std::uint64_t seed = 0;
  std::optional<Eigen::MatrixXd> points;
  std::optional<std::vector<double>> jumps;
};

std::string graph_to_json(const GraphFile& file);
GraphFile graph_from_json(std::string_view text);

std::string envelope_estimate_to_json(const EnvelopeEstimate& estimate);
/// Restores the serialized fields (dimension, resolution, kappa0, zeta, p_hat,
/// intra-class variances, warnings).
EnvelopeEstimate envelope_estimate_from_json(std::string_view text);

std::string latitude_to_json(const LatitudeDensity& density, std::size_t grid_points = 501);
LatitudeDensity latitude_from_json(std::string_view text);

std::string test_report_to_json(const TestReport& report);
TestReport test_report_from_json(std::string_view text);

/// CSV with a versioned first line "# mrgg <schema> v1" and a header row.
struct CsvTable {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  [[nodiscard]] std::size_t column(std::string_view name) const;
};

inline constexpr int kCsvVersion = 1;

/// Shortest representation that round-trips.
std::string format_double(double value);

std::string format_csv(const CsvTable& table);
/// Validates the schema line (and `expected_schema` when non-empty) and the
/// column count of every row.
CsvTable parse_csv(std::string_view text, std::string_view expected_schema = {});

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace mrgg
