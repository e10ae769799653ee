#include "mrgg/io.hpp"

#include "mrgg/error.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include <array>
#include <fstream>
#include <sstream>

namespace mrgg {

using nlohmann::json;

namespace {

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(fmt::format("malformed JSON: {}", e.what()));
  }
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(fmt::format("missing field '{}'", key));
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(fmt::format("field '{}' has the wrong type: {}", key, e.what()));
  }
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    for (int s = 18; s >= 0; s -= 6) out.push_back(kAlphabet[(v >> s) & 63]);
  }
  const std::size_t rest = bytes.size() - i;
  if (rest > 0) {
    std::uint32_t v = bytes[i] << 16;
    if (rest == 2) v |= bytes[i + 1] << 8;
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(rest == 2 ? kAlphabet[(v >> 6) & 63] : '=');
    out.push_back('=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw InputError("base64 length is not a multiple of 4");
  std::array<int, 256> lookup;
  lookup.fill(-1);
  for (std::size_t k = 0; k < kAlphabet.size(); ++k) lookup[static_cast<unsigned char>(kAlphabet[k])] = static_cast<int>(k);

  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    int pad = 0;
    std::uint32_t v = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const char c = text[i + k];
      int digit;
      if (c == '=' && last && k >= 2) {
        ++pad;
        digit = 0;
      } else {
        digit = lookup[static_cast<unsigned char>(c)];
        if (digit < 0 || pad > 0) throw InputError("invalid base64 data");
      }
      v = (v << 6) | static_cast<std::uint32_t>(digit);
    }
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v & 0xff));
  }
  return out;
}

std::string graph_to_json(const GraphFile& file) {
  const std::size_t n = file.graph.size();
  const std::size_t row_bytes = (n + 7) / 8;
  std::vector<std::uint8_t> bits(n * row_bytes, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (file.graph.edge(i, j)) bits[i * row_bytes + j / 8] |= static_cast<std::uint8_t>(0x80u >> (j % 8));

  json j;
  j["n"] = n;
  j["d"] = file.dimension;
  j["zeta"] = file.graph.zeta();
  j["seed"] = file.seed;
  j["adjacency"] = base64_encode(bits);
  if (file.points) {
    const auto& p = *file.points;
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(p.size()));
    for (Eigen::Index r = 0; r < p.rows(); ++r)
      for (Eigen::Index c = 0; c < p.cols(); ++c) flat.push_back(p(r, c));
    j["points"] = flat;
  }
  if (file.jumps) j["jumps"] = *file.jumps;
  return j.dump() + "\n";
}

GraphFile graph_from_json(std::string_view text) {
  const json j = parse_json(text);
  GraphFile file;
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_unsigned())
    throw InputError("field 'n' must be a nonnegative integer");
  const auto n = field<std::size_t>(j, "n");
  file.dimension = field<int>(j, "d");
  if (file.dimension < 3) throw InputError("graph file dimension must be at least 3");
  const auto zeta = field<double>(j, "zeta");
  file.seed = j.contains("seed") ? field<std::uint64_t>(j, "seed") : 0;
  const auto bits = base64_decode(field<std::string>(j, "adjacency"));
  const std::size_t row_bytes = (n + 7) / 8;
  if (bits.size() != n * row_bytes)
    throw InputError(fmt::format("adjacency holds {} bytes, expected {}", bits.size(), n * row_bytes));
  std::vector<std::uint8_t> adj(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t jj = 0; jj < n; ++jj)
      adj[i * n + jj] = (bits[i * row_bytes + jj / 8] >> (7 - jj % 8)) & 1u;
  file.graph = Graph::from_adjacency(n, std::move(adj), zeta);

  if (j.contains("points")) {
    const auto flat = field<std::vector<double>>(j, "points");
    const auto d = static_cast<std::size_t>(file.dimension);
    if (flat.size() != n * d) throw InputError("points array does not match n x d");
    Eigen::MatrixXd p(static_cast<Eigen::Index>(n), file.dimension);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < d; ++c) p(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = flat[r * d + c];
    file.points = std::move(p);
  }
  if (j.contains("jumps")) {
    file.jumps = field<std::vector<double>>(j, "jumps");
    if (n > 0 && file.jumps->size() != n - 1) throw InputError("jumps array must hold n - 1 values");
  }
  return file;
}

std::string envelope_estimate_to_json(const EnvelopeEstimate& estimate) {
  json j;
  j["d"] = estimate.dimension;
  j["R_hat"] = estimate.r_hat;
  j["kappa0"] = estimate.kappa0;
  j["zeta"] = estimate.zeta;
  j["p_hat"] = estimate.p_hat;
  j["intra_class_variance"] = estimate.intra_class_variance;
  j["warnings"] = estimate.warnings;
  return j.dump(2) + "\n";
}

EnvelopeEstimate envelope_estimate_from_json(std::string_view text) {
  const json j = parse_json(text);
  EnvelopeEstimate e;
  e.dimension = field<int>(j, "d");
  e.r_hat = field<int>(j, "R_hat");
  e.kappa0 = field<double>(j, "kappa0");
  e.zeta = j.contains("zeta") ? field<double>(j, "zeta") : 1.0;
  e.p_hat = field<std::vector<double>>(j, "p_hat");
  e.intra_class_variance = field<std::vector<double>>(j, "intra_class_variance");
  if (j.contains("warnings")) e.warnings = field<std::vector<std::string>>(j, "warnings");
  if (e.p_hat.size() != static_cast<std::size_t>(e.r_hat) + 1)
    throw InputError("p_hat length does not match R_hat");
  return e;
}

std::string latitude_to_json(const LatitudeDensity& density, std::size_t grid_points) {
  const auto [grid, pdf] = density.tabulate(grid_points);
  json j;
  j["samples"] = density.samples();
  j["bandwidth"] = density.bandwidth();
  j["grid"] = grid;
  j["pdf"] = pdf;
  return j.dump() + "\n";
}

LatitudeDensity latitude_from_json(std::string_view text) {
  const json j = parse_json(text);
  return LatitudeDensity(field<std::vector<double>>(j, "samples"), field<double>(j, "bandwidth"));
}

std::string test_report_to_json(const TestReport& report) {
  json j;
  j["statistic"] = report.statistic;
  j["threshold"] = report.threshold;
  j["alpha"] = report.alpha;
  j["decision"] = report.reject ? "reject" : "accept";
  j["mc_trials"] = report.mc_trials;
  j["bins"] = report.bins;
  j["valid"] = report.valid;
  if (!report.error.empty()) j["error"] = report.error;
  return j.dump(2) + "\n";
}

TestReport test_report_from_json(std::string_view text) {
  const json j = parse_json(text);
  TestReport r;
  r.statistic = field<double>(j, "statistic");
  r.threshold = field<double>(j, "threshold");
  r.alpha = field<double>(j, "alpha");
  const auto decision = field<std::string>(j, "decision");
  if (decision != "reject" && decision != "accept") throw InputError("decision must be reject or accept");
  r.reject = decision == "reject";
  r.mc_trials = field<std::size_t>(j, "mc_trials");
  r.bins = field<std::size_t>(j, "bins");
  r.valid = field<bool>(j, "valid");
  if (j.contains("error")) r.error = field<std::string>(j, "error");
  return r;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw InputError(fmt::format("row has {} fields, header has {}", row.size(), header.size()));
  rows.push_back(std::move(row));
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return k;
  throw InputError(fmt::format("no column '{}'", name));
}

std::string format_double(double value) { return fmt::format("{}", value); }

std::string format_csv(const CsvTable& table) {
  std::string out = fmt::format("# mrgg {} v{}\n", table.schema, kCsvVersion);
  out += fmt::format("{}\n", fmt::join(table.header, ","));
  for (const auto& row : table.rows) out += fmt::format("{}\n", fmt::join(row, ","));
  return out;
}

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

CsvTable parse_csv(std::string_view text, std::string_view expected_schema) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  if (lines.size() < 2) throw InputError("CSV needs a schema line and a header");

  std::istringstream first{std::string(lines[0])};
  std::string hash, tag, schema, version;
  first >> hash >> tag >> schema >> version;
  if (hash != "#" || tag != "mrgg" || schema.empty())
    throw InputError("CSV schema line must read '# mrgg <schema> v<version>'");
  if (version != fmt::format("v{}", kCsvVersion))
    throw InputError(fmt::format("unsupported CSV version '{}'", version));
  if (!expected_schema.empty() && schema != expected_schema)
    throw InputError(fmt::format("CSV schema '{}' where '{}' was expected", schema, expected_schema));

  CsvTable table;
  table.schema = schema;
  table.header = split_fields(lines[1]);
  for (std::size_t k = 2; k < lines.size(); ++k) {
    if (lines[k].empty()) continue;
    table.add_row(split_fields(lines[k]));
  }
  return table;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw InputError(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace mrgg
