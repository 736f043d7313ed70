#pragma once

// File formats:
//   - manifest JSON: {"sequences":[{"id","label","csv"}...]}; csv paths are
//     resolved relative to the manifest's directory.
//   - frame CSV: one frame per row, comma separated, optional lines starting
//     with '#' are skipped. Errors name the file and line.
//   - descriptor JSON: {"descriptors":[{"id","label","S":[[row]...]}...]}
//   - projection map JSON: {D, d, metric, k, t, eigenvalues, A, version}
//     with A stored as row-major nested arrays.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "lielpp/descriptors.hpp"
#include "lielpp/errors.hpp"
#include "lielpp/graph.hpp"
#include "lielpp/reducers.hpp"
#include "lielpp/version.hpp"

namespace lielpp {

namespace detail {

inline std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_cell(const std::string& cell, const std::filesystem::path& file,
                         std::size_t line) {
  const std::string t = trimmed(cell);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || t.empty())
    throw IngestError(file.string() + ":" + std::to_string(line) + ": cannot parse '" + t +
                      "' as a number");
  if (!std::isfinite(value))
    throw IngestError(file.string() + ":" + std::to_string(line) + ": non-finite value");
  return value;
}

inline std::vector<std::vector<double>> parse_csv_frames(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IngestError(file.string() + ": cannot open file");
  std::vector<std::vector<double>> frames;
  std::string line;
  std::size_t line_no = 0;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trimmed(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<double> row;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_cell(cell, file, line_no));
    if (t.back() == ',')
      throw IngestError(file.string() + ":" + std::to_string(line_no) + ": trailing comma");
    if (cols == 0) {
      cols = row.size();
    } else if (row.size() != cols) {
      throw IngestError(file.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(cols) + " columns, found " + std::to_string(row.size()));
    }
    frames.push_back(std::move(row));
  }
  if (frames.empty()) throw IngestError(file.string() + ": no data rows");
  return frames;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError(path.string() + ": cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IngestError(path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write to " + path.string());
  out << body;
  if (!out) throw Error("write failed for " + path.string());
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw IngestError(what + ": expected a nested array of numbers");
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j[r].size() != cols) throw IngestError(what + ": ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw IngestError(what + ": non-numeric matrix entry");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

}  // namespace detail

// Load feature sequences listed in a JSON manifest. Ordering follows the
// manifest; the feature dimension must be uniform across all files.
inline std::vector<FeatureSequence> load_sequences(const std::filesystem::path& manifest) {
  const nlohmann::json j = detail::read_json_file(manifest);
  if (!j.is_object() || !j.contains("sequences") || !j["sequences"].is_array())
    throw IngestError(manifest.string() + ": manifest must contain a \"sequences\" array");

  std::vector<FeatureSequence> out;
  std::size_t dim = 0;
  for (std::size_t idx = 0; idx < j["sequences"].size(); ++idx) {
    const auto& entry = j["sequences"][idx];
    for (const char* key : {"id", "label", "csv"})
      if (!entry.contains(key) || !entry[key].is_string())
        throw IngestError(manifest.string() + ": sequences[" + std::to_string(idx) +
                          "] is missing string field \"" + key + "\"");
    std::filesystem::path csv = entry["csv"].get<std::string>();
    if (csv.is_relative()) csv = manifest.parent_path() / csv;
    auto frames = detail::parse_csv_frames(csv);
    if (dim == 0) {
      dim = frames.front().size();
    } else if (frames.front().size() != dim) {
      throw IngestError(csv.string() + ":1: feature dimension " +
                        std::to_string(frames.front().size()) +
                        " differs from the manifest's dimension " + std::to_string(dim));
    }
    out.push_back(make_feature_sequence(std::move(frames), entry["label"].get<std::string>(),
                                        entry["id"].get<std::string>()));
  }
  return out;
}

inline void write_descriptors(const std::filesystem::path& path, const DescriptorSet& data) {
  nlohmann::json items = nlohmann::json::array();
  for (std::size_t i = 0; i < data.size(); ++i) {
    items.push_back({{"id", data.source_ids()[i]},
                     {"label", data.labels()[i]},
                     {"S", detail::matrix_to_json(data[i].entries())}});
  }
  detail::write_text_file(path, nlohmann::json{{"descriptors", std::move(items)}}.dump(2) + "\n");
}

inline DescriptorSet read_descriptors(const std::filesystem::path& path) {
  const nlohmann::json j = detail::read_json_file(path);
  if (!j.is_object() || !j.contains("descriptors") || !j["descriptors"].is_array())
    throw IngestError(path.string() + ": expected a \"descriptors\" array");
  DescriptorSet out;
  for (std::size_t i = 0; i < j["descriptors"].size(); ++i) {
    const auto& entry = j["descriptors"][i];
    if (!entry.contains("S"))
      throw IngestError(path.string() + ": descriptors[" + std::to_string(i) + "] missing \"S\"");
    const Matrix m = detail::matrix_from_json(entry["S"], path.string());
    out.add(make_spd(m, SpdMode::Clamp), entry.value("label", std::string{}),
            entry.value("id", "item-" + std::to_string(i)));
  }
  return out;
}

inline void write_projection_map(const std::filesystem::path& path, const ProjectionMap& map) {
  nlohmann::json j{{"D", map.input_dim},
                   {"d", map.output_dim},
                   {"metric", metric_name(map.metric)},
                   {"k", map.k},
                   {"t", map.t},
                   {"eigenvalues", map.eigenvalues},
                   {"A", detail::matrix_to_json(map.basis)},
                   {"version", std::string(kVersion)}};
  detail::write_text_file(path, j.dump(2) + "\n");
}

inline ProjectionMap read_projection_map(const std::filesystem::path& path) {
  const nlohmann::json j = detail::read_json_file(path);
  for (const char* key : {"D", "d", "metric", "k", "t", "eigenvalues", "A"})
    if (!j.contains(key)) throw IngestError(path.string() + ": missing field \"" + key + "\"");
  ProjectionMap map;
  map.input_dim = j["D"].get<std::size_t>();
  map.output_dim = j["d"].get<std::size_t>();
  const std::string metric = j["metric"].get<std::string>();
  if (metric != "lem" && metric != "em")
    throw IngestError(path.string() + ": metric must be \"lem\" or \"em\"");
  map.metric = metric == "lem" ? Metric::LEM : Metric::EM;
  map.k = j["k"].get<std::size_t>();
  map.t = j["t"].get<double>();
  map.eigenvalues = j["eigenvalues"].get<std::vector<double>>();
  map.basis = detail::matrix_from_json(j["A"], path.string());
  if (map.basis.rows() != map.input_dim || map.basis.cols() != map.output_dim)
    throw IngestError(path.string() + ": A has shape inconsistent with D and d");
  return map;
}

}  // namespace lielpp
