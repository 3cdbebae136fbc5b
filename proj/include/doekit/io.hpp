#pragma once

#include <atomic>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doekit/design.hpp"
#include "doekit/errors.hpp"
#include "doekit/gp.hpp"
#include "doekit/validate.hpp"

namespace doekit::io {

using nlohmann::json;

/// Full round-trip precision (17 significant digits).
inline std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

/// Writes through a temporary file in the same directory plus an atomic
/// rename, so interrupted runs never leave partial primary outputs.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  static std::atomic<std::uint64_t> counter{0};
  const auto parent = path.parent_path().empty() ? "." : path.parent_path();
  std::filesystem::create_directories(parent);
  const auto tmp =
      parent / (path.filename().string() + ".tmp" + std::to_string(counter.fetch_add(1)));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.flush()) throw DataError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// FNV-1a digest of a file's bytes, as a fixed-width hex string.
inline std::string file_digest(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const std::uint64_t h = detail::fnv1a64(bytes);
  char buffer[20];
  std::snprintf(buffer, sizeof(buffer), "%016" PRIx64, h);
  return buffer;
}

struct Csv {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
};

inline std::string matrix_to_csv(const Eigen::MatrixXd& values,
                                 const std::vector<std::string>& header) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c > 0) out += ',';
    out += header[c];
  }
  out += '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

inline Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::istringstream head(line);
  std::string cell;
  while (std::getline(head, cell, ',')) csv.header.push_back(cell);

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    while (std::getline(fields, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw DataError("non-numeric CSV cell: " + cell);
      }
    }
    if (row.size() != csv.header.size())
      throw DataError("CSV row width differs from the header");
    rows.push_back(std::move(row));
  }
  csv.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(csv.header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      csv.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return csv;
}

inline Csv read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

inline json box_to_json(const Box& box) {
  json bounds = json::array();
  for (const Interval& iv : box) bounds.push_back({iv.lo, iv.hi});
  return bounds;
}

inline Box box_from_json(const json& bounds) {
  Box box;
  for (const auto& iv : bounds) box.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
  return box;
}

/// Design CSV (header x1..xd) plus a `<path>.meta.json` sidecar carrying
/// kind, shape, bounds and the generating seed.
inline void write_design_csv(const std::filesystem::path& path, const Design& design,
                             std::optional<std::uint64_t> seed = std::nullopt) {
  std::vector<std::string> header;
  for (Eigen::Index k = 0; k < design.dim(); ++k)
    header.push_back("x" + std::to_string(k + 1));
  write_file_atomic(path, matrix_to_csv(design.points, header));

  json meta;
  meta["kind"] = to_string(design.kind);
  meta["n"] = design.size();
  meta["d"] = design.dim();
  meta["bounds"] = box_to_json(design.domain);
  if (seed)
    meta["seed"] = *seed;
  else
    meta["seed"] = nullptr;
  write_file_atomic(path.string() + ".meta.json", meta.dump(2) + "\n");
}

inline Design read_design_csv(const std::filesystem::path& path) {
  const Csv csv = read_csv(path);
  Design design;
  design.points = csv.values;
  design.domain = unit_box(design.dim());
  design.kind = DesignKind::External;

  const std::filesystem::path meta_path = path.string() + ".meta.json";
  if (std::filesystem::exists(meta_path)) {
    const json meta = json::parse(read_file(meta_path));
    design.kind = design_kind_from_string(meta.at("kind").get<std::string>());
    design.domain = box_from_json(meta.at("bounds"));
    if (meta.at("n").get<Eigen::Index>() != design.size() ||
        meta.at("d").get<Eigen::Index>() != design.dim())
      throw DataError("design sidecar shape disagrees with the CSV");
  }
  return design;
}

inline json model_to_json(const GpModel& model) {
  json j;
  j["format"] = "gp-model";
  j["version"] = 1;
  j["beta"] = std::vector<double>(model.beta.data(), model.beta.data() + model.beta.size());
  j["sigma2"] = model.sigma2;
  j["theta"] = std::vector<double>(model.corr.theta.data(),
                                   model.corr.theta.data() + model.corr.theta.size());
  j["p"] = std::vector<double>(model.corr.p.data(), model.corr.p.data() + model.corr.p.size());
  j["nugget"] = model.nugget;
  j["log_likelihood"] = model.log_likelihood;
  j["domain"] = box_to_json(model.domain);
  json inputs = json::array();
  for (Eigen::Index i = 0; i < model.size(); ++i) {
    json row = json::array();
    for (Eigen::Index l = 0; l < model.dim(); ++l) row.push_back(model.inputs(i, l));
    inputs.push_back(row);
  }
  j["learning_inputs_unit"] = inputs;
  j["learning_outputs"] =
      std::vector<double>(model.outputs.data(), model.outputs.data() + model.outputs.size());
  return j;
}

/// Rebuilds the model from serialized hyperparameters and learning data;
/// the factorization is recomputed, not stored.
inline GpModel model_from_json(const json& j) {
  if (j.value("format", "") != "gp-model") throw DataError("not a gp-model JSON file");
  const auto theta = j.at("theta").get<std::vector<double>>();
  const auto p = j.at("p").get<std::vector<double>>();
  CorrelationParams corr;
  corr.theta = Eigen::Map<const Eigen::VectorXd>(theta.data(),
                                                 static_cast<Eigen::Index>(theta.size()));
  corr.p = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));

  const auto& inputs = j.at("learning_inputs_unit");
  const auto n = static_cast<Eigen::Index>(inputs.size());
  const auto d = corr.theta.size();
  Design unit_design;
  unit_design.points.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index l = 0; l < d; ++l)
      unit_design.points(i, l) = inputs.at(static_cast<std::size_t>(i))
                                     .at(static_cast<std::size_t>(l))
                                     .get<double>();
  unit_design.domain = unit_box(d);

  const auto outputs = j.at("learning_outputs").get<std::vector<double>>();
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(outputs.data(), static_cast<Eigen::Index>(outputs.size()));

  GpModel model = build_gp_model(unit_design, y, corr, j.at("nugget").get<double>());
  model.domain = box_from_json(j.at("domain"));
  return model;
}

inline void write_model_json(const std::filesystem::path& path, const GpModel& model) {
  write_file_atomic(path, model_to_json(model).dump(2) + "\n");
}

inline GpModel read_model_json(const std::filesystem::path& path) {
  return model_from_json(json::parse(read_file(path)));
}

inline json report_to_json(const ValidationReport& report) {
  json j;
  j["method"] = to_string(report.method);
  j["q2"] = report.q2;
  j["n_test"] = report.n_test;
  if (report.method == ValidationMethod::TestSample ||
      report.method == ValidationMethod::Sequential)
    j["test_kind"] = to_string(report.test_kind);
  if (report.method == ValidationMethod::CrossValidation) j["folds"] = report.folds;
  json residuals = json::array();
  for (const auto& pair : report.residuals) residuals.push_back({pair[0], pair[1]});
  j["residuals"] = residuals;
  json trace = json::array();
  for (const auto& entry : report.trace) trace.push_back({entry.first, entry.second});
  j["trace"] = trace;
  return j;
}

}  // namespace doekit::io
