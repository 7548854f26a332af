// SPDX-License-Identifier: Apache-2.0
#include "nilbridge/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "nilbridge/errors.hpp"

namespace nilbridge::io {

using nlohmann::json;

namespace {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ContractViolation("expected a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

double parse_double(const std::string& field, std::size_t line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ContractViolation("coefficient file line " + std::to_string(line) +
                            ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return {buf, ptr};
}

Field detect_field(const Matrix& m) {
  return m.imag().cwiseAbs().maxCoeff() > 0.0 ? Field::complex : Field::real;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ContractViolation("expected a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ContractViolation("ragged matrix rows");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
  }
  return m;
}

json to_json(const FrameFile& file) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["field"] = file.field == Field::complex ? "complex" : "real";
  j["dim"] = file.frame.dim();
  if (file.role) j["role"] = *file.role;
  json vectors = json::array();
  for (std::size_t c = 0; c < file.frame.size(); ++c) {
    json v = json::array();
    for (std::size_t i = 0; i < file.frame.dim(); ++i) {
      v.push_back(complex_to_json(
          file.frame.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c))));
    }
    vectors.push_back(std::move(v));
  }
  j["vectors"] = std::move(vectors);
  return j;
}

FrameFile frame_file_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw ContractViolation("unsupported frame file schema_version");
    }
    const std::string field = j.at("field").get<std::string>();
    if (field != "real" && field != "complex") {
      throw ContractViolation("frame file field must be 'real' or 'complex'");
    }
    const auto n = j.at("dim").get<std::size_t>();
    const auto& vectors = j.at("vectors");
    if (!vectors.is_array() || vectors.empty() || n == 0) {
      throw ContractViolation("frame file needs dim >= 1 and at least one vector");
    }
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t c = 0; c < vectors.size(); ++c) {
      const auto& v = vectors[c];
      if (!v.is_array() || v.size() != n) {
        throw ContractViolation("frame file vector " + std::to_string(c + 1) +
                                " does not have dim entries");
      }
      for (std::size_t i = 0; i < n; ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = complex_from_json(v[i]);
      }
    }
    FrameFile out{field == "complex" ? Field::complex : Field::real, Frame(std::move(m)),
                  std::nullopt};
    if (j.contains("role")) {
      const auto role = j["role"].get<std::string>();
      if (role != "synthesis" && role != "analysis") {
        throw ContractViolation("frame file role must be 'synthesis' or 'analysis'");
      }
      out.role = role;
    }
    return out;
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("malformed frame file: ") + e.what());
  }
}

std::string write_frame(const FrameFile& file) { return to_json(file).dump(2) + "\n"; }

FrameFile read_frame(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("frame file is not valid JSON: ") + e.what());
  }
  return frame_file_from_json(j);
}

std::string write_coefficients(const CoefficientMap& coeffs) {
  std::string out = "index,re,im\n";
  for (const auto& [j, z] : coeffs) {
    out += std::to_string(j + 1) + "," + format_double(z.real()) + "," +
           format_double(z.imag()) + "\n";
  }
  return out;
}

CoefficientMap read_coefficients(const std::string& text, std::size_t universe) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  CoefficientMap out;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "index,re,im") {
        throw ContractViolation("coefficient file must start with header 'index,re,im'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 3) {
      throw ContractViolation("coefficient file line " + std::to_string(line_no) +
                              ": expected 3 fields");
    }
    const double idx = parse_double(fields[0], line_no);
    if (idx < 1 || idx != static_cast<double>(static_cast<std::size_t>(idx)) ||
        static_cast<std::size_t>(idx) > universe) {
      throw ContractViolation("coefficient file line " + std::to_string(line_no) +
                              ": index out of range 1.." + std::to_string(universe));
    }
    const auto j = static_cast<std::size_t>(idx) - 1;
    if (out.count(j) != 0) {
      throw ContractViolation("coefficient file: duplicate index " + std::to_string(j + 1));
    }
    out.emplace(j, Complex(parse_double(fields[1], line_no), parse_double(fields[2], line_no)));
  }
  if (!header_seen) throw ContractViolation("coefficient file is empty");
  return out;
}

json to_json(const SamplingScheme& scheme) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = to_string(scheme.kind);
  j["space_dim"] = scheme.space_dim;
  j["coefficient_weight"] = scheme.coefficient_weight;
  j["first_frequency"] = scheme.first_frequency;
  json points = json::array();
  for (const auto& p : scheme.points) {
    points.push_back({{"index", p.index}, {"spacing", p.spacing}, {"t", p.value()}});
  }
  j["points"] = std::move(points);
  j["value_table"] = matrix_to_json(scheme.value_table);
  if (scheme.synthesis_coordinates) {
    j["synthesis_coordinates"] = matrix_to_json(*scheme.synthesis_coordinates);
  }
  if (scheme.analysis_coordinates) {
    j["analysis_coordinates"] = matrix_to_json(*scheme.analysis_coordinates);
  }
  return j;
}

SamplingScheme scheme_from_json(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw ContractViolation("unsupported scheme file schema_version");
    }
    SamplingScheme s;
    s.kind = scheme_kind_from_string(j.at("kind").get<std::string>());
    s.space_dim = j.value("space_dim", std::size_t{0});
    s.coefficient_weight = j.value("coefficient_weight", 1.0);
    s.first_frequency = j.value("first_frequency", 0LL);
    for (const auto& p : j.at("points")) {
      s.points.push_back({p.at("index").get<long long>(), p.at("spacing").get<double>()});
    }
    s.value_table = matrix_from_json(j.at("value_table"));
    if (static_cast<std::size_t>(s.value_table.rows()) != s.points.size() ||
        s.value_table.rows() != s.value_table.cols()) {
      throw ContractViolation("scheme value_table must be N x N for N points");
    }
    require_finite(s.value_table, "scheme value_table");
    if (j.contains("synthesis_coordinates")) {
      s.synthesis_coordinates = matrix_from_json(j["synthesis_coordinates"]);
    }
    if (j.contains("analysis_coordinates")) {
      s.analysis_coordinates = matrix_from_json(j["analysis_coordinates"]);
    }
    return s;
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("malformed scheme file: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractViolation("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractViolation("cannot write '" + path + "'");
  out << text;
  if (!out) throw ContractViolation("write to '" + path + "' failed");
}

}  // namespace nilbridge::io
