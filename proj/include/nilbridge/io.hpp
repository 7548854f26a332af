// SPDX-License-Identifier: Apache-2.0
//
// File formats. Indices in files are 1-based.
//
// Frame file (JSON):
//   {"schema_version": 1, "field": "real" | "complex", "dim": n,
//    "role": "synthesis" | "analysis" (optional),
//    "vectors": [[[re, im], ...n pairs], ...N vectors]}
//
// Coefficient file (CSV): header "index,re,im", one row per known
// coefficient; missing indices are erasures.
//
// Scheme file (JSON): kind, points ({"index", "spacing", "t"}), value_table
// as rows of [re, im] pairs, plus dimension, coefficient weight, frequency
// offset and optional coordinate tables.
#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "nilbridge/bridging.hpp"
#include "nilbridge/fixtures.hpp"
#include "nilbridge/sampling.hpp"

namespace nilbridge::io {

inline constexpr int kSchemaVersion = 1;

struct FrameFile {
  Field field = Field::real;
  Frame frame;
  std::optional<std::string> role;
};

nlohmann::json to_json(const FrameFile& file);
/// Throws ContractViolation on malformed input.
FrameFile frame_file_from_json(const nlohmann::json& j);

std::string write_frame(const FrameFile& file);
FrameFile read_frame(const std::string& text);

/// Detects the field tag from the imaginary parts.
Field detect_field(const Matrix& m);

/// Rows sorted by index, numbers with 17 significant digits.
std::string write_coefficients(const CoefficientMap& coeffs);
/// Indices must be distinct and within 1..universe.
CoefficientMap read_coefficients(const std::string& text, std::size_t universe);

nlohmann::json to_json(const SamplingScheme& scheme);
SamplingScheme scheme_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

/// Decimal with 17 significant digits (exact double round-trip).
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace nilbridge::io
