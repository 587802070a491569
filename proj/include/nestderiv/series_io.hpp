#pragma once

#include <filesystem>
#include <optional>
#include <variant>

#include <nlohmann/json.hpp>

#include "nestderiv/series.hpp"

namespace nestderiv {

using AnySeries = std::variant<RationalSeries, RealSeries>;

/// Series literal file:
///   {"center": "1/2", "coeffs": ["1", "-1/3", ...], "mode": "rational"|"float", "precision_bits": 256}
/// Float coefficients are parsed at the current working precision; `precision_bits`
/// is reported back for the caller to apply before parsing.
struct SeriesLiteral {
  AnySeries series;
  std::optional<unsigned> precision_bits;
};

SeriesLiteral series_from_json(const nlohmann::json& j);
nlohmann::json series_to_json(const AnySeries& s);

/// Reads only the "precision_bits" field, if any.
std::optional<unsigned> peek_precision_bits(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace nestderiv
