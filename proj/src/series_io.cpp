#include "nestderiv/series_io.hpp"

#include <fstream>
#include <string>

namespace nestderiv {

namespace {

std::string field_string(const nlohmann::json& v, const char* what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw UsageError(std::string("series literal: ") + what + " must be a string");
}

}  // namespace

std::optional<unsigned> peek_precision_bits(const nlohmann::json& j) {
  if (!j.contains("precision_bits")) return std::nullopt;
  const auto& v = j.at("precision_bits");
  if (!v.is_number_integer() || v.get<long long>() < 64) {
    throw UsageError("series literal: precision_bits must be an integer >= 64");
  }
  return v.get<unsigned>();
}

SeriesLiteral series_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("series literal must be a JSON object");
  for (const char* key : {"center", "coeffs"}) {
    if (!j.contains(key)) throw UsageError(std::string("series literal: missing '") + key + "'");
  }
  std::string mode = j.value("mode", std::string("rational"));
  if (mode != "rational" && mode != "float") throw UsageError("series literal: mode must be 'rational' or 'float'");
  const auto& coeffs = j.at("coeffs");
  if (!coeffs.is_array() || coeffs.empty()) throw UsageError("series literal: coeffs must be a non-empty array");

  SeriesLiteral out{RationalSeries::zero(0, 0), peek_precision_bits(j)};
  std::string center = field_string(j.at("center"), "center");
  if (mode == "rational") {
    std::vector<Rational> c;
    for (const auto& v : coeffs) c.push_back(parse_rational(field_string(v, "coefficient")));
    out.series = RationalSeries(parse_rational(center), std::move(c));
  } else {
    auto parse_real = [](const std::string& s) {
      try {
        return Real(s);
      } catch (const std::exception&) {
        throw UsageError("series literal: malformed float '" + s + "'");
      }
    };
    std::vector<Real> c;
    for (const auto& v : coeffs) c.push_back(parse_real(field_string(v, "coefficient")));
    out.series = RealSeries(parse_real(center), std::move(c));
  }
  return out;
}

nlohmann::json series_to_json(const AnySeries& s) {
  return std::visit(
      [](const auto& series) {
        using T = std::decay_t<decltype(series.center())>;
        nlohmann::json j;
        nlohmann::json coeffs = nlohmann::json::array();
        if constexpr (std::is_same_v<T, Rational>) {
          j["center"] = format_rational(series.center());
          for (const auto& c : series.coeffs()) coeffs.push_back(format_rational(c));
          j["mode"] = "rational";
        } else {
          int digits = static_cast<int>(bmp::detail::digits2_2_10(precision_bits())) + 2;
          j["center"] = format_real(series.center(), digits);
          for (const auto& c : series.coeffs()) coeffs.push_back(format_real(c, digits));
          j["mode"] = "float";
          j["precision_bits"] = precision_bits();
        }
        j["coeffs"] = std::move(coeffs);
        return j;
      },
      s);
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

}  // namespace nestderiv
