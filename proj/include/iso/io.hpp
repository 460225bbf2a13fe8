#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "iso/density.hpp"
#include "iso/oracle.hpp"
#include "iso/profile.hpp"

namespace iso {

/// Thrown when an input file cannot be parsed as the expected format.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Locale-independent formatting with 12 significant digits.
[[nodiscard]] std::string format_number(double x);

/// Two-column CSV "x,h" with header, x strictly increasing, final row x = D.
[[nodiscard]] std::string density_csv(const TabulatedDensity& h);
[[nodiscard]] TabulatedDensity parse_density_csv(const std::string& text,
                                                 double norm_tol = 1e-3);

/// CSV "v,a_v,value,d_bar" (d_bar column empty when absent).
[[nodiscard]] std::string profile_csv(const ProfileTable& table);

/// JSON form embedding params and tolerances next to the rows.
[[nodiscard]] nlohmann::json profile_json(const ProfileTable& table);

[[nodiscard]] nlohmann::json validation_json(const ValidationReport& rep);
[[nodiscard]] nlohmann::json oracle_json(const OracleReport& rep);
[[nodiscard]] nlohmann::json params_json(const CurvatureParams& p);

/// Writes via a temporary file in the same directory and renames on
/// success, so failed runs never leave partial output behind.
void write_file_atomic(const std::string& path, const std::string& content);

[[nodiscard]] std::string read_file(const std::string& path);

}  // namespace iso
