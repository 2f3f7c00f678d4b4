#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace chaoswpt::csv {

/// Shortest round-trip representation, '.' decimal separator.
[[nodiscard]] std::string format_double(double v);

/// Empty field for a missing value.
[[nodiscard]] std::string format_optional(const std::optional<double>& v);

[[nodiscard]] inline std::string_view format_bool(bool b) noexcept { return b ? "true" : "false"; }

/// Writes `contents` to `<path>.tmp` and renames it over `path`, so a failed
/// run never leaves a truncated file behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace chaoswpt::csv
