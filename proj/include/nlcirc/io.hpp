#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlcirc::io {

/// Shortest round-trip decimal with 15 significant digits (printf %.15g).
/// NaN is normalized to "nan" regardless of sign so reruns stay byte-stable.
std::string format_g15(double x);

/// Writes `content` to `path` atomically: the bytes go to a sibling temp file
/// first and are renamed over the target, so readers never see a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// column-major CSV: header row, then one row per index across the columns.
/// All columns must share one length.
std::string csv_table(std::span<const std::string> header,
                      const std::vector<std::vector<double>>& columns);

void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               const std::vector<std::vector<double>>& columns);

/// FNV-1a 64-bit hash, used to fingerprint configs in run summaries.
std::uint64_t fnv1a64(std::string_view bytes);

/// Lower-case hex rendering of a 64-bit value, zero-padded to 16 digits.
std::string hex64(std::uint64_t value);

} // namespace nlcirc::io
