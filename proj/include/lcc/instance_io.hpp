#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "lcc/instance.hpp"

namespace lcc {

// Instance file, JSON, format_version 1:
//   {"format_version":1, "kind":"lcc"|"ldc", "q":2, "n":..., "k":..., "r":3,
//    "delta":"1/4", "rows":[...], "matchings":{"<i>":[[a,b,c],...],...},
//    "coeffs":{"<i>":[[alpha_1,...],...],...}}      (ldc only)
// Rows over F2 are hex strings of ceil(k/8) bytes, byte 0 first, LSB-first
// within a byte. LDC rows over F_q with q > 2 are arrays of residues.
inline constexpr int kFormatVersion = 1;

using AnyInstance = std::variant<LccInstance, LdcInstance>;

std::string serialize_instance(const LccInstance& inst);
std::string serialize_instance(const LdcInstance& inst);

/// Throws ParseError, VersionError or StructuralError.
AnyInstance parse_instance(std::string_view text);

void write_instance(const LccInstance& inst, const std::filesystem::path& path);
void write_instance(const LdcInstance& inst, const std::filesystem::path& path);
AnyInstance read_instance(const std::filesystem::path& path);

LccInstance read_lcc(const std::filesystem::path& path);
LdcInstance read_ldc(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace lcc
