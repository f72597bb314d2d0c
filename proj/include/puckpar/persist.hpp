#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "puckpar/models.hpp"

namespace puckpar {

inline constexpr int kArchiveSchemaVersion = 1;

// JSON model archive; see docs/model_archive.md for the layout. Reals are
// written in shortest round-trip form, so load(save(m)) predicts exactly
// like m.
std::string archive_text(const FittedModel& model);

// Throws ParseError (malformed or truncated text), UnsupportedVersionError,
// or ValidationError (unknown kind, payload that does not fit the kind).
FittedModel parse_archive(std::string_view text, std::string_view source_name = "<archive>");

// Throws InputError naming the path when the file cannot be written.
void save(const FittedModel& model, const std::filesystem::path& path);

// Throws NotFoundError when the file does not exist or cannot be read.
FittedModel load(const std::filesystem::path& path);

}  // namespace puckpar
