#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "marrt/motion_graph.hpp"

namespace marrt {

// JSON instance documents. Keys are emitted in a fixed order so that saving
// the same instance always yields the same bytes.
std::string save_instance(const ProblemInstance& instance);

// Throws ParseError (with line and column) or SchemaViolation (naming the field).
ProblemInstance load_instance(std::string_view document);

std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over the target.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace marrt
