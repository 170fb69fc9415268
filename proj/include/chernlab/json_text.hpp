#pragma once

// Deterministic JSON text: insertion-ordered keys, two-space indent, LF line
// endings, doubles with 17 significant digits, non-finite doubles as null.

#include <string>

#include "json.hpp"

namespace chernlab {

using Json = nlohmann::ordered_json;

std::string dump_json(const Json& value);

/// 1-based line and column of byte offset `offset` inside `text`.
std::pair<int, int> line_column(std::string_view text, std::size_t offset);

}  // namespace chernlab
