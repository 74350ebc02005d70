#pragma once

#include <string>

namespace pillai::search {

// Lowercase hex SHA-256 of the bytes of `text`.
std::string sha256_hex(const std::string& text);

}  // namespace pillai::search
