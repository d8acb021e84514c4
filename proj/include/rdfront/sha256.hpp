#pragma once

#include <cstdint>
#include <string>

namespace rdfront {

// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(const std::string& data);

// SHA-256 of a file's contents; throws if the file cannot be read.
std::string sha256_file_hex(const std::string& path);

}  // namespace rdfront
