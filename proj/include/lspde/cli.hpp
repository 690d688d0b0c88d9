#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lspde::cli {

// Exit codes: 0 success, 1 domain error, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

// Manifest path written beside a primary output.
std::filesystem::path manifest_path(const std::filesystem::path& output);

}  // namespace lspde::cli
