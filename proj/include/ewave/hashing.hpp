#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace ewave {

// Git blob id: hex SHA-1 of "blob <size>\0" followed by the content.
std::string git_blob_hash(std::string_view content);
std::string git_blob_hash_file(const std::filesystem::path& path);

}  // namespace ewave
