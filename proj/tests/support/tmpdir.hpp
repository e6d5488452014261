#pragma once

#include <filesystem>
#include <string>

// Fresh directory under the build tree, wiped on creation.
inline std::filesystem::path fresh_dir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::path(REPSEG_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}
