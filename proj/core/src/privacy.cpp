#include "ambientis/privacy.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "ambientis/errors.hpp"

namespace ambientis {

namespace {

bool starts_with(const std::vector<char>& data, const char* sig, std::size_t n) {
  return data.size() >= n && std::memcmp(data.data(), sig, n) == 0;
}

bool is_base64_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '+' || c == '/' || c == '=';
}

// Delimiters that terminate a token: whitespace plus the structural
// characters of the JSON/CSV artifacts the pipeline writes.
bool is_delimiter(char c) {
  switch (c) {
    case ' ': case '\t': case '\r': case '\n':
    case ',': case '"': case ':': case ';':
    case '{': case '}': case '[': case ']':
      return true;
    default:
      return false;
  }
}

}  // namespace

void scan_file(const std::string& path, std::size_t pixel_budget,
               PrivacyScanResult& result) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open for scanning: " + path);
  std::vector<char> data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  ++result.files_scanned;
  if (pixel_budget == 0) pixel_budget = 1;

  if (starts_with(data, "\x89PNG\r\n\x1a\n", 8)) {
    result.findings.push_back({path, "PNG signature at start of file"});
  } else if (starts_with(data, "\xff\xd8\xff", 3)) {
    result.findings.push_back({path, "JPEG signature at start of file"});
  } else if (starts_with(data, "GIF87a", 6) || starts_with(data, "GIF89a", 6)) {
    result.findings.push_back({path, "GIF signature at start of file"});
  } else if (starts_with(data, "BM", 2) && data.size() >= 14) {
    result.findings.push_back({path, "BMP signature at start of file"});
  } else if (starts_with(data, "AMBF", 4)) {
    result.findings.push_back({path, "raw frame fixture content"});
  }

  // Longest run that could decode to >= pixel_budget payload bytes.
  const std::size_t base64_budget = (pixel_budget * 4 + 2) / 3;

  std::size_t token_len = 0;
  std::size_t base64_len = 0;
  bool token_reported = false;
  bool base64_reported = false;
  for (std::size_t i = 0; i <= data.size(); ++i) {
    const char c = i < data.size() ? data[i] : '\n';
    if (is_delimiter(c)) {
      token_len = 0;
    } else if (++token_len >= pixel_budget && !token_reported) {
      result.findings.push_back(
          {path, "token of " + std::to_string(token_len) +
                     "+ bytes could hold a " + std::to_string(pixel_budget) +
                     "-byte frame payload"});
      token_reported = true;
    }
    if (is_base64_char(c)) {
      if (++base64_len >= base64_budget && base64_len >= 64 && !base64_reported) {
        result.findings.push_back(
            {path, "base64 run long enough to encode a frame payload"});
        base64_reported = true;
      }
    } else {
      base64_len = 0;
    }
  }
}

PrivacyScanResult scan_artifacts(const std::string& dir, std::size_t pixel_budget) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw InputError("not a directory: " + dir);
  }

  std::vector<std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());

  PrivacyScanResult result;
  for (const std::string& file : files) {
    scan_file(file, pixel_budget, result);
  }
  return result;
}

}  // namespace ambientis
