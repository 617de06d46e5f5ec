#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ambientis {

// Automated check that persisted pipeline artifacts carry features only,
// never pixels. A finding is any field, CSV cell or token whose payload
// could hold an image at the given pixel budget (width*height bytes), or
// content that starts with a known image-container signature.

struct PrivacyFinding {
  std::string file;
  std::string what;
};

struct PrivacyScanResult {
  std::size_t files_scanned = 0;
  std::vector<PrivacyFinding> findings;

  [[nodiscard]] bool clean() const { return findings.empty(); }
};

// Scans one file: image magic bytes (PNG, JPEG, GIF, BMP, AMBF) at the start,
// any contiguous non-delimiter token of at least pixel_budget bytes, and
// base64-looking runs that long.
void scan_file(const std::string& path, std::size_t pixel_budget,
               PrivacyScanResult& result);

// Scans every regular file under dir (recursively).
PrivacyScanResult scan_artifacts(const std::string& dir, std::size_t pixel_budget);

}  // namespace ambientis
