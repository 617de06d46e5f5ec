#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "oracles.hpp"

#include "ambientis/errors.hpp"
#include "ambientis/privacy.hpp"

using namespace ambientis;

namespace {

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), std::streamsize(bytes.size()));
}

bool flagged(const PrivacyScanResult& result, const std::string& needle) {
  for (const PrivacyFinding& f : result.findings) {
    if (f.file.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("feature-sized artifacts scan clean") {
  oracles::TempDir tmp("ambientis-priv");
  write_bytes(tmp.file("features.jsonl"),
              "{\"timestamp_ms\":1,\"present\":false}\n"
              "{\"timestamp_ms\":2,\"present\":true}\n");
  write_bytes(tmp.file("daily.csv"), "date,phase\n2024-06-03,normal\n");
  const PrivacyScanResult result = scan_artifacts(tmp.path(), 768);
  CHECK(result.files_scanned == 2);
  CHECK(result.clean());
}

TEST_CASE("image magic bytes are flagged") {
  oracles::TempDir tmp("ambientis-priv");
  write_bytes(tmp.file("shot.png"),
              std::string("\x89PNG\r\n\x1a\n", 8) + std::string(100, 'x'));
  write_bytes(tmp.file("shot.jpg"), std::string("\xff\xd8\xff\xe0", 4) + "JFIF");
  write_bytes(tmp.file("anim.gif"), "GIF89a trailing");
  write_bytes(tmp.file("bmp.bin"), std::string("BM", 2) + std::string(20, '\1'));
  write_bytes(tmp.file("frames.ambf"), "AMBF" + std::string(32, '\0'));
  write_bytes(tmp.file("notes.txt"), "mentions BM midway, not a bitmap");

  const PrivacyScanResult result = scan_artifacts(tmp.path(), 10'000);
  CHECK(flagged(result, "shot.png"));
  CHECK(flagged(result, "shot.jpg"));
  CHECK(flagged(result, "anim.gif"));
  CHECK(flagged(result, "bmp.bin"));
  CHECK(flagged(result, "frames.ambf"));
  CHECK_FALSE(flagged(result, "notes.txt"));
}

TEST_CASE("oversized opaque tokens are flagged against the pixel budget") {
  oracles::TempDir tmp("ambientis-priv");
  const std::size_t budget = 64;
  write_bytes(tmp.file("long.json"),
              "{\"blob\":\"" + std::string(80, 'q') + "\"}");
  write_bytes(tmp.file("short.json"),
              "{\"blob\":\"" + std::string(budget - 1, 'q') + "\"}");
  const PrivacyScanResult result = scan_artifacts(tmp.path(), budget);
  CHECK(flagged(result, "long.json"));
  CHECK_FALSE(flagged(result, "short.json"));
}

TEST_CASE("base64 runs spanning tokens are flagged") {
  oracles::TempDir tmp("ambientis-priv");
  // 100 base64 chars split by nothing scan-breaking: a 75-byte payload at a
  // 64-byte budget, accounting for the 4/3 encoding overhead
  std::string b64;
  for (int i = 0; i < 100; ++i) b64 += "ABCDefgh+/"[i % 10];
  write_bytes(tmp.file("embedded.txt"), "prefix " + b64 + " suffix");
  const PrivacyScanResult result = scan_artifacts(tmp.path(), 64);
  CHECK(flagged(result, "embedded.txt"));

  // the same run is fine when the budget exceeds the decoded size
  const PrivacyScanResult relaxed = scan_artifacts(tmp.path(), 1000);
  CHECK(relaxed.clean());
}

TEST_CASE("scan recurses and counts every regular file") {
  oracles::TempDir tmp("ambientis-priv");
  std::filesystem::create_directories(std::filesystem::path(tmp.path()) / "nested" / "deep");
  write_bytes(tmp.file("a.txt"), "ok");
  write_bytes((std::filesystem::path(tmp.path()) / "nested" / "b.txt").string(), "ok");
  write_bytes(
      (std::filesystem::path(tmp.path()) / "nested" / "deep" / "c.png").string(),
      std::string("\x89PNG\r\n\x1a\n", 8));
  const PrivacyScanResult result = scan_artifacts(tmp.path(), 100);
  CHECK(result.files_scanned == 3);
  REQUIRE(result.findings.size() == 1);
  CHECK(flagged(result, "c.png"));
}

TEST_CASE("scanning a non-directory is an input error") {
  oracles::TempDir tmp("ambientis-priv");
  CHECK_THROWS_AS((void)scan_artifacts(tmp.file("missing"), 100), InputError);
  write_bytes(tmp.file("file.txt"), "x");
  CHECK_THROWS_AS((void)scan_artifacts(tmp.file("file.txt"), 100), InputError);
  PrivacyScanResult sink;
  CHECK_THROWS_AS(scan_file(tmp.file("missing"), 100, sink), InputError);
}

TEST_CASE("tiny budgets still work") {
  oracles::TempDir tmp("ambientis-priv");
  write_bytes(tmp.file("x.txt"), "ab");
  const PrivacyScanResult result = scan_artifacts(tmp.path(), 0);  // floor is 1
  CHECK(flagged(result, "x.txt"));  // a 2-byte token meets a 1-byte budget
}
