#pragma once

#include <cstdio>
#include <memory>
#include <string>

#include "ambientis/frame.hpp"

namespace ambientis {

// Recorded-frame fixture format, used for desk-scale test fixtures only.
//
//   magic bytes "AMBF", then per frame:
//     u64  timestamp_ms
//     u16  width
//     u16  height
//     u8   has_depth
//     payload: width*height*3 bytes RGB, then width*height u16 depth
//              millimetres when has_depth = 1
//   All integers little-endian.
//
// A zero-length file is a valid empty fixture.

inline constexpr char kFixtureMagic[4] = {'A', 'M', 'B', 'F'};

// Streaming writer. Only the simulator's fixture-generation path uses this;
// nothing downstream of ingest can reach it with a live frame.
class FixtureWriter {
 public:
  explicit FixtureWriter(const std::string& path);
  ~FixtureWriter();
  FixtureWriter(const FixtureWriter&) = delete;
  FixtureWriter& operator=(const FixtureWriter&) = delete;

  void append(const RawFrame& frame);
  void close();

 private:
  std::FILE* file_ = nullptr;
};

// Sequential reader yielding frames in file order. Enforces strictly
// increasing timestamps.
class FixtureReader final : public FrameStream {
 public:
  explicit FixtureReader(const std::string& path);
  ~FixtureReader() override;

  std::optional<RawFrame> next() override;

 private:
  std::FILE* file_ = nullptr;
  std::string path_;
  std::int64_t last_ts_ = 0;
  bool any_ = false;
};

}  // namespace ambientis
