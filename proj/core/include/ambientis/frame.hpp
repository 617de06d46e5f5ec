#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ambientis {

// One ephemeral camera sample. Pixel buffers live only while the frame is
// being processed: release_frame() scrubs them once feature extraction is
// done, and RawFrame deliberately has no serialization hooks -- the only
// record that crosses the ingest boundary outward is FrameFeatures.
//
// The optional depth channel is carried for completeness but no metric
// reads it.
struct RawFrame {
  std::int64_t timestamp_ms = 0;  // UTC milliseconds since epoch
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::vector<std::uint8_t> rgb;     // row-major, 3 bytes per pixel
  std::vector<std::uint16_t> depth;  // row-major millimetres, empty if absent

  [[nodiscard]] bool has_pixels() const { return !rgb.empty(); }
  [[nodiscard]] std::size_t pixel_count() const {
    return std::size_t(width) * std::size_t(height);
  }

  // r/g/b of pixel (x, y); caller guarantees bounds.
  [[nodiscard]] const std::uint8_t* px(int x, int y) const {
    return rgb.data() + (std::size_t(y) * width + std::size_t(x)) * 3;
  }
  [[nodiscard]] std::uint8_t* px(int x, int y) {
    return rgb.data() + (std::size_t(y) * width + std::size_t(x)) * 3;
  }
};

// Scrub the pixel payload. Zero-fills before deallocating so the data does
// not linger in freed pages; calling twice is a no-op.
void release_frame(RawFrame& frame);

enum class SourceKind { Scenario, Recorded };

struct StreamConfig {
  SourceKind kind = SourceKind::Scenario;
  std::string path;                 // .scn scenario or .ambf fixture
  std::int64_t frame_interval_ms = 200;  // nominal; scenario sources use the scenario's own
  std::string room_label;
  int tz_offset_min = 0;
};

// Pull-style frame source. Frames come out in strictly increasing timestamp
// order; the stream itself never retains a yielded frame, so a pipeline that
// keeps only (previous, current) bounds the number of in-flight pixel
// buffers at two.
class FrameStream {
 public:
  virtual ~FrameStream() = default;

  // Next frame, or nullopt at end of stream.
  // Throws FormatError on malformed records or non-monotonic timestamps.
  virtual std::optional<RawFrame> next() = 0;
};

// Opens a frame source described by the config.
// Throws InputError if the source cannot be read, FormatError if it parses
// but is malformed.
std::unique_ptr<FrameStream> open_stream(const StreamConfig& config);

}  // namespace ambientis
