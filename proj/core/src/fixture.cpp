#include "ambientis/fixture.hpp"

#include <cstring>
#include <filesystem>

#include "ambientis/errors.hpp"

namespace ambientis {

namespace {

void put_u16(std::FILE* f, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>(v >> 8)};
  std::fwrite(b, 1, 2, f);
}

void put_u64(std::FILE* f, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  std::fwrite(b, 1, 8, f);
}

bool get_exact(std::FILE* f, void* out, std::size_t n) {
  return std::fread(out, 1, n, f) == n;
}

std::uint16_t read_u16(const unsigned char* b) {
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint64_t read_u64(const unsigned char* b) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace

FixtureWriter::FixtureWriter(const std::string& path) {
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_) throw InputError("cannot open fixture for writing: " + path);
  std::fwrite(kFixtureMagic, 1, 4, file_);
}

FixtureWriter::~FixtureWriter() { close(); }

void FixtureWriter::append(const RawFrame& frame) {
  if (!file_) throw InputError("fixture writer already closed");
  if (frame.rgb.size() != frame.pixel_count() * 3) {
    throw std::invalid_argument("frame rgb buffer does not match dimensions");
  }
  put_u64(file_, static_cast<std::uint64_t>(frame.timestamp_ms));
  put_u16(file_, frame.width);
  put_u16(file_, frame.height);
  const unsigned char has_depth = frame.depth.empty() ? 0 : 1;
  std::fwrite(&has_depth, 1, 1, file_);
  std::fwrite(frame.rgb.data(), 1, frame.rgb.size(), file_);
  if (has_depth) {
    if (frame.depth.size() != frame.pixel_count()) {
      throw std::invalid_argument("frame depth buffer does not match dimensions");
    }
    for (std::uint16_t d : frame.depth) put_u16(file_, d);
  }
}

void FixtureWriter::close() {
  if (file_) {
    std::fclose(file_);
    file_ = nullptr;
  }
}

FixtureReader::FixtureReader(const std::string& path) : path_(path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw InputError("cannot read fixture: " + path);
  file_ = std::fopen(path.c_str(), "rb");
  if (!file_) throw InputError("cannot read fixture: " + path);
  if (size == 0) return;  // zero-length file: a valid empty fixture
  char magic[4];
  if (!get_exact(file_, magic, 4) || std::memcmp(magic, kFixtureMagic, 4) != 0) {
    std::fclose(file_);
    file_ = nullptr;
    throw FormatError("not an AMBF fixture: " + path);
  }
}

FixtureReader::~FixtureReader() {
  if (file_) std::fclose(file_);
}

std::optional<RawFrame> FixtureReader::next() {
  if (!file_) return std::nullopt;

  unsigned char header[13];
  const std::size_t got = std::fread(header, 1, sizeof(header), file_);
  if (got == 0) return std::nullopt;  // clean end of stream
  if (got != sizeof(header)) {
    throw FormatError("truncated frame header in " + path_);
  }

  RawFrame frame;
  frame.timestamp_ms = static_cast<std::int64_t>(read_u64(header));
  frame.width = read_u16(header + 8);
  frame.height = read_u16(header + 10);
  const bool has_depth = header[12] != 0;

  if (frame.width == 0 || frame.height == 0) {
    throw FormatError("frame with zero dimension in " + path_);
  }
  if (any_ && frame.timestamp_ms <= last_ts_) {
    throw FormatError("non-monotonic timestamps in " + path_ + ": " +
                      std::to_string(frame.timestamp_ms) + " after " +
                      std::to_string(last_ts_));
  }

  frame.rgb.resize(frame.pixel_count() * 3);
  if (!get_exact(file_, frame.rgb.data(), frame.rgb.size())) {
    throw FormatError("truncated rgb payload in " + path_);
  }
  if (has_depth) {
    std::vector<unsigned char> raw(frame.pixel_count() * 2);
    if (!get_exact(file_, raw.data(), raw.size())) {
      throw FormatError("truncated depth payload in " + path_);
    }
    frame.depth.resize(frame.pixel_count());
    for (std::size_t i = 0; i < frame.depth.size(); ++i) {
      frame.depth[i] = read_u16(raw.data() + 2 * i);
    }
  }

  last_ts_ = frame.timestamp_ms;
  any_ = true;
  return frame;
}

}  // namespace ambientis
