#include "ambientis/frame.hpp"

#include <algorithm>

#include "ambientis/errors.hpp"
#include "ambientis/fixture.hpp"
#include "ambientis/simulator.hpp"

namespace ambientis {

void release_frame(RawFrame& frame) {
  if (!frame.rgb.empty()) {
    std::fill(frame.rgb.begin(), frame.rgb.end(), std::uint8_t{0});
    frame.rgb.clear();
    frame.rgb.shrink_to_fit();
  }
  if (!frame.depth.empty()) {
    std::fill(frame.depth.begin(), frame.depth.end(), std::uint16_t{0});
    frame.depth.clear();
    frame.depth.shrink_to_fit();
  }
}

std::unique_ptr<FrameStream> open_stream(const StreamConfig& config) {
  switch (config.kind) {
    case SourceKind::Recorded:
      return std::make_unique<FixtureReader>(config.path);
    case SourceKind::Scenario: {
      ScenarioConfig scenario = parse_scenario_file(config.path);
      return open_scenario_stream(scenario);
    }
  }
  throw InputError("unknown stream source kind");
}

}  // namespace ambientis
