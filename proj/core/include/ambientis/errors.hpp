#pragma once

#include <stdexcept>
#include <string>

namespace ambientis {

// Error categories map one-to-one onto CLI exit codes:
//   InputError -> 2, FormatError -> 3, StatsError -> 4.
// Contract violations inside the library (bad bbox, mismatched
// dimensions) throw std::invalid_argument instead.

// Unreadable or missing files, unknown plug-in names, invalid configuration.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed data encountered while parsing fixtures, JSONL or CSV.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Degenerate or insufficient statistical input (zero pairs, zero variance).
struct StatsError : std::runtime_error {
  explicit StatsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ambientis
