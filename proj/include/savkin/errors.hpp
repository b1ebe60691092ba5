#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace savkin {

enum class ErrorKind {
  invalid_argument,
  non_positive_mass,
  negative_density,
  non_positive_density,
  non_positive_modified_entropy,
  degenerate,
  missing_history,
  grid_mismatch,
  operator_without_split,
  no_convergence,
  negative_region,
  metadata_mismatch,
  corrupt_file,
  io,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so that drivers can
// record it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::non_positive_mass: return "NonPositiveMass";
    case ErrorKind::negative_density: return "NegativeDensity";
    case ErrorKind::non_positive_density: return "NonPositiveDensity";
    case ErrorKind::non_positive_modified_entropy: return "NonPositiveModifiedEntropy";
    case ErrorKind::degenerate: return "Degenerate";
    case ErrorKind::missing_history: return "MissingHistory";
    case ErrorKind::grid_mismatch: return "GridMismatch";
    case ErrorKind::operator_without_split: return "OperatorWithoutSplit";
    case ErrorKind::no_convergence: return "NoConvergence";
    case ErrorKind::negative_region: return "NegativeRegion";
    case ErrorKind::metadata_mismatch: return "MetadataMismatch";
    case ErrorKind::corrupt_file: return "CorruptFile";
    case ErrorKind::io: return "IoError";
  }
  return "Unknown";
}

}  // namespace savkin
