#pragma once

#include <stdexcept>
#include <string>

namespace pattern_oracle {

enum class InferenceErrorKind {
  TooFewTurningPoints,
  NoCandidates,
  AllTrajectoriesInvalid,
};

class InferenceError : public std::runtime_error {
 public:
  InferenceError(InferenceErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  InferenceErrorKind kind() const { return kind_; }

 private:
  InferenceErrorKind kind_;
};

}  // namespace pattern_oracle
