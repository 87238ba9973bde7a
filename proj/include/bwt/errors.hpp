#pragma once

#include <stdexcept>
#include <string>

namespace bwt {

// A pipeline stage could not certify its output.
class StageFailure : public std::runtime_error {
 public:
  StageFailure(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace bwt
