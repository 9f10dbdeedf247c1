#pragma once

#include <stdexcept>
#include <string>

namespace wavescale {

// All library errors derive from Error. The kind maps onto the CLI exit
// codes: invalid_input -> 2, numeric_failure -> 3.
class Error : public std::runtime_error {
 public:
  enum class Kind { invalid_input, numeric_failure };

  Error(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct UnsupportedFilter : Error {
  explicit UnsupportedFilter(const std::string& msg) : Error(Kind::invalid_input, msg) {}
};

struct InvalidShape : Error {
  explicit InvalidShape(const std::string& msg) : Error(Kind::invalid_input, msg) {}
};

struct InvalidLevelRange : Error {
  explicit InvalidLevelRange(const std::string& msg) : Error(Kind::invalid_input, msg) {}
};

struct InvalidHurst : Error {
  explicit InvalidHurst(const std::string& msg) : Error(Kind::invalid_input, msg) {}
};

struct EmbeddingFailure : Error {
  explicit EmbeddingFailure(const std::string& msg) : Error(Kind::numeric_failure, msg) {}
};

struct DegenerateLevel : Error {
  explicit DegenerateLevel(const std::string& msg) : Error(Kind::numeric_failure, msg) {}
};

struct AlreadyCorrected : Error {
  explicit AlreadyCorrected(const std::string& msg) : Error(Kind::invalid_input, msg) {}
};

struct InsufficientLevels : Error {
  explicit InsufficientLevels(const std::string& msg) : Error(Kind::invalid_input, msg) {}
};

struct DegeneratePair : Error {
  explicit DegeneratePair(const std::string& msg) : Error(Kind::invalid_input, msg) {}
};

struct InsufficientExtent : Error {
  explicit InsufficientExtent(const std::string& msg) : Error(Kind::invalid_input, msg) {}
};

struct InsufficientGroups : Error {
  explicit InsufficientGroups(const std::string& msg) : Error(Kind::invalid_input, msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(Kind::invalid_input, msg) {}
};

}  // namespace wavescale
