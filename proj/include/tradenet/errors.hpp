#ifndef TRADENET_ERRORS_HPP
#define TRADENET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tradenet {

// Base class for every error thrown by the library. Callers that do not care
// about the exact failure can catch this one type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- graph generation ---
class DegenerateSpec : public Error {
 public:
  using Error::Error;
};
class GenerationFailed : public Error {
 public:
  using Error::Error;
};

// --- graph queries ---
class Disconnected : public Error {
 public:
  using Error::Error;
};
class NotIntermediary : public Error {
 public:
  using Error::Error;
};

// --- path enumeration / sampling ---
class PathExplosion : public Error {
 public:
  explicit PathExplosion(std::size_t cap)
      : Error("simple path count exceeds cap " + std::to_string(cap)),
        cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};
class CountOverflow : public Error {
 public:
  using Error::Error;
};

// --- agents ---
class EmptySample : public Error {
 public:
  using Error::Error;
};
class TooShort : public Error {
 public:
  using Error::Error;
};

// --- experiments ---
class NoEligiblePair : public Error {
 public:
  using Error::Error;
};
class EmptyLog : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};

// --- analysis ---
class RankDeficient : public Error {
 public:
  using Error::Error;
};
class TooFewObservations : public Error {
 public:
  using Error::Error;
};
class MOutOfRange : public Error {
 public:
  using Error::Error;
};
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

// --- file handling ---
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tradenet

#endif  // TRADENET_ERRORS_HPP
