#pragma once

#include <stdexcept>
#include <string>

namespace wavechannel {

// Field has (numerically) zero norm; expectations are undefined.
class DegenerateStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters below a mode cutoff or outside a closed form's validity range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An observable was requested for a run type it does not apply to.
class InvalidUseError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class UnreliablePhaseError : public std::runtime_error {
 public:
  UnreliablePhaseError(const std::string& what, double overlap)
      : std::runtime_error(what), overlap_(overlap) {}
  double overlap() const noexcept { return overlap_; }

 private:
  double overlap_;
};

class NumericalBlowupError : public std::runtime_error {
 public:
  NumericalBlowupError(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

// Configuration rejected; `path` is the dotted field path (e.g. "geometry.a").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wavechannel
