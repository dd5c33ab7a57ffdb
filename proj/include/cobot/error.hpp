#pragma once

#include <stdexcept>
#include <string>

namespace cobot {

/// Base class for every failure raised by the workcell library. The message
/// is a short, stable phrase ("empty point set", "plan frozen", ...) so that
/// callers and the wire protocol can match on it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class PlanError : public Error {
 public:
  using Error::Error;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

}  // namespace cobot
