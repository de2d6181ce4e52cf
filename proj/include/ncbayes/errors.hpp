#pragma once

#include <stdexcept>
#include <string>

namespace ncbayes {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ncprob-core
class DimensionOverflow : public Error {
 public:
  using Error::Error;
};
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// modular
class NonFaithfulState : public Error {
 public:
  using Error::Error;
};
class NotASubalgebra : public Error {
 public:
  using Error::Error;
};
class KmsOverflow : public Error {
 public:
  using Error::Error;
};
class PropertyFailure : public Error {
 public:
  using Error::Error;
};

/// The Takesaki gate rejected the subalgebra; carries the derivation residual.
class ModularViolation : public Error {
 public:
  ModularViolation(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// bayes
class NonFaithfulPrior : public NonFaithfulState {
 public:
  using NonFaithfulState::NonFaithfulState;
};
class ZeroConditioningEvent : public Error {
 public:
  using Error::Error;
};

// spacetime
class OffHyperboloid : public Error {
 public:
  using Error::Error;
};
class NotTangent : public Error {
 public:
  using Error::Error;
};

// gaussian
class SingularCoupling : public Error {
 public:
  using Error::Error;
};
class EmptyRegion : public Error {
 public:
  using Error::Error;
};
class NonFaithfulReduced : public Error {
 public:
  using Error::Error;
};
class UncertaintyViolation : public Error {
 public:
  using Error::Error;
};

// scenario
class ParseError : public Error {
 public:
  ParseError(const std::string& field, const std::string& what)
      : Error("parse error at '" + field + "': " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};
class UnknownTask : public ParseError {
 public:
  UnknownTask(const std::string& field, const std::string& kind)
      : ParseError(field, "unknown task kind '" + kind + "'"), kind_(kind) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};
class DanglingReference : public ParseError {
 public:
  DanglingReference(const std::string& field, const std::string& name)
      : ParseError(field, "reference to undeclared object '" + name + "'") {}
};

}  // namespace ncbayes
