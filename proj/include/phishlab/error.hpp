#pragma once

#include <stdexcept>
#include <string>

namespace phishlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class UrlError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class HashFormatError : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

/// A mutation that cannot be carried out without changing appearance or
/// functionality of the page.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// URL features are never mutated.
class UrlFeatureUnaddable : public Unsupported {
 public:
  using Unsupported::Unsupported;
};

class FeatureAbsent : public Error {
 public:
  using Error::Error;
};

class TermNotFound : public Error {
 public:
  using Error::Error;
};

class PathError : public Error {
 public:
  using Error::Error;
};

class UnknownRule : public Error {
 public:
  using Error::Error;
};

class RuleAlreadyHit : public Error {
 public:
  using Error::Error;
};

/// The seed page is not classified as phishing, so there is nothing to evade.
class NotPhishing : public Error {
 public:
  using Error::Error;
};

class Unreachable : public Error {
 public:
  using Error::Error;
};

}  // namespace phishlab
