#pragma once

#include <stdexcept>
#include <string>

namespace ramcomp {

/// Coarse classification used by the CLI to choose an exit status.
enum class ErrorKind {
  Input,       // malformed files, bad arguments, shape mismatches
  Numerical,   // iteration caps, failed decompositions
  Construction,
  Certificate,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InputError : Error {
  explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& what) : Error(ErrorKind::Input, "shape error: " + what) {}
};

struct ParameterError : Error {
  explicit ParameterError(const std::string& what) : Error(ErrorKind::Input, "parameter error: " + what) {}
};

struct BiregularityError : Error {
  explicit BiregularityError(const std::string& what) : Error(ErrorKind::Input, "biregularity error: " + what) {}
};

struct RankError : Error {
  explicit RankError(const std::string& what) : Error(ErrorKind::Input, "rank error: " + what) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, "numerical failure: " + what) {}
};

struct ConstructionError : Error {
  explicit ConstructionError(const std::string& what) : Error(ErrorKind::Construction, "construction error: " + what) {}
};

struct CertificateError : Error {
  explicit CertificateError(const std::string& what) : Error(ErrorKind::Certificate, "certificate error: " + what) {}
};

}  // namespace ramcomp
