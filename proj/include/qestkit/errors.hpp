#pragma once

#include <stdexcept>
#include <string>

namespace qestkit {

// Failure categories drive the CLI exit code: validation failures are bad
// inputs (exit 2), numerical failures are well-formed problems the algorithms
// could not solve (exit 3).
enum class ErrorKind { validation, numerical };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::validation, what) {}
};

class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::numerical, what) {}
};

struct NotHermitian : ValidationError {
  NotHermitian(int index, double deviation)
      : ValidationError("element " + std::to_string(index) +
                        " is not Hermitian (max |A - A^+| = " +
                        std::to_string(deviation) + ")"),
        index(index), deviation(deviation) {}
  int index;
  double deviation;
};

struct NotPsd : ValidationError {
  NotPsd(int index, double min_eigenvalue)
      : ValidationError("element " + std::to_string(index) +
                        " is not positive semidefinite (min eigenvalue " +
                        std::to_string(min_eigenvalue) + ")"),
        index(index), min_eigenvalue(min_eigenvalue) {}
  int index;
  double min_eigenvalue;
};

struct NotComplete : ValidationError {
  explicit NotComplete(double deviation)
      : ValidationError("POVM elements do not sum to identity (max deviation " +
                        std::to_string(deviation) + ")"),
        deviation(deviation) {}
  double deviation;
};

struct DimensionMismatch : ValidationError {
  explicit DimensionMismatch(const std::string& what) : ValidationError(what) {}
};

struct IndexOutOfRange : ValidationError {
  explicit IndexOutOfRange(const std::string& what) : ValidationError(what) {}
};

struct OutOfDomain : ValidationError {
  explicit OutOfDomain(const std::string& what) : ValidationError(what) {}
};

struct InvalidStep : ValidationError {
  explicit InvalidStep(const std::string& what) : ValidationError(what) {}
};

struct UnsupportedRing : ValidationError {
  explicit UnsupportedRing(const std::string& what) : ValidationError(what) {}
};

struct NotInSubalgebra : ValidationError {
  explicit NotInSubalgebra(double deviation)
      : ValidationError("operator is not in the subalgebra (projection "
                        "deviation " + std::to_string(deviation) + ")"),
        deviation(deviation) {}
  double deviation;
};

struct InsufficientNearOptimalRestarts : ValidationError {
  explicit InsufficientNearOptimalRestarts(int count)
      : ValidationError("uniqueness audit needs at least 2 near-optimal "
                        "restarts with Fisher matrices, got " +
                        std::to_string(count)),
        count(count) {}
  int count;
};

struct ParseError : ValidationError {
  explicit ParseError(const std::string& what) : ValidationError(what) {}
};

struct SingularFisher : NumericalError {
  explicit SingularFisher(double min_eigenvalue)
      : NumericalError("Fisher matrix is singular (min eigenvalue " +
                       std::to_string(min_eigenvalue) + ")"),
        min_eigenvalue(min_eigenvalue) {}
  double min_eigenvalue;
};

struct NoDependenceFound : NumericalError {
  explicit NoDependenceFound(const std::string& what) : NumericalError(what) {}
};

}  // namespace qestkit
