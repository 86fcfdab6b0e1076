#pragma once

#include <stdexcept>
#include <string>

namespace fishpc {

/// Process exit codes used by the command-line tool.
enum class ExitCode : int { ok = 0, config = 2, numerical = 3, io = 4 };

class Error : public std::runtime_error {
public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

private:
  ExitCode code_;
};

// Invalid arguments, shapes, configuration files.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::config, what) {}
};

class ParameterError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class ShapeError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class SizeError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class UnsupportedError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class MissingClusterError : public ConfigError {
public:
  explicit MissingClusterError(int label);
  int label() const noexcept { return label_; }

private:
  int label_;
};

// Failures of the linear algebra itself.
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what) : Error(ExitCode::numerical, what) {}
};

class SymmetryError : public NumericalError {
public:
  explicit SymmetryError(double asymmetry);
  double asymmetry() const noexcept { return asymmetry_; }

private:
  double asymmetry_;
};

class DefinitenessError : public NumericalError {
public:
  DefinitenessError(int index, double eigenvalue, double largest);
  int index() const noexcept { return index_; }
  double eigenvalue() const noexcept { return eigenvalue_; }

private:
  int index_;
  double eigenvalue_;
};

/// Scatter matrix of the data is numerically rank deficient.
class RankError : public NumericalError {
public:
  RankError(int index, double eigenvalue, double largest);
  int index() const noexcept { return index_; }

private:
  int index_;
};

class CholeskyError : public NumericalError {
public:
  explicit CholeskyError(int component);
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(ExitCode::io, what) {}
};

} // namespace fishpc
