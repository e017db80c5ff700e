#pragma once

#include <stdexcept>
#include <string>

namespace xxzlr {

/// Root of every error raised by the library. Callers that only need to
/// report a failure can catch this; the subclasses name the failure mode.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class SizeExceeded : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, int iterations)
      : Error(what), iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, int sweeps) : Error(what), sweeps_(sweeps) {}
  int sweeps() const { return sweeps_; }

 private:
  int sweeps_;
};

class InvalidCut : public Error {
 public:
  using Error::Error;
};

class InvalidBond : public Error {
 public:
  using Error::Error;
};

class ModeInstability : public Error {
 public:
  ModeInstability(const std::string& what, int n_sites, int k_index)
      : Error(what), n_sites_(n_sites), k_index_(k_index) {}
  int n_sites() const { return n_sites_; }
  int k_index() const { return k_index_; }

 private:
  int n_sites_;
  int k_index_;
};

class Unclassifiable : public Error {
 public:
  using Error::Error;
};

class InsufficientPoints : public Error {
 public:
  using Error::Error;
};

class TraceDrift : public Error {
 public:
  TraceDrift(const std::string& what, double drift) : Error(what), drift_(drift) {}
  double drift() const { return drift_; }

 private:
  double drift_;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, std::string key)
      : Error(what), line_(line), key_(std::move(key)) {}
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace xxzlr
