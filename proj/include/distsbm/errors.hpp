#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace distsbm {

// Fatal conditions are exceptions; non-fatal ones (degree irregularity,
// saturated path counts, population caps) are recorded as flags on results.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class NotPositiveRegular : public Error {
 public:
  using Error::Error;
};

class InvalidKappa : public Error {
 public:
  using Error::Error;
};

class AtOrBelowThreshold : public Error {
 public:
  using Error::Error;
};

class DegenerateOperator : public Error {
 public:
  using Error::Error;
};

class NegativeEntry : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

class ZeroGap : public Error {
 public:
  using Error::Error;
};

class LabelOutOfRange : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class InconsistentEdit : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class InvalidGraph : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Thrown when the greedy separated-set construction runs out of candidates.
class GreedyExhausted : public Error {
 public:
  GreedyExhausted(const std::string& what, std::size_t achieved)
      : Error(what), achieved_(achieved) {}
  std::size_t achieved() const noexcept { return achieved_; }

 private:
  std::size_t achieved_;
};

}  // namespace distsbm
