#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace promlin {

enum class ErrorCode {
  MalformedInput,
  InvalidAlgebra,
  InvalidAtom,
  QuotientUndefined,
  BudgetExceeded,
  NotAbelian,
  NotRegular,
  RegularTarget,
  EvenArity,
  PreconditionFailed,
  ConstantOutsideConstants,
  SignatureMismatch,
  NotSemilattice,
};

/// Project-wide exception carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

/// Iterates tuples of `arity` digits in [0, base), least index varying last,
/// so tuples are visited in lexicographic order.
class Odometer {
 public:
  Odometer(int base, int arity) : base_(base), digits_(arity, 0) {}

  const std::vector<int>& digits() const { return digits_; }

  bool advance() {
    for (int i = static_cast<int>(digits_.size()) - 1; i >= 0; --i) {
      if (++digits_[i] < base_) return true;
      digits_[i] = 0;
    }
    return false;
  }

  std::uint64_t count() const {
    std::uint64_t n = 1;
    for (size_t i = 0; i < digits_.size(); ++i) n *= static_cast<std::uint64_t>(base_);
    return n;
  }

 private:
  int base_;
  std::vector<int> digits_;
};

inline std::uint64_t checked_pow(std::uint64_t base, unsigned exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

}  // namespace promlin
