#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <optional>

#include "promlin/eqsys.hpp"

namespace promlin {

/// Thrown by the int64 fast path when a value leaves the representable
/// range; callers retry with arbitrary precision.
struct ArithmeticOverflow {};

/// Exact rational on int64, overflow-checked through __int128 intermediates.
struct Fraction64 {
  std::int64_t num = 0;
  std::int64_t den = 1;  // > 0, gcd(num, den) = 1

  Fraction64() = default;
  Fraction64(std::int64_t n) : num(n) {}
  static Fraction64 make(__int128 n, __int128 d);

  Fraction64 operator+(const Fraction64& o) const;
  Fraction64 operator-(const Fraction64& o) const;
  Fraction64 operator*(const Fraction64& o) const;
  Fraction64 operator/(const Fraction64& o) const;
  Fraction64 operator-() const { return make(-static_cast<__int128>(num), den); }
  bool operator==(const Fraction64& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Fraction64& o) const { return !(*this == o); }
  bool operator<(const Fraction64& o) const;
  bool is_zero() const { return num == 0; }
  int sign() const { return num > 0 ? 1 : num < 0 ? -1 : 0; }
};

enum class RelaxMode { IntegerUnrestricted, RationalNonnegative };

struct RelaxColumn {
  enum class Kind { Lambda, Mu };
  Kind kind;
  int variable = -1;    // Lambda: instance element
  int value = -1;       // Lambda: target element
  int constraint = -1;  // Mu: constraint index
  int tuple = -1;       // Mu: index into the constraint's target tuples
  std::string name;
};

/// A |rows| x |cols| integer system matrix * v = rhs, with one normalization
/// row per instance element and one marginal row per
/// (constraint, coordinate, value).
struct RelaxationSystem {
  std::vector<std::vector<int>> matrix;
  std::vector<int> rhs;
  std::vector<RelaxColumn> columns;
  std::vector<std::string> row_names;
  RelaxMode mode = RelaxMode::RationalNonnegative;

  int rows() const { return static_cast<int>(matrix.size()); }
  int cols() const { return static_cast<int>(columns.size()); }

  RelaxationSystem restricted_to(const std::vector<int>& keep_columns) const;
};

/// Builds the full relaxation of `instance` against the A-side structure.
/// Signatures must match.
RelaxationSystem build_relaxation(const RelationalStructure& instance,
                                  const RelationalStructure& a_side,
                                  RelaxMode mode);

/// Exact integer solution of matrix * v = rhs (signs unrestricted), found by
/// Hermite column reduction and verified by substitution.
std::optional<std::vector<mpz_class>> integer_affine_feasible(
    const RelaxationSystem& sys);

struct SupportResult {
  std::vector<mpq_class> point;  // relative-interior point
  std::vector<int> support;      // columns that can be positive
};

/// Nonnegative rational solution whose zero set is exactly the columns forced
/// to zero in every solution; the point is an equal-weight average of the
/// probe witnesses.
std::optional<SupportResult> rational_feasible_support(const RelaxationSystem& sys);

bool decide_aip(const RelationalStructure& instance,
                const RelationalStructure& a_side);
bool decide_blp_aip(const RelationalStructure& instance,
                    const RelationalStructure& a_side);

/// Matrix-market-style text dump for external verification.
void dump_relaxation(const RelaxationSystem& sys, std::ostream& os);

/// Integer solve of an arbitrary matrix (used by the group solver as well).
std::optional<std::vector<mpz_class>> hnf_solve(
    const std::vector<std::vector<mpz_class>>& a, const std::vector<mpz_class>& b);

}  // namespace promlin
