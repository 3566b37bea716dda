#ifndef GL2RES_COMMON_HPP
#define GL2RES_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gl2res {

/// A field element, encoded as its index in the lexicographic order of
/// coefficient vectors (c0, c1, ..., c_{d-1}) with c0 most significant.
using Elem = std::uint32_t;

/// The four fields of the tower F_p, F_{p^2}, F_q = F_{p^f}, F_{q^2}.
/// Tags may name the same field (f = 1, f = 2); fields are keyed by degree.
enum class Level { P, P2, Q, Q2 };

inline const char* level_name(Level l)
{
  switch (l) {
  case Level::P: return "F_p";
  case Level::P2: return "F_p2";
  case Level::Q: return "F_q";
  case Level::Q2: return "F_q2";
  }
  return "?";
}

/// Rejected input parameters (non-prime p, p = 2, f out of range, ...).
class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or linear solve would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t estimate, std::uint64_t budget)
    : std::runtime_error(what + ": estimated " + std::to_string(estimate) +
                         " exceeds budget " + std::to_string(budget)),
      estimate_(estimate), budget_(budget)
  {}

  std::uint64_t estimate() const { return estimate_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t estimate_;
  std::uint64_t budget_;
};

struct Budgets {
  /// Largest group that may be listed element by element.
  std::uint64_t enumeration = 1'000'000;
  /// Largest dim(a) * dim(b) for which a Hom space is solved.
  std::uint64_t hom_unknowns = 40'000;
};

inline std::uint64_t ipow(std::uint64_t base, unsigned e)
{
  std::uint64_t r = 1;
  while (e--)
    r *= base;
  return r;
}

} // namespace gl2res

#endif // GL2RES_COMMON_HPP
