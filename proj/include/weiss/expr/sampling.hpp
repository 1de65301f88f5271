#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "weiss/expr/evaluate.hpp"
#include "weiss/expr/expr.hpp"

namespace weiss::expr {

/// SplitMix64 stream. Point i of a sample run is derived from the seed and a
/// counter, so any subset of points can be regenerated independently.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr double kDefaultGuard = 1e-3;

struct Interval {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
};

/// Box of sampling intervals with guard expressions. A point is accepted only
/// if every entry of `guards` exceeds the threshold in absolute value and
/// every entry of `positive_guards` exceeds it outright.
struct SampleDomain {
  std::vector<Interval> intervals;
  std::vector<Expr> guards;
  std::vector<Expr> positive_guards;
  double guard_threshold = kDefaultGuard;

  SampleDomain& add(std::string name, double lo, double hi);
  bool has(const std::string& name) const;
  /// Throws InvalidArgument unless lo < hi everywhere.
  void validate() const;
  std::string describe() const;
};

using Point = std::vector<double>;

/// Deterministic guarded uniform sampling. Throws DomainExhausted after
/// 100 * count rejected draws.
std::vector<Point> sample_points(const SampleDomain& dom, std::size_t count, std::uint64_t seed);

/// Adds the implicit guards of e: bases of fractional or symbolic powers must
/// be positive, bases of negative powers and logarithm arguments nonzero.
SampleDomain with_implicit_guards(SampleDomain dom, const Expr& e);

/// Adds an interval for every derivative atom of `unknown` occurring in e, so
/// that differential identities can be tested on independent jet values.
SampleDomain with_jet_intervals(SampleDomain dom, const Expr& e, const std::string& unknown, double lo, double hi);

/// Assignment binding the domain's interval names to a point.
Assignment assignment_at(const SampleDomain& dom, const Point& p);

}  // namespace weiss::expr
