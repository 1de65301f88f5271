#include "weiss/expr/sampling.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "weiss/errors.hpp"

namespace weiss::expr {

namespace {

std::uint64_t attempt_seed(std::uint64_t seed, std::uint64_t attempt) {
  SplitMix64 mixer(seed ^ (attempt * 0xd1b54a32d192ed03ULL));
  return mixer.next();
}

bool passes(const Expr& g, const Assignment& a, double threshold, bool positive) {
  try {
    const double v = evaluate(g, a);
    return positive ? v > threshold : std::abs(v) > threshold;
  } catch (const EvaluationError&) {
    return false;
  }
}

void push_unique(std::vector<Expr>& list, const Expr& e) {
  if (e.is_constant()) return;
  for (const auto& x : list) {
    if (x == e) return;
  }
  list.push_back(e);
}

void collect_guards(const Expr& e, SampleDomain& dom, std::set<const Node*>& seen) {
  if (!seen.insert(e.node()).second) return;
  switch (e.kind()) {
    case Kind::constant:
    case Kind::variable:
    case Kind::derivative: return;
    case Kind::power: {
      const Expr& k = e.exponent();
      if (!k.is_constant() || !is_integer(k.value())) {
        push_unique(dom.positive_guards, e.base());
      } else if (k.value() < 0) {
        push_unique(dom.guards, e.base());
      }
      break;
    }
    case Kind::function:
      if (e.function() == Function::log) push_unique(dom.positive_guards, e.argument());
      break;
    default: break;
  }
  for (const auto& a : e.operands()) collect_guards(a, dom, seen);
}

void collect_jets(const Expr& e, const std::string& unknown, std::set<std::string>& out, std::set<const Node*>& seen) {
  if (!seen.insert(e.node()).second) return;
  if (e.is(Kind::derivative)) {
    if (e.name() == unknown) out.insert(jet_name(e.name(), e.index()));
    return;
  }
  if (e.is_constant() || e.is(Kind::variable)) return;
  for (const auto& a : e.operands()) collect_jets(a, unknown, out, seen);
}

}  // namespace

SampleDomain& SampleDomain::add(std::string name, double lo, double hi) {
  for (auto& iv : intervals) {
    if (iv.name == name) {
      iv.lo = lo;
      iv.hi = hi;
      return *this;
    }
  }
  intervals.push_back({std::move(name), lo, hi});
  return *this;
}

bool SampleDomain::has(const std::string& name) const {
  for (const auto& iv : intervals) {
    if (iv.name == name) return true;
  }
  return false;
}

void SampleDomain::validate() const {
  for (const auto& iv : intervals) {
    if (!(iv.lo < iv.hi)) {
      throw InvalidArgument("empty sampling interval for '" + iv.name + "'");
    }
  }
}

std::string SampleDomain::describe() const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& iv : intervals) {
    os << (first ? "" : ", ") << iv.name << " in [" << iv.lo << ", " << iv.hi << "]";
    first = false;
  }
  os << "; guard " << guard_threshold;
  return os.str();
}

Assignment assignment_at(const SampleDomain& dom, const Point& p) {
  Assignment a;
  for (std::size_t i = 0; i < dom.intervals.size(); ++i) a.values[dom.intervals[i].name] = p[i];
  return a;
}

std::vector<Point> sample_points(const SampleDomain& dom, std::size_t count, std::uint64_t seed) {
  dom.validate();
  std::vector<Point> out;
  out.reserve(count);
  const std::uint64_t budget = 100 * static_cast<std::uint64_t>(count);
  std::uint64_t rejected = 0;
  for (std::uint64_t attempt = 0; out.size() < count; ++attempt) {
    SplitMix64 rng(attempt_seed(seed, attempt));
    Point p;
    p.reserve(dom.intervals.size());
    for (const auto& iv : dom.intervals) p.push_back(iv.lo + (iv.hi - iv.lo) * rng.uniform());
    const Assignment a = assignment_at(dom, p);
    bool ok = true;
    for (const auto& g : dom.guards) ok = ok && passes(g, a, dom.guard_threshold, false);
    for (const auto& g : dom.positive_guards) ok = ok && passes(g, a, dom.guard_threshold, true);
    if (ok) {
      out.push_back(std::move(p));
    } else if (++rejected > budget) {
      throw DomainExhausted("guard rejection exhausted the sampling budget (" + std::to_string(rejected) +
                            " rejections for " + std::to_string(count) + " points)");
    }
  }
  return out;
}

SampleDomain with_implicit_guards(SampleDomain dom, const Expr& e) {
  std::set<const Node*> seen;
  collect_guards(e, dom, seen);
  return dom;
}

SampleDomain with_jet_intervals(SampleDomain dom, const Expr& e, const std::string& unknown, double lo, double hi) {
  std::set<std::string> names;
  std::set<const Node*> seen;
  collect_jets(e, unknown, names, seen);
  for (const auto& n : names) {
    if (!dom.has(n)) dom.add(n, lo, hi);
  }
  return dom;
}

}  // namespace weiss::expr
