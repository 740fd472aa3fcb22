#pragma once

// Branch-and-bound over boxes shared by the positivity search and the
// certificate checker. The proof tree is a pure function of the inputs:
// every node's decision depends only on its box, so the search order (and
// the number of worker threads) cannot change the outcome.

#include <cstddef>
#include <string>
#include <vector>

#include "planar/positivity.hpp"

namespace planar::detail {

/// Range enclosure: natural interval extension intersected with the
/// mean-value form around the box centre.
class Enclosure {
 public:
  explicit Enclosure(const BivarPoly& p);
  /// Interval::entire() if p depends on an unbounded side of the box.
  [[nodiscard]] Interval operator()(const Box& b) const;
  [[nodiscard]] bool depends_on(Var v) const { return p_.depends_on(v); }

 private:
  CompiledPoly p_, px_, py_;
};

class BranchAndBound {
 public:
  BranchAndBound(const BivarPoly& p, const std::vector<Constraint>& constraints);

  /// 'P', 'N', 'C', 'S', or 'X' when the box cannot be split further.
  [[nodiscard]] char decide(const Box& b) const;
  /// False if the box has no splittable axis left.
  [[nodiscard]] bool split(const Box& b, Box& lo, Box& hi) const;

  enum class Status { proved, stuck, budget_exhausted };
  struct Result {
    Status status = Status::stuck;
    std::vector<BoxLog> logs;
    std::size_t nodes = 0;
    bool any_positive = false;
    bool any_negative = false;
  };
  [[nodiscard]] Result run(const std::vector<Box>& roots, std::size_t budget, unsigned threads) const;

  /// Re-derives every decision along the log; true iff the log is exactly
  /// the canonical proof tree for this root box.
  [[nodiscard]] bool replay(const BoxLog& log, bool& any_positive, bool& any_negative) const;

 private:
  Enclosure target_;
  std::vector<Enclosure> constraint_encl_;
  std::vector<Relation> relations_;
  bool uses_x_ = false;
  bool uses_y_ = false;
};

Sign summarize(bool any_positive, bool any_negative);

}  // namespace planar::detail
