#include "bnb.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace planar::detail {

Enclosure::Enclosure(const BivarPoly& p)
    : p_(p), px_(differentiate(p, Var::x)), py_(differentiate(p, Var::y)) {}

Interval Enclosure::operator()(const Box& b) const {
  const bool dx = p_.depends_on(Var::x);
  const bool dy = p_.depends_on(Var::y);
  if ((dx && !b.x.is_bounded()) || (dy && !b.y.is_bounded())) return Interval::entire();
  const Interval natural = p_.eval(b.x, b.y);
  const double cx = b.x.is_bounded() ? b.x.mid() : 0.0;
  const double cy = b.y.is_bounded() ? b.y.mid() : 0.0;
  Interval mv = p_.eval(Interval::point(cx), Interval::point(cy));
  if (dx) mv = mv + px_.eval(b.x, b.y) * (b.x - Interval::point(cx));
  if (dy) mv = mv + py_.eval(b.x, b.y) * (b.y - Interval::point(cy));
  Interval out;
  if (!intersect(natural, mv, out)) return natural;
  return out;
}

namespace {

bool incompatible(const Interval& v, Relation rel) {
  switch (rel) {
    case Relation::gt0: return v.hi <= 0;
    case Relation::ge0: return v.hi < 0;
    case Relation::lt0: return v.lo >= 0;
    case Relation::le0: return v.lo > 0;
  }
  return false;
}

// Boxes narrower than this (relative to their position) are not split.
constexpr double kMinRelativeWidth = 1e-9;

}  // namespace

Sign summarize(bool any_positive, bool any_negative) {
  if (any_positive && !any_negative) return Sign::positive;
  if (any_negative && !any_positive) return Sign::negative;
  return Sign::nonvanishing;
}

BranchAndBound::BranchAndBound(const BivarPoly& p, const std::vector<Constraint>& constraints) : target_(p) {
  uses_x_ = p.depends_on(Var::x);
  uses_y_ = p.depends_on(Var::y);
  for (const auto& c : constraints) {
    constraint_encl_.emplace_back(c.poly);
    relations_.push_back(c.rel);
    uses_x_ = uses_x_ || c.poly.depends_on(Var::x);
    uses_y_ = uses_y_ || c.poly.depends_on(Var::y);
  }
}

char BranchAndBound::decide(const Box& b) const {
  const Interval v = target_(b);
  if (v.lo > 0) return 'P';
  if (v.hi < 0) return 'N';
  for (std::size_t k = 0; k < constraint_encl_.size(); ++k) {
    if (incompatible(constraint_encl_[k](b), relations_[k])) return 'C';
  }
  Box lo, hi;
  return split(b, lo, hi) ? 'S' : 'X';
}

bool BranchAndBound::split(const Box& b, Box& lo, Box& hi) const {
  auto splittable = [](const Interval& iv) {
    if (!iv.is_bounded()) return false;
    const double m = iv.mid();
    if (!(iv.lo < m && m < iv.hi)) return false;
    return iv.width() > kMinRelativeWidth * std::max(1.0, std::fabs(m));
  };
  const bool can_x = uses_x_ && splittable(b.x);
  const bool can_y = uses_y_ && splittable(b.y);
  if (!can_x && !can_y) return false;
  const bool along_x = can_x && (!can_y || b.x.width() >= b.y.width());
  lo = hi = b;
  if (along_x) {
    const double m = b.x.mid();
    lo.x = Interval(b.x.lo, m);
    hi.x = Interval(m, b.x.hi);
  } else {
    const double m = b.y.mid();
    lo.y = Interval(b.y.lo, m);
    hi.y = Interval(m, b.y.hi);
  }
  return true;
}

BranchAndBound::Result BranchAndBound::run(const std::vector<Box>& roots, std::size_t budget, unsigned threads) const {
  Result result;
  std::vector<std::vector<char>> levels;
  std::vector<Box> frontier = roots;
  while (!frontier.empty()) {
    result.nodes += frontier.size();
    if (result.nodes > budget) {
      result.status = Status::budget_exhausted;
      return result;
    }
    std::vector<char> decisions(frontier.size());
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) decisions[i] = decide(frontier[i]);
    };
    const std::size_t n = frontier.size();
    const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n / 64)));
    if (workers <= 1) {
      work(0, n);
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (n + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b < e) pool.emplace_back(work, b, e);
      }
      for (auto& t : pool) t.join();
    }
    std::vector<Box> next;
    for (std::size_t i = 0; i < n; ++i) {
      switch (decisions[i]) {
        case 'X':
          result.status = Status::stuck;
          return result;
        case 'P': result.any_positive = true; break;
        case 'N': result.any_negative = true; break;
        case 'S': {
          Box lo, hi;
          (void)split(frontier[i], lo, hi);
          next.push_back(lo);
          next.push_back(hi);
          break;
        }
        default: break;
      }
    }
    levels.push_back(std::move(decisions));
    frontier = std::move(next);
  }

  // first child index of every split node, per level
  std::vector<std::vector<std::size_t>> child(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    child[l].resize(levels[l].size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < levels[l].size(); ++i) {
      child[l][i] = next;
      if (levels[l][i] == 'S') next += 2;
    }
  }
  std::function<void(std::size_t, std::size_t, std::string&)> emit = [&](std::size_t l, std::size_t i, std::string& out) {
    const char d = levels[l][i];
    out.push_back(d);
    if (d == 'S') {
      emit(l + 1, child[l][i], out);
      emit(l + 1, child[l][i] + 1, out);
    }
  };
  for (std::size_t r = 0; r < roots.size(); ++r) {
    BoxLog bl{roots[r], {}};
    emit(0, r, bl.log);
    result.logs.push_back(std::move(bl));
  }
  result.status = Status::proved;
  return result;
}

bool BranchAndBound::replay(const BoxLog& log, bool& any_positive, bool& any_negative) const {
  std::size_t pos = 0;
  std::function<bool(const Box&)> walk = [&](const Box& b) -> bool {
    if (pos >= log.log.size()) return false;
    const char want = log.log[pos++];
    const char got = decide(b);
    if (want != got) return false;
    if (got == 'P') any_positive = true;
    if (got == 'N') any_negative = true;
    if (got != 'S') return true;
    Box lo, hi;
    if (!split(b, lo, hi)) return false;
    return walk(lo) && walk(hi);
  };
  if (!walk(log.box)) return false;
  return pos == log.log.size();
}

}  // namespace planar::detail
