#include "planar/falsify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <vector>

namespace planar {

namespace {

using Vec4 = std::array<double, 4>;

constexpr std::size_t kStartCap = 1500;
constexpr int kPeriod = 8;
constexpr double kNoiseUlps = 64.0;
constexpr double kRelativeResidual = 1e-10;
constexpr double kScaleFloor = 1e-3;
constexpr int kRefineSteps = 8;
constexpr int kRefineBits = 256;

class BudgetExceeded {};

double norm2(double a, double b) { return std::hypot(a, b); }

// |F(p) - F(q)| without trusting floating-point cancellation: exact for
// polynomial maps; for black boxes, infinite once rounding noise in F could
// reach the tolerance.
double resolved_residual(const PlanarMap& map, Point p, Point q, double tol) {
  if (map.is_polynomial()) {
    const Rational px(p.x), py(p.y), qx(q.x), qy(q.y);
    const Rational dp = evaluate(map.p(), px, py) - evaluate(map.p(), qx, qy);
    const Rational dq = evaluate(map.q(), px, py) - evaluate(map.q(), qx, qy);
    return norm2(round_up(abs(dp)), round_up(abs(dq)));
  }
  const auto fp = map(p.x, p.y);
  const auto fq = map(q.x, q.y);
  const double scale = std::max({std::fabs(fp[0]), std::fabs(fp[1]), std::fabs(fq[0]), std::fabs(fq[1])});
  if (!(kNoiseUlps * std::numeric_limits<double>::epsilon() * scale < tol / 4)) {
    return std::numeric_limits<double>::infinity();
  }
  return norm2(fp[0] - fq[0], fp[1] - fq[1]);
}

Rational round_dyadic(const Rational& v) {
  const Integer scale = Integer(1) << kRefineBits;
  Integer n = v.get_num() * scale;
  mpz_fdiv_q(n.get_mpz_t(), n.get_mpz_t(), v.get_den().get_mpz_t());
  Rational r(n, scale);
  r.canonicalize();
  return r;
}

// Exact Newton on F(q) = F(p) with p held fixed, iterates rounded to
// 2^-256. A genuine collision converges quadratically to a partner still
// separated from p; a near miss of an injective map stalls or falls onto p.
bool genuine_collision(const PlanarMap& map, Point p, Point q, double sep_min) {
  if (!map.is_polynomial()) return true;
  const BivarPoly px = differentiate(map.p(), Var::x), py = differentiate(map.p(), Var::y);
  const BivarPoly qx = differentiate(map.q(), Var::x), qy = differentiate(map.q(), Var::y);
  const Rational ax(p.x), ay(p.y);
  const Rational t0 = evaluate(map.p(), ax, ay), t1 = evaluate(map.q(), ax, ay);
  Rational x(q.x), y(q.y);
  const Rational limit(1, Integer(1) << 100);
  for (int step = 0; step < kRefineSteps; ++step) {
    const Rational r0 = evaluate(map.p(), x, y) - t0, r1 = evaluate(map.q(), x, y) - t1;
    if (abs(r0) < limit && abs(r1) < limit) {
      return std::hypot(round_down(abs(x - ax)), round_down(abs(y - ay))) > sep_min;
    }
    const Rational a = evaluate(px, x, y), b = evaluate(py, x, y), c = evaluate(qx, x, y), d = evaluate(qy, x, y);
    const Rational det = a * d - b * c;
    if (sgn(det) == 0) return false;
    x = round_dyadic(x - (d * r0 - b * r1) / det);
    y = round_dyadic(y - (a * r1 - c * r0) / det);
  }
  return false;
}

// Counts map evaluations against a per-start cap.
class Counter {
 public:
  Counter(const PlanarMap& map, std::size_t cap) : map_(map), cap_(cap) {}

  std::array<double, 2> f(double x, double y) {
    charge(1);
    return map_(x, y);
  }
  Matrix2 jac(double x, double y) {
    charge(map_.is_polynomial() ? 1 : 4);
    return map_.jacobian(x, y);
  }
  double resolved(Point p, Point q, double tol) {
    charge(2);
    return resolved_residual(map_, p, q, tol);
  }
  bool genuine(Point p, Point q, double sep_min) {
    charge(map_.is_polynomial() ? 2 * kRefineSteps : 0);
    return genuine_collision(map_, p, q, sep_min);
  }
  [[nodiscard]] std::size_t used() const { return used_; }

 private:
  void charge(std::size_t n) {
    if (used_ + n > cap_) {
      used_ = cap_;
      throw BudgetExceeded{};
    }
    used_ += n;
  }
  const PlanarMap& map_;
  std::size_t cap_;
  std::size_t used_ = 0;
};

struct Start {
  std::optional<CollisionWitness> witness;
  std::size_t used = 0;
};

class Search {
 public:
  Search(const PlanarMap& map, const FalsifyOptions& o) : map_(map), opt_(o) {}

  Start run(std::size_t k, std::size_t cap) const {
    Counter c(map_, cap);
    Start s;
    try {
      s.witness = attempt(k, c);
    } catch (const BudgetExceeded&) {
    }
    s.used = c.used();
    return s;
  }

 private:
  std::optional<CollisionWitness> attempt(std::size_t k, Counter& c) const {
    std::seed_seq seq{static_cast<std::uint32_t>(opt_.seed), static_cast<std::uint32_t>(opt_.seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    std::mt19937_64 rng(seq);
    const double half = std::ldexp(1.0, static_cast<int>(k % kPeriod) + 1);
    std::uniform_real_distribution<double> coord(-half, half);
    Vec4 z{};
    for (double& v : z) v = coord(rng);

    auto objective = [&](const Vec4& v) {
      const auto fp = c.f(v[0], v[1]);
      const auto fq = c.f(v[2], v[3]);
      const double r0 = fp[0] - fq[0], r1 = fp[1] - fq[1];
      double val = r0 * r0 + r1 * r1;
      const double gap = std::max(0.0, opt_.sep_min - norm2(v[0] - v[2], v[1] - v[3]));
      val += opt_.penalty_weight * gap * gap;
      for (double t : v) {
        const double out = std::max(0.0, std::fabs(t) - half);
        val += opt_.penalty_weight * out * out;
      }
      return std::isfinite(val) ? val : std::numeric_limits<double>::max();
    };
    z = nelder_mead(objective, z, half / 4);
    return polish(z, c, k);
  }

  template <class Fn>
  static Vec4 nelder_mead(Fn&& f, const Vec4& x0, double step) {
    constexpr int n = 4;
    std::array<Vec4, n + 1> s;
    std::array<double, n + 1> fs{};
    s[0] = x0;
    for (int i = 0; i < n; ++i) {
      s[i + 1] = x0;
      s[i + 1][i] += step;
    }
    for (int i = 0; i <= n; ++i) fs[i] = f(s[i]);
    for (int iter = 0; iter < 500; ++iter) {
      std::array<int, n + 1> idx{};
      for (int i = 0; i <= n; ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
      const int best = idx[0], worst = idx[n], second = idx[n - 1];
      if (fs[best] < 1e-24) break;
      double size = 0.0;
      for (int i = 0; i <= n; ++i) {
        for (int d = 0; d < n; ++d) size = std::max(size, std::fabs(s[i][d] - s[best][d]));
      }
      if (size < 1e-12 * (1.0 + std::fabs(s[best][0]) + std::fabs(s[best][1]))) break;
      Vec4 centroid{};
      for (int i = 0; i <= n; ++i) {
        if (i == worst) continue;
        for (int d = 0; d < n; ++d) centroid[d] += s[i][d] / n;
      }
      auto along = [&](double t) {
        Vec4 v;
        for (int d = 0; d < n; ++d) v[d] = centroid[d] + t * (s[worst][d] - centroid[d]);
        return v;
      };
      const Vec4 xr = along(-1.0);
      const double fr = f(xr);
      if (fr < fs[best]) {
        const Vec4 xe = along(-2.0);
        const double fe = f(xe);
        if (fe < fr) {
          s[worst] = xe;
          fs[worst] = fe;
        } else {
          s[worst] = xr;
          fs[worst] = fr;
        }
      } else if (fr < fs[second]) {
        s[worst] = xr;
        fs[worst] = fr;
      } else {
        const Vec4 xc = fr < fs[worst] ? along(-0.5) : along(0.5);
        const double fc = f(xc);
        if (fc < std::min(fr, fs[worst])) {
          s[worst] = xc;
          fs[worst] = fc;
        } else {
          for (int i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (int d = 0; d < n; ++d) s[i][d] = s[best][d] + 0.5 * (s[i][d] - s[best][d]);
            fs[i] = f(s[i]);
          }
        }
      }
    }
    int best = 0;
    for (int i = 1; i <= n; ++i) {
      if (fs[i] < fs[best]) best = i;
    }
    return s[best];
  }

  // Minimum-norm Gauss-Newton on r(z) = F(p) - F(q), J = [J_F(p), -J_F(q)].
  std::optional<CollisionWitness> polish(Vec4 z, Counter& c, std::size_t k) const {
    auto residual = [&](const Vec4& v, std::array<double, 2>& fp, std::array<double, 2>& fq) {
      fp = c.f(v[0], v[1]);
      fq = c.f(v[2], v[3]);
      return std::array<double, 2>{fp[0] - fq[0], fp[1] - fq[1]};
    };
    std::array<double, 2> fp{}, fq{};
    auto r = residual(z, fp, fq);
    double rn = norm2(r[0], r[1]);
    bool converged = false;
    for (int iter = 0; iter < 40 && std::isfinite(rn); ++iter) {
      if (close_enough(rn, fp, fq)) {
        converged = true;
        break;
      }
      const Matrix2 a = c.jac(z[0], z[1]);
      const Matrix2 b = c.jac(z[2], z[3]);
      // rows of J: (a.a, a.b, -b.a, -b.b), (a.c, a.d, -b.c, -b.d)
      const std::array<double, 4> j0{a.a, a.b, -b.a, -b.b};
      const std::array<double, 4> j1{a.c, a.d, -b.c, -b.d};
      double m00 = 0, m01 = 0, m11 = 0;
      for (int d = 0; d < 4; ++d) {
        m00 += j0[d] * j0[d];
        m01 += j0[d] * j1[d];
        m11 += j1[d] * j1[d];
      }
      const double det = m00 * m11 - m01 * m01;
      if (!(std::fabs(det) > 1e-300) || !std::isfinite(det)) break;
      const double w0 = (m11 * r[0] - m01 * r[1]) / det;
      const double w1 = (m00 * r[1] - m01 * r[0]) / det;
      Vec4 dz;
      for (int d = 0; d < 4; ++d) dz[d] = -(j0[d] * w0 + j1[d] * w1);
      double t = 1.0;
      bool improved = false;
      for (int damp = 0; damp < 12; ++damp, t *= 0.5) {
        Vec4 trial;
        for (int d = 0; d < 4; ++d) trial[d] = z[d] + t * dz[d];
        std::array<double, 2> tp{}, tq{};
        const auto tr = residual(trial, tp, tq);
        const double tn = norm2(tr[0], tr[1]);
        if (std::isfinite(tn) && tn < rn) {
          z = trial;
          r = tr;
          rn = tn;
          fp = tp;
          fq = tq;
          improved = true;
          break;
        }
      }
      if (!improved) {
        converged = close_enough(rn, fp, fq);
        break;
      }
    }
    if (!converged) return std::nullopt;
    CollisionWitness w;
    w.p = {z[0], z[1]};
    w.q = {z[2], z[3]};
    if (w.q.x < w.p.x) std::swap(w.p, w.q);
    w.separation = norm2(z[0] - z[2], z[1] - z[3]);
    w.start = k;
    if (!(w.separation > opt_.sep_min)) return std::nullopt;
    w.residual = c.resolved(w.p, w.q, opt_.residual_tol);
    if (!(w.residual < opt_.residual_tol) || !c.genuine(w.p, w.q, opt_.sep_min)) return std::nullopt;
    try {
      shorten(w, c);
    } catch (const BudgetExceeded&) {
    }
    return w;
  }

  // Newton on F(q) = F(p) with p fixed.
  std::optional<Point> solve_partner(Point p, Point q, Counter& c) const {
    const auto target = c.f(p.x, p.y);
    auto fq = c.f(q.x, q.y);
    std::array<double, 2> r{fq[0] - target[0], fq[1] - target[1]};
    double rn = norm2(r[0], r[1]);
    for (int iter = 0; iter < 30 && std::isfinite(rn); ++iter) {
      if (close_enough(rn, target, fq)) return confirmed(p, q, c);
      const Matrix2 j = c.jac(q.x, q.y);
      const double det = j.a * j.d - j.b * j.c;
      if (!(std::fabs(det) > 1e-300) || !std::isfinite(det)) return std::nullopt;
      const double dx = -(j.d * r[0] - j.b * r[1]) / det;
      const double dy = -(j.a * r[1] - j.c * r[0]) / det;
      bool improved = false;
      double t = 1.0;
      for (int damp = 0; damp < 12; ++damp, t *= 0.5) {
        const Point trial{q.x + t * dx, q.y + t * dy};
        const auto ft = c.f(trial.x, trial.y);
        const std::array<double, 2> rt{ft[0] - target[0], ft[1] - target[1]};
        const double tn = norm2(rt[0], rt[1]);
        if (std::isfinite(tn) && tn < rn) {
          q = trial;
          fq = ft;
          r = rt;
          rn = tn;
          improved = true;
          break;
        }
      }
      if (!improved) return close_enough(rn, target, fq) ? confirmed(p, q, c) : std::nullopt;
    }
    return std::nullopt;
  }

  // Floating-point stopping rule; acceptance is decided by confirmed().
  [[nodiscard]] bool close_enough(double rn, const std::array<double, 2>& fp, const std::array<double, 2>& fq) const {
    const double scale = std::max({std::fabs(fp[0]), std::fabs(fp[1]), std::fabs(fq[0]), std::fabs(fq[1]), kScaleFloor});
    return rn < opt_.residual_tol && rn <= kRelativeResidual * scale;
  }

  std::optional<Point> confirmed(Point p, Point q, Counter& c) const {
    if (c.resolved(p, q, opt_.residual_tol) < opt_.residual_tol && c.genuine(p, q, opt_.sep_min)) return q;
    return std::nullopt;
  }

  // A collision at p, q often repeats at p + (q - p) / m (periodic maps);
  // keep the closest partner found.
  void shorten(CollisionWitness& w, Counter& c) const {
    const CollisionWitness orig = w;
    for (int m = 2; m <= 8; ++m) {
      const Point guess{orig.p.x + (orig.q.x - orig.p.x) / m, orig.p.y + (orig.q.y - orig.p.y) / m};
      const auto q = solve_partner(orig.p, guess, c);
      if (!q) continue;
      const double sep = norm2(q->x - orig.p.x, q->y - orig.p.y);
      if (!(sep > opt_.sep_min) || !(sep < w.separation)) continue;
      w.p = orig.p;
      w.q = *q;
      w.separation = sep;
      w.residual = c.resolved(w.p, w.q, opt_.residual_tol);
      if (w.q.x < w.p.x) std::swap(w.p, w.q);
    }
  }

  const PlanarMap& map_;
  FalsifyOptions opt_;
};

}  // namespace

bool validate_witness(const PlanarMap& map, const CollisionWitness& w, double sep_min, double residual_tol) {
  const double res = resolved_residual(map, w.p, w.q, residual_tol);
  const double sep = norm2(w.p.x - w.q.x, w.p.y - w.q.y);
  return std::isfinite(res) && res < residual_tol && sep > sep_min && genuine_collision(map, w.p, w.q, sep_min);
}

FalsifyResult search_collision(const PlanarMap& map, const FalsifyOptions& options) {
  if (!(options.sep_min > 0)) throw std::invalid_argument("sep_min must be positive");
  const Search search(map, options);
  FalsifyResult out;
  const unsigned workers = std::max(1u, options.threads);
  std::size_t next = 0;
  while (out.evaluations < options.budget) {
    // a batch of starts with their full caps; merged in start order
    std::vector<Start> batch(workers);
    if (workers == 1) {
      batch[0] = search.run(next, kStartCap);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] { batch[w] = search.run(next + w, kStartCap); });
      }
      for (auto& t : pool) t.join();
    }
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t remaining = options.budget - out.evaluations;
      Start s = batch[w];
      if (s.used > remaining) s = search.run(next + w, remaining);
      out.evaluations += s.used;
      ++out.starts;
      if (s.witness) {
        out.witness = s.witness;
        return out;
      }
      if (out.evaluations >= options.budget) return out;
    }
    next += workers;
  }
  return out;
}

}  // namespace planar
