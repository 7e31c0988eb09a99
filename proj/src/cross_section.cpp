#include "coord/cross_section.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace coord {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kParallelTol = 1e-9;

struct Interval {
  double lo = 0.0, hi = 0.0;
  bool empty = true;
};

// open interval where A t^2 + B t + C < 0, for A > 0
Interval negative_interval(double A, double B, double C) {
  const double disc = B * B - 4.0 * A * C;
  if (disc <= 0.0) return {};
  const double sq = std::sqrt(disc);
  return {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A), false};
}

CrossSection empty_section(int path_u, int path_v) {
  CrossSection s;
  s.path_first = path_u;
  s.path_second = path_v;
  return s;
}

}  // namespace

bool CrossSection::contains(double u, double v) const {
  switch (kind) {
    case SectionKind::Empty:
      return false;
    case SectionKind::Ellipse:
      return u * u - 2.0 * k * u * v + v * v + bu * u + bv * v + c < 0.0;
    case SectionKind::Strip:
      return std::abs(u - v - offset) < half_width;
    case SectionKind::Grid: {
      if (u < 0.0 || v < 0.0) return false;
      const int a = static_cast<int>(u / cell);
      const int b = static_cast<int>(v / cell);
      if (a >= nu || b >= nv) return false;
      return marked[static_cast<std::size_t>(a) * static_cast<std::size_t>(nv) +
                    static_cast<std::size_t>(b)] != 0;
    }
  }
  return false;
}

CrossSection CrossSection::transposed() const {
  CrossSection t = *this;
  std::swap(t.path_first, t.path_second);
  std::swap(t.bu, t.bv);
  t.offset = -offset;
  std::swap(t.inf_u, t.inf_v);
  std::swap(t.sup_u, t.sup_v);
  if (kind == SectionKind::Grid) {
    std::swap(t.nu, t.nv);
    t.marked.assign(marked.size(), 0);
    for (int a = 0; a < nu; ++a)
      for (int b = 0; b < nv; ++b)
        t.marked[static_cast<std::size_t>(b) * static_cast<std::size_t>(t.nv) +
                 static_cast<std::size_t>(a)] =
            marked[static_cast<std::size_t>(a) * static_cast<std::size_t>(nv) +
                   static_cast<std::size_t>(b)];
  }
  return t;
}

CrossSection build_cross_section(const PathGeometry& path_u, const PathGeometry& path_v,
                                 double r_sum, double grid_resolution) {
  if (r_sum <= 0.0) throw std::invalid_argument("r_sum must be positive");

  CrossSection s;
  s.path_first = path_u.id;
  s.path_second = path_v.id;

  if (path_u.is_straight() && path_v.is_straight()) {
    const Vec2 du = path_u.direction();
    const Vec2 dv = path_v.direction();
    const double k = du.dot(dv);
    const Vec2 d = path_u.origin() - path_v.origin();

    if (std::abs(k) < 1.0 - kParallelTol) {
      // crossing lines: squared distance is a positive quadratic in (u, v)
      s.kind = SectionKind::Ellipse;
      s.k = k;
      s.bu = 2.0 * d.dot(du);
      s.bv = -2.0 * d.dot(dv);
      s.c = d.squaredNorm() - r_sum * r_sum;
      const double A = 1.0 - k * k;
      const Interval iu = negative_interval(A, s.bu + k * s.bv, s.c - s.bv * s.bv / 4.0);
      const Interval iv = negative_interval(A, s.bv + k * s.bu, s.c - s.bu * s.bu / 4.0);
      if (iu.empty || iv.empty) return empty_section(path_u.id, path_v.id);
      s.inf_u = iu.lo;
      s.sup_u = iu.hi;
      s.inf_v = iv.lo;
      s.sup_v = iv.hi;
      return s;
    }

    const double along = d.dot(du);
    const double lat2 = std::max(0.0, d.squaredNorm() - along * along);
    if (lat2 >= r_sum * r_sum) return empty_section(path_u.id, path_v.id);
    if (k > 0.0) {
      // same lane or same-direction parallel overlap: |u - v - offset| < h
      s.kind = SectionKind::Strip;
      s.offset = -along;
      s.half_width = std::sqrt(r_sum * r_sum - lat2);
      s.inf_u = -kInf;
      s.sup_u = kInf;
      s.inf_v = -kInf;
      s.sup_v = kInf;
      return s;
    }
    // head-on parallel overlap has no strip form in (u - v); covered by the
    // bounded grid over the finite path extents below
  }

  if (grid_resolution <= 0.0) throw std::invalid_argument("grid resolution must be positive");
  s.kind = SectionKind::Grid;
  s.cell = grid_resolution;
  s.nu = static_cast<int>(std::ceil(path_u.length() / s.cell));
  s.nv = static_cast<int>(std::ceil(path_v.length() / s.cell));
  s.marked.assign(static_cast<std::size_t>(s.nu) * static_cast<std::size_t>(s.nv), 0);

  std::vector<Vec2> pv(static_cast<std::size_t>(s.nv));
  for (int b = 0; b < s.nv; ++b)
    pv[static_cast<std::size_t>(b)] = point_at(path_v, std::min((b + 0.5) * s.cell, path_v.length()));

  // cell centers sit within cell/2 of any point of the cell along each axis,
  // and point_at is 1-Lipschitz, so a margin of one cell keeps the grid
  // conservative
  const double threshold = r_sum + s.cell;
  bool any = false;
  s.inf_u = kInf;
  s.sup_u = -kInf;
  s.inf_v = kInf;
  s.sup_v = -kInf;
  for (int a = 0; a < s.nu; ++a) {
    const Vec2 pu = point_at(path_u, std::min((a + 0.5) * s.cell, path_u.length()));
    for (int b = 0; b < s.nv; ++b) {
      if ((pu - pv[static_cast<std::size_t>(b)]).norm() >= threshold) continue;
      s.marked[static_cast<std::size_t>(a) * static_cast<std::size_t>(s.nv) +
               static_cast<std::size_t>(b)] = 1;
      any = true;
      s.inf_u = std::min(s.inf_u, a * s.cell);
      s.sup_u = std::max(s.sup_u, (a + 1) * s.cell);
      s.inf_v = std::min(s.inf_v, b * s.cell);
      s.sup_v = std::max(s.sup_v, (b + 1) * s.cell);
    }
  }
  if (!any) return empty_section(path_u.id, path_v.id);
  return s;
}

ShiftBound::ShiftBound(const CrossSection& s) : kind_(s.kind) {
  switch (s.kind) {
    case SectionKind::Empty:
      throw std::invalid_argument("shift bound of an empty cross-section");
    case SectionKind::Ellipse:
      k_ = s.k;
      bu_ = s.bu;
      bv_ = s.bv;
      c_ = s.c;
      inf_v_ = s.inf_v;
      sup_u_ = s.sup_u;
      // follower coordinate at which the leader extent peaks; beyond it the
      // running supremum saturates at sup_u
      v_peak_ = k_ * sup_u_ - bv_ / 2.0;
      break;
    case SectionKind::Strip:
      offset_ = s.offset;
      half_width_ = s.half_width;
      sup_u_ = kInf;
      inf_v_ = -kInf;
      break;
    case SectionKind::Grid: {
      cell_ = s.cell;
      running_.assign(static_cast<std::size_t>(s.nv), -kInf);
      double best = -kInf;
      for (int b = 0; b < s.nv; ++b) {
        for (int a = s.nu - 1; a >= 0; --a) {
          if (s.marked[static_cast<std::size_t>(a) * static_cast<std::size_t>(s.nv) +
                       static_cast<std::size_t>(b)]) {
            best = std::max(best, (a + 1) * s.cell);
            break;
          }
        }
        running_[static_cast<std::size_t>(b)] = best;
      }
      sup_u_ = s.sup_u;
      inf_v_ = s.inf_v;
      break;
    }
  }
}

std::optional<double> ShiftBound::value(double x_follower) const {
  switch (kind_) {
    case SectionKind::Strip:
      return x_follower + offset_ + half_width_;
    case SectionKind::Ellipse: {
      if (x_follower <= inf_v_) return std::nullopt;
      if (x_follower >= v_peak_) return sup_u_;
      const double B = bu_ - 2.0 * k_ * x_follower;
      const double C = x_follower * (x_follower + bv_) + c_;
      const double disc = std::max(0.0, B * B - 4.0 * C);
      return (-B + std::sqrt(disc)) / 2.0;
    }
    case SectionKind::Grid: {
      if (x_follower < 0.0 || running_.empty()) return std::nullopt;
      const auto last = static_cast<int>(running_.size()) - 1;
      const int b = std::min(last, static_cast<int>(x_follower / cell_));
      const double w = running_[static_cast<std::size_t>(b)];
      if (w == -kInf) return std::nullopt;
      return w;
    }
    case SectionKind::Empty:
      break;
  }
  return std::nullopt;
}

bool in_shifted_obstacle(double x_leader, double x_follower, const ShiftBound& bound) {
  const auto w = bound.value(x_follower);
  return w.has_value() && x_leader < *w;
}

bool in_shifted_obstacle(const Configuration& x, DirectedPair pair, const ShiftBound& bound) {
  return in_shifted_obstacle(x[pair.leader], x[pair.follower], bound);
}

bool curve_intersects_shifted(std::span<const Configuration> samples, DirectedPair pair,
                              const ShiftBound& bound) {
  constexpr double kMonotoneTol = 1e-9;
  double prev_leader = -kInf;
  double prev_follower = -kInf;
  for (const Configuration& q : samples) {
    const double l = q[pair.leader];
    const double f = q[pair.follower];
    if (l < prev_leader - kMonotoneTol || f < prev_follower - kMonotoneTol)
      throw std::invalid_argument("curve samples must be monotone along both axes");
    prev_leader = l;
    prev_follower = f;
    if (in_shifted_obstacle(l, f, bound)) return true;
  }
  return false;
}

SectionCatalog::SectionCatalog(const IntersectionLayout& layout, double robot_radius,
                               double inflation, double grid_resolution)
    : n_(layout.lane_count()), radius_(robot_radius), inflation_(inflation) {
  if (robot_radius <= 0.0) throw std::invalid_argument("robot radius must be positive");
  if (inflation < 0.0) throw std::invalid_argument("inflation must be nonnegative");
  sections_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
  bounds_.resize(sections_.size());
  inflated_bounds_.resize(sections_.size());

  const double r_sum = 2.0 * robot_radius;
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      CrossSection exact =
          build_cross_section(layout.paths[static_cast<std::size_t>(a)],
                              layout.paths[static_cast<std::size_t>(b)], r_sum, grid_resolution);
      if (!exact.empty()) {
        bounds_[idx(a, b)].emplace(exact);
        sections_[idx(a, b)] = std::move(exact);
      }
      const CrossSection inflated =
          build_cross_section(layout.paths[static_cast<std::size_t>(a)],
                              layout.paths[static_cast<std::size_t>(b)], r_sum + inflation,
                              grid_resolution);
      if (!inflated.empty()) inflated_bounds_[idx(a, b)].emplace(inflated);
    }
  }
}

const CrossSection* SectionCatalog::section(int path_u, int path_v) const {
  const auto& slot = sections_[idx(path_u, path_v)];
  return slot ? &*slot : nullptr;
}

const ShiftBound* SectionCatalog::bound(int leader_path, int follower_path) const {
  const auto& slot = bounds_[idx(leader_path, follower_path)];
  return slot ? &*slot : nullptr;
}

const ShiftBound* SectionCatalog::inflated_bound(int leader_path, int follower_path) const {
  const auto& slot = inflated_bounds_[idx(leader_path, follower_path)];
  return slot ? &*slot : nullptr;
}

void validate_layout(const IntersectionLayout& layout, const SectionCatalog& catalog,
                     double overshoot) {
  const int n = layout.lane_count();
  if (n == 0) throw std::invalid_argument("layout has no paths");
  if (static_cast<int>(layout.spawn.size()) != n || static_cast<int>(layout.exit.size()) != n)
    throw std::invalid_argument("layout spawn/exit arrays must match the path count");
  for (int p = 0; p < n; ++p) {
    if (layout.spawn[static_cast<std::size_t>(p)] < -1e-9)
      throw std::invalid_argument("spawn coordinate precedes the start of the path");
    if (!(layout.spawn[static_cast<std::size_t>(p)] < layout.exit[static_cast<std::size_t>(p)]))
      throw std::invalid_argument("spawn coordinate must precede the exit coordinate");
    if (layout.exit[static_cast<std::size_t>(p)] + overshoot >
        layout.paths[static_cast<std::size_t>(p)].length() + 1e-9)
      throw std::invalid_argument("path ends too soon after the exit coordinate");
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const CrossSection* s = catalog.section(a, b);
      if (!s || !s->bounded()) continue;
      if (!(s->inf_u > layout.spawn[static_cast<std::size_t>(a)] &&
            s->sup_u < layout.exit[static_cast<std::size_t>(a)] &&
            s->inf_v > layout.spawn[static_cast<std::size_t>(b)] &&
            s->sup_v < layout.exit[static_cast<std::size_t>(b)]))
        throw std::invalid_argument("conflict zone must lie strictly between spawn and exit");
    }
  }
}

}  // namespace coord
