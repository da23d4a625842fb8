#include "mau/contact/beacon.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mau::contact {

namespace {

inline std::size_t slot(std::size_t n, std::size_t i, std::size_t j) { return i * n + j; }

// Slack for the pruning bounds; far above rounding error at map scale and far
// below any physical distance that matters.
constexpr double kSlack = 1e-6;

inline std::uint64_t exact_mask(Vec2 fi, Vec2 ti, Vec2 fj, Vec2 tj, double range, int substeps) {
  std::uint64_t mask = 0;
  for (int k = 0; k < substeps; ++k) {
    const double s = static_cast<double>(k + 1) / static_cast<double>(substeps);
    if (within_range(interpolate(fi, ti, s), interpolate(fj, tj, s), range)) mask |= (1ULL << k);
  }
  return mask;
}

inline std::uint64_t pruned_mask(Vec2 fi, Vec2 ti, Vec2 fj, Vec2 tj, double range, int substeps) {
  const double r0 = norm(fj - fi);
  const double dr = norm((tj - fj) - (ti - fi));
  if (r0 - dr > range + kSlack) return 0;
  if (r0 + dr < range - kSlack) return substeps == 64 ? ~0ULL : ((1ULL << substeps) - 1);
  return exact_mask(fi, ti, fj, tj, range, substeps);
}

}  // namespace

BeaconScanner::BeaconScanner(std::size_t node_count, double range)
    : n_(node_count), range_(range), up_(node_count * node_count, 0) {}

void BeaconScanner::scan(std::span<const Vec2> positions, SimTime now, std::vector<ContactEvent>& out) {
  if (positions.size() != n_) throw std::invalid_argument("BeaconScanner: wrong position count");
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const std::uint8_t in = within_range(positions[i], positions[j], range_) ? 1 : 0;
      std::uint8_t& state = up_[slot(n_, i, j)];
      if (in != state) {
        state = in;
        out.push_back({now, static_cast<NodeId>(i), static_cast<NodeId>(j),
                       in ? ContactKind::kUp : ContactKind::kDown});
      }
    }
  }
}

bool BeaconScanner::is_up(NodeId a, NodeId b) const {
  if (a > b) std::swap(a, b);
  return up_.at(slot(n_, static_cast<std::size_t>(a), static_cast<std::size_t>(b))) != 0;
}

std::vector<NodePair> candidate_pairs_serial(std::span<const Vec2> positions, double radius) {
  std::vector<NodePair> out;
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if (norm2(positions[j] - positions[i]) <= r2) out.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    }
  }
  return out;
}

std::vector<NodePair> candidate_pairs_parallel(std::span<const Vec2> positions, double radius) {
  const auto n = static_cast<std::int64_t>(positions.size());
  const double r2 = radius * radius;
  std::vector<std::vector<NodeId>> rows(positions.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < n; ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    for (std::int64_t j = i + 1; j < n; ++j) {
      if (norm2(positions[static_cast<std::size_t>(j)] - positions[static_cast<std::size_t>(i)]) <= r2) {
        row.push_back(static_cast<NodeId>(j));
      }
    }
  }
  std::vector<NodePair> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (NodeId j : rows[i]) out.emplace_back(static_cast<NodeId>(i), j);
  }
  return out;
}

void substep_masks_serial(std::span<const Vec2> from, std::span<const Vec2> to,
                          std::span<const NodePair> candidates, double range, int substeps,
                          std::vector<std::uint64_t>& masks) {
  masks.resize(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto [i, j] = candidates[c];
    masks[c] = pruned_mask(from[static_cast<std::size_t>(i)], to[static_cast<std::size_t>(i)],
                           from[static_cast<std::size_t>(j)], to[static_cast<std::size_t>(j)], range, substeps);
  }
}

void substep_masks_parallel(std::span<const Vec2> from, std::span<const Vec2> to,
                            std::span<const NodePair> candidates, double range, int substeps,
                            std::vector<std::uint64_t>& masks) {
  masks.resize(candidates.size());
  const auto count = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < count; ++c) {
    const auto [i, j] = candidates[static_cast<std::size_t>(c)];
    masks[static_cast<std::size_t>(c)] =
        pruned_mask(from[static_cast<std::size_t>(i)], to[static_cast<std::size_t>(i)],
                    from[static_cast<std::size_t>(j)], to[static_cast<std::size_t>(j)], range, substeps);
  }
}

ContactDetector::ContactDetector(std::size_t node_count, double range, double max_step, ScanKernel kernel,
                                 int rebuild_every)
    : n_(node_count),
      range_(range),
      max_step_(max_step),
      kernel_(kernel),
      rebuild_every_(std::max(1, rebuild_every)),
      scanner_(node_count, range),
      up_(node_count * node_count, 0) {
  if (!(range > 0.0)) throw std::invalid_argument("ContactDetector: range must be positive");
  if (max_step < 0.0) throw std::invalid_argument("ContactDetector: negative max_step");
}

void ContactDetector::initial(std::span<const Vec2> positions, SimTime now, std::vector<ContactEvent>& out) {
  const std::size_t first = out.size();
  scanner_.scan(positions, now, out);
  for (std::size_t k = first; k < out.size(); ++k) {
    up_[slot(n_, static_cast<std::size_t>(out[k].a), static_cast<std::size_t>(out[k].b))] = 1;
  }
  since_rebuild_ = rebuild_every_;  // force a candidate rebuild on the first interval
}

void ContactDetector::check_displacement(std::span<const Vec2> from, std::span<const Vec2> to) const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (distance(from[i], to[i]) > max_step_ + kSlack) {
      throw std::logic_error("node " + std::to_string(i) + " moved farther in one tick than the speed bound allows");
    }
  }
}

void ContactDetector::interval(std::span<const Vec2> from, std::span<const Vec2> to, SimTime t0,
                               Duration beacon, int substeps, std::vector<ContactEvent>& out) {
  if (from.size() != n_ || to.size() != n_) throw std::invalid_argument("ContactDetector: wrong position count");
  if (substeps < 1 || substeps > 64) throw std::invalid_argument("ContactDetector: substeps must be in [1, 64]");
  if (kernel_ == ScanKernel::kReference) {
    interval_reference(from, to, t0, beacon, substeps, out);
  } else {
    check_displacement(from, to);
    interval_pruned(from, to, t0, beacon, substeps, out);
  }
}

void ContactDetector::interval_reference(std::span<const Vec2> from, std::span<const Vec2> to, SimTime t0,
                                         Duration beacon, int substeps, std::vector<ContactEvent>& out) {
  scratch_.resize(n_);
  for (int k = 0; k < substeps; ++k) {
    const double s = static_cast<double>(k + 1) / static_cast<double>(substeps);
    for (std::size_t i = 0; i < n_; ++i) scratch_[i] = interpolate(from[i], to[i], s);
    scanner_.scan(scratch_, t0 + beacon * (k + 1), out);
  }
}

void ContactDetector::interval_pruned(std::span<const Vec2> from, std::span<const Vec2> to, SimTime t0,
                                      Duration beacon, int substeps, std::vector<ContactEvent>& out) {
  const bool parallel = kernel_ == ScanKernel::kPrunedParallel;
  if (since_rebuild_ >= rebuild_every_) {
    // Pairs farther apart than this cannot close to `range` before the next rebuild.
    const double radius = range_ + 2.0 * max_step_ * rebuild_every_ + 1.0;
    candidates_ = parallel ? candidate_pairs_parallel(from, radius) : candidate_pairs_serial(from, radius);
    since_rebuild_ = 0;
  }
  ++since_rebuild_;

  if (parallel) {
    substep_masks_parallel(from, to, candidates_, range_, substeps, masks_);
  } else {
    substep_masks_serial(from, to, candidates_, range_, substeps, masks_);
  }

  buckets_.resize(static_cast<std::size_t>(substeps));
  for (auto& b : buckets_) b.clear();
  for (std::size_t c = 0; c < candidates_.size(); ++c) {
    const auto [i, j] = candidates_[c];
    std::uint8_t& state = up_[slot(n_, static_cast<std::size_t>(i), static_cast<std::size_t>(j))];
    const std::uint64_t mask = masks_[c];
    for (int k = 0; k < substeps; ++k) {
      const std::uint8_t in = (mask >> k) & 1ULL;
      if (in != state) {
        state = in;
        buckets_[static_cast<std::size_t>(k)].push_back(
            {t0 + beacon * (k + 1), i, j, in ? ContactKind::kUp : ContactKind::kDown});
      }
    }
  }
  for (const auto& b : buckets_) out.insert(out.end(), b.begin(), b.end());
}

}  // namespace mau::contact
