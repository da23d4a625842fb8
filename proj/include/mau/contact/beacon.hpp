#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mau/contact/contact.hpp"
#include "mau/types.hpp"

namespace mau::contact {

using NodePair = std::pair<NodeId, NodeId>;

/// Position of a node at fraction `s` of a mobility tick. Every kernel uses
/// this exact expression so their range decisions agree bit for bit.
inline Vec2 interpolate(Vec2 from, Vec2 to, double s) { return from + (to - from) * s; }

inline bool within_range(Vec2 a, Vec2 b, double range) { return norm2(b - a) <= range * range; }

/// Stateful single-scan detector over all pairs. This is the reference the
/// pruned kernels are tested against.
class BeaconScanner {
 public:
  BeaconScanner(std::size_t node_count, double range);

  /// Appends `up` for pairs newly within range and `down` for pairs newly out
  /// of range, in (a, b) order.
  void scan(std::span<const Vec2> positions, SimTime now, std::vector<ContactEvent>& out);

  bool is_up(NodeId a, NodeId b) const;

 private:
  std::size_t n_;
  double range_;
  std::vector<std::uint8_t> up_;  // row-major upper triangle
};

enum class ScanKernel : std::uint8_t {
  kReference,       // every pair at every beacon
  kPruned,          // candidate list + per-tick bounds, serial
  kPrunedParallel,  // same, OpenMP over rows and candidates
};

// Building blocks of the pruned kernel, exposed for tests and benchmarks.

/// Pairs (i < j) within `radius`, in lexicographic order.
std::vector<NodePair> candidate_pairs_serial(std::span<const Vec2> positions, double radius);
std::vector<NodePair> candidate_pairs_parallel(std::span<const Vec2> positions, double radius);

/// For each candidate, bit k is set when the pair is within range at
/// interpolation fraction (k + 1) / substeps. substeps <= 64.
void substep_masks_serial(std::span<const Vec2> from, std::span<const Vec2> to,
                          std::span<const NodePair> candidates, double range, int substeps,
                          std::vector<std::uint64_t>& masks);
void substep_masks_parallel(std::span<const Vec2> from, std::span<const Vec2> to,
                            std::span<const NodePair> candidates, double range, int substeps,
                            std::vector<std::uint64_t>& masks);

/// Turns positions sampled once per mobility tick into contact events at
/// every beacon, interpolating positions linearly inside the tick. All
/// kernels produce identical event sequences.
class ContactDetector {
 public:
  /// `max_step` bounds any node's displacement over one tick (m).
  ContactDetector(std::size_t node_count, double range, double max_step, ScanKernel kernel,
                  int rebuild_every = 10);

  /// Scan at `now` with no interpolation (simulation start).
  void initial(std::span<const Vec2> positions, SimTime now, std::vector<ContactEvent>& out);

  /// Beacons at t0 + k * beacon for k = 1..substeps, positions interpolated
  /// between `from` (at t0) and `to` (at t0 + substeps * beacon).
  void interval(std::span<const Vec2> from, std::span<const Vec2> to, SimTime t0, Duration beacon,
                int substeps, std::vector<ContactEvent>& out);

  std::size_t candidate_count() const { return candidates_.size(); }

 private:
  void interval_reference(std::span<const Vec2> from, std::span<const Vec2> to, SimTime t0,
                          Duration beacon, int substeps, std::vector<ContactEvent>& out);
  void interval_pruned(std::span<const Vec2> from, std::span<const Vec2> to, SimTime t0, Duration beacon,
                       int substeps, std::vector<ContactEvent>& out);
  void check_displacement(std::span<const Vec2> from, std::span<const Vec2> to) const;

  std::size_t n_;
  double range_;
  double max_step_;
  ScanKernel kernel_;
  int rebuild_every_;
  int since_rebuild_ = 0;
  BeaconScanner scanner_;
  std::vector<std::uint8_t> up_;  // pruned kernels' pair state
  std::vector<NodePair> candidates_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::vector<ContactEvent>> buckets_;
  std::vector<Vec2> scratch_;
};

}  // namespace mau::contact
