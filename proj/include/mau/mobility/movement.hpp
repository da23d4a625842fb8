#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mau/mobility/map.hpp"
#include "mau/sim/rng.hpp"
#include "mau/sim/time.hpp"
#include "mau/types.hpp"

namespace mau::mobility {

enum class MovementModel { kMapBased, kBus, kWorkingDay, kRandomWaypoint };

std::string_view to_string(MovementModel model);
/// Accepts "shortest-path-map-based", "bus", "working-day", "random-waypoint".
MovementModel parse_movement_model(std::string_view text);

struct Range {
  double min = 0.0;
  double max = 0.0;
  bool contains(double v) const { return v >= min && v <= max; }
};

struct GroupConfig {
  std::string name;
  MovementModel model = MovementModel::kMapBased;
  int count = 0;
  Range speed{0.8, 1.4};  // m/s
  Range pause{0.0, 0.0};  // s; unused by working-day groups
  // working-day point sets owned by the group
  int homes = 0;
  int offices = 0;
  int meeting_spots = 0;
  // bus route length
  int stops = 0;
};

struct WorkingDayConfig {
  Range departure{7.0 * 3600, 9.0 * 3600};  // s after midnight
  double work_hours = 8.0 * 3600;           // s
  double activity_probability = 0.5;
  Range activity_duration{3600, 7200};  // s
  Range office_pause{60, 4.0 * 3600};   // s
  double office_radius = 10.0;          // m along edges incident to the office vertex
  bool use_buses = true;
};

struct MapSpec {
  int rows = 20;
  int cols = 20;
  double spacing = 100.0;
  std::uint64_t seed = 1;
  std::string file;  // when set, the map is read from this file instead
};

struct MobilityConfig {
  MapSpec map;
  std::vector<GroupConfig> groups;
  WorkingDayConfig working_day;
  Duration tick = kSecond;

  int node_count() const;
  double max_speed() const;
};

/// Point sets the configured groups need, in a fixed order; kinds are
/// group-qualified with the group's index in `groups`.
std::vector<PointSetRequest> point_requests(const MobilityConfig& config);

/// Builds (or reads) the map and checks that every group's point sets exist.
Map build_map(const MobilityConfig& config);

/// Walks a polyline at constant speed.
class PathFollower {
 public:
  /// `vertices[i]` is the map vertex at `waypoints[i]`, or -1 for a point
  /// inside an edge.
  void start(std::vector<Vec2> waypoints, std::vector<VertexId> vertices, double speed);
  void clear() { waypoints_.clear(), vertices_.clear(), next_ = 0; }

  bool done() const { return next_ >= waypoints_.size(); }
  double speed() const { return speed_; }
  std::size_t next_index() const { return next_; }
  const std::vector<Vec2>& waypoints() const { return waypoints_; }
  double remaining_length(Vec2 from) const;

  /// Moves `pos` for up to `seconds`. `on_vertex(v)` runs whenever an
  /// intermediate waypoint on vertex v is reached; returning true halts the
  /// walk there. Returns the unused seconds.
  template <class OnVertex>
  double advance(Vec2& pos, double seconds, OnVertex&& on_vertex);
  double advance(Vec2& pos, double seconds) {
    return advance(pos, seconds, [](VertexId) { return false; });
  }

 private:
  std::vector<Vec2> waypoints_;
  std::vector<VertexId> vertices_;
  std::size_t next_ = 0;
  double speed_ = 0.0;
};

template <class OnVertex>
double PathFollower::advance(Vec2& pos, double seconds, OnVertex&& on_vertex) {
  while (seconds > 0.0 && next_ < waypoints_.size()) {
    const Vec2 target = waypoints_[next_];
    const double gap = distance(pos, target);
    const double reach = speed_ * seconds;
    if (reach >= gap) {
      pos = target;
      seconds -= gap / speed_;
      const VertexId v = vertices_[next_];
      ++next_;
      if (v >= 0 && next_ < waypoints_.size() && on_vertex(v)) return seconds;
    } else {
      pos = pos + (target - pos) * (reach / gap);
      seconds = 0.0;
    }
  }
  return seconds;
}

struct DailySchedule {
  VertexId home = -1;
  VertexId office = -1;
  Duration work_start{};  // departure from home, after midnight
  Duration work_hours{};
  bool evening_activity = false;
  VertexId activity_spot = -1;
  Duration activity_duration{};
};

/// Fixed per-node part of a working-day schedule.
struct WorkerProfile {
  VertexId home = -1;
  VertexId office = -1;
  std::vector<VertexId> meeting_spots;
};

/// One day's plan. Draws, in order: departure, evening coin, spot, duration.
DailySchedule plan_day(const WorkerProfile& profile, const WorkingDayConfig& config, RngStream& rng);

/// Stream label for (node, day) plans so each day is reproducible on its own.
std::string day_stream_label(NodeId node, std::int64_t day_index);

class MobilityWorld;

/// Per-node movement process.
class Movement {
 public:
  Movement(NodeId id, MovementModel model, Range speed, RngStream rng)
      : id_(id), model_(model), speed_range_(speed), rng_(std::move(rng)) {}
  virtual ~Movement() = default;

  NodeId id() const { return id_; }
  MovementModel model() const { return model_; }
  Vec2 position() const { return pos_; }
  /// Speed drawn for the current leg; 0 before the first leg.
  double current_speed() const { return follower_.speed(); }
  Range speed_range() const { return speed_range_; }

  /// Advances from `t` to `t + dt` seconds.
  virtual void step(double t, double dt, MobilityWorld& world);

 protected:
  /// Called when idle: neither paused nor walking. Must start a pause that
  /// ends after `t` or a path of positive length.
  virtual void on_idle(double t, MobilityWorld& world) = 0;
  /// Intermediate vertex reached while walking; true halts the walk.
  virtual bool on_vertex(VertexId, MobilityWorld&) { return false; }
  /// The walk was halted by on_vertex; remaining time of the step is skipped.
  virtual bool halted() const { return false; }

  void walk_to_vertex(const Map& map, VertexId from, VertexId to);
  double draw_speed() { return rng_.uniform(speed_range_.min, speed_range_.max); }

  NodeId id_;
  MovementModel model_;
  Range speed_range_;
  RngStream rng_;
  Vec2 pos_;
  PathFollower follower_;
  double pause_until_ = 0.0;
};

class MapBasedMovement final : public Movement {
 public:
  MapBasedMovement(NodeId id, Range speed, Range pause, RngStream rng, const Map& map);

 protected:
  void on_idle(double t, MobilityWorld& world) override;

 private:
  Range pause_;
  VertexId at_ = -1;
  bool walking_ = false;
};

class BusMovement final : public Movement {
 public:
  BusMovement(NodeId id, Range speed, Range pause, RngStream rng, const Map& map,
              std::vector<VertexId> route, std::size_t start_stop);

  const std::vector<VertexId>& route() const { return route_; }
  /// Stop the bus is currently paused at, or -1 while driving.
  VertexId paused_at() const { return paused_at_; }

 protected:
  void on_idle(double t, MobilityWorld& world) override;

 private:
  Range pause_;
  std::vector<VertexId> route_;
  std::size_t stop_index_;
  VertexId paused_at_ = -1;
  bool driving_ = false;
};

class RandomWaypointMovement final : public Movement {
 public:
  RandomWaypointMovement(NodeId id, Range speed, Range pause, RngStream rng, const Map& map);

 protected:
  void on_idle(double t, MobilityWorld& world) override;

 private:
  struct EdgePoint {
    VertexId a, b;  // edge endpoints
    Vec2 point;
  };
  EdgePoint random_point(const Map& map);

  Range pause_;
  std::vector<double> cumulative_length_;
  EdgePoint here_{};
  bool walking_ = false;
};

class WorkingDayMovement final : public Movement {
 public:
  enum class Phase { kHome, kToOffice, kOffice, kToActivity, kActivity, kToHome };

  WorkingDayMovement(NodeId id, Range speed, RngStream rng, const Map& map, WorkerProfile profile,
                     const WorkingDayConfig& config, std::uint64_t master_seed);

  Phase phase() const { return phase_; }
  const WorkerProfile& profile() const { return profile_; }
  bool riding() const { return bus_ >= 0; }

  void step(double t, double dt, MobilityWorld& world) override;

 protected:
  void on_idle(double t, MobilityWorld& world) override;
  bool on_vertex(VertexId v, MobilityWorld& world) override;
  bool halted() const override { return bus_ >= 0; }

 private:
  DailySchedule schedule_for(std::int64_t day) const;
  void go_home_until_next_departure(double t);
  void start_trip(VertexId dest, const Map& map);
  bool try_board(VertexId v, MobilityWorld& world);

  WorkerProfile profile_;
  const WorkingDayConfig* config_;
  std::uint64_t master_seed_;
  Phase phase_ = Phase::kHome;
  DailySchedule today_{};
  VertexId at_vertex_ = -1;  // -1 while inside an edge or riding
  VertexId destination_ = -1;
  double office_until_ = 0.0;
  bool desk_walk_ = false;
  int bus_ = -1;
  VertexId alight_at_ = -1;
};

/// All nodes of a scenario moving over one map. Vehicles step before people
/// so riders can follow the bus they are on.
class MobilityWorld {
 public:
  MobilityWorld(const MobilityConfig& config, std::shared_ptr<const Map> map, std::uint64_t master_seed);

  const Map& map() const { return *map_; }
  std::size_t node_count() const { return nodes_.size(); }
  double max_speed() const { return max_speed_; }
  const std::vector<Vec2>& positions() const { return positions_; }
  const Movement& node(NodeId id) const { return *nodes_.at(static_cast<std::size_t>(id)); }

  /// Advances every node from `now` to `now + dt`.
  void step(SimTime now, Duration dt);

  const std::vector<int>& buses_paused_at(VertexId v) const;
  const BusMovement& bus(int index) const { return *buses_.at(static_cast<std::size_t>(index)); }
  bool is_bus_stop(VertexId v) const { return bus_stop_[static_cast<std::size_t>(v)] != 0; }

 private:
  void index_paused_buses();

  std::shared_ptr<const Map> map_;
  std::vector<std::unique_ptr<Movement>> nodes_;
  std::vector<BusMovement*> buses_;
  std::vector<Movement*> vehicles_;  // stepped first
  std::vector<Movement*> people_;
  std::vector<std::vector<int>> paused_buses_;
  std::vector<VertexId> dirty_stops_;
  std::vector<char> bus_stop_;
  std::vector<Vec2> positions_;
  double max_speed_ = 0.0;
};

/// One "time_ms node_id x y" line per node.
void write_positions(std::ostream& out, SimTime t, std::span<const Vec2> positions);

}  // namespace mau::mobility
