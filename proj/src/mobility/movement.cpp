#include "mau/mobility/movement.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace mau::mobility {

std::string_view to_string(MovementModel model) {
  switch (model) {
    case MovementModel::kMapBased: return "shortest-path-map-based";
    case MovementModel::kBus: return "bus";
    case MovementModel::kWorkingDay: return "working-day";
    case MovementModel::kRandomWaypoint: return "random-waypoint";
  }
  return "unknown";
}

MovementModel parse_movement_model(std::string_view text) {
  for (auto m : {MovementModel::kMapBased, MovementModel::kBus, MovementModel::kWorkingDay,
                 MovementModel::kRandomWaypoint}) {
    if (text == to_string(m)) return m;
  }
  throw ConfigError("unknown movement model '" + std::string(text) + "'");
}

int MobilityConfig::node_count() const {
  int total = 0;
  for (const auto& g : groups) total += g.count;
  return total;
}

double MobilityConfig::max_speed() const {
  double v = 0.0;
  for (const auto& g : groups) v = std::max(v, g.speed.max);
  return v;
}

std::vector<PointSetRequest> point_requests(const MobilityConfig& config) {
  std::vector<PointSetRequest> out;
  for (std::size_t gi = 0; gi < config.groups.size(); ++gi) {
    const auto& g = config.groups[gi];
    const int idx = static_cast<int>(gi);
    if (g.model == MovementModel::kWorkingDay) {
      out.push_back({point_kind(kHome, idx), g.homes});
      out.push_back({point_kind(kOffice, idx), g.offices});
      out.push_back({point_kind(kMeetingSpot, idx), g.meeting_spots});
    } else if (g.model == MovementModel::kBus) {
      out.push_back({point_kind(kBusStop, idx), g.stops});
    }
  }
  return out;
}

Map build_map(const MobilityConfig& config) {
  Map map;
  if (!config.map.file.empty()) {
    std::ifstream in(config.map.file);
    if (!in) throw ConfigError("cannot open map file '" + config.map.file + "'", "map.file");
    map = read_map(in);
  } else {
    RngStream rng = derive_stream(config.map.seed, "map");
    map = build_grid_map(config.map.rows, config.map.cols, config.map.spacing, point_requests(config), rng);
  }
  for (std::size_t gi = 0; gi < config.groups.size(); ++gi) {
    const auto& g = config.groups[gi];
    const int idx = static_cast<int>(gi);
    const std::string key = "group." + g.name;
    if (g.model == MovementModel::kWorkingDay) {
      if (map.points(point_kind(kHome, idx)).empty()) throw ConfigError("group has no homes on the map", key);
      if (map.points(point_kind(kOffice, idx)).empty()) throw ConfigError("group has no offices on the map", key);
    } else if (g.model == MovementModel::kBus) {
      if (map.points(point_kind(kBusStop, idx)).size() < 2) {
        throw ConfigError("bus route needs at least 2 stops on the map", key);
      }
    }
  }
  return map;
}

// ---------------------------------------------------------------------------

void PathFollower::start(std::vector<Vec2> waypoints, std::vector<VertexId> vertices, double speed) {
  if (waypoints.size() != vertices.size()) throw std::logic_error("PathFollower: size mismatch");
  if (!(speed > 0.0)) throw std::logic_error("PathFollower: speed must be positive");
  waypoints_ = std::move(waypoints);
  vertices_ = std::move(vertices);
  next_ = 0;
  speed_ = speed;
}

double PathFollower::remaining_length(Vec2 from) const {
  double total = 0.0;
  for (std::size_t i = next_; i < waypoints_.size(); ++i) {
    total += distance(from, waypoints_[i]);
    from = waypoints_[i];
  }
  return total;
}

// ---------------------------------------------------------------------------

std::string day_stream_label(NodeId node, std::int64_t day_index) {
  return "mobility.day." + std::to_string(node) + "." + std::to_string(day_index);
}

DailySchedule plan_day(const WorkerProfile& profile, const WorkingDayConfig& config, RngStream& rng) {
  auto to_duration = [](double seconds) { return Duration{std::llround(seconds * 1000.0)}; };
  DailySchedule s;
  s.home = profile.home;
  s.office = profile.office;
  s.work_start = to_duration(rng.uniform(config.departure.min, config.departure.max));
  s.work_hours = to_duration(config.work_hours);
  s.evening_activity = rng.bernoulli(config.activity_probability);
  if (!profile.meeting_spots.empty()) {
    const auto pick = rng.uniform_int(0, static_cast<std::int64_t>(profile.meeting_spots.size()) - 1);
    s.activity_spot = profile.meeting_spots[static_cast<std::size_t>(pick)];
  } else {
    s.evening_activity = false;
  }
  s.activity_duration = to_duration(rng.uniform(config.activity_duration.min, config.activity_duration.max));
  return s;
}

// ---------------------------------------------------------------------------

void Movement::step(double t, double dt, MobilityWorld& world) {
  const double end = t + dt;
  int stalled = 0;
  while (t < end) {
    if (t < pause_until_) {
      t = std::min(pause_until_, end);
      continue;
    }
    if (!follower_.done()) {
      const double left = follower_.advance(pos_, end - t, [&](VertexId v) { return on_vertex(v, world); });
      if (halted()) return;
      t = end - left;
      stalled = 0;
      continue;
    }
    if (++stalled > 64) throw std::logic_error("movement of node " + std::to_string(id_) + " makes no progress");
    on_idle(t, world);
    if (halted()) return;
  }
}

void Movement::walk_to_vertex(const Map& map, VertexId from, VertexId to) {
  const auto path = map.shortest_path(from, to);
  std::vector<Vec2> points;
  points.reserve(path.size());
  for (VertexId v : path) points.push_back(map.position(v));
  follower_.start(std::move(points), path, draw_speed());
}

// ---------------------------------------------------------------------------

MapBasedMovement::MapBasedMovement(NodeId id, Range speed, Range pause, RngStream rng, const Map& map)
    : Movement(id, MovementModel::kMapBased, speed, std::move(rng)), pause_(pause) {
  at_ = static_cast<VertexId>(rng_.uniform_int(0, static_cast<std::int64_t>(map.vertex_count()) - 1));
  pos_ = map.position(at_);
}

void MapBasedMovement::on_idle(double t, MobilityWorld& world) {
  if (walking_) {
    walking_ = false;
    pause_until_ = t + rng_.uniform(pause_.min, pause_.max);
    return;
  }
  const auto n = static_cast<std::int64_t>(world.map().vertex_count());
  VertexId dest = at_;
  while (dest == at_) dest = static_cast<VertexId>(rng_.uniform_int(0, n - 1));
  walk_to_vertex(world.map(), at_, dest);
  at_ = dest;
  walking_ = true;
}

// ---------------------------------------------------------------------------

BusMovement::BusMovement(NodeId id, Range speed, Range pause, RngStream rng, const Map& map,
                         std::vector<VertexId> route, std::size_t start_stop)
    : Movement(id, MovementModel::kBus, speed, std::move(rng)),
      pause_(pause),
      route_(std::move(route)),
      stop_index_(start_stop % route_.size()),
      driving_(true) {
  pos_ = map.position(route_[stop_index_]);
}

void BusMovement::on_idle(double t, MobilityWorld& world) {
  if (driving_) {
    driving_ = false;
    paused_at_ = route_[stop_index_];
    pause_until_ = t + rng_.uniform(pause_.min, pause_.max);
    return;
  }
  const VertexId from = route_[stop_index_];
  stop_index_ = (stop_index_ + 1) % route_.size();
  paused_at_ = -1;
  walk_to_vertex(world.map(), from, route_[stop_index_]);
  driving_ = true;
}

// ---------------------------------------------------------------------------

RandomWaypointMovement::RandomWaypointMovement(NodeId id, Range speed, Range pause, RngStream rng,
                                               const Map& map)
    : Movement(id, MovementModel::kRandomWaypoint, speed, std::move(rng)), pause_(pause) {
  double total = 0.0;
  for (const auto& [a, b] : map.edges()) {
    total += distance(map.position(a), map.position(b));
    cumulative_length_.push_back(total);
  }
  here_ = random_point(map);
  pos_ = here_.point;
}

RandomWaypointMovement::EdgePoint RandomWaypointMovement::random_point(const Map& map) {
  const double r = rng_.uniform(0.0, cumulative_length_.back());
  auto it = std::upper_bound(cumulative_length_.begin(), cumulative_length_.end(), r);
  if (it == cumulative_length_.end()) --it;
  const auto idx = static_cast<std::size_t>(it - cumulative_length_.begin());
  const auto [a, b] = map.edges()[idx];
  const double start = idx == 0 ? 0.0 : cumulative_length_[idx - 1];
  const double frac = (r - start) / (*it - start);
  const Vec2 pa = map.position(a);
  return {a, b, pa + (map.position(b) - pa) * frac};
}

void RandomWaypointMovement::on_idle(double t, MobilityWorld& world) {
  if (walking_) {
    walking_ = false;
    pause_until_ = t + rng_.uniform(pause_.min, pause_.max);
    if (pause_until_ > t) return;
  }
  const Map& map = world.map();
  const EdgePoint target = random_point(map);

  std::vector<Vec2> points;
  std::vector<VertexId> ids;
  const bool same_edge = std::minmax(here_.a, here_.b) == std::minmax(target.a, target.b);
  if (same_edge) {
    points.push_back(target.point);
    ids.push_back(-1);
  } else {
    double best = std::numeric_limits<double>::infinity();
    VertexId from = -1, to = -1;
    for (VertexId u : {here_.a, here_.b}) {
      for (VertexId w : {target.a, target.b}) {
        const double len = distance(pos_, map.position(u)) + map.path_length(u, w) +
                           distance(map.position(w), target.point);
        if (len < best) best = len, from = u, to = w;
      }
    }
    for (VertexId v : map.shortest_path(from, to)) {
      points.push_back(map.position(v));
      ids.push_back(v);
    }
    points.push_back(target.point);
    ids.push_back(-1);
  }
  follower_.start(std::move(points), std::move(ids), draw_speed());
  here_ = target;
  walking_ = true;
}

// ---------------------------------------------------------------------------

WorkingDayMovement::WorkingDayMovement(NodeId id, Range speed, RngStream rng, const Map& map,
                                       WorkerProfile profile, const WorkingDayConfig& config,
                                       std::uint64_t master_seed)
    : Movement(id, MovementModel::kWorkingDay, speed, std::move(rng)),
      profile_(std::move(profile)),
      config_(&config),
      master_seed_(master_seed) {
  pos_ = map.position(profile_.home);
  at_vertex_ = profile_.home;
  go_home_until_next_departure(0.0);
}

DailySchedule WorkingDayMovement::schedule_for(std::int64_t day) const {
  RngStream rng = derive_stream(master_seed_, day_stream_label(id_, day));
  return plan_day(profile_, *config_, rng);
}

void WorkingDayMovement::go_home_until_next_departure(double t) {
  phase_ = Phase::kHome;
  auto day = static_cast<std::int64_t>(std::floor(t / 86400.0));
  for (;; ++day) {
    DailySchedule s = schedule_for(day);
    const double departure = static_cast<double>(day) * 86400.0 + to_seconds(s.work_start);
    if (departure > t) {
      today_ = s;
      pause_until_ = departure;
      return;
    }
  }
}

void WorkingDayMovement::start_trip(VertexId dest, const Map& map) {
  destination_ = dest;
  const VertexId origin = at_vertex_ >= 0 ? at_vertex_ : profile_.office;
  std::vector<Vec2> points;
  std::vector<VertexId> ids;
  for (VertexId v : map.shortest_path(origin, dest)) {
    points.push_back(map.position(v));
    ids.push_back(v);
  }
  follower_.start(std::move(points), std::move(ids), draw_speed());
  at_vertex_ = -1;
}

bool WorkingDayMovement::try_board(VertexId v, MobilityWorld& world) {
  const Map& map = world.map();
  const double here = map.path_length(v, destination_);
  for (int index : world.buses_paused_at(v)) {
    const auto& route = world.bus(index).route();
    VertexId best = route.front();
    for (VertexId stop : route) {
      if (map.path_length(stop, destination_) < map.path_length(best, destination_)) best = stop;
    }
    if (best != v && map.path_length(best, destination_) + 1e-9 < here) {
      bus_ = index;
      alight_at_ = best;
      follower_.clear();
      pos_ = map.position(v);
      at_vertex_ = -1;
      return true;
    }
  }
  return false;
}

bool WorkingDayMovement::on_vertex(VertexId v, MobilityWorld& world) {
  if (!config_->use_buses || !world.is_bus_stop(v)) return false;
  return try_board(v, world);
}

void WorkingDayMovement::step(double t, double dt, MobilityWorld& world) {
  if (bus_ >= 0) {
    const BusMovement& bus = world.bus(bus_);
    pos_ = bus.position();
    if (bus.paused_at() == alight_at_) {
      bus_ = -1;
      at_vertex_ = alight_at_;
      pos_ = world.map().position(alight_at_);
      start_trip(destination_, world.map());
    }
    // Boarding or alighting consumes the rest of the tick.
    return;
  }
  Movement::step(t, dt, world);
}

void WorkingDayMovement::on_idle(double t, MobilityWorld& world) {
  const Map& map = world.map();
  switch (phase_) {
    case Phase::kHome:
      phase_ = Phase::kToOffice;
      start_trip(profile_.office, map);
      break;
    case Phase::kToOffice:
      phase_ = Phase::kOffice;
      at_vertex_ = profile_.office;
      office_until_ = t + config_->work_hours;
      desk_walk_ = false;
      pause_until_ = std::min(t + rng_.uniform(config_->office_pause.min, config_->office_pause.max), office_until_);
      break;
    case Phase::kOffice: {
      if (desk_walk_) {
        desk_walk_ = false;
        pause_until_ =
            std::min(t + rng_.uniform(config_->office_pause.min, config_->office_pause.max), office_until_);
        if (pause_until_ > t) break;
      }
      if (t >= office_until_) {
        if (today_.evening_activity) {
          phase_ = Phase::kToActivity;
          start_trip(today_.activity_spot, map);
        } else {
          phase_ = Phase::kToHome;
          start_trip(profile_.home, map);
        }
        break;
      }
      // Move to another spot inside the office, on an edge next to the office vertex.
      const auto& edges = map.neighbors(profile_.office);
      const auto& nb = edges[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(edges.size()) - 1))];
      const double offset = rng_.uniform(0.0, std::min(config_->office_radius, nb.length));
      const Vec2 office = map.position(profile_.office);
      const Vec2 desk = office + (map.position(nb.to) - office) * (offset / nb.length);
      std::vector<Vec2> points;
      if (at_vertex_ != profile_.office) points.push_back(office);
      points.push_back(desk);
      std::vector<VertexId> ids(points.size(), -1);
      follower_.start(std::move(points), std::move(ids), draw_speed());
      at_vertex_ = -1;
      desk_walk_ = true;
      break;
    }
    case Phase::kToActivity:
      phase_ = Phase::kActivity;
      at_vertex_ = today_.activity_spot;
      pause_until_ = t + to_seconds(today_.activity_duration);
      break;
    case Phase::kActivity:
      phase_ = Phase::kToHome;
      start_trip(profile_.home, map);
      break;
    case Phase::kToHome:
      at_vertex_ = profile_.home;
      go_home_until_next_departure(t);
      break;
  }
}

// ---------------------------------------------------------------------------

namespace {

std::vector<VertexId> nearest_neighbor_tour(const Map& map, std::vector<VertexId> stops) {
  std::vector<VertexId> tour{stops.front()};
  stops.erase(stops.begin());
  while (!stops.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < stops.size(); ++i) {
      if (map.path_length(tour.back(), stops[i]) < map.path_length(tour.back(), stops[best])) best = i;
    }
    tour.push_back(stops[best]);
    stops.erase(stops.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return tour;
}

}  // namespace

MobilityWorld::MobilityWorld(const MobilityConfig& config, std::shared_ptr<const Map> map,
                             std::uint64_t master_seed)
    : map_(std::move(map)) {
  const Map& m = *map_;
  bus_stop_.assign(m.vertex_count(), 0);
  paused_buses_.resize(m.vertex_count());
  NodeId next_id = 0;
  for (std::size_t gi = 0; gi < config.groups.size(); ++gi) {
    const auto& g = config.groups[gi];
    const int idx = static_cast<int>(gi);
    if (g.speed.min <= 0.0 || g.speed.max < g.speed.min) {
      throw ConfigError("speed range must satisfy 0 < min <= max", "group." + g.name + ".speed");
    }
    max_speed_ = std::max(max_speed_, g.speed.max);
    std::vector<VertexId> route;
    if (g.model == MovementModel::kBus) {
      route = nearest_neighbor_tour(m, m.points(point_kind(kBusStop, idx)));
      for (VertexId v : route) bus_stop_[static_cast<std::size_t>(v)] = 1;
    }
    for (int k = 0; k < g.count; ++k) {
      const NodeId id = next_id++;
      RngStream rng = derive_stream(master_seed, "mobility.node." + std::to_string(id));
      switch (g.model) {
        case MovementModel::kMapBased:
          nodes_.push_back(std::make_unique<MapBasedMovement>(id, g.speed, g.pause, std::move(rng), m));
          vehicles_.push_back(nodes_.back().get());
          break;
        case MovementModel::kRandomWaypoint:
          nodes_.push_back(std::make_unique<RandomWaypointMovement>(id, g.speed, g.pause, std::move(rng), m));
          vehicles_.push_back(nodes_.back().get());
          break;
        case MovementModel::kBus: {
          const std::size_t start = static_cast<std::size_t>(k) * route.size() / static_cast<std::size_t>(g.count);
          auto bus = std::make_unique<BusMovement>(id, g.speed, g.pause, std::move(rng), m, route, start);
          buses_.push_back(bus.get());
          vehicles_.push_back(bus.get());
          nodes_.push_back(std::move(bus));
          break;
        }
        case MovementModel::kWorkingDay: {
          RngStream assign = derive_stream(master_seed, "mobility.assign." + std::to_string(id));
          const auto& homes = m.points(point_kind(kHome, idx));
          const auto& offices = m.points(point_kind(kOffice, idx));
          WorkerProfile profile;
          profile.home = homes[static_cast<std::size_t>(assign.uniform_int(0, static_cast<std::int64_t>(homes.size()) - 1))];
          profile.office =
              offices[static_cast<std::size_t>(assign.uniform_int(0, static_cast<std::int64_t>(offices.size()) - 1))];
          profile.meeting_spots = m.points(point_kind(kMeetingSpot, idx));
          nodes_.push_back(std::make_unique<WorkingDayMovement>(id, g.speed, std::move(rng), m, std::move(profile),
                                                                config.working_day, master_seed));
          people_.push_back(nodes_.back().get());
          break;
        }
      }
    }
  }
  positions_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) positions_[i] = nodes_[i]->position();
  index_paused_buses();
}

const std::vector<int>& MobilityWorld::buses_paused_at(VertexId v) const {
  return paused_buses_.at(static_cast<std::size_t>(v));
}

void MobilityWorld::index_paused_buses() {
  for (VertexId v : dirty_stops_) paused_buses_[static_cast<std::size_t>(v)].clear();
  dirty_stops_.clear();
  for (std::size_t i = 0; i < buses_.size(); ++i) {
    const VertexId v = buses_[i]->paused_at();
    if (v < 0) continue;
    auto& list = paused_buses_[static_cast<std::size_t>(v)];
    if (list.empty()) dirty_stops_.push_back(v);
    list.push_back(static_cast<int>(i));
  }
}

void MobilityWorld::step(SimTime now, Duration dt) {
  const double t = to_seconds(now);
  const double d = to_seconds(dt);
  for (Movement* node : vehicles_) node->step(t, d, *this);
  index_paused_buses();
  for (Movement* node : people_) node->step(t, d, *this);
  for (std::size_t i = 0; i < nodes_.size(); ++i) positions_[i] = nodes_[i]->position();
}

void write_positions(std::ostream& out, SimTime t, std::span<const Vec2> positions) {
  char buf[64];
  auto fmt = [&](double v) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string_view(buf, static_cast<std::size_t>(ptr - buf));
  };
  for (std::size_t i = 0; i < positions.size(); ++i) {
    out << to_ms(t) << ' ' << i << ' ' << fmt(positions[i].x);
    out << ' ' << fmt(positions[i].y) << '\n';
  }
}

}  // namespace mau::mobility
