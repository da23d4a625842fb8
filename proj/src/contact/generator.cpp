#include "mau/contact/generator.hpp"

#include <stdexcept>

#include "mau/sim/engine.hpp"

namespace mau::contact {

ContactTrace generate_contacts(const mobility::MobilityConfig& mobility, std::shared_ptr<const mobility::Map> map,
                               const LinkConfig& link, Duration duration, std::uint64_t master_seed,
                               const GenerationOptions& options) {
  const Duration tick = mobility.tick;
  if (tick <= Duration{0} || link.beacon_period <= Duration{0}) {
    throw ConfigError("tick and beacon period must be positive", "mobility.tick");
  }
  if (tick % link.beacon_period != Duration{0}) {
    throw ConfigError("mobility tick must be a whole number of beacon periods", "mobility.tick");
  }
  const auto substeps = static_cast<int>(tick / link.beacon_period);
  if (substeps > 64) throw ConfigError("at most 64 beacons per mobility tick", "mobility.tick");

  mobility::MobilityWorld world(mobility, std::move(map), master_seed);
  const double max_step = world.max_speed() * to_seconds(tick);
  ContactDetector detector(world.node_count(), link.range, max_step, options.kernel, options.rebuild_every);

  ContactTrace trace;
  trace.node_count = static_cast<int>(world.node_count());
  std::vector<Vec2> previous;
  const SimTime end = SimTime{} + duration;
  SimTime next_dump{};

  auto dump_positions = [&](SimTime now) {
    if (options.mobility_trace == nullptr || now < next_dump) return;
    mobility::write_positions(*options.mobility_trace, now, world.positions());
    next_dump = now + options.mobility_trace_period;
  };

  Engine engine;
  engine.set_event_log(options.event_log);
  engine.set_handler([&](const Event& ev) {
    const SimTime now = ev.fire_at;
    previous = world.positions();
    world.step(now, tick);
    const std::size_t first = trace.events.size();
    detector.interval(previous, world.positions(), now, link.beacon_period, substeps, trace.events);
    // Beacons past the end of the run are dropped.
    while (trace.events.size() > first && trace.events.back().time > end) trace.events.pop_back();
    dump_positions(now + tick);
    if (now + tick < end) engine.schedule(now + tick, EventKind::kMobilityUpdate);
  });

  detector.initial(world.positions(), SimTime{}, trace.events);
  dump_positions(SimTime{});
  if (duration > Duration{0}) engine.schedule(SimTime{}, EventKind::kMobilityUpdate);
  engine.run_until(end);
  return trace;
}

ContactTrace generate_contacts(const mobility::MobilityConfig& mobility, const LinkConfig& link, Duration duration,
                               std::uint64_t master_seed, const GenerationOptions& options) {
  auto map = std::make_shared<const mobility::Map>(mobility::build_map(mobility));
  return generate_contacts(mobility, std::move(map), link, duration, master_seed, options);
}

}  // namespace mau::contact
