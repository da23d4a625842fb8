#include "mau/bench/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <cctype>
#include <sstream>
#include <utility>

#include "mau/sim/rng.hpp"

namespace mau::bench {

namespace {

struct Preset {
  std::string_view name;
  std::string_view text;
};

constexpr Preset kPresets[] = {
#include "mau_presets.inc"
};

struct Entry {
  std::string key;
  std::string value;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

bool is_group_key(std::string_view key) { return key.starts_with("group."); }

std::string read_file(const std::filesystem::path& path, const std::string& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'", key);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void collect(std::string_view text, const std::filesystem::path& base_dir, int depth, std::vector<Entry>& out) {
  if (depth > 16) throw ConfigError("include nesting too deep", "include");
  std::vector<Entry> own;
  std::vector<std::pair<std::size_t, std::vector<Entry>>> included;  // position in `own`
  bool declares_groups = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty() && line.back() == '\r') throw ParseError("carriage return in scenario file", line_no);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError("empty key", line_no);
    if (value.empty()) throw ParseError("empty value for '" + key + "'", line_no);
    if (key == "include") {
      std::vector<Entry> sub;
      if (auto preset = preset_text(value); preset && !std::filesystem::exists(base_dir / value)) {
        collect(*preset, {}, depth + 1, sub);
      } else {
        const auto path = base_dir / value;
        collect(read_file(path, "include"), path.parent_path(), depth + 1, sub);
      }
      included.emplace_back(own.size(), std::move(sub));
      continue;
    }
    declares_groups = declares_groups || is_group_key(key);
    own.push_back({key, value});
  }
  // A file that declares groups replaces the groups of everything it includes.
  std::size_t next_include = 0;
  for (std::size_t i = 0; i <= own.size(); ++i) {
    while (next_include < included.size() && included[next_include].first == i) {
      for (auto& e : included[next_include].second) {
        if (!(declares_groups && is_group_key(e.key))) out.push_back(std::move(e));
      }
      ++next_include;
    }
    if (i < own.size()) out.push_back(std::move(own[i]));
  }
}

// --- value parsers -----------------------------------------------------------

double parse_number(std::string_view text, const std::string& key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("expected a number, got '" + std::string(text) + "'", key);
  }
  return v;
}

double parse_nonnegative(std::string_view text, const std::string& key) {
  const double v = parse_number(text, key);
  if (v < 0.0) throw ConfigError("must not be negative", key);
  return v;
}

std::int64_t parse_integer(std::string_view text, const std::string& key) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("expected an integer, got '" + std::string(text) + "'", key);
  }
  if (v < 0) throw ConfigError("must not be negative", key);
  return v;
}

int parse_int(std::string_view text, const std::string& key) {
  const auto v = parse_integer(text, key);
  if (v > 1'000'000'000) throw ConfigError("value too large", key);
  return static_cast<int>(v);
}

/// Number with an optional unit suffix from `units`, longest match first.
double parse_with_units(std::string_view text, const std::vector<std::pair<std::string_view, double>>& units,
                        const std::string& key) {
  for (const auto& [suffix, factor] : units) {
    if (text.size() > suffix.size() && text.ends_with(suffix)) {
      return parse_nonnegative(trim(text.substr(0, text.size() - suffix.size())), key) * factor;
    }
  }
  return parse_nonnegative(text, key);
}

std::uint64_t parse_size(std::string_view text, const std::string& key) {
  const double v = parse_with_units(text, {{"GB", 1e9}, {"MB", 1e6}, {"kB", 1e3}, {"KB", 1e3}, {"B", 1.0}}, key);
  if (v != std::floor(v)) throw ConfigError("size must be a whole number of bytes", key);
  if (v > 1e18) throw ConfigError("size too large", key);
  return static_cast<std::uint64_t>(v);
}

std::int64_t parse_bitrate(std::string_view text, const std::string& key) {
  const double v = parse_with_units(text, {{"Gbps", 1e9}, {"Mbps", 1e6}, {"kbps", 1e3}, {"bps", 1.0}}, key);
  if (v != std::floor(v)) throw ConfigError("bitrate must be a whole number of bit/s", key);
  return static_cast<std::int64_t>(v);
}

Duration parse_dur(std::string_view text, const std::string& key) {
  if (text.starts_with('-')) throw ConfigError("must not be negative", key);
  try {
    return parse_duration(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), key);
  }
}

std::pair<std::string_view, std::string_view> split_range(std::string_view text) {
  const auto pos = text.find("..");
  if (pos == std::string_view::npos) return {text, text};
  return {trim(text.substr(0, pos)), trim(text.substr(pos + 2))};
}

mobility::Range parse_number_range(std::string_view text, const std::string& key) {
  const auto [lo, hi] = split_range(text);
  mobility::Range r{parse_nonnegative(lo, key), parse_nonnegative(hi, key)};
  if (r.min > r.max) throw ConfigError("range minimum exceeds maximum", key);
  return r;
}

/// Duration range in seconds.
mobility::Range parse_duration_range(std::string_view text, const std::string& key) {
  const auto [lo, hi] = split_range(text);
  mobility::Range r{to_seconds(parse_dur(lo, key)), to_seconds(parse_dur(hi, key))};
  if (r.min > r.max) throw ConfigError("range minimum exceeds maximum", key);
  return r;
}

bool parse_bool(std::string_view text, const std::string& key) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError("expected true or false, got '" + std::string(text) + "'", key);
}

// --- canonical formatting ------------------------------------------------------

std::string fmt_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt_seconds(double s) {
  const double ms = s * 1000.0;
  if (ms == std::round(ms)) return format_duration(Duration{static_cast<std::int64_t>(ms)});
  return fmt_number(ms) + "ms";
}

std::string fmt_duration_range(const mobility::Range& r) { return fmt_seconds(r.min) + ".." + fmt_seconds(r.max); }
std::string fmt_number_range(const mobility::Range& r) { return fmt_number(r.min) + ".." + fmt_number(r.max); }

// --- key application -----------------------------------------------------------

class Applier {
 public:
  Applier(Scenario& s, const std::filesystem::path& base_dir) : s_(s), base_dir_(base_dir) {}

  void apply(const std::string& key, const std::string& v) {
    if (is_group_key(key)) return apply_group(key, v);
    auto& mob = s_.mobility;
    auto& wd = mob.working_day;
    auto& rt = s_.routing;
    auto& tr = s_.traffic;
    if (key == "scenario.name") s_.name = v;
    else if (key == "scenario.duration") s_.duration = parse_dur(v, key);
    else if (key == "scenario.warm_up") s_.warm_up = parse_dur(v, key);
    else if (key == "scenario.seeds") s_.seeds = parse_seed_list(v, key);
    else if (key == "scenario.ttls") s_.ttls = parse_ttl_list(v, key);
    else if (key == "scenario.nodes") s_.declared_nodes = parse_int(v, key);
    else if (key == "protocol") s_.protocols = parse_protocol_list(v, key);
    else if (key == "map.rows") mob.map.rows = parse_int(v, key);
    else if (key == "map.cols") mob.map.cols = parse_int(v, key);
    else if (key == "map.spacing") mob.map.spacing = parse_nonnegative(v, key);
    else if (key == "map.seed") mob.map.seed = static_cast<std::uint64_t>(parse_integer(v, key));
    else if (key == "map.file") mob.map.file = (base_dir_ / v).string();
    else if (key == "mobility.tick") mob.tick = parse_dur(v, key);
    else if (key == "link.range") s_.link.range = parse_nonnegative(v, key);
    else if (key == "link.bitrate") s_.link.bitrate = parse_bitrate(v, key);
    else if (key == "link.beacon") s_.link.beacon_period = parse_dur(v, key);
    else if (key == "link.duplex") s_.link.duplex = parse_duplex(v, key);
    else if (key == "buffer.capacity") rt.buffer_capacity = parse_size(v, key);
    else if (key == "buffer.drop") s_.drop_policy = parse_drop(v, key);
    else if (key == "traffic.rate") tr.rate_per_day = parse_nonnegative(v, key);
    else if (key == "traffic.size_min") tr.size_min = parse_message_size(v, key);
    else if (key == "traffic.size_max") tr.size_max = parse_message_size(v, key);
    else if (key == "traffic.pairs") tr.pairs = parse_int(v, key);
    else if (key == "traffic.seed") {
      if (v == "run") tr.seed.reset();
      else tr.seed = static_cast<std::uint64_t>(parse_integer(v, key));
    } else if (key == "traffic.arrival") tr.arrival = workload::parse_arrival(v);
    else if (key == "routing.ttl_mode") rt.ttl_mode = parse_ttl_mode(v, key);
    else if (key == "routing.hop_limit") rt.hop_limit = parse_int(v, key);
    else if (key == "routing.suppress_delivered") rt.suppress_delivered = parse_bool(v, key);
    else if (key == "routing.refuse") rt.refusal = parse_refusal(v, key);
    else if (key == "routing.sweep") rt.sweep_period = parse_dur(v, key);
    else if (key == "metrics.cost_mode") s_.cost_mode = workload::parse_cost_mode(v);
    else if (key == "prophet.p_init") rt.prophet.p_init = parse_nonnegative(v, key);
    else if (key == "prophet.beta") rt.prophet.beta = parse_nonnegative(v, key);
    else if (key == "prophet.gamma") rt.prophet.gamma = parse_nonnegative(v, key);
    else if (key == "prophet.time_unit") rt.prophet.time_unit = parse_dur(v, key);
    else if (key == "snw.l") rt.snw.copies = parse_int(v, key);
    else if (key == "bubble.k") rt.bubble.k = parse_int(v, key);
    else if (key == "bubble.familiar_threshold") rt.bubble.familiar_threshold = parse_dur(v, key);
    else if (key == "bubble.window") rt.bubble.window = parse_dur(v, key);
    else if (key == "working_day.departure") wd.departure = parse_duration_range(v, key);
    else if (key == "working_day.work_hours") wd.work_hours = to_seconds(parse_dur(v, key));
    else if (key == "working_day.activity_prob") wd.activity_probability = parse_nonnegative(v, key);
    else if (key == "working_day.activity_duration") wd.activity_duration = parse_duration_range(v, key);
    else if (key == "working_day.office_pause") wd.office_pause = parse_duration_range(v, key);
    else if (key == "working_day.office_radius") wd.office_radius = parse_nonnegative(v, key);
    else if (key == "working_day.use_buses") wd.use_buses = parse_bool(v, key);
    else if (key == "contact.trace") s_.contact_trace = (base_dir_ / v).string();
    else throw ConfigError("unknown key", key);
  }

 private:
  static contact::Duplex parse_duplex(std::string_view v, const std::string& key) {
    if (v == "half") return contact::Duplex::kHalf;
    if (v == "full") return contact::Duplex::kFull;
    throw ConfigError("expected half or full", key);
  }

  static std::string parse_drop(std::string_view v, const std::string& key) {
    if (v != "fifo") throw ConfigError("only the fifo drop policy is implemented", key);
    return std::string(v);
  }

  static routing::TtlMode parse_ttl_mode(std::string_view v, const std::string& key) {
    if (v == "time") return routing::TtlMode::kTime;
    if (v == "hops") return routing::TtlMode::kHops;
    throw ConfigError("expected time or hops", key);
  }

  static routing::Refusal parse_refusal(std::string_view v, const std::string& key) {
    if (v == "seen") return routing::Refusal::kSeen;
    if (v == "resident") return routing::Refusal::kResident;
    throw ConfigError("expected seen or resident", key);
  }

  static std::uint32_t parse_message_size(std::string_view v, const std::string& key) {
    const auto size = parse_size(v, key);
    if (size > 0xffffffffULL) throw ConfigError("message size too large", key);
    return static_cast<std::uint32_t>(size);
  }

  void apply_group(const std::string& key, const std::string& v) {
    const auto dot = key.find('.', 6);
    if (dot == std::string::npos || dot == 6) throw ConfigError("expected group.<name>.<field>", key);
    const std::string name = key.substr(6, dot - 6);
    const std::string field = key.substr(dot + 1);
    for (char c : name) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) {
        throw ConfigError("group names use letters, digits, '_' and '-'", key);
      }
    }
    auto& groups = s_.mobility.groups;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.name == name; });
    if (it == groups.end()) {
      mobility::GroupConfig g;
      g.name = name;
      g.count = -1;  // marks "not set"
      groups.push_back(g);
      it = groups.end() - 1;
    }
    auto& g = *it;
    if (field == "model") {
      try {
        g.model = mobility::parse_movement_model(v);
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), key);
      }
      models_.insert(name);
    } else if (field == "count") g.count = parse_int(v, key);
    else if (field == "speed") g.speed = parse_number_range(v, key);
    else if (field == "pause") g.pause = parse_duration_range(v, key);
    else if (field == "homes") g.homes = parse_int(v, key);
    else if (field == "offices") g.offices = parse_int(v, key);
    else if (field == "meeting_spots") g.meeting_spots = parse_int(v, key);
    else if (field == "stops") g.stops = parse_int(v, key);
    else throw ConfigError("unknown key", key);
  }

 public:
  void finish() {
    for (const auto& g : s_.mobility.groups) {
      const std::string key = "group." + g.name;
      if (!models_.contains(g.name)) throw ConfigError("group has no model", key + ".model");
      if (g.count < 0) throw ConfigError("group has no count", key + ".count");
    }
  }

 private:
  Scenario& s_;
  std::filesystem::path base_dir_;
  std::set<std::string> models_;
};

void require(bool ok, const std::string& what, const std::string& key) {
  if (!ok) throw ConfigError(what, key);
}

}  // namespace

int Scenario::node_count() const { return contact_trace.empty() ? mobility.node_count() : replay_nodes; }

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.name);
  return out;
}

std::optional<std::string_view> preset_text(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return p.text;
  }
  return std::nullopt;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text, const std::string& key) {
  std::vector<std::uint64_t> out;
  for (auto item : split(text, ',')) {
    if (item.empty()) throw ConfigError("empty list item", key);
    const auto [lo, hi] = split_range(item);
    const auto a = parse_integer(lo, key);
    const auto b = parse_integer(hi, key);
    require(a <= b, "seed range minimum exceeds maximum", key);
    require(b - a < 100000, "seed range too long", key);
    for (auto s = a; s <= b; ++s) out.push_back(static_cast<std::uint64_t>(s));
  }
  return out;
}

std::vector<Duration> parse_ttl_list(std::string_view text, const std::string& key) {
  std::vector<Duration> out;
  for (auto item : split(text, ',')) {
    if (item.empty()) throw ConfigError("empty list item", key);
    out.push_back(parse_dur(item, key));
  }
  return out;
}

std::vector<routing::ProtocolKind> parse_protocol_list(std::string_view text, const std::string& key) {
  if (trim(text) == "all") {
    return {routing::ProtocolKind::kEpidemic, routing::ProtocolKind::kProphet, routing::ProtocolKind::kSprayAndWait,
            routing::ProtocolKind::kBubbleRap};
  }
  std::vector<routing::ProtocolKind> out;
  for (auto item : split(text, ',')) {
    try {
      out.push_back(routing::parse_protocol(item));
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), key);
    }
  }
  return out;
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<Entry> user;
  collect(text, base_dir, 0, user);
  const bool user_groups = std::any_of(user.begin(), user.end(), [](const Entry& e) { return is_group_key(e.key); });

  std::vector<Entry> entries;
  collect(*preset_text("mau-default"), {}, 0, entries);
  if (user_groups) std::erase_if(entries, [](const Entry& e) { return is_group_key(e.key); });
  for (auto& e : user) entries.push_back(std::move(e));

  // Last assignment wins; groups keep the order of their first key.
  std::vector<std::string> order;
  std::map<std::string, std::string> values;
  for (auto& e : entries) {
    if (!values.contains(e.key)) order.push_back(e.key);
    values[e.key] = std::move(e.value);
  }

  Scenario s;
  s.mobility.groups.clear();
  Applier applier(s, base_dir);
  for (const auto& key : order) applier.apply(key, values.at(key));
  applier.finish();
  validate(s);
  return s;
}

Scenario load_scenario(const std::string& source) {
  const std::filesystem::path path(source);
  if (!std::filesystem::exists(path)) {
    if (auto preset = preset_text(source)) return parse_scenario(*preset, std::filesystem::current_path());
    throw ConfigError("no scenario file or preset named '" + source + "'");
  }
  return parse_scenario(read_file(path, "scenario"), path.parent_path());
}

void validate(Scenario& s) {
  s.warnings.clear();
  require(s.duration > Duration{0}, "must be positive", "scenario.duration");
  require(s.warm_up < s.duration, "warm-up must be shorter than the run", "scenario.warm_up");
  require(!s.seeds.empty(), "no seeds", "scenario.seeds");
  require(!s.ttls.empty(), "no TTLs", "scenario.ttls");
  for (Duration t : s.ttls) require(t > Duration{0}, "TTLs must be positive", "scenario.ttls");
  require(!s.protocols.empty(), "no protocols", "protocol");

  const auto& mob = s.mobility;
  if (mob.map.file.empty()) {
    require(mob.map.rows >= 2, "map needs at least 2 rows", "map.rows");
    require(mob.map.cols >= 2, "map needs at least 2 columns", "map.cols");
    require(mob.map.spacing > 0.0, "must be positive", "map.spacing");
  }
  require(mob.tick > Duration{0}, "must be positive", "mobility.tick");
  require(s.link.beacon_period > Duration{0}, "must be positive", "link.beacon");
  require(mob.tick % s.link.beacon_period == Duration{0}, "tick must be a multiple of the beacon period",
          "mobility.tick");
  require(mob.tick / s.link.beacon_period <= 64, "at most 64 beacon scans per tick", "mobility.tick");
  require(s.link.range > 0.0, "must be positive", "link.range");
  require(s.link.bitrate > 0, "must be positive", "link.bitrate");
  require(s.routing.buffer_capacity > 0, "must be positive", "buffer.capacity");

  const auto& tr = s.traffic;
  require(tr.rate_per_day > 0.0, "must be positive", "traffic.rate");
  require(tr.size_min > 0, "must be positive", "traffic.size_min");
  require(tr.size_min <= tr.size_max, "minimum exceeds maximum", "traffic.size_max");
  require(tr.pairs >= 1, "must be positive", "traffic.pairs");

  const auto& rt = s.routing;
  require(rt.hop_limit >= 1, "must be positive", "routing.hop_limit");
  require(rt.prophet.p_init > 0.0 && rt.prophet.p_init <= 1.0, "must be in (0, 1]", "prophet.p_init");
  require(rt.prophet.beta <= 1.0, "must be in [0, 1]", "prophet.beta");
  require(rt.prophet.gamma > 0.0 && rt.prophet.gamma <= 1.0, "must be in (0, 1]", "prophet.gamma");
  require(rt.prophet.time_unit > Duration{0}, "must be positive", "prophet.time_unit");
  require(rt.snw.copies >= 1, "must be positive", "snw.l");
  require(rt.bubble.k >= 1, "must be positive", "bubble.k");
  require(rt.bubble.window > Duration{0}, "must be positive", "bubble.window");

  const auto& wd = mob.working_day;
  require(wd.activity_probability <= 1.0, "must be in [0, 1]", "working_day.activity_prob");
  require(wd.departure.max < 24.0 * 3600, "departure must fall within the day", "working_day.departure");
  require(wd.office_pause.min > 0.0, "must be positive", "working_day.office_pause");

  for (const auto& g : mob.groups) {
    const std::string key = "group." + g.name;
    require(g.count >= 1, "must be positive", key + ".count");
    require(g.speed.min > 0.0, "speeds must be positive", key + ".speed");
    using mobility::MovementModel;
    if (g.model == MovementModel::kWorkingDay) {
      require(g.homes >= 1, "working-day groups need homes", key + ".homes");
      require(g.offices >= 1, "working-day groups need offices", key + ".offices");
      require(g.meeting_spots >= 1 || wd.activity_probability == 0.0, "working-day groups need meeting spots",
              key + ".meeting_spots");
    } else if (g.model == MovementModel::kBus) {
      require(g.stops >= 2, "bus routes need at least 2 stops", key + ".stops");
    }
  }

  if (!s.contact_trace.empty()) {
    std::ifstream in(s.contact_trace);
    if (!in) throw ConfigError("cannot open '" + s.contact_trace + "'", "contact.trace");
    s.replay_nodes = contact::read_trace(in).node_count;
  } else {
    require(!mob.groups.empty(), "no node groups", "group");
    if (s.declared_nodes && *s.declared_nodes != mob.node_count()) {
      throw ConfigError("declares " + std::to_string(*s.declared_nodes) + " nodes but the groups total " +
                            std::to_string(mob.node_count()),
                        "scenario.nodes");
    }
  }

  const int n = s.node_count();
  require(n >= 2, "need at least two nodes", "group");
  if (n < 100 || n > 150) {
    s.warnings.push_back("node total " + std::to_string(n) + " outside MAU density guideline 100-150");
  }
  if (s.link.range < 10.0 || s.link.range > 250.0) {
    s.warnings.push_back("link.range " + fmt_number(s.link.range) + " m outside MAU guideline 10-250 m");
  }
  if (s.link.beacon_period != Duration{100}) {
    s.warnings.push_back("link.beacon " + format_duration(s.link.beacon_period) + " differs from the MAU 100ms");
  }
  if (tr.size_min < 1000 || tr.size_max > 100000) {
    s.warnings.push_back("message sizes " + std::to_string(tr.size_min) + "-" + std::to_string(tr.size_max) +
                         " B outside MAU guideline 1-100 kB");
  }
}

void write_canonical(std::ostream& out, const Scenario& s) {
  std::map<std::string, std::string> kv;
  auto join = [](const auto& items, auto&& fmt) {
    std::string r;
    for (const auto& i : items) {
      if (!r.empty()) r += ',';
      r += fmt(i);
    }
    return r;
  };
  kv["scenario.name"] = s.name;
  kv["scenario.duration"] = format_duration(s.duration);
  kv["scenario.warm_up"] = format_duration(s.warm_up);
  kv["scenario.seeds"] = join(s.seeds, [](std::uint64_t v) { return std::to_string(v); });
  kv["scenario.ttls"] = join(s.ttls, [](Duration d) { return format_duration(d); });
  kv["protocol"] = join(s.protocols, [](routing::ProtocolKind k) { return std::string(routing::to_string(k)); });
  const auto& mob = s.mobility;
  if (mob.map.file.empty()) {
    kv["map.rows"] = std::to_string(mob.map.rows);
    kv["map.cols"] = std::to_string(mob.map.cols);
    kv["map.spacing"] = fmt_number(mob.map.spacing);
    kv["map.seed"] = std::to_string(mob.map.seed);
  } else {
    kv["map.file"] = mob.map.file;
  }
  kv["mobility.tick"] = format_duration(mob.tick);
  kv["link.range"] = fmt_number(s.link.range);
  kv["link.bitrate"] = std::to_string(s.link.bitrate) + "bps";
  kv["link.beacon"] = format_duration(s.link.beacon_period);
  kv["link.duplex"] = s.link.duplex == contact::Duplex::kHalf ? "half" : "full";
  kv["buffer.capacity"] = std::to_string(s.routing.buffer_capacity) + "B";
  kv["buffer.drop"] = s.drop_policy;
  const auto& tr = s.traffic;
  kv["traffic.rate"] = fmt_number(tr.rate_per_day);
  kv["traffic.size_min"] = std::to_string(tr.size_min) + "B";
  kv["traffic.size_max"] = std::to_string(tr.size_max) + "B";
  kv["traffic.pairs"] = std::to_string(tr.pairs);
  kv["traffic.seed"] = tr.seed ? std::to_string(*tr.seed) : "run";
  kv["traffic.arrival"] = std::string(workload::to_string(tr.arrival));
  const auto& rt = s.routing;
  kv["routing.ttl_mode"] = rt.ttl_mode == routing::TtlMode::kTime ? "time" : "hops";
  kv["routing.hop_limit"] = std::to_string(rt.hop_limit);
  kv["routing.suppress_delivered"] = rt.suppress_delivered ? "true" : "false";
  kv["routing.refuse"] = rt.refusal == routing::Refusal::kSeen ? "seen" : "resident";
  kv["routing.sweep"] = format_duration(rt.sweep_period);
  kv["metrics.cost_mode"] = std::string(workload::to_string(s.cost_mode));
  kv["prophet.p_init"] = fmt_number(rt.prophet.p_init);
  kv["prophet.beta"] = fmt_number(rt.prophet.beta);
  kv["prophet.gamma"] = fmt_number(rt.prophet.gamma);
  kv["prophet.time_unit"] = format_duration(rt.prophet.time_unit);
  kv["snw.l"] = std::to_string(rt.snw.copies);
  kv["bubble.k"] = std::to_string(rt.bubble.k);
  kv["bubble.familiar_threshold"] = format_duration(rt.bubble.familiar_threshold);
  kv["bubble.window"] = format_duration(rt.bubble.window);
  const auto& wd = mob.working_day;
  kv["working_day.departure"] = fmt_duration_range(wd.departure);
  kv["working_day.work_hours"] = fmt_seconds(wd.work_hours);
  kv["working_day.activity_prob"] = fmt_number(wd.activity_probability);
  kv["working_day.activity_duration"] = fmt_duration_range(wd.activity_duration);
  kv["working_day.office_pause"] = fmt_duration_range(wd.office_pause);
  kv["working_day.office_radius"] = fmt_number(wd.office_radius);
  kv["working_day.use_buses"] = wd.use_buses ? "true" : "false";
  if (!s.contact_trace.empty()) kv["contact.trace"] = s.contact_trace;
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  // Groups stay in declaration order, which fixes node ids.
  for (const auto& g : mob.groups) {
    const std::string p = "group." + g.name + ".";
    out << p << "model = " << mobility::to_string(g.model) << '\n';
    out << p << "count = " << g.count << '\n';
    out << p << "speed = " << fmt_number_range(g.speed) << '\n';
    out << p << "pause = " << fmt_duration_range(g.pause) << '\n';
    out << p << "homes = " << g.homes << '\n';
    out << p << "offices = " << g.offices << '\n';
    out << p << "meeting_spots = " << g.meeting_spots << '\n';
    out << p << "stops = " << g.stops << '\n';
  }
}

std::uint64_t scenario_hash(const Scenario& scenario) {
  std::ostringstream out;
  write_canonical(out, scenario);
  return fnv1a64(out.str());
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace mau::bench
