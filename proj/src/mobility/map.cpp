#include "mau/mobility/map.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

namespace mau::mobility {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string point_kind(std::string_view base, int group) {
  return std::string(base) + "@" + std::to_string(group);
}

VertexId Map::add_vertex(Vec2 position) {
  positions_.push_back(position);
  adjacency_.emplace_back();
  dist_.clear();
  return static_cast<VertexId>(positions_.size() - 1);
}

void Map::check_vertex(VertexId v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= positions_.size()) {
    throw ConfigError("unknown vertex " + std::to_string(v), "map");
  }
}

void Map::add_edge(VertexId a, VertexId b) {
  check_vertex(a);
  check_vertex(b);
  if (a == b) throw ConfigError("self loop on vertex " + std::to_string(a), "map");
  auto& na = adjacency_[static_cast<std::size_t>(a)];
  if (std::any_of(na.begin(), na.end(), [b](const Neighbor& n) { return n.to == b; })) {
    throw ConfigError("duplicate edge " + std::to_string(a) + "-" + std::to_string(b), "map");
  }
  const double length = distance(position(a), position(b));
  if (!(length > 0.0)) {
    throw ConfigError("zero-length edge " + std::to_string(a) + "-" + std::to_string(b), "map");
  }
  auto insert_sorted = [](std::vector<Neighbor>& list, Neighbor n) {
    auto it = std::lower_bound(list.begin(), list.end(), n.to,
                               [](const Neighbor& x, VertexId id) { return x.to < id; });
    list.insert(it, n);
  };
  insert_sorted(na, {b, length});
  insert_sorted(adjacency_[static_cast<std::size_t>(b)], {a, length});
  edges_.emplace_back(std::min(a, b), std::max(a, b));
  dist_.clear();
}

void Map::add_point(const std::string& kind, VertexId v) {
  check_vertex(v);
  if (kind.empty()) throw ConfigError("empty point kind", "map");
  points_[kind].push_back(v);
}

const std::vector<VertexId>& Map::points(const std::string& kind) const {
  static const std::vector<VertexId> kEmpty;
  auto it = points_.find(kind);
  return it == points_.end() ? kEmpty : it->second;
}

bool Map::connected() const {
  if (positions_.empty()) return false;
  std::vector<char> seen(positions_.size(), 0);
  std::queue<VertexId> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const VertexId v = frontier.front();
    frontier.pop();
    for (const auto& n : neighbors(v)) {
      if (!seen[static_cast<std::size_t>(n.to)]) {
        seen[static_cast<std::size_t>(n.to)] = 1;
        ++reached;
        frontier.push(n.to);
      }
    }
  }
  return reached == positions_.size();
}

void Map::finalize() {
  if (!connected()) throw ConfigError("map graph is empty or disconnected", "map");
  const std::size_t n = positions_.size();
  dist_.assign(n * n, kInf);
  using Item = std::pair<double, VertexId>;
  for (std::size_t src = 0; src < n; ++src) {
    double* row = dist_.data() + src * n;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    row[src] = 0.0;
    heap.emplace(0.0, static_cast<VertexId>(src));
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > row[v]) continue;
      for (const auto& nb : neighbors(v)) {
        const double nd = d + nb.length;
        if (nd < row[nb.to]) {
          row[nb.to] = nd;
          heap.emplace(nd, nb.to);
        }
      }
    }
  }
}

double Map::path_length(VertexId a, VertexId b) const {
  check_vertex(a);
  check_vertex(b);
  if (!finalized()) throw std::logic_error("Map::finalize() not called");
  return dist_[static_cast<std::size_t>(a) * positions_.size() + static_cast<std::size_t>(b)];
}

std::vector<VertexId> Map::shortest_path(VertexId a, VertexId b) const {
  const double total = path_length(a, b);
  if (!std::isfinite(total)) {
    throw ConfigError("no path between " + std::to_string(a) + " and " + std::to_string(b), "map");
  }
  std::vector<VertexId> path{a};
  VertexId cur = a;
  while (cur != b) {
    const double remaining = path_length(cur, b);
    const double tol = 1e-9 * std::max(1.0, remaining);
    VertexId next = -1;
    // Neighbors are id-sorted: the first one on a shortest path gives the
    // lexicographically smallest continuation.
    for (const auto& nb : neighbors(cur)) {
      if (std::abs(nb.length + path_length(nb.to, b) - remaining) <= tol) {
        next = nb.to;
        break;
      }
    }
    if (next < 0) throw std::logic_error("shortest_path: inconsistent distance table");
    path.push_back(next);
    cur = next;
  }
  return path;
}

Map build_grid_map(int rows, int cols, double spacing, const std::vector<PointSetRequest>& requests,
                   RngStream& rng) {
  if (rows < 2 || cols < 2) throw ConfigError("grid needs at least 2 rows and 2 columns", "map");
  if (!(spacing > 0.0)) throw ConfigError("spacing must be positive", "map.spacing");

  Map map;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) map.add_vertex({c * spacing, r * spacing});
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const VertexId v = r * cols + c;
      if (c + 1 < cols) map.add_edge(v, v + 1);
      if (r + 1 < rows) map.add_edge(v, v + cols);
    }
  }

  std::size_t wanted = 0;
  for (const auto& req : requests) {
    if (req.count < 0) throw ConfigError("negative point count", req.kind);
    wanted += static_cast<std::size_t>(req.count);
  }
  if (wanted > map.vertex_count()) {
    throw ConfigError("point sets need " + std::to_string(wanted) + " distinct vertices but the map has " +
                          std::to_string(map.vertex_count()),
                      "map");
  }

  std::vector<VertexId> order(map.vertex_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<VertexId>(i);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
    std::swap(order[i], order[j]);
  }
  std::size_t next = 0;
  for (const auto& req : requests) {
    for (int k = 0; k < req.count; ++k) map.add_point(req.kind, order[next++]);
  }
  map.finalize();
  return map;
}

Map read_map(std::istream& in) {
  Map map;
  std::string line;
  std::size_t lineno = 0;
  struct PendingEdge {
    VertexId a, b;
    std::size_t line;
  };
  struct PendingPoint {
    std::string kind;
    VertexId v;
    std::size_t line;
  };
  std::vector<PendingEdge> edges;
  std::vector<PendingPoint> points;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "V") {
      long long id;
      double x, y;
      if (!(fields >> id >> x >> y)) throw ParseError("expected 'V id x y'", lineno);
      if (id != static_cast<long long>(map.vertex_count())) {
        throw ParseError("vertex ids must be dense and ascending", lineno);
      }
      map.add_vertex({x, y});
    } else if (tag == "E") {
      long long a, b;
      if (!(fields >> a >> b)) throw ParseError("expected 'E id1 id2'", lineno);
      edges.push_back({static_cast<VertexId>(a), static_cast<VertexId>(b), lineno});
    } else if (tag == "P") {
      std::string kind;
      long long v;
      if (!(fields >> kind >> v)) throw ParseError("expected 'P kind id'", lineno);
      points.push_back({kind, static_cast<VertexId>(v), lineno});
    } else {
      throw ParseError("unknown record '" + tag + "'", lineno);
    }
    std::string extra;
    if (fields >> extra) throw ParseError("trailing field '" + extra + "'", lineno);
  }
  for (const auto& e : edges) {
    try {
      map.add_edge(e.a, e.b);
    } catch (const ConfigError& err) {
      throw ParseError(err.what(), e.line);
    }
  }
  for (const auto& p : points) {
    try {
      map.add_point(p.kind, p.v);
    } catch (const ConfigError& err) {
      throw ParseError(err.what(), p.line);
    }
  }
  try {
    map.finalize();
  } catch (const ConfigError& err) {
    throw ParseError(err.what(), 0);
  }
  return map;
}

void write_map(std::ostream& out, const Map& map) {
  for (std::size_t v = 0; v < map.vertex_count(); ++v) {
    const Vec2 p = map.position(static_cast<VertexId>(v));
    out << "V " << v << ' ' << format_double(p.x) << ' ' << format_double(p.y) << '\n';
  }
  for (const auto& [a, b] : map.edges()) out << "E " << a << ' ' << b << '\n';
  for (const auto& [kind, vertices] : map.point_sets()) {
    for (VertexId v : vertices) out << "P " << kind << ' ' << v << '\n';
  }
}

}  // namespace mau::mobility
