#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mau/sim/rng.hpp"
#include "mau/types.hpp"

namespace mau::mobility {

/// Standard point-set kinds. A kind may carry a group qualifier, e.g.
/// "home@3" is the home set of people group 3.
inline constexpr std::string_view kHome = "home";
inline constexpr std::string_view kOffice = "office";
inline constexpr std::string_view kMeetingSpot = "meeting";
inline constexpr std::string_view kBusStop = "bus_stop";

std::string point_kind(std::string_view base, int group);

struct PointSetRequest {
  std::string kind;
  int count = 0;
};

/// Undirected path graph in meters with named point sets.
///
/// Call finalize() after construction; it checks connectivity and computes
/// all-pairs path lengths used by the shortest-path queries.
class Map {
 public:
  struct Neighbor {
    VertexId to;
    double length;
  };

  VertexId add_vertex(Vec2 position);
  /// Throws ConfigError on unknown vertices, self loops, duplicates, or zero length.
  void add_edge(VertexId a, VertexId b);
  void add_point(const std::string& kind, VertexId v);

  std::size_t vertex_count() const { return positions_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  Vec2 position(VertexId v) const { return positions_.at(static_cast<std::size_t>(v)); }
  const std::vector<Neighbor>& neighbors(VertexId v) const {
    return adjacency_.at(static_cast<std::size_t>(v));
  }
  const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }
  const std::map<std::string, std::vector<VertexId>>& point_sets() const { return points_; }
  /// Empty when the kind is absent.
  const std::vector<VertexId>& points(const std::string& kind) const;

  bool connected() const;

  /// Throws ConfigError if the graph is empty or disconnected.
  void finalize();
  bool finalized() const { return !dist_.empty(); }

  /// Shortest path length; requires finalize().
  double path_length(VertexId a, VertexId b) const;
  /// Minimal-length vertex sequence from a to b, inclusive. Among equal-length
  /// paths the lexicographically smallest vertex sequence is returned.
  std::vector<VertexId> shortest_path(VertexId a, VertexId b) const;

 private:
  void check_vertex(VertexId v) const;

  std::vector<Vec2> positions_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::pair<VertexId, VertexId>> edges_;
  std::map<std::string, std::vector<VertexId>> points_;
  std::vector<double> dist_;  // row-major all-pairs lengths
};

/// rows x cols grid with the given spacing; point sets are placed on distinct
/// vertices drawn from `rng`, in request order.
Map build_grid_map(int rows, int cols, double spacing, const std::vector<PointSetRequest>& requests,
                   RngStream& rng);

/// Line format: "V id x y", "E id1 id2", "P kind id". Vertex ids must be dense
/// and ascending. Throws ParseError with the line number.
Map read_map(std::istream& in);
void write_map(std::ostream& out, const Map& map);

}  // namespace mau::mobility
