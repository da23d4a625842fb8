#pragma once

#include <cstdint>
#include <vector>

#include "mau/routing/config.hpp"
#include "mau/types.hpp"

namespace mau::routing {

/// P_new = P_old + (1 - P_old) * P_init, applied on meeting the node.
double prophet_direct_update(double p_old, double p_init);
/// P_new = P_old * gamma^k for k elapsed time units.
double prophet_age(double p_old, double gamma, std::int64_t k);
/// P_ac_new = P_ac_old + (1 - P_ac_old) * P_ab * P_bc * beta.
double prophet_transitive(double p_ac_old, double p_ab, double p_bc, double beta);
/// Forward iff the peer's predictability for the destination is strictly higher.
bool prophet_forward_decision(double p_self_dst, double p_peer_dst);

/// One node's delivery predictabilities, dense over destination ids.
class ProphetTable {
 public:
  ProphetTable(std::size_t node_count, const ProphetParams& params) : p_(node_count, 0.0), params_(&params) {}

  double get(NodeId dst) const { return p_.at(static_cast<std::size_t>(dst)); }
  const std::vector<double>& values() const { return p_; }
  SimTime last_aged() const { return last_aged_; }

  /// Ages by whole elapsed time units; the fractional remainder carries over.
  void age(SimTime now);
  void meet(NodeId peer) { p_[static_cast<std::size_t>(peer)] = prophet_direct_update(get(peer), params_->p_init); }
  /// Transitive update through `peer`; entries for self and peer are skipped.
  void absorb(NodeId self, NodeId peer, const std::vector<double>& peer_values);

 private:
  std::vector<double> p_;
  SimTime last_aged_{};
  const ProphetParams* params_;
};

/// Encounter between a and b: age both, direct update, then transitivity.
void prophet_encounter(ProphetTable& a_table, NodeId a, ProphetTable& b_table, NodeId b, SimTime now);

}  // namespace mau::routing
