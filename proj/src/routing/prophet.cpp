#include "mau/routing/prophet.hpp"

#include <algorithm>
#include <cmath>

namespace mau::routing {

double prophet_direct_update(double p_old, double p_init) { return p_old + (1.0 - p_old) * p_init; }

double prophet_age(double p_old, double gamma, std::int64_t k) {
  if (k <= 0) return p_old;
  return p_old * std::pow(gamma, static_cast<double>(k));
}

double prophet_transitive(double p_ac_old, double p_ab, double p_bc, double beta) {
  return p_ac_old + (1.0 - p_ac_old) * p_ab * p_bc * beta;
}

bool prophet_forward_decision(double p_self_dst, double p_peer_dst) { return p_peer_dst > p_self_dst; }

void ProphetTable::age(SimTime now) {
  const Duration unit = params_->time_unit;
  const std::int64_t k = (now - last_aged_) / unit;
  if (k <= 0) return;
  const double factor = std::pow(params_->gamma, static_cast<double>(k));
  for (double& p : p_) p *= factor;
  last_aged_ += unit * k;
}

void ProphetTable::absorb(NodeId self, NodeId peer, const std::vector<double>& peer_values) {
  const double p_ab = get(peer);
  for (std::size_t c = 0; c < p_.size(); ++c) {
    if (static_cast<NodeId>(c) == self || static_cast<NodeId>(c) == peer) continue;
    p_[c] = prophet_transitive(p_[c], p_ab, peer_values[c], params_->beta);
  }
}

void prophet_encounter(ProphetTable& a_table, NodeId a, ProphetTable& b_table, NodeId b, SimTime now) {
  a_table.age(now);
  b_table.age(now);
  a_table.meet(b);
  b_table.meet(a);
  const std::vector<double> a_snapshot = a_table.values();
  a_table.absorb(a, b, b_table.values());
  b_table.absorb(b, a, a_snapshot);
}

}  // namespace mau::routing
