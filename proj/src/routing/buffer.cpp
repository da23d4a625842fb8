#include "mau/routing/buffer.hpp"

#include <stdexcept>
#include <string>

namespace mau::routing {

Replica* Buffer::find(MessageId id) {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &*it->second;
}

const Replica* Buffer::find(MessageId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &*it->second;
}

InsertResult Buffer::insert(Replica replica, SimTime now) {
  if (contains(replica.id)) {
    throw std::logic_error("message " + std::to_string(replica.id) + " already resident");
  }
  InsertResult result;
  if (replica.size > capacity_ || !replica.alive(now)) return result;

  result.dropped = expire(now);
  while (used_ + replica.size > capacity_) {
    const Replica& oldest = items_.front();
    result.dropped.push_back(oldest);
    used_ -= oldest.size;
    index_.erase(oldest.id);
    items_.pop_front();
  }
  replica.arrival = next_arrival_++;
  used_ += replica.size;
  items_.push_back(replica);
  index_.emplace(replica.id, std::prev(items_.end()));
  result.accepted = true;
  return result;
}

std::vector<Replica> Buffer::expire(SimTime now) {
  std::vector<Replica> gone;
  for (auto it = items_.begin(); it != items_.end();) {
    if (it->expires_at < now) {
      gone.push_back(*it);
      used_ -= it->size;
      index_.erase(it->id);
      it = items_.erase(it);
    } else {
      ++it;
    }
  }
  return gone;
}

bool Buffer::remove(MessageId id) {
  auto it = index_.find(id);
  if (it == index_.end()) return false;
  used_ -= it->second->size;
  items_.erase(it->second);
  index_.erase(it);
  return true;
}

}  // namespace mau::routing
