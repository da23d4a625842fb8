#pragma once

#include <cstdint>
#include <list>
#include <unordered_map>
#include <vector>

#include "mau/sim/time.hpp"
#include "mau/types.hpp"

namespace mau::routing {

/// A node's copy of a message.
struct Replica {
  MessageId id = 0;
  std::uint32_t size = 0;
  int hops = 0;
  int copies = 1;        // Spray and Wait budget; 1 elsewhere
  SimTime expires_at{};  // alive while now <= expires_at
  std::uint64_t arrival = 0;

  bool alive(SimTime now) const { return now <= expires_at; }
};

struct InsertResult {
  bool accepted = false;
  std::vector<Replica> dropped;  // expired first, then oldest arrivals
};

/// Finite message store with evict-expired-then-oldest-arrival replacement.
class Buffer {
 public:
  using const_iterator = std::list<Replica>::const_iterator;

  explicit Buffer(std::uint64_t capacity) : capacity_(capacity) {}

  std::uint64_t capacity() const { return capacity_; }
  std::uint64_t used() const { return used_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  bool contains(MessageId id) const { return index_.contains(id); }
  Replica* find(MessageId id);
  const Replica* find(MessageId id) const;

  /// Rejects (accepted = false, nothing evicted) when the replica is larger
  /// than the whole buffer or already expired. Inserting a resident id is a
  /// logic error.
  InsertResult insert(Replica replica, SimTime now);

  /// Removes every replica with expires_at < now, oldest arrival first.
  std::vector<Replica> expire(SimTime now);
  bool remove(MessageId id);

  /// Oldest arrival first.
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }

 private:
  std::uint64_t capacity_;
  std::uint64_t used_ = 0;
  std::uint64_t next_arrival_ = 0;
  std::list<Replica> items_;
  std::unordered_map<MessageId, std::list<Replica>::iterator> index_;
};

}  // namespace mau::routing
