#pragma once

#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <utility>

namespace fbmg::detail {

// Small thread-safe LRU of immutable, shared values. Building happens outside
// the lock; when two threads race on the same key the first insert wins.
template <class Key, class Value>
class SharedCache {
 public:
  explicit SharedCache(std::size_t capacity) : capacity_(capacity) {}

  template <class Build>
  std::shared_ptr<const Value> get_or_build(const Key& key, Build&& build) {
    {
      std::lock_guard lock(mutex_);
      if (auto hit = find_locked(key)) return hit;
    }
    auto value = std::make_shared<const Value>(build());
    std::lock_guard lock(mutex_);
    if (auto hit = find_locked(key)) return hit;
    entries_.emplace_front(key, value);
    while (entries_.size() > capacity_) entries_.pop_back();
    return value;
  }

  void clear() {
    std::lock_guard lock(mutex_);
    entries_.clear();
  }

 private:
  std::shared_ptr<const Value> find_locked(const Key& key) {
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      if (it->first == key) {
        entries_.splice(entries_.begin(), entries_, it);
        return entries_.front().second;
      }
    }
    return nullptr;
  }

  std::size_t capacity_;
  std::mutex mutex_;
  std::list<std::pair<Key, std::shared_ptr<const Value>>> entries_;
};

}  // namespace fbmg::detail
