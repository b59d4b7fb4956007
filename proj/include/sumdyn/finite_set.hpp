#ifndef SUMDYN_FINITE_SET_HPP
#define SUMDYN_FINITE_SET_HPP

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "errors.hpp"

namespace sumdyn {

struct Limits {
  std::size_t max_size = 1'000'000;
  std::uint64_t max_value = 1'000'000;
};

// Strictly increasing finite subset of {0,1,2,...}.
class FiniteNatSet {
 public:
  FiniteNatSet() = default;

  explicit FiniteNatSet(std::vector<std::uint64_t> elems, const Limits& lim = {})
      : v_(std::move(elems)) {
    for (std::size_t i = 1; i < v_.size(); ++i)
      if (v_[i] <= v_[i - 1])
        throw InvalidInput("set elements must be strictly increasing (index " + std::to_string(i) + ")");
    check(lim);
  }
  FiniteNatSet(std::initializer_list<std::uint64_t> il) : FiniteNatSet(std::vector<std::uint64_t>(il)) {}

  static FiniteNatSet from_unsorted(std::vector<std::uint64_t> elems, const Limits& lim = {}) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return FiniteNatSet(std::move(elems), lim);
  }

  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  std::uint64_t max() const { return v_.empty() ? 0 : v_.back(); }
  std::uint64_t operator[](std::size_t i) const { return v_[i]; }
  bool contains(std::uint64_t x) const { return std::binary_search(v_.begin(), v_.end(), x); }
  const std::vector<std::uint64_t>& elements() const { return v_; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  bool operator==(const FiniteNatSet& o) const { return v_ == o.v_; }

  bool subset_of(const FiniteNatSet& o) const {
    return std::includes(o.v_.begin(), o.v_.end(), v_.begin(), v_.end());
  }

 private:
  void check(const Limits& lim) const {
    if (v_.size() > lim.max_size)
      throw CapacityError("set size " + std::to_string(v_.size()) + " exceeds limit " + std::to_string(lim.max_size));
    if (!v_.empty() && v_.back() > lim.max_value)
      throw CapacityError("element " + std::to_string(v_.back()) + " exceeds limit " + std::to_string(lim.max_value));
  }

  std::vector<std::uint64_t> v_;
};

}  // namespace sumdyn

#endif
