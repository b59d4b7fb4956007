#ifndef SUMDYN_BITVEC_HPP
#define SUMDYN_BITVEC_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace sumdyn {

// Dense bit vector with the shifted and/or kernels used by the sumset DP,
// the set materializer and the certificate searcher.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n, bool value = false)
      : n_(n), w_((n + 63) / 64, value ? ~std::uint64_t{0} : 0) {
    trim();
  }

  std::size_t size() const { return n_; }
  std::size_t words() const { return w_.size(); }
  const std::vector<std::uint64_t>& data() const { return w_; }
  std::vector<std::uint64_t>& data() { return w_; }

  bool test(std::size_t i) const { return i < n_ && ((w_[i >> 6] >> (i & 63)) & 1u); }
  void set(std::size_t i, bool v = true) {
    if (v)
      w_[i >> 6] |= std::uint64_t{1} << (i & 63);
    else
      w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  void fill(bool v) {
    std::fill(w_.begin(), w_.end(), v ? ~std::uint64_t{0} : 0);
    trim();
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }
  bool any() const {
    for (auto x : w_)
      if (x) return true;
    return false;
  }

  // First set index >= from, or size() if none.
  std::size_t next(std::size_t from) const {
    if (from >= n_) return n_;
    std::size_t wi = from >> 6;
    std::uint64_t cur = w_[wi] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (cur) return std::min(n_, (wi << 6) + static_cast<std::size_t>(std::countr_zero(cur)));
      if (++wi >= w_.size()) return n_;
      cur = w_[wi];
    }
  }

  // 64 bits starting at bit `off`; bits past the end read as zero.
  std::uint64_t word_at(std::size_t off) const {
    std::size_t wi = off >> 6, sh = off & 63;
    std::uint64_t lo = wi < w_.size() ? w_[wi] : 0;
    if (sh == 0) return lo;
    std::uint64_t hi = wi + 1 < w_.size() ? w_[wi + 1] : 0;
    return (lo >> sh) | (hi << (64 - sh));
  }

  // this[i] &= src[i + off]
  void and_shifted(const BitVec& src, std::size_t off) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= src.word_at(off + (i << 6));
    trim();
  }

  // this[i + off] |= src[i]
  void or_shifted_up(const BitVec& src, std::size_t off) {
    std::size_t ws = off >> 6, sh = off & 63;
    for (std::size_t i = 0; i < src.w_.size(); ++i) {
      std::uint64_t x = src.w_[i];
      if (!x) continue;
      std::size_t t = i + ws;
      if (t < w_.size()) w_[t] |= x << sh;
      if (sh && t + 1 < w_.size()) w_[t + 1] |= x >> (64 - sh);
    }
    trim();
  }

  BitVec& operator&=(const BitVec& o) {
    for (std::size_t i = 0; i < w_.size() && i < o.w_.size(); ++i) w_[i] &= o.w_[i];
    for (std::size_t i = o.w_.size(); i < w_.size(); ++i) w_[i] = 0;
    return *this;
  }
  BitVec& operator|=(const BitVec& o) {
    for (std::size_t i = 0; i < w_.size() && i < o.w_.size(); ++i) w_[i] |= o.w_[i];
    trim();
    return *this;
  }
  void flip() {
    for (auto& x : w_) x = ~x;
    trim();
  }

  bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }

 private:
  void trim() {
    if (n_ & 63) w_.back() &= (std::uint64_t{1} << (n_ & 63)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace sumdyn

#endif
