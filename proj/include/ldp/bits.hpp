#ifndef LDP_BITS_HPP
#define LDP_BITS_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace ldp {

/// Dynamic fixed-width bitset over dense vertex indices. std::bitset is
/// compile-time sized and boost::dynamic_bitset cannot be used as a hash
/// key, which the feasibility memo needs.
class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t nbits) : n_(nbits), w_((nbits + 63) / 64, 0) {}

    std::size_t size() const { return n_; }

    void set(std::size_t i) { w_[i >> 6] |= (1ULL << (i & 63)); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(1ULL << (i & 63)); }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

    bool any() const {
        for (auto w : w_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool intersects(const Bits& o) const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k] & o.w_[k]) return true;
        return false;
    }

    Bits& operator&=(const Bits& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
        return *this;
    }
    Bits& operator|=(const Bits& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
        return *this;
    }
    /// this &= ~o
    Bits& subtract(const Bits& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
        return *this;
    }

    friend Bits operator&(Bits a, const Bits& b) { return a &= b; }
    friend Bits operator|(Bits a, const Bits& b) { return a |= b; }

    bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }

    /// Index of the lowest set bit at or after `from`, or size() if none.
    std::size_t find_next(std::size_t from) const {
        if (from >= n_) return n_;
        std::size_t k = from >> 6;
        std::uint64_t w = w_[k] & (~0ULL << (from & 63));
        for (;;) {
            if (w) {
                const std::size_t i = (k << 6) + static_cast<std::size_t>(std::countr_zero(w));
                return i < n_ ? i : n_;
            }
            if (++k == w_.size()) return n_;
            w = w_[k];
        }
    }

    template <typename Fn>
    void for_each_set(Fn&& fn) const {
        for (std::size_t i = find_next(0); i < n_; i = find_next(i + 1)) fn(i);
    }

    std::size_t hash() const {
        std::size_t h = n_;
        for (auto w : w_) h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::size_t>(w);
        return h;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct BitsHash {
    std::size_t operator()(const Bits& b) const { return b.hash(); }
};

} // namespace ldp

#endif // LDP_BITS_HPP
