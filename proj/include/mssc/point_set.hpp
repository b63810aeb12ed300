#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace mssc {

// Fixed-universe bitset over point indices 0..n-1. Used as column membership.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}
    PointSet(std::size_t universe, std::initializer_list<std::size_t> members) : PointSet(universe) {
        for (auto i : members) insert(i);
    }
    template <class Range>
    static PointSet from(std::size_t universe, const Range& members) {
        PointSet s(universe);
        for (auto i : members) s.insert(static_cast<std::size_t>(i));
        return s;
    }

    std::size_t universe() const noexcept { return universe_; }

    void insert(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void erase(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool contains(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool empty() const noexcept {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    // Calls f(i) for every member in increasing order.
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                f(w * 64 + static_cast<std::size_t>(b));
                bits &= bits - 1;
            }
        }
    }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    bool is_subset_of(const PointSet& other) const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & ~other.words_[w]) return false;
        return true;
    }
    bool intersects(const PointSet& other) const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & other.words_[w]) return true;
        return false;
    }
    std::size_t intersection_count(const PointSet& other) const {
        std::size_t c = 0;
        for (std::size_t w = 0; w < words_.size(); ++w)
            c += static_cast<std::size_t>(std::popcount(words_[w] & other.words_[w]));
        return c;
    }

    PointSet operator&(const PointSet& o) const {
        PointSet r(universe_);
        for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] & o.words_[w];
        return r;
    }
    PointSet operator-(const PointSet& o) const {
        PointSet r(universe_);
        for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] & ~o.words_[w];
        return r;
    }
    PointSet operator|(const PointSet& o) const {
        PointSet r(universe_);
        for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] | o.words_[w];
        return r;
    }

    bool operator==(const PointSet& o) const = default;

    // Lexicographic order on the sorted member lists.
    bool lex_less(const PointSet& o) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (words_[w] == o.words_[w]) continue;
            const std::uint64_t diff = words_[w] ^ o.words_[w];
            const int b = std::countr_zero(diff);
            const bool mine = (words_[w] >> b) & 1u;
            const PointSet& other = mine ? o : *this;
            // The set holding the lowest differing index sorts first, unless the
            // other list is a proper prefix (has nothing beyond that index).
            const bool other_has_more = other.any_from(w * 64 + static_cast<std::size_t>(b));
            return mine ? other_has_more : !other_has_more;
        }
        return false;
    }

    bool any_from(std::size_t start) const {
        std::size_t w = start >> 6;
        if (w >= words_.size()) return false;
        if (words_[w] >> (start & 63)) return true;
        for (++w; w < words_.size(); ++w)
            if (words_[w]) return true;
        return false;
    }

    std::size_t hash() const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ universe_;
        for (auto w : words_) {
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

struct PointSetHash {
    std::size_t operator()(const PointSet& s) const noexcept { return s.hash(); }
};

}  // namespace mssc
