#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace cubicvs {

// Open-addressed multiplicity table for packed 64-bit keys: linear probing,
// power-of-two capacity, load factor kept at or below 0.7.
// UINT64_MAX is reserved as the empty marker and may not be inserted.
class FlatCountTable {
public:
    static constexpr std::uint64_t kEmpty = std::numeric_limits<std::uint64_t>::max();

    explicit FlatCountTable(std::size_t expected = 0);

    void add(std::uint64_t key, std::uint64_t count);
    std::uint64_t find(std::uint64_t key) const;

    // Adds every entry of other into this table.
    void merge(const FlatCountTable& other);

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return keys_.size(); }
    void reserve(std::size_t expected);

    // Sum of all multiplicities.
    std::uint64_t total() const;

    // Entries in ascending key order.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted_entries() const;

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = 0; i < keys_.size(); ++i)
            if (keys_[i] != kEmpty) fn(keys_[i], counts_[i]);
    }

private:
    std::size_t slot_of(std::uint64_t key) const {
        return static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ull) >> shift_);
    }
    void rehash(std::size_t new_capacity);

    std::vector<std::uint64_t> keys_;
    std::vector<std::uint64_t> counts_;
    std::size_t size_ = 0;
    std::size_t mask_ = 0;
    int shift_ = 64;
};

}  // namespace cubicvs
