#include "cubicvs/flat_table.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace cubicvs {

namespace {

constexpr double kMaxLoad = 0.7;

std::size_t capacity_for(std::size_t expected) {
    std::size_t need = static_cast<std::size_t>(static_cast<double>(expected) / kMaxLoad) + 1;
    return std::bit_ceil(std::max<std::size_t>(need, 16));
}

}  // namespace

FlatCountTable::FlatCountTable(std::size_t expected) { rehash(capacity_for(expected)); }

void FlatCountTable::reserve(std::size_t expected) {
    const std::size_t cap = capacity_for(expected);
    if (cap > keys_.size()) rehash(cap);
}

void FlatCountTable::rehash(std::size_t new_capacity) {
    std::vector<std::uint64_t> old_keys(new_capacity, kEmpty);
    std::vector<std::uint64_t> old_counts(new_capacity, 0);
    old_keys.swap(keys_);
    old_counts.swap(counts_);
    mask_ = new_capacity - 1;
    shift_ = 64 - std::countr_zero(new_capacity);
    size_ = 0;
    for (std::size_t i = 0; i < old_keys.size(); ++i)
        if (old_keys[i] != kEmpty) add(old_keys[i], old_counts[i]);
}

void FlatCountTable::add(std::uint64_t key, std::uint64_t count) {
    if (key == kEmpty) throw std::invalid_argument("FlatCountTable: reserved key");
    std::size_t i = slot_of(key);
    while (true) {
        if (keys_[i] == key) {
            counts_[i] += count;
            return;
        }
        if (keys_[i] == kEmpty) break;
        i = (i + 1) & mask_;
    }
    if (static_cast<double>(size_ + 1) > kMaxLoad * static_cast<double>(keys_.size())) {
        rehash(keys_.size() * 2);
        add(key, count);
        return;
    }
    keys_[i] = key;
    counts_[i] = count;
    ++size_;
}

std::uint64_t FlatCountTable::find(std::uint64_t key) const {
    std::size_t i = slot_of(key);
    while (true) {
        if (keys_[i] == key) return counts_[i];
        if (keys_[i] == kEmpty) return 0;
        i = (i + 1) & mask_;
    }
}

void FlatCountTable::merge(const FlatCountTable& other) {
    reserve(size_ + other.size_);
    other.for_each([this](std::uint64_t k, std::uint64_t c) { add(k, c); });
}

std::uint64_t FlatCountTable::total() const {
    std::uint64_t t = 0;
    for_each([&t](std::uint64_t, std::uint64_t c) { t += c; });
    return t;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> FlatCountTable::sorted_entries() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    out.reserve(size_);
    for_each([&out](std::uint64_t k, std::uint64_t c) { out.emplace_back(k, c); });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cubicvs
