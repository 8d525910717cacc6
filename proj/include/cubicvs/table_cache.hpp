#pragma once

// On-disk cache of representation tables.
//
// Layout, all integers little-endian u64:
//   "VINTAB01" | s | X | count | count x (packed key, multiplicity), keys ascending.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cubicvs/count.hpp"

namespace cubicvs {

class CacheFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr char kTableMagic[8] = {'V', 'I', 'N', 'T', 'A', 'B', '0', '1'};

void write_table(std::ostream& out, const RepresentationTable& table);
// Validates magic, header, key order, key range and total mass X^s.
RepresentationTable read_table(std::istream& in);

struct CacheEntryInfo {
    std::filesystem::path path;
    int s = 0;
    i64 X = 0;
    u64 entries = 0;
    std::uintmax_t bytes = 0;
    bool valid = false;
};

class TableCache {
public:
    explicit TableCache(std::filesystem::path dir);

    // CUBICVS_CACHE_DIR if set, otherwise ".cubicvs-cache" in the working directory.
    static std::filesystem::path default_dir();

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path_for(int s, i64 X) const;

    // A missing file yields nothing; a corrupted one is reported through the
    // warning sink and ignored.
    std::optional<RepresentationTable> load(int s, i64 X) const;
    void store(const RepresentationTable& table) const;

    std::vector<CacheEntryInfo> inspect() const;
    std::size_t clear() const;

    void set_warning_sink(std::function<void(const std::string&)> sink) { warn_ = std::move(sink); }

private:
    std::filesystem::path dir_;
    std::function<void(const std::string&)> warn_;
};

}  // namespace cubicvs
