#include "cubicvs/table_cache.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <istream>
#include <ostream>

namespace cubicvs {

namespace fs = std::filesystem;

namespace {

void put_u64(std::ostream& out, u64 v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

u64 get_u64(std::istream& in) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) throw CacheFormatError("truncated table file");
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<u64>(b[i]) << (8 * i);
    return v;
}

}  // namespace

void write_table(std::ostream& out, const RepresentationTable& table) {
    if (table.lo() != 1) throw std::invalid_argument("only [1, X] tables are cacheable");
    const auto entries = table.entries().sorted_entries();
    out.write(kTableMagic, sizeof kTableMagic);
    put_u64(out, static_cast<u64>(table.s()));
    put_u64(out, static_cast<u64>(table.hi()));
    put_u64(out, entries.size());
    for (const auto& [key, mult] : entries) {
        put_u64(out, key);
        put_u64(out, mult);
    }
}

RepresentationTable read_table(std::istream& in) {
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kTableMagic, 8) != 0)
        throw CacheFormatError("bad magic");
    const u64 s = get_u64(in);
    const u64 X = get_u64(in);
    const u64 count = get_u64(in);
    if (s < 1 || s > static_cast<u64>(kMaxPairs) || X < 1 || X > (u64{1} << 40))
        throw CacheFormatError("header out of range");
    const Params p{static_cast<int>(s), static_cast<i64>(X)};
    try {
        validate_params(p);
    } catch (const ConfigError& e) {
        throw CacheFormatError(std::string("header rejected: ") + e.what());
    }
    const KeyCodec codec(p.s, 1, p.X);
    if (count == 0 || count > multiset_count(p.s, p.X)) throw CacheFormatError("bad entry count");
    FlatCountTable entries(static_cast<std::size_t>(count));
    u64 previous = 0;
    u64 mass = 0;
    for (u64 i = 0; i < count; ++i) {
        const u64 key = get_u64(in);
        const u64 mult = get_u64(in);
        if ((i > 0 && key <= previous) || static_cast<u128>(key) >= codec.capacity() || mult == 0)
            throw CacheFormatError("entries unsorted or out of range");
        if (__builtin_add_overflow(mass, mult, &mass)) throw CacheFormatError("mass overflow");
        entries.add(key, mult);
        previous = key;
    }
    if (in.peek() != std::char_traits<char>::eof()) throw CacheFormatError("trailing bytes");
    if (mass != checked_pow(X, p.s)) throw CacheFormatError("total mass differs from X^s");
    return RepresentationTable(p.s, 1, p.X, std::move(entries));
}

TableCache::TableCache(fs::path dir) : dir_(std::move(dir)) {
    warn_ = [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; };
}

fs::path TableCache::default_dir() {
    if (const char* env = std::getenv("CUBICVS_CACHE_DIR"); env && *env) return env;
    return fs::current_path() / ".cubicvs-cache";
}

fs::path TableCache::path_for(int s, i64 X) const {
    return dir_ / ("vintab_s" + std::to_string(s) + "_X" + std::to_string(X) + ".bin");
}

std::optional<RepresentationTable> TableCache::load(int s, i64 X) const {
    const fs::path path = path_for(s, X);
    std::error_code ec;
    if (!fs::exists(path, ec)) return std::nullopt;
    std::ifstream in(path, std::ios::binary);
    try {
        auto table = read_table(in);
        if (table.s() != s || table.hi() != X) throw CacheFormatError("header does not match file name");
        return table;
    } catch (const CacheFormatError& e) {
        if (warn_) warn_("ignoring corrupted cache file " + path.string() + ": " + e.what());
        return std::nullopt;
    }
}

void TableCache::store(const RepresentationTable& table) const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    const fs::path path = path_for(table.s(), table.hi());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            if (warn_) warn_("cannot write cache file " + tmp.string());
            return;
        }
        write_table(out, table);
    }
    fs::rename(tmp, path, ec);
    if (ec && warn_) warn_("cannot install cache file " + path.string() + ": " + ec.message());
}

std::vector<CacheEntryInfo> TableCache::inspect() const {
    std::vector<CacheEntryInfo> out;
    std::error_code ec;
    if (!fs::is_directory(dir_, ec)) return out;
    for (const auto& item : fs::directory_iterator(dir_, ec)) {
        if (item.path().extension() != ".bin") continue;
        CacheEntryInfo info;
        info.path = item.path();
        info.bytes = item.file_size(ec);
        std::ifstream in(item.path(), std::ios::binary);
        try {
            const auto table = read_table(in);
            info.s = table.s();
            info.X = table.hi();
            info.entries = table.distinct();
            info.valid = true;
        } catch (const CacheFormatError&) {
            info.valid = false;
        }
        out.push_back(info);
    }
    std::sort(out.begin(), out.end(),
              [](const CacheEntryInfo& a, const CacheEntryInfo& b) { return a.path < b.path; });
    return out;
}

std::size_t TableCache::clear() const {
    std::size_t removed = 0;
    std::error_code ec;
    if (!fs::is_directory(dir_, ec)) return 0;
    for (const auto& item : fs::directory_iterator(dir_, ec)) {
        const auto ext = item.path().extension();
        if (ext == ".bin" || ext == ".tmp") removed += fs::remove(item.path(), ec) ? 1 : 0;
    }
    return removed;
}

}  // namespace cubicvs
