#include "zip_reader.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstring>

#include "resaug/errors.hpp"

namespace resaug::ingest {
namespace {

std::uint16_t read_u16(const std::string& s, std::size_t off) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(s[off])) |
           (static_cast<std::uint16_t>(static_cast<unsigned char>(s[off + 1])) << 8);
}

std::uint32_t read_u32(const std::string& s, std::size_t off) {
    return static_cast<std::uint32_t>(read_u16(s, off)) |
           (static_cast<std::uint32_t>(read_u16(s, off + 2)) << 16);
}

constexpr std::uint32_t kEocdSig = 0x06054b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kLocalSig = 0x04034b50;

std::size_t find_eocd(const std::string& a) {
    if (a.size() < 22) throw IngestError("zip: archive too small");
    // EOCD is within the last 64KiB + 22 bytes (comment length field).
    const std::size_t scan_start = a.size() >= 22 + 65535 ? a.size() - 22 - 65535 : 0;
    for (std::size_t i = a.size() - 22 + 1; i-- > scan_start;) {
        if (read_u32(a, i) == kEocdSig) return i;
    }
    throw IngestError("zip: end-of-central-directory record not found");
}

struct CentralEntry {
    std::string name;
    std::uint16_t method = 0;
    std::uint32_t compressed_size = 0;
    std::uint32_t uncompressed_size = 0;
    std::uint32_t local_offset = 0;
};

std::vector<CentralEntry> read_central_directory(const std::string& a) {
    const std::size_t eocd = find_eocd(a);
    const std::uint16_t n_entries = read_u16(a, eocd + 10);
    std::size_t off = read_u32(a, eocd + 16);
    std::vector<CentralEntry> entries;
    entries.reserve(n_entries);
    for (std::uint16_t i = 0; i < n_entries; ++i) {
        if (off + 46 > a.size() || read_u32(a, off) != kCentralSig) {
            throw IngestError("zip: corrupt central directory");
        }
        CentralEntry e;
        e.method = read_u16(a, off + 10);
        e.compressed_size = read_u32(a, off + 20);
        e.uncompressed_size = read_u32(a, off + 24);
        const std::uint16_t name_len = read_u16(a, off + 28);
        const std::uint16_t extra_len = read_u16(a, off + 30);
        const std::uint16_t comment_len = read_u16(a, off + 32);
        e.local_offset = read_u32(a, off + 42);
        if (off + 46 + name_len > a.size()) throw IngestError("zip: truncated entry name");
        e.name = a.substr(off + 46, name_len);
        entries.push_back(std::move(e));
        off += 46u + name_len + extra_len + comment_len;
    }
    return entries;
}

std::string inflate_raw(const char* data, std::size_t size, std::size_t expected) {
    z_stream zs;
    std::memset(&zs, 0, sizeof(zs));
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
        throw IngestError("zip: inflateInit failed");
    }
    std::string out(expected, '\0');
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data));
    zs.avail_in = static_cast<uInt>(size);
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || zs.total_out != expected) {
        throw IngestError("zip: deflate stream corrupt");
    }
    return out;
}

}  // namespace

std::vector<std::string> list_zip_members(const std::string& archive) {
    std::vector<std::string> names;
    for (const auto& e : read_central_directory(archive)) names.push_back(e.name);
    return names;
}

std::string extract_zip_member(const std::string& archive, const std::string& member) {
    for (const auto& e : read_central_directory(archive)) {
        if (e.name != member) continue;
        std::size_t off = e.local_offset;
        if (off + 30 > archive.size() || read_u32(archive, off) != kLocalSig) {
            throw IngestError("zip: corrupt local header for " + member);
        }
        // Local name/extra lengths can differ from the central ones.
        const std::uint16_t name_len = read_u16(archive, off + 26);
        const std::uint16_t extra_len = read_u16(archive, off + 28);
        off += 30u + name_len + extra_len;
        if (off + e.compressed_size > archive.size()) {
            throw IngestError("zip: truncated member data for " + member);
        }
        if (e.method == 0) {
            if (e.compressed_size != e.uncompressed_size) {
                throw IngestError("zip: stored member with mismatched sizes");
            }
            return archive.substr(off, e.compressed_size);
        }
        if (e.method == 8) {
            return inflate_raw(archive.data() + off, e.compressed_size,
                               e.uncompressed_size);
        }
        throw IngestError("zip: unsupported compression method " +
                          std::to_string(e.method));
    }
    throw IngestError("zip: member not found: " + member);
}

}  // namespace resaug::ingest
