#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace expando {

enum class IoErrorKind { version, truncated, checksum, malformed };

/// File-format failure with a distinct kind so callers can tell a stale
/// format apart from a short read or corrupted payload.
class IoError : public std::runtime_error {
  public:
    IoError(IoErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    IoErrorKind kind() const { return kind_; }

  private:
    IoErrorKind kind_;
};

namespace detail {

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace detail

/// Little-endian append-only byte buffer with LEB128 varints.
class ByteWriter {
  public:
    void put_u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }

    void put_u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i)
            put_u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void put_u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i)
            put_u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void put_f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        put_u64(bits);
    }

    void put_varint(std::uint64_t v) {
        while (v >= 0x80) {
            put_u8(static_cast<std::uint8_t>(v) | 0x80);
            v >>= 7;
        }
        put_u8(static_cast<std::uint8_t>(v));
    }

    void put_bytes(std::string_view bytes) { buf_.append(bytes); }

    void put_string(std::string_view s) {
        put_varint(s.size());
        put_bytes(s);
    }

    const std::string& bytes() const { return buf_; }
    std::size_t size() const { return buf_.size(); }

  private:
    std::string buf_;
};

/// Bounds-checked reader over an in-memory payload; any overrun reports a
/// truncated file.
class ByteReader {
  public:
    explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

    std::uint8_t get_u8() {
        if (pos_ >= bytes_.size())
            throw IoError(IoErrorKind::truncated, "truncated file: unexpected end of data");
        return static_cast<std::uint8_t>(bytes_[pos_++]);
    }

    std::uint32_t get_u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(get_u8()) << (8 * i);
        return v;
    }

    std::uint64_t get_u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(get_u8()) << (8 * i);
        return v;
    }

    double get_f64() {
        std::uint64_t bits = get_u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }

    std::uint64_t get_varint() {
        std::uint64_t v = 0;
        int shift = 0;
        while (true) {
            std::uint8_t b = get_u8();
            v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
            if (!(b & 0x80))
                break;
            shift += 7;
            if (shift > 63)
                throw IoError(IoErrorKind::malformed, "malformed varint");
        }
        return v;
    }

    std::string get_string() {
        std::uint64_t n = get_varint();
        if (pos_ + n > bytes_.size())
            throw IoError(IoErrorKind::truncated, "truncated file: unexpected end of data");
        std::string s(bytes_.substr(pos_, n));
        pos_ += n;
        return s;
    }

    bool at_end() const { return pos_ == bytes_.size(); }
    std::size_t pos() const { return pos_; }

  private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

// A container file is: magic[4] | u32 version | sections. Each section is
// tag[4] | u64 payload_len | payload | u64 fnv1a64(payload). Layout is
// documented in docs/index-format.md.
namespace detail {

inline void write_file_header(std::ostream& out, std::string_view magic,
                              std::uint32_t version) {
    out.write(magic.data(), 4);
    char v[4];
    for (int i = 0; i < 4; ++i)
        v[i] = static_cast<char>(version >> (8 * i));
    out.write(v, 4);
}

inline void write_section(std::ostream& out, std::string_view tag,
                          const std::string& payload) {
    out.write(tag.data(), 4);
    char len[8];
    std::uint64_t n = payload.size();
    for (int i = 0; i < 8; ++i)
        len[i] = static_cast<char>(n >> (8 * i));
    out.write(len, 8);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    std::uint64_t sum = fnv1a64(payload);
    char cs[8];
    for (int i = 0; i < 8; ++i)
        cs[i] = static_cast<char>(sum >> (8 * i));
    out.write(cs, 8);
}

inline std::string read_entire_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(IoErrorKind::truncated, "cannot open file: " + path);
    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return data;
}

inline void check_file_header(ByteReader& r, std::string_view magic,
                              std::uint32_t version, const std::string& path) {
    std::string got;
    for (int i = 0; i < 4; ++i)
        got.push_back(static_cast<char>(r.get_u8()));
    if (got != magic)
        throw IoError(IoErrorKind::version,
                      "version error: bad magic in " + path + " (expected " +
                          std::string(magic) + ")");
    std::uint32_t v = r.get_u32();
    if (v != version)
        throw IoError(IoErrorKind::version,
                      "version error: unsupported format version " +
                          std::to_string(v) + " in " + path);
}

inline std::string read_section(ByteReader& r, std::string_view tag,
                                const std::string& path) {
    std::string got;
    for (int i = 0; i < 4; ++i)
        got.push_back(static_cast<char>(r.get_u8()));
    if (got != tag)
        throw IoError(IoErrorKind::malformed, "malformed file: expected section " +
                                                  std::string(tag) + " in " + path);
    std::uint64_t n = r.get_u64();
    std::string payload;
    payload.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
        payload.push_back(static_cast<char>(r.get_u8()));
    std::uint64_t sum = r.get_u64();
    if (sum != fnv1a64(payload))
        throw IoError(IoErrorKind::checksum, "checksum failure in section " +
                                                 std::string(tag) + " of " + path);
    return payload;
}

} // namespace detail
} // namespace expando
