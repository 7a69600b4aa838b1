#include "zip_archive.hpp"

#include <zlib.h>

#include <array>

#include "catalyst/error.hpp"

namespace catalyst::detail {

namespace {

constexpr std::uint32_t kEndOfCentralDir = 0x06054b50;
constexpr std::uint32_t kCentralHeader = 0x02014b50;
constexpr std::uint32_t kLocalHeader = 0x04034b50;

[[noreturn]] void damaged(const std::string& why) { throw Error(ErrorCode::UnreadableFile, "unreadable archive: " + why); }

std::uint16_t u16(std::string_view d, std::size_t at) {
  if (at + 2 > d.size()) damaged("truncated record");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(d[at]) | (static_cast<unsigned char>(d[at + 1]) << 8));
}

std::uint32_t u32(std::string_view d, std::size_t at) {
  if (at + 4 > d.size()) damaged("truncated record");
  return static_cast<std::uint32_t>(u16(d, at)) | (static_cast<std::uint32_t>(u16(d, at + 2)) << 16);
}

}  // namespace

ZipArchive::ZipArchive(std::string_view bytes) : data_(bytes) {
  if (bytes.size() < 22) damaged("too small");
  // The end record sits within the last 64 KiB + 22 bytes (comment length).
  std::size_t lowest = bytes.size() > 65557 ? bytes.size() - 65557 : 0;
  std::size_t eocd = std::string_view::npos;
  for (std::size_t p = bytes.size() - 22 + 1; p-- > lowest;) {
    if (u32(bytes, p) == kEndOfCentralDir) {
      eocd = p;
      break;
    }
  }
  if (eocd == std::string_view::npos) damaged("no end of central directory");
  std::uint16_t count = u16(bytes, eocd + 10);
  std::uint32_t cd_offset = u32(bytes, eocd + 16);
  if (count == 0xFFFF || cd_offset == 0xFFFFFFFF) damaged("ZIP64 archives are not supported");

  std::size_t p = cd_offset;
  entries_.reserve(count);
  for (std::uint16_t i = 0; i < count; ++i) {
    if (u32(bytes, p) != kCentralHeader) damaged("bad central directory entry");
    Entry e;
    e.flags = u16(bytes, p + 8);
    e.method = u16(bytes, p + 10);
    e.compressed_size = u32(bytes, p + 20);
    e.uncompressed_size = u32(bytes, p + 24);
    std::uint16_t name_len = u16(bytes, p + 28);
    std::uint16_t extra_len = u16(bytes, p + 30);
    std::uint16_t comment_len = u16(bytes, p + 32);
    e.local_header_offset = u32(bytes, p + 42);
    if (p + 46 + name_len > bytes.size()) damaged("truncated file name");
    e.name = std::string(bytes.substr(p + 46, name_len));
    entries_.push_back(std::move(e));
    p += 46 + name_len + extra_len + comment_len;
  }
}

const ZipArchive::Entry* ZipArchive::find(std::string_view name) const {
  for (const Entry& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::string ZipArchive::read(const Entry& entry, std::size_t max_size) const {
  if (entry.flags & 0x1) damaged("encrypted member " + entry.name);
  std::size_t p = entry.local_header_offset;
  if (u32(data_, p) != kLocalHeader) damaged("bad local header for " + entry.name);
  std::size_t start = p + 30 + u16(data_, p + 26) + u16(data_, p + 28);
  if (start > data_.size() || entry.compressed_size > data_.size() - start) damaged("truncated member " + entry.name);
  std::string_view payload = data_.substr(start, entry.compressed_size);

  if (entry.method == 0) {
    if (payload.size() > max_size) damaged("member too large");
    return std::string(payload);
  }
  if (entry.method != 8) damaged("unsupported compression method in " + entry.name);

  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) damaged("inflate init failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(payload.data()));
  zs.avail_in = static_cast<uInt>(payload.size());
  std::string out;
  std::array<char, 16384> buf;
  int rc = Z_OK;
  while (rc == Z_OK) {
    zs.next_out = reinterpret_cast<Bytef*>(buf.data());
    zs.avail_out = buf.size();
    rc = inflate(&zs, Z_NO_FLUSH);
    out.append(buf.data(), buf.size() - zs.avail_out);
    if (out.size() > max_size) {
      inflateEnd(&zs);
      damaged("member too large");
    }
  }
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) damaged("corrupt deflate data in " + entry.name);
  return out;
}

}  // namespace catalyst::detail
