#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace catalyst::detail {

// Read-only view of a ZIP archive held in memory. Supports stored and
// deflated members; ZIP64 and encrypted archives are rejected.
class ZipArchive {
 public:
  struct Entry {
    std::string name;
    std::uint16_t method = 0;
    std::uint32_t compressed_size = 0;
    std::uint32_t uncompressed_size = 0;
    std::uint32_t local_header_offset = 0;
    std::uint16_t flags = 0;
  };

  // Throws Error(UnreadableFile) when no valid central directory is found.
  explicit ZipArchive(std::string_view bytes);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const Entry* find(std::string_view name) const;

  // Decompressed member contents; throws Error(UnreadableFile) on damage.
  std::string read(const Entry& entry, std::size_t max_size = 64u << 20) const;

 private:
  std::string_view data_;
  std::vector<Entry> entries_;
};

}  // namespace catalyst::detail
