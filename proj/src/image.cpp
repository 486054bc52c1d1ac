#include "reviewkit/image.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string_view>

namespace reviewkit {

namespace {

constexpr std::array<std::string_view, 8> kExtensions = {
    ".png", ".jpg", ".jpeg", ".gif", ".bmp", ".pbm", ".pgm", ".ppm"};

std::string lower_extension(const std::filesystem::path& file) {
  std::string ext = file.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

uint32_t be32(const unsigned char* p) {
  return (uint32_t{p[0]} << 24) | (uint32_t{p[1]} << 16) |
         (uint32_t{p[2]} << 8) | uint32_t{p[3]};
}

uint32_t le32(const unsigned char* p) {
  return uint32_t{p[0]} | (uint32_t{p[1]} << 8) | (uint32_t{p[2]} << 16) |
         (uint32_t{p[3]} << 24);
}

uint16_t be16(const unsigned char* p) {
  return static_cast<uint16_t>((p[0] << 8) | p[1]);
}

uint16_t le16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

std::optional<ImageSize> size_of(uint64_t w, uint64_t h) {
  if (w == 0 || h == 0 || w > std::numeric_limits<int>::max() ||
      h > std::numeric_limits<int>::max()) {
    return std::nullopt;
  }
  return ImageSize{static_cast<int>(w), static_cast<int>(h)};
}

std::optional<ImageSize> probe_png(std::istream& in) {
  // 8-byte signature, 8-byte IHDR chunk header, then width/height.
  std::array<unsigned char, 24> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size())) {
    return std::nullopt;
  }
  static constexpr std::array<unsigned char, 8> kSig = {0x89, 'P', 'N', 'G',
                                                        0x0d, 0x0a, 0x1a, 0x0a};
  if (!std::equal(kSig.begin(), kSig.end(), header.begin())) {
    return std::nullopt;
  }
  if (std::string_view(reinterpret_cast<char*>(header.data()) + 12, 4) !=
      "IHDR") {
    return std::nullopt;
  }
  return size_of(be32(header.data() + 16), be32(header.data() + 20));
}

std::optional<ImageSize> probe_jpeg(std::istream& in) {
  std::array<unsigned char, 2> soi{};
  if (!in.read(reinterpret_cast<char*>(soi.data()), 2) || soi[0] != 0xff ||
      soi[1] != 0xd8) {
    return std::nullopt;
  }
  // Walk the marker segments until a start-of-frame carries the size.
  while (in) {
    int byte = in.get();
    if (byte != 0xff) return std::nullopt;
    int marker = in.get();
    while (marker == 0xff) marker = in.get();
    if (marker == EOF) return std::nullopt;
    if (marker == 0xd8 || (marker >= 0xd0 && marker <= 0xd7)) {
      continue;  // standalone markers carry no length
    }
    std::array<unsigned char, 2> len_buf{};
    if (!in.read(reinterpret_cast<char*>(len_buf.data()), 2)) {
      return std::nullopt;
    }
    const int length = be16(len_buf.data());
    if (length < 2) return std::nullopt;
    const bool is_sof = (marker >= 0xc0 && marker <= 0xcf) && marker != 0xc4 &&
                        marker != 0xc8 && marker != 0xcc;
    if (is_sof) {
      std::array<unsigned char, 5> frame{};
      if (!in.read(reinterpret_cast<char*>(frame.data()), 5)) {
        return std::nullopt;
      }
      return size_of(be16(frame.data() + 3), be16(frame.data() + 1));
    }
    in.ignore(length - 2);
  }
  return std::nullopt;
}

std::optional<ImageSize> probe_gif(std::istream& in) {
  std::array<unsigned char, 10> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size())) {
    return std::nullopt;
  }
  const std::string_view magic(reinterpret_cast<char*>(header.data()), 6);
  if (magic != "GIF87a" && magic != "GIF89a") return std::nullopt;
  return size_of(le16(header.data() + 6), le16(header.data() + 8));
}

std::optional<ImageSize> probe_bmp(std::istream& in) {
  std::array<unsigned char, 26> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size())) {
    return std::nullopt;
  }
  if (header[0] != 'B' || header[1] != 'M') return std::nullopt;
  const uint32_t dib_size = le32(header.data() + 14);
  if (dib_size < 40) return std::nullopt;  // BITMAPINFOHEADER or newer
  const auto w = static_cast<int32_t>(le32(header.data() + 18));
  const auto h = static_cast<int32_t>(le32(header.data() + 22));
  if (w <= 0) return std::nullopt;
  // Height may be negative for top-down rows.
  return size_of(static_cast<uint64_t>(w),
                 static_cast<uint64_t>(h < 0 ? -int64_t{h} : int64_t{h}));
}

std::optional<ImageSize> probe_pnm(std::istream& in) {
  char p = 0;
  char digit = 0;
  if (!in.get(p) || !in.get(digit) || p != 'P' || digit < '1' || digit > '6') {
    return std::nullopt;
  }
  // Two whitespace-separated decimal fields, with '#' comments allowed.
  auto next_int = [&in]() -> std::optional<uint64_t> {
    int c = in.get();
    while (c != EOF) {
      if (c == '#') {
        while (c != EOF && c != '\n') c = in.get();
      } else if (std::isspace(c)) {
        c = in.get();
      } else {
        break;
      }
    }
    if (c == EOF || !std::isdigit(c)) return std::nullopt;
    uint64_t value = 0;
    while (c != EOF && std::isdigit(c)) {
      value = value * 10 + static_cast<uint64_t>(c - '0');
      if (value > std::numeric_limits<uint32_t>::max()) return std::nullopt;
      c = in.get();
    }
    return value;
  };
  const auto w = next_int();
  const auto h = next_int();
  if (!w || !h) return std::nullopt;
  return size_of(*w, *h);
}

}  // namespace

std::optional<ImageSize> probe_image_size(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  const std::string ext = lower_extension(file);
  if (ext == ".png") return probe_png(in);
  if (ext == ".jpg" || ext == ".jpeg") return probe_jpeg(in);
  if (ext == ".gif") return probe_gif(in);
  if (ext == ".bmp") return probe_bmp(in);
  if (ext == ".pbm" || ext == ".pgm" || ext == ".ppm") return probe_pnm(in);
  return std::nullopt;
}

bool is_image_file(const std::filesystem::path& file) {
  const std::string ext = lower_extension(file);
  return std::find(kExtensions.begin(), kExtensions.end(), ext) !=
         kExtensions.end();
}

std::vector<ImageRef> list_images(const std::filesystem::path& input_dir) {
  std::vector<ImageRef> images;
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(input_dir)) {
    if (!entry.is_regular_file() || !is_image_file(entry.path())) continue;

    ImageRef ref;
    ref.path = entry.path();
    std::filesystem::path rel =
        std::filesystem::relative(entry.path(), input_dir);
    rel.replace_extension();
    ref.image_id = rel.generic_string();
    if (const auto size = probe_image_size(entry.path())) {
      ref.width = size->width;
      ref.height = size->height;
    }
    images.push_back(std::move(ref));
  }
  std::sort(images.begin(), images.end(),
            [](const ImageRef& a, const ImageRef& b) {
              return a.image_id < b.image_id;
            });
  return images;
}

std::optional<std::string> platform_of(const std::string& image_id) {
  const auto slash = image_id.find('/');
  if (slash == std::string::npos || slash == 0) return std::nullopt;
  return image_id.substr(0, slash);
}

}  // namespace reviewkit
