#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace reviewkit {

/// Handle to one input image. Backends receive this instead of decoded
/// pixels; decoding is a backend concern.
struct ImageRef {
  std::string image_id;         // relative path without extension, '/'-separated
  std::filesystem::path path;   // on-disk location
  int width = 0;                // pixels
  int height = 0;               // pixels
};

struct ImageSize {
  int width = 0;
  int height = 0;
};

/// Read image dimensions from the file header. Supports PNG, JPEG, GIF,
/// BMP and the netpbm family (P1-P6). Returns nullopt when the format is
/// not recognized or the header is truncated.
std::optional<ImageSize> probe_image_size(const std::filesystem::path& file);

/// True when the extension (case-insensitive) belongs to a supported
/// image format.
bool is_image_file(const std::filesystem::path& file);

/// Recursively list image files under input_dir, sorted by image_id.
/// image_id is the path relative to input_dir, '/'-separated, without the
/// extension. Dimensions are probed from each file header; unprobeable
/// files get width = height = 0 and are dealt with downstream.
std::vector<ImageRef> list_images(const std::filesystem::path& input_dir);

/// Platform tag by directory convention: the first component of image_id
/// when the image sits in a subdirectory of the input dir, otherwise none.
std::optional<std::string> platform_of(const std::string& image_id);

}  // namespace reviewkit
