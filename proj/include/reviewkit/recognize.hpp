#pragma once

#include <string>
#include <string_view>

#include "reviewkit/geometry.hpp"
#include "reviewkit/image.hpp"

namespace reviewkit {

/// One recognized area of interest: the crop rectangle actually read and
/// the raw plus normalized text that came out of it.
struct TextRegion {
  std::string image_id;
  BoundingBox box;  // post-clamp crop rectangle, inside the image
  std::string raw_text;
  std::string normalized_text;
};

/// Expand `box` by `pad` pixels on each side and clamp to the image.
/// Throws DegenerateCropError when the clamped rectangle has zero width
/// or height (box entirely outside the image), std::invalid_argument on
/// a non-positive image size or negative pad.
BoundingBox crop_rect(int image_w, int image_h, const BoundingBox& box,
                      double pad);

/// Canonical text cleanup applied to every recognizer output: Unicode
/// canonical composition (NFC), control characters removed, whitespace
/// runs collapsed to single spaces, trimmed. Idempotent.
std::string normalize_text(std::string_view raw);

/// Text-recognition backend contract: read the text inside one rectangle
/// of one image. Engine configuration lives behind this surface.
class RecognizerBackend {
 public:
  virtual ~RecognizerBackend() = default;

  /// Recognized text for the rectangle, possibly empty, any language.
  /// Throws BackendError on failure.
  virtual std::string recognize(const ImageRef& image,
                                const BoundingBox& rect) = 0;

  virtual bool thread_safe() const = 0;
  virtual std::string name() const = 0;
};

/// File-driven recognizer: `<image-stem>.ocr.json` beside the image holds
/// an array of {"bbox": [...], "text": "..."} entries. A query rectangle
/// maps to the entry with maximum IoU >= 0.5, else "". A missing sidecar
/// behaves as an empty table.
class FixtureRecognizer final : public RecognizerBackend {
 public:
  std::string recognize(const ImageRef& image, const BoundingBox& rect) override;
  bool thread_safe() const override { return true; }
  std::string name() const override { return "fixture"; }
};

}  // namespace reviewkit
