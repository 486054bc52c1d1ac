#include "reviewkit/recognize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "reviewkit/errors.hpp"

namespace reviewkit {

BoundingBox crop_rect(int image_w, int image_h, const BoundingBox& box,
                      double pad) {
  if (image_w <= 0 || image_h <= 0) {
    throw std::invalid_argument("crop_rect: non-positive image size");
  }
  if (pad < 0.0) {
    throw std::invalid_argument("crop_rect: negative pad");
  }
  const double w = static_cast<double>(image_w);
  const double h = static_cast<double>(image_h);
  const double x0 = std::clamp(box.x_min - pad, 0.0, w);
  const double y0 = std::clamp(box.y_min - pad, 0.0, h);
  const double x1 = std::clamp(box.x_max + pad, 0.0, w);
  const double y1 = std::clamp(box.y_max + pad, 0.0, h);
  if (!(x0 < x1) || !(y0 < y1)) {
    throw DegenerateCropError("crop collapsed to zero size (box outside image)");
  }
  return BoundingBox(x0, y0, x1, y1);
}

std::string normalize_text(std::string_view raw) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));

  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_SUCCESS(status)) {
    icu::UnicodeString composed = nfc->normalize(s, status);
    if (U_SUCCESS(status)) s = composed;
  }

  icu::UnicodeString out;
  bool space_pending = false;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    i = s.moveIndex32(i, 1);
    if (u_isUWhiteSpace(c)) {
      space_pending = true;
      continue;
    }
    if (u_charType(c) == U_CONTROL_CHAR) {
      continue;  // strip Cc characters that are not whitespace
    }
    if (space_pending && out.length() > 0) {
      out.append(static_cast<UChar>(0x20));
    }
    space_pending = false;
    out.append(c);
  }

  std::string result;
  out.toUTF8String(result);
  return result;
}

std::string FixtureRecognizer::recognize(const ImageRef& image,
                                         const BoundingBox& rect) {
  std::filesystem::path sidecar = image.path;
  sidecar.replace_extension(".ocr.json");
  std::ifstream in(sidecar, std::ios::binary);
  if (!in) {
    return "";  // no sidecar: empty table, every lookup misses
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw BackendError(image.image_id,
                       "bad OCR sidecar " + sidecar.string() + ": " + e.what());
  }
  if (!doc.is_array()) {
    throw BackendError(image.image_id,
                       "bad OCR sidecar " + sidecar.string() +
                           ": expected a JSON array");
  }

  double best_iou = 0.0;
  std::string best_text;
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("bbox") ||
        !entry.contains("text") || !entry["bbox"].is_array() ||
        entry["bbox"].size() != 4 || !entry["text"].is_string()) {
      throw BackendError(image.image_id,
                         "bad OCR sidecar entry in " + sidecar.string());
    }
    try {
      BoundingBox entry_box(
          entry["bbox"][0].get<double>(), entry["bbox"][1].get<double>(),
          entry["bbox"][2].get<double>(), entry["bbox"][3].get<double>());
      const double overlap = iou(rect, entry_box);
      if (overlap > best_iou) {  // ties keep the earlier entry
        best_iou = overlap;
        best_text = entry["text"].get<std::string>();
      }
    } catch (const std::invalid_argument& e) {
      throw BackendError(image.image_id, "bad OCR sidecar box in " +
                                             sidecar.string() + ": " + e.what());
    }
  }
  return best_iou >= 0.5 ? best_text : "";
}

}  // namespace reviewkit
