// Copyright 2026 The LogGauge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "loggauge/annot_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "loggauge/error.hpp"

namespace loggauge {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// DatasetManifest / Dataset

DatasetManifest::DatasetManifest(std::vector<ManifestEntry> entries)
    : entries_(std::move(entries)) {
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const ManifestEntry& e = entries_[i];
    if (e.dims.width < 1 || e.dims.height < 1) {
      throw Error(ErrorCode::kSchema,
                  "image '" + e.image_id + "' has non-positive dimensions");
    }
    if (!index_.emplace(e.image_id, i).second) {
      throw Error(ErrorCode::kSchema,
                  "duplicate image_id '" + e.image_id + "'");
    }
  }
}

std::optional<std::size_t> DatasetManifest::IndexOf(
    const std::string& image_id) const {
  auto it = index_.find(image_id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const ManifestEntry& DatasetManifest::At(const std::string& image_id) const {
  auto it = index_.find(image_id);
  if (it == index_.end()) {
    throw Error(ErrorCode::kUnknownImage,
                "unknown image_id '" + image_id + "'");
  }
  return entries_[it->second];
}

std::size_t Dataset::num_instances() const {
  std::size_t n = 0;
  for (const auto& per_image : ground_truth) n += per_image.size();
  return n;
}

namespace {

// ---------------------------------------------------------------------------
// Text helpers

std::vector<std::string_view> SplitLines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool IsBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool ParseNumber(std::string_view token, T* out) {
  // from_chars rejects a leading '+', which some exporters emit.
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last;
}

std::string FormatFixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// ---------------------------------------------------------------------------
// JSON helpers

bool IsInteger(const json& v) {
  return v.is_number_integer() || v.is_number_unsigned();
}

const json* Find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

json ParseJsonDocument(std::string_view content, const std::string& source) {
  try {
    return json::parse(content.begin(), content.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; convert it to a line number.
    const std::size_t offset = std::min<std::size_t>(e.byte, content.size());
    const std::size_t line =
        1 + std::count(content.begin(), content.begin() + offset, '\n');
    throw ParseError(source, line, std::string("invalid JSON: ") + e.what());
  }
}

std::string ImageIdFromJson(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (IsInteger(v)) return v.dump();
  return {};
}

}  // namespace

// ---------------------------------------------------------------------------
// YOLO text

std::vector<GroundTruth> ParseYoloGt(std::string_view content,
                                     const std::string& image_id,
                                     const std::string& source) {
  std::vector<GroundTruth> out;
  const auto lines = SplitLines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (IsBlank(lines[i])) continue;
    const auto fields = SplitWhitespace(lines[i]);
    if (fields.size() != 5) {
      throw ParseError(source, line_no,
                       "expected 5 fields `class cx cy w h`, got " +
                           std::to_string(fields.size()));
    }
    GroundTruth gt;
    gt.image_id = image_id;
    if (!ParseNumber(fields[0], &gt.class_id) || gt.class_id < 0) {
      throw ParseError(source, line_no,
                       "class must be a non-negative integer, got '" +
                           std::string(fields[0]) + "'");
    }
    double* coords[] = {&gt.box.cx, &gt.box.cy, &gt.box.w, &gt.box.h};
    for (int k = 0; k < 4; ++k) {
      if (!ParseNumber(fields[k + 1], coords[k])) {
        throw ParseError(source, line_no,
                         "non-numeric coordinate '" +
                             std::string(fields[k + 1]) + "'");
      }
    }
    if (auto why = NormBoxViolation(gt.box)) {
      throw ParseError(source, line_no, *why);
    }
    out.push_back(std::move(gt));
  }
  return out;
}

std::string WriteYoloGt(std::span<const GroundTruth> records) {
  std::string out;
  for (const GroundTruth& r : records) {
    if (r.image_id != records.front().image_id) {
      throw Error(ErrorCode::kUsage,
                  "WriteYoloGt: records span images '" +
                      records.front().image_id + "' and '" + r.image_id + "'");
    }
    out += std::to_string(r.class_id);
    for (double v : {r.box.cx, r.box.cy, r.box.w, r.box.h}) {
      out += ' ';
      out += FormatFixed6(v);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Detections interchange

namespace {

constexpr const char* kDetectionFields[] = {"image_id", "class_id", "cx", "cy",
                                            "w",        "h",        "confidence"};

Detection DetectionFromJson(const json& obj, ParseMode mode,
                            std::vector<std::string>* warnings,
                            const std::string& source, std::size_t line_no) {
  auto fail = [&](const std::string& why) {
    throw ParseError(source, line_no, why, ErrorCode::kSchema);
  };
  if (!obj.is_object()) fail("detection must be a JSON object");

  for (const auto& item : obj.items()) {
    const bool known =
        std::find_if(std::begin(kDetectionFields), std::end(kDetectionFields),
                     [&](const char* f) { return item.key() == f; }) !=
        std::end(kDetectionFields);
    if (known) continue;
    if (mode == ParseMode::kStrict) fail("unknown field '" + item.key() + "'");
    if (warnings != nullptr) {
      warnings->push_back((source.empty() ? "<input>" : source) + ":" +
                          std::to_string(line_no) + ": ignoring unknown field '" +
                          item.key() + "'");
    }
  }

  Detection det;
  const json* image_id = Find(obj, "image_id");
  if (image_id == nullptr) fail("missing field 'image_id'");
  if (!image_id->is_string()) fail("'image_id' must be a string");
  det.image_id = image_id->get<std::string>();

  const json* class_id = Find(obj, "class_id");
  if (class_id == nullptr) fail("missing field 'class_id'");
  if (!IsInteger(*class_id) || class_id->get<long long>() < 0 ||
      class_id->get<long long>() > std::numeric_limits<int>::max()) {
    fail("'class_id' must be a non-negative integer");
  }
  det.class_id = class_id->get<int>();

  auto number = [&](const char* key) {
    const json* v = Find(obj, key);
    if (v == nullptr) fail(std::string("missing field '") + key + "'");
    if (!v->is_number()) fail(std::string("'") + key + "' must be a number");
    return v->get<double>();
  };
  det.box = NormBox{number("cx"), number("cy"), number("w"), number("h")};
  det.confidence = number("confidence");
  if (!std::isfinite(det.confidence) || det.confidence < 0.0 ||
      det.confidence > 1.0) {
    fail("'confidence' must lie in [0, 1]");
  }
  if (auto why = NormBoxViolation(det.box)) fail(*why);
  return det;
}

}  // namespace

std::vector<Detection> ParseDetections(std::string_view content,
                                       ParseMode mode,
                                       std::vector<std::string>* warnings,
                                       const std::string& source) {
  std::vector<Detection> out;
  const auto lines = SplitLines(content);
  bool seen_record = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = lines[i];
    if (IsBlank(line)) continue;
    const auto first = line.find_first_not_of(" \t");
    if (line[first] == '#') {
      if (mode == ParseMode::kStrict || seen_record) {
        throw ParseError(source, line_no,
                         seen_record
                             ? "metadata line only allowed before records"
                             : "metadata line rejected in strict mode");
      }
      if (warnings != nullptr) {
        warnings->push_back((source.empty() ? "<input>" : source) + ":" +
                            std::to_string(line_no) +
                            ": skipping metadata line");
      }
      continue;
    }
    json obj;
    try {
      obj = json::parse(line.begin(), line.end());
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
    }
    out.push_back(DetectionFromJson(obj, mode, warnings, source, line_no));
    seen_record = true;
  }
  return out;
}

std::string WriteDetections(std::span<const Detection> detections) {
  std::string out;
  for (const Detection& d : detections) {
    ordered_json obj;
    obj["image_id"] = d.image_id;
    obj["class_id"] = d.class_id;
    obj["cx"] = d.box.cx;
    obj["cy"] = d.box.cy;
    obj["w"] = d.box.w;
    obj["h"] = d.box.h;
    obj["confidence"] = d.confidence;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// COCO

namespace {

std::vector<Point2> SegmentationPoints(const json& segmentation,
                                       const std::string& source,
                                       std::size_t record) {
  auto fail = [&](const std::string& why) {
    throw ParseError(source, record, "annotation " + std::to_string(record) +
                                         ": " + why,
                     ErrorCode::kSchema);
  };
  if (!segmentation.is_array()) {
    fail("segmentation must be a list of polygons (RLE masks need a bbox)");
  }
  std::vector<Point2> points;
  for (const json& poly : segmentation) {
    if (!poly.is_array() || poly.size() % 2 != 0) {
      fail("polygon must be a flat [x1, y1, x2, y2, ...] list");
    }
    for (std::size_t k = 0; k < poly.size(); k += 2) {
      if (!poly[k].is_number() || !poly[k + 1].is_number()) {
        fail("polygon coordinates must be numbers");
      }
      points.push_back({poly[k].get<double>(), poly[k + 1].get<double>()});
    }
  }
  return points;
}

}  // namespace

Dataset ParseCocoDataset(std::string_view content, const std::string& source) {
  const json root = ParseJsonDocument(content, source);
  if (!root.is_object()) {
    throw ParseError(source, 1, "COCO document must be a JSON object",
                     ErrorCode::kSchema);
  }
  const json* images = Find(root, "images");
  if (images == nullptr || !images->is_array()) {
    throw ParseError(source, 1, "missing 'images' array", ErrorCode::kSchema);
  }

  std::vector<ManifestEntry> entries;
  std::map<std::string, std::size_t> by_coco_id;
  for (std::size_t i = 0; i < images->size(); ++i) {
    const json& img = (*images)[i];
    const std::size_t record = i + 1;
    auto fail = [&](const std::string& why) {
      throw ParseError(source, record, "image " + std::to_string(record) +
                                           ": " + why,
                       ErrorCode::kSchema);
    };
    if (!img.is_object()) fail("must be an object");
    const json* id = Find(img, "id");
    if (id == nullptr || ImageIdFromJson(*id).empty()) {
      fail("missing integer or string 'id'");
    }
    const json* width = Find(img, "width");
    const json* height = Find(img, "height");
    if (width == nullptr || height == nullptr || !IsInteger(*width) ||
        !IsInteger(*height) || width->get<long long>() < 1 ||
        height->get<long long>() < 1) {
      fail("'width' and 'height' must be positive integers");
    }
    ManifestEntry entry;
    entry.image_id = ImageIdFromJson(*id);
    if (const json* fn = Find(img, "file_name"); fn != nullptr) {
      if (!fn->is_string()) fail("'file_name' must be a string");
      std::filesystem::path p(fn->get<std::string>());
      entry.image_path = p;
      entry.image_id = p.replace_extension().generic_string();
    }
    entry.dims = ImageDims{width->get<int>(), height->get<int>()};
    if (!by_coco_id.emplace(ImageIdFromJson(*id), entries.size()).second) {
      fail("duplicate image id " + id->dump());
    }
    entries.push_back(std::move(entry));
  }

  // Category ids -> contiguous 0-based class ids.
  std::set<long long> category_ids;
  const json* categories = Find(root, "categories");
  const json* annotations = Find(root, "annotations");
  if (annotations != nullptr && !annotations->is_array()) {
    throw ParseError(source, 1, "'annotations' must be an array",
                     ErrorCode::kSchema);
  }
  const bool have_categories =
      categories != nullptr && categories->is_array() && !categories->empty();
  if (have_categories) {
    for (std::size_t i = 0; i < categories->size(); ++i) {
      const json* cid = Find((*categories)[i], "id");
      if (cid == nullptr || !IsInteger(*cid)) {
        throw ParseError(source, i + 1,
                         "category " + std::to_string(i + 1) +
                             ": missing integer 'id'",
                         ErrorCode::kSchema);
      }
      category_ids.insert(cid->get<long long>());
    }
  } else if (annotations != nullptr) {
    for (const json& ann : *annotations) {
      if (const json* cid = Find(ann, "category_id");
          cid != nullptr && IsInteger(*cid)) {
        category_ids.insert(cid->get<long long>());
      }
    }
  }
  std::map<long long, int> class_of;
  for (long long cid : category_ids) {
    class_of.emplace(cid, static_cast<int>(class_of.size()));
  }

  Dataset dataset;
  dataset.ground_truth.resize(entries.size());
  const std::size_t num_annotations =
      annotations == nullptr ? 0 : annotations->size();
  for (std::size_t i = 0; i < num_annotations; ++i) {
    const json& ann = (*annotations)[i];
    const std::size_t record = i + 1;
    auto fail = [&](const std::string& why) {
      throw ParseError(source, record,
                       "annotation " + std::to_string(record) + ": " + why,
                       ErrorCode::kSchema);
    };
    if (!ann.is_object()) fail("must be an object");
    const json* image_ref = Find(ann, "image_id");
    if (image_ref == nullptr) fail("missing 'image_id'");
    auto img = by_coco_id.find(ImageIdFromJson(*image_ref));
    if (img == by_coco_id.end()) {
      fail("references unknown image id " + image_ref->dump());
    }
    const ManifestEntry& entry = entries[img->second];

    const json* cid = Find(ann, "category_id");
    if (cid == nullptr || !IsInteger(*cid)) fail("missing integer 'category_id'");
    auto cls = class_of.find(cid->get<long long>());
    if (cls == class_of.end()) {
      fail("unknown category_id " + cid->dump());
    }

    PixelBox pixel;
    const json* bbox = Find(ann, "bbox");
    const json* segmentation = Find(ann, "segmentation");
    if (bbox != nullptr && !bbox->is_null()) {
      if (!bbox->is_array() || bbox->size() != 4 ||
          !std::all_of(bbox->begin(), bbox->end(),
                       [](const json& v) { return v.is_number(); })) {
        fail("'bbox' must be [x, y, w, h]");
      }
      const double x = (*bbox)[0].get<double>();
      const double y = (*bbox)[1].get<double>();
      const double w = (*bbox)[2].get<double>();
      const double h = (*bbox)[3].get<double>();
      if (!(w > 0.0) || !(h > 0.0)) fail("bbox width and height must be > 0");
      pixel = PixelBox{x, y, x + w, y + h};
    } else if (segmentation != nullptr && !segmentation->is_null()) {
      const auto points = SegmentationPoints(*segmentation, source, record);
      try {
        pixel = PolygonBbox(points);
      } catch (const Error& e) {
        fail(e.what());
      }
    } else {
      fail("needs a 'bbox' or a polygon 'segmentation'");
    }

    GroundTruth gt;
    gt.image_id = entry.image_id;
    gt.class_id = cls->second;
    try {
      gt.box = PixelToNorm(pixel, entry.dims);
    } catch (const Error& e) {
      fail(e.what());
    }
    dataset.ground_truth[img->second].push_back(std::move(gt));
  }

  try {
    dataset.manifest = DatasetManifest(std::move(entries));
  } catch (const Error& e) {
    throw ParseError(source, 1, e.what(), ErrorCode::kSchema);
  }
  return dataset;
}

std::string WriteCocoDataset(const Dataset& dataset) {
  ordered_json images = ordered_json::array();
  ordered_json annotations = ordered_json::array();
  int max_class = 0;
  long long next_ann_id = 1;
  const auto& entries = dataset.manifest.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const ManifestEntry& e = entries[i];
    std::string ext = ".jpg";
    if (e.image_path && e.image_path->has_extension()) {
      ext = e.image_path->extension().string();
    }
    ordered_json img;
    img["id"] = i + 1;
    img["file_name"] = e.image_id + ext;
    img["width"] = e.dims.width;
    img["height"] = e.dims.height;
    images.push_back(std::move(img));

    if (i >= dataset.ground_truth.size()) continue;
    for (const GroundTruth& gt : dataset.ground_truth[i]) {
      const PixelBox p = NormToPixel(gt.box, e.dims);
      ordered_json ann;
      ann["id"] = next_ann_id++;
      ann["image_id"] = i + 1;
      ann["category_id"] = gt.class_id;
      ann["bbox"] = {p.x_min, p.y_min, p.width(), p.height()};
      ann["area"] = p.area();
      ann["iscrowd"] = 0;
      annotations.push_back(std::move(ann));
      max_class = std::max(max_class, gt.class_id);
    }
  }
  ordered_json categories = ordered_json::array();
  for (int c = 0; c <= max_class; ++c) {
    categories.push_back(
        {{"id", c}, {"name", c == 0 ? "log" : "class_" + std::to_string(c)}});
  }
  ordered_json root;
  root["images"] = std::move(images);
  root["annotations"] = std::move(annotations);
  root["categories"] = std::move(categories);
  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Manifest

DatasetManifest LoadManifest(std::string_view content,
                             const std::filesystem::path& base_dir,
                             const std::string& source) {
  const json root = ParseJsonDocument(content, source);
  if (!root.is_array()) {
    throw ParseError(source, 1, "manifest must be a JSON array",
                     ErrorCode::kSchema);
  }
  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const json& item = root[i];
    const std::size_t record = i + 1;
    auto fail = [&](const std::string& why) {
      throw ParseError(source, record,
                       "entry " + std::to_string(record) + ": " + why,
                       ErrorCode::kSchema);
    };
    if (!item.is_object()) fail("must be an object");
    const json* id = Find(item, "image_id");
    if (id == nullptr || !id->is_string()) fail("missing string 'image_id'");
    ManifestEntry entry;
    entry.image_id = id->get<std::string>();
    if (!seen.insert(entry.image_id).second) {
      fail("duplicate image_id '" + entry.image_id + "'");
    }
    const json* width = Find(item, "width");
    const json* height = Find(item, "height");
    if (width == nullptr || height == nullptr || !IsInteger(*width) ||
        !IsInteger(*height)) {
      fail("'width' and 'height' must be integers");
    }
    if (width->get<long long>() < 1 || height->get<long long>() < 1 ||
        width->get<long long>() > std::numeric_limits<int>::max() ||
        height->get<long long>() > std::numeric_limits<int>::max()) {
      fail("image '" + entry.image_id + "' has non-positive dimensions " +
           width->dump() + "x" + height->dump());
    }
    entry.dims = ImageDims{width->get<int>(), height->get<int>()};
    const json* gt = Find(item, "gt");
    if (gt == nullptr || !gt->is_string()) fail("missing string 'gt'");
    entry.gt_path = base_dir / gt->get<std::string>();
    if (!std::filesystem::is_regular_file(entry.gt_path)) {
      fail("ground-truth file not found: " + entry.gt_path.string());
    }
    if (const json* image = Find(item, "image");
        image != nullptr && !image->is_null()) {
      if (!image->is_string()) fail("'image' must be a string");
      entry.image_path = base_dir / image->get<std::string>();
    }
    entries.push_back(std::move(entry));
  }
  return DatasetManifest(std::move(entries));
}

std::string WriteManifest(const DatasetManifest& manifest,
                          const std::filesystem::path& base_dir) {
  auto relative = [&](const std::filesystem::path& p) {
    const auto rel = p.lexically_relative(base_dir);
    return (rel.empty() ? p : rel).generic_string();
  };
  ordered_json root = ordered_json::array();
  for (const ManifestEntry& e : manifest.entries()) {
    ordered_json item;
    item["image_id"] = e.image_id;
    item["width"] = e.dims.width;
    item["height"] = e.dims.height;
    item["gt"] = relative(e.gt_path);
    if (e.image_path) item["image"] = relative(*e.image_path);
    root.push_back(std::move(item));
  }
  return root.dump(2) + "\n";
}

Dataset LoadYoloDataset(DatasetManifest manifest) {
  Dataset dataset;
  dataset.ground_truth.reserve(manifest.size());
  for (const ManifestEntry& e : manifest.entries()) {
    dataset.ground_truth.push_back(ParseYoloGt(
        ReadTextFile(e.gt_path), e.image_id, e.gt_path.string()));
  }
  dataset.manifest = std::move(manifest);
  return dataset;
}

Dataset LoadDatasetFile(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    return LoadYoloDataset(
        LoadManifest(text, path.parent_path(), path.string()));
  }
  return ParseCocoDataset(text, path.string());
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

}  // namespace loggauge
