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

#include "loggauge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loggauge/error.hpp"

namespace loggauge {

namespace {

bool AllFinite(const NormBox& b) {
  return std::isfinite(b.cx) && std::isfinite(b.cy) && std::isfinite(b.w) &&
         std::isfinite(b.h);
}

bool AllFinite(const PixelBox& b) {
  return std::isfinite(b.x_min) && std::isfinite(b.y_min) &&
         std::isfinite(b.x_max) && std::isfinite(b.y_max);
}

double Clamp(double v, double hi) { return std::clamp(v, 0.0, hi); }

}  // namespace

void ValidateDims(const ImageDims& dims) {
  if (dims.width < 1 || dims.height < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "image dimensions must be positive, got " +
                    std::to_string(dims.width) + "x" +
                    std::to_string(dims.height));
  }
}

std::optional<std::string> NormBoxViolation(const NormBox& box) {
  if (!AllFinite(box)) return "non-finite coordinate";
  if (box.w <= 0.0) return "width must be positive";
  if (box.h <= 0.0) return "height must be positive";
  const double lo = -kNormTolerance;
  const double hi = 1.0 + kNormTolerance;
  if (box.cx < lo || box.cx > hi) return "cx outside [0, 1]";
  if (box.cy < lo || box.cy > hi) return "cy outside [0, 1]";
  if (box.cx - box.w / 2 < lo || box.cx + box.w / 2 > hi) {
    return "box extends horizontally outside the image";
  }
  if (box.cy - box.h / 2 < lo || box.cy + box.h / 2 > hi) {
    return "box extends vertically outside the image";
  }
  return std::nullopt;
}

PixelBox NormToPixel(const NormBox& box, const ImageDims& dims) {
  if (!AllFinite(box)) {
    throw Error(ErrorCode::kMalformedBox, "normalized box has non-finite field");
  }
  const double w = dims.width;
  const double h = dims.height;
  return PixelBox{Clamp((box.cx - box.w / 2) * w, w),
                  Clamp((box.cy - box.h / 2) * h, h),
                  Clamp((box.cx + box.w / 2) * w, w),
                  Clamp((box.cy + box.h / 2) * h, h)};
}

NormBox PixelToNorm(const PixelBox& box, const ImageDims& dims) {
  if (!AllFinite(box)) {
    throw Error(ErrorCode::kMalformedBox, "pixel box has non-finite field");
  }
  if (box.x_min > box.x_max || box.y_min > box.y_max) {
    throw Error(ErrorCode::kMalformedBox, "pixel box corners are inverted");
  }
  const double w = dims.width;
  const double h = dims.height;
  const double x0 = Clamp(box.x_min, w);
  const double y0 = Clamp(box.y_min, h);
  const double x1 = Clamp(box.x_max, w);
  const double y1 = Clamp(box.y_max, h);
  if (x1 - x0 <= 0.0 || y1 - y0 <= 0.0) {
    throw Error(ErrorCode::kDegenerateBox,
                "pixel box has zero width or height inside the image");
  }
  return NormBox{(x0 + x1) / 2 / w, (y0 + y1) / 2 / h, (x1 - x0) / w,
                 (y1 - y0) / h};
}

double IntersectionArea(const PixelBox& a, const PixelBox& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

double Iou(const PixelBox& a, const PixelBox& b) {
  const double inter = IntersectionArea(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

PixelBox PolygonBbox(std::span<const Point2> points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::kMalformedPolygon,
                "polygon needs at least 3 points, got " +
                    std::to_string(points.size()));
  }
  PixelBox out{points[0].x, points[0].y, points[0].x, points[0].y};
  for (const Point2& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::kMalformedPolygon, "polygon has non-finite point");
    }
    out.x_min = std::min(out.x_min, p.x);
    out.y_min = std::min(out.y_min, p.y);
    out.x_max = std::max(out.x_max, p.x);
    out.y_max = std::max(out.y_max, p.y);
  }
  return out;
}

}  // namespace loggauge
