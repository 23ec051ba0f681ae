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

#pragma once

#include <optional>
#include <span>
#include <string>

namespace loggauge {

// Tolerance band for normalized coordinates that fall just outside [0, 1].
inline constexpr double kNormTolerance = 1e-6;

struct ImageDims {
  int width = 0;
  int height = 0;

  friend bool operator==(const ImageDims&, const ImageDims&) = default;
};

// Center-normalized box as stored in YOLO label files. All fields are
// fractions of the image width (cx, w) or height (cy, h).
struct NormBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  friend bool operator==(const NormBox&, const NormBox&) = default;
};

// Corner box in real-valued pixel coordinates.
struct PixelBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Throws Error(kInvalidArgument) unless both dims are >= 1.
void ValidateDims(const ImageDims& dims);

// Returns a human-readable reason if `box` breaks the NormBox invariants
// (finite fields, positive extents, edges inside [-tol, 1 + tol]).
std::optional<std::string> NormBoxViolation(const NormBox& box);

// Corner conversion, clamped to [0, width] x [0, height].
// Throws Error(kMalformedBox) on non-finite fields.
PixelBox NormToPixel(const NormBox& box, const ImageDims& dims);

// Inverse of NormToPixel. The box is clamped to the image first; a box with
// zero width or height after clamping throws Error(kDegenerateBox).
NormBox PixelToNorm(const PixelBox& box, const ImageDims& dims);

// Intersection over union on continuous areas. Returns 0 for disjoint boxes
// and when both boxes have zero area.
double Iou(const PixelBox& a, const PixelBox& b);

double IntersectionArea(const PixelBox& a, const PixelBox& b);

// Component-wise min/max over the points. Needs at least three points.
PixelBox PolygonBbox(std::span<const Point2> points);

}  // namespace loggauge
