#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hdl/vec2.hpp"

namespace hdl {

enum class BoundaryMode { periodic, zero_extended };

struct Box {
  Vec2 lo;
  Vec2 hi;
};

struct Rect {
  Vec2 lo;
  Vec2 hi;
};

struct Disk {
  Vec2 center;
  double radius = 0.0;
};

struct Annulus {
  Vec2 center;
  double inner = 0.0;
  double outer = 0.0;
};

/// A union of closed intervals along one axis, extruded over [extent_lo,
/// extent_hi] in the other axis.
struct Stripes1D {
  int axis = 0;
  std::vector<std::pair<double, double>> intervals;
  double extent_lo = 0.0;
  double extent_hi = 0.0;
};

using Shape = std::variant<Rect, Disk, Annulus, Stripes1D>;

/// Closed-set membership, with the set inflated by `inflate` (>= 0).
bool contains(const Shape& shape, Vec2 p, double inflate = 0.0);
Box bounding_box(const Shape& shape);

/// Periodic stripe pattern [offset + k*period, offset + k*period + width]
/// clipped to [from, to].
Stripes1D periodic_stripes(int axis, double width, double period, double offset, double from,
                           double to, double extent_lo, double extent_hi);

struct ShapeSpec {
  double side = 0.0;
  double resolution = 0.0;
  BoundaryMode boundary = BoundaryMode::zero_extended;
  std::vector<Shape> shapes;
};

/// Parses {"R":..., "h":..., "boundary":"zero"|"periodic", "shapes":[...]}.
/// Shape objects: {"type":"rect","lo":[x,y],"hi":[x,y]},
/// {"type":"disk","center":[x,y],"radius":r},
/// {"type":"annulus","center":[x,y],"inner":a,"outer":b},
/// {"type":"stripes1d","axis":0|1,"intervals":[[a,b],...]} or with
/// "width","period","offset","from","to" for a periodic pattern.
/// Stripes default to the full window in the extruded direction.
ShapeSpec shape_spec_from_json(const nlohmann::json& doc);
std::vector<Shape> shapes_from_json(const nlohmann::json& list, double default_extent_hi);
nlohmann::json shape_to_json(const Shape& shape);

}  // namespace hdl
