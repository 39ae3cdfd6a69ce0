#include "hdl/shapes.hpp"

#include <algorithm>
#include <cmath>

#include "hdl/errors.hpp"

namespace hdl {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vec2 read_point(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidArgument(where + ": expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

double read_number(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw InvalidArgument(where + "." + key + ": expected a number");
  }
  return obj[key].get<double>();
}

}  // namespace

bool contains(const Shape& shape, Vec2 p, double inflate) {
  return std::visit(
      Overloaded{
          [&](const Rect& r) {
            return p.x >= r.lo.x - inflate && p.x <= r.hi.x + inflate && p.y >= r.lo.y - inflate &&
                   p.y <= r.hi.y + inflate;
          },
          [&](const Disk& d) { return norm(p - d.center) <= d.radius + inflate; },
          [&](const Annulus& a) {
            const double r = norm(p - a.center);
            return r >= a.inner - inflate && r <= a.outer + inflate;
          },
          [&](const Stripes1D& s) {
            const double along = s.axis == 0 ? p.x : p.y;
            const double across = s.axis == 0 ? p.y : p.x;
            if (across < s.extent_lo - inflate || across > s.extent_hi + inflate) return false;
            return std::any_of(s.intervals.begin(), s.intervals.end(), [&](const auto& iv) {
              return along >= iv.first - inflate && along <= iv.second + inflate;
            });
          },
      },
      shape);
}

Box bounding_box(const Shape& shape) {
  return std::visit(
      Overloaded{
          [](const Rect& r) { return Box{r.lo, r.hi}; },
          [](const Disk& d) {
            return Box{d.center - Vec2{d.radius, d.radius}, d.center + Vec2{d.radius, d.radius}};
          },
          [](const Annulus& a) {
            return Box{a.center - Vec2{a.outer, a.outer}, a.center + Vec2{a.outer, a.outer}};
          },
          [](const Stripes1D& s) {
            double lo = 0.0, hi = 0.0;
            if (!s.intervals.empty()) {
              lo = s.intervals.front().first;
              hi = s.intervals.front().second;
              for (const auto& iv : s.intervals) {
                lo = std::min(lo, iv.first);
                hi = std::max(hi, iv.second);
              }
            }
            return s.axis == 0 ? Box{{lo, s.extent_lo}, {hi, s.extent_hi}}
                               : Box{{s.extent_lo, lo}, {s.extent_hi, hi}};
          },
      },
      shape);
}

Stripes1D periodic_stripes(int axis, double width, double period, double offset, double from,
                           double to, double extent_lo, double extent_hi) {
  if (!(width > 0.0) || !(period >= width)) {
    throw InvalidArgument("stripes1d: need 0 < width <= period");
  }
  Stripes1D s;
  s.axis = axis;
  s.extent_lo = extent_lo;
  s.extent_hi = extent_hi;
  const auto first = static_cast<long long>(std::floor((from - offset - width) / period));
  for (long long k = first;; ++k) {
    const double a = offset + static_cast<double>(k) * period;
    if (a > to) break;
    const double lo = std::max(a, from);
    const double hi = std::min(a + width, to);
    if (hi >= lo) s.intervals.emplace_back(lo, hi);
  }
  return s;
}

std::vector<Shape> shapes_from_json(const nlohmann::json& list, double default_extent_hi) {
  if (!list.is_array()) throw InvalidArgument("shapes: expected an array");
  std::vector<Shape> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& s = list[i];
    const std::string where = "shapes[" + std::to_string(i) + "]";
    if (!s.is_object() || !s.contains("type") || !s["type"].is_string()) {
      throw InvalidArgument(where + ".type: missing shape type");
    }
    const auto type = s["type"].get<std::string>();
    if (type == "rect") {
      Rect r{read_point(s.at("lo"), where + ".lo"), read_point(s.at("hi"), where + ".hi")};
      if (r.hi.x < r.lo.x || r.hi.y < r.lo.y) throw InvalidArgument(where + ": hi < lo");
      out.emplace_back(r);
    } else if (type == "disk") {
      Disk d{read_point(s.at("center"), where + ".center"), read_number(s, "radius", where)};
      if (d.radius < 0) throw InvalidArgument(where + ".radius: must be >= 0");
      out.emplace_back(d);
    } else if (type == "annulus") {
      Annulus a{read_point(s.at("center"), where + ".center"), read_number(s, "inner", where),
                read_number(s, "outer", where)};
      if (a.inner < 0 || a.outer < a.inner) throw InvalidArgument(where + ": need 0 <= inner <= outer");
      out.emplace_back(a);
    } else if (type == "stripes1d") {
      const int axis = s.value("axis", 0);
      if (axis != 0 && axis != 1) throw InvalidArgument(where + ".axis: must be 0 or 1");
      double ext_lo = 0.0, ext_hi = default_extent_hi;
      if (s.contains("extent")) {
        const Vec2 e = read_point(s["extent"], where + ".extent");
        ext_lo = e.x;
        ext_hi = e.y;
      }
      if (s.contains("intervals")) {
        Stripes1D st;
        st.axis = axis;
        st.extent_lo = ext_lo;
        st.extent_hi = ext_hi;
        for (const auto& iv : s["intervals"]) {
          const Vec2 ab = read_point(iv, where + ".intervals");
          if (ab.y < ab.x) throw InvalidArgument(where + ".intervals: b < a");
          st.intervals.emplace_back(ab.x, ab.y);
        }
        out.emplace_back(std::move(st));
      } else {
        out.emplace_back(periodic_stripes(axis, read_number(s, "width", where),
                                          read_number(s, "period", where), s.value("offset", 0.0),
                                          read_number(s, "from", where), read_number(s, "to", where),
                                          ext_lo, ext_hi));
      }
    } else {
      throw InvalidArgument(where + ".type: unknown shape type '" + type + "'");
    }
  }
  return out;
}

ShapeSpec shape_spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InvalidArgument("shape spec: expected an object");
  ShapeSpec spec;
  spec.side = read_number(doc, "R", "shape_spec");
  spec.resolution = read_number(doc, "h", "shape_spec");
  const auto boundary = doc.value("boundary", std::string("zero"));
  if (boundary == "zero") {
    spec.boundary = BoundaryMode::zero_extended;
  } else if (boundary == "periodic") {
    spec.boundary = BoundaryMode::periodic;
  } else {
    throw InvalidArgument("shape_spec.boundary: expected \"zero\" or \"periodic\"");
  }
  spec.shapes = shapes_from_json(doc.value("shapes", nlohmann::json::array()), spec.side);
  return spec;
}

nlohmann::json shape_to_json(const Shape& shape) {
  return std::visit(
      Overloaded{
          [](const Rect& r) {
            return nlohmann::json{{"type", "rect"}, {"lo", {r.lo.x, r.lo.y}}, {"hi", {r.hi.x, r.hi.y}}};
          },
          [](const Disk& d) {
            return nlohmann::json{
                {"type", "disk"}, {"center", {d.center.x, d.center.y}}, {"radius", d.radius}};
          },
          [](const Annulus& a) {
            return nlohmann::json{{"type", "annulus"},
                                  {"center", {a.center.x, a.center.y}},
                                  {"inner", a.inner},
                                  {"outer", a.outer}};
          },
          [](const Stripes1D& s) {
            nlohmann::json iv = nlohmann::json::array();
            for (const auto& [a, b] : s.intervals) iv.push_back({a, b});
            return nlohmann::json{{"type", "stripes1d"},
                                  {"axis", s.axis},
                                  {"intervals", iv},
                                  {"extent", {s.extent_lo, s.extent_hi}}};
          },
      },
      shape);
}

}  // namespace hdl
