#include "hdl/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hdl/counting.hpp"
#include "hdl/errors.hpp"
#include "hdl/numeric.hpp"
#include "hdl/parallel.hpp"

namespace hdl {

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::not_found: return "not_found";
    case SearchStatus::partial: return "partial";
  }
  return "unknown";
}

namespace {

double min_gap(const std::vector<Vec2>& v) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t k = i + 1; k < v.size(); ++k) best = std::min(best, norm(v[i] - v[k]));
  }
  return best;
}

constexpr std::size_t kBatch = 1024;

struct Lattice {
  Vec2 lo;
  double step = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;

  Vec2 point(std::size_t index) const {
    const std::size_t ix = index / ny, iy = index % ny;
    return {lo.x + (static_cast<double>(ix) + 0.5) * step, lo.y + (static_cast<double>(iy) + 0.5) * step};
  }
};

SearchSpec resolve(const PlanarSet& a, const std::vector<double>& lengths, SearchSpec s) {
  const Box b = a.bounds();
  if (s.x_step <= 0.0) {
    if (a.kind() == PlanarSet::Kind::bitmap) {
      s.x_step = a.bitmap()->resolution();
    } else {
      const double extent = std::max(b.hi.x - b.lo.x, b.hi.y - b.lo.y);
      s.x_step = extent > 0.0 ? extent / 256.0 : 1.0;
    }
  }
  if (s.angles == 0) s.angles = lengths.size() <= 2 ? 720 : 180;
  if (s.eta_len <= 0.0) s.eta_len = s.x_step;
  if (s.eta_gap <= 0.0) s.eta_gap = *std::min_element(lengths.begin(), lengths.end()) / 1000.0;
  return s;
}

// Depth-first search over directions for one base point.
class Dfs {
 public:
  Dfs(const PlanarSet& a, const std::vector<double>& lengths, const std::vector<Vec2>& unit, double eta_gap,
      double limit)
      : a_(a), lengths_(lengths), unit_(unit), eta_gap_(eta_gap), limit_(limit) {}

  bool run(Vec2 x) {
    vertices_.assign(1, x);
    edges_.clear();
    return step(0);
  }

  double tests = 0.0;
  bool exceeded = false;
  const std::vector<Vec2>& edges() const { return edges_; }

 private:
  bool step(std::size_t depth) {
    if (depth == lengths_.size()) return true;
    const std::size_t count = vertices_.size();
    for (const Vec2& u : unit_) {
      const Vec2 y = lengths_[depth] * u;
      bool ok = true;
      for (std::size_t s = 0; s < count && ok; ++s) {
        const Vec2 v = vertices_[s] + y;
        for (std::size_t t = 0; t < count; ++t) {
          if (norm(v - vertices_[t]) < eta_gap_) {
            ok = false;
            break;
          }
        }
        // Gaps among the new vertices equal gaps among the old ones.
      }
      if (!ok) continue;
      for (std::size_t s = 0; s < count && ok; ++s) {
        tests += 1.0;
        ok = a_.contains(vertices_[s] + y);
      }
      if (tests > limit_) {
        exceeded = true;
        return false;
      }
      if (!ok) continue;
      for (std::size_t s = 0; s < count; ++s) vertices_.push_back(vertices_[s] + y);
      edges_.push_back(y);
      if (step(depth + 1)) return true;
      if (exceeded) return false;
      edges_.pop_back();
      vertices_.resize(count);
    }
    return false;
  }

  const PlanarSet& a_;
  const std::vector<double>& lengths_;
  const std::vector<Vec2>& unit_;
  double eta_gap_;
  double limit_;
  std::vector<Vec2> vertices_;
  std::vector<Vec2> edges_;
};

}  // namespace

HypercubeCopy make_copy(Vec2 base, std::vector<Vec2> edges, std::vector<double> lengths, double eta_len,
                        double eta_gap) {
  if (edges.size() != lengths.size()) throw InvalidArgument("make_copy: edges and lengths differ in size");
  HypercubeCopy c;
  c.base = base;
  c.vertices.resize(std::size_t{1} << edges.size());
  for (std::size_t s = 0; s < c.vertices.size(); ++s) {
    Vec2 v = base;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (s >> k & 1U) v += edges[k];
    }
    c.vertices[s] = v;
  }
  c.edges = std::move(edges);
  c.lengths = std::move(lengths);
  c.min_pairwise_gap = min_gap(c.vertices);
  c.eta_len = eta_len;
  c.eta_gap = eta_gap;
  return c;
}

SearchResult find_copy(const PlanarSet& a, const std::vector<double>& lengths, const SearchSpec& spec) {
  if (a.dimension() != 2) throw InvalidArgument("find_copy: the set must be planar");
  if (lengths.empty() || lengths.size() > 3) throw InvalidArgument("find_copy: need 1 to 3 edge lengths");
  for (double l : lengths) {
    if (!(l > 0.0)) throw InvalidArgument("find_copy: edge lengths must be positive");
  }
  SearchResult result;
  result.resolved = resolve(a, lengths, spec);
  const SearchSpec& s = result.resolved;

  const Box b = a.bounds();
  Lattice lat;
  lat.lo = b.lo;
  lat.step = s.x_step;
  lat.nx = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b.hi.x - b.lo.x) / s.x_step)));
  lat.ny = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b.hi.y - b.lo.y) / s.x_step)));
  result.base_points = lat.nx * lat.ny;

  std::vector<Vec2> unit(s.angles);
  for (std::size_t m = 0; m < s.angles; ++m) {
    unit[m] = polar(1.0, 2.0 * kPi * static_cast<double>(m) / static_cast<double>(s.angles));
  }

  struct Slot {
    std::optional<std::vector<Vec2>> edges;
    double tests = 0.0;
    bool exceeded = false;
  };
  std::size_t start = std::min(s.resume_from, result.base_points);
  while (start < result.base_points) {
    const std::size_t end = std::min(result.base_points, start + kBatch);
    std::vector<Slot> slots(end - start);
    parallel_for(slots.size(), [&](std::size_t i) {
      Slot& slot = slots[i];
      const Vec2 x = lat.point(start + i);
      slot.tests = 1.0;
      if (!a.contains(x)) return;
      Dfs dfs(a, lengths, unit, s.eta_gap, s.membership_budget);
      const bool hit = dfs.run(x);
      slot.tests += dfs.tests;
      slot.exceeded = dfs.exceeded;
      if (hit) slot.edges = dfs.edges();
    });
    for (std::size_t i = 0; i < slots.size(); ++i) {
      result.membership_tests += slots[i].tests;
      if (slots[i].edges) {
        result.status = SearchStatus::found;
        result.copy = make_copy(lat.point(start + i), *slots[i].edges, lengths, s.eta_len, s.eta_gap);
        result.cursor = start + i + 1;
        return result;
      }
      if (slots[i].exceeded) {
        result.status = SearchStatus::partial;
        result.cursor = start + i;
        return result;
      }
    }
    start = end;
    if (result.membership_tests > s.membership_budget && start < result.base_points) {
      result.status = SearchStatus::partial;
      result.cursor = start;
      return result;
    }
  }
  result.status = SearchStatus::not_found;
  result.cursor = result.base_points;
  return result;
}

bool verify_copy(const PlanarSet& a, const HypercubeCopy& c) {
  const std::size_t n = c.edges.size();
  if (n == 0 || c.lengths.size() != n || c.vertices.size() != (std::size_t{1} << n)) return false;
  double scale = norm(c.base);
  for (const Vec2& y : c.edges) scale += norm(y);
  const double tol = 1e-9 * (1.0 + scale);
  for (std::size_t s = 0; s < c.vertices.size(); ++s) {
    Vec2 v = c.base;
    for (std::size_t k = 0; k < n; ++k) {
      if (s >> k & 1U) v += c.edges[k];
    }
    if (norm(v - c.vertices[s]) > tol) return false;
    if (!a.contains(c.vertices[s])) return false;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(norm(c.edges[k]) - c.lengths[k]) > c.eta_len) return false;
  }
  const double gap = min_gap(c.vertices);
  return gap > 0.0 && gap >= c.eta_gap;
}

DensityEstimate estimate_banach_density(const PlanarSet& a, const std::vector<double>& sides, std::size_t cells) {
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (!(sides[i] > 0.0)) throw InvalidArgument("estimate_banach_density: window sides must be positive");
    if (i > 0 && sides[i] <= sides[i - 1]) {
      throw InvalidArgument("estimate_banach_density: window sides must be increasing");
    }
  }
  DensityEstimate est;
  est.sides = sides;
  const int d = a.dimension();
  const Box b = a.bounds();

  // Rasterize into a (cells x cells) or (cells) occupancy table.
  std::size_t m = cells;
  double h = 0.0;
  std::vector<unsigned char> occ;
  if (a.kind() == PlanarSet::Kind::bitmap) {
    const PlanarGrid& g = *a.bitmap();
    m = g.node_count();
    h = g.resolution();
    occ.resize(m * m);
    for (std::size_t k = 0; k < occ.size(); ++k) occ[k] = g.values()[k] >= 0.5 ? 1 : 0;
  } else if (d == 2) {
    const double extent = std::max(b.hi.x - b.lo.x, b.hi.y - b.lo.y);
    if (extent <= 0.0) {
      est.per_side.assign(sides.size(), 0.0);
      return est;
    }
    h = extent / static_cast<double>(m);
    occ = rasterize(a, b.lo, extent, m);
  } else {
    const double extent = b.hi.x - b.lo.x;
    if (extent <= 0.0) {
      est.per_side.assign(sides.size(), 0.0);
      return est;
    }
    h = extent / static_cast<double>(m);
    occ.resize(m);
    for (std::size_t i = 0; i < m; ++i) occ[i] = a.contains(b.lo.x + (static_cast<double>(i) + 0.5) * h) ? 1 : 0;
  }

  const std::size_t rows = d == 2 ? m : 1;
  // Prefix sums with a zero border.
  std::vector<double> pre((m + 1) * (rows + 1), 0.0);
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      pre[(j + 1) * (m + 1) + i + 1] = occ[j * m + i] + pre[j * (m + 1) + i + 1] + pre[(j + 1) * (m + 1) + i] -
                                       pre[j * (m + 1) + i];
    }
  }
  const auto clampi = [&](long long v, std::size_t hi) {
    return static_cast<std::size_t>(std::clamp<long long>(v, 0, static_cast<long long>(hi)));
  };
  const auto box_sum = [&](long long i0, long long j0, long long w) {
    const std::size_t a0 = clampi(i0, m), a1 = clampi(i0 + w, m);
    const std::size_t b0 = d == 2 ? clampi(j0, m) : 0, b1 = d == 2 ? clampi(j0 + w, m) : 1;
    return pre[b1 * (m + 1) + a1] - pre[b0 * (m + 1) + a1] - pre[b1 * (m + 1) + a0] + pre[b0 * (m + 1) + a0];
  };

  for (double side : sides) {
    const auto w = std::max<long long>(1, std::llround(side / h));
    const double area = d == 2 ? static_cast<double>(w) * static_cast<double>(w) : static_cast<double>(w);
    double best = 0.0;
    const auto last = static_cast<long long>(m) - 1;
    for (long long j0 = d == 2 ? -w + 1 : 0; j0 <= (d == 2 ? last : 0); ++j0) {
      for (long long i0 = -w + 1; i0 <= last; ++i0) best = std::max(best, box_sum(i0, j0, w) / area);
    }
    est.per_side.push_back(best);
    est.value = std::max(est.value, best);
  }
  return est;
}

double log2_J_theory(int n, double delta, const DecompositionConstants& c) {
  if (c.c_err <= 0.0) return 0.0;
  const double log2_floor = std::log2(c.c_str / 3.0) + std::ldexp(1.0, n) * std::log2(delta);
  // eps^{1/2} = (c_str / 3) delta^{2^n} / C_uni, then halved; kept in log2
  // because eps^{-3n} overflows quickly.
  double l2 = -1.0;
  if (c.c_uni > 0.0) l2 = std::min(-1.0, 2.0 * (log2_floor - std::log2(c.c_uni)) - 1.0);
  const double v = std::log2(c.c_err) - 3.0 * n * l2 + std::log2(-l2 * std::log(2.0)) - log2_floor;
  return v < 60.0 ? std::log2(std::floor(std::exp2(v)) + 1.0) : v;
}

IntervalResult pigeonhole_interval(const PlanarGrid& a, const PigeonholeSettings& s) {
  if (s.n < 1 || s.n > 3) throw InvalidArgument("pigeonhole_interval: n must be 1, 2 or 3");
  if (s.J < 1) throw InvalidArgument("pigeonhole_interval: J must be >= 1");
  if (!(s.delta > 0.0 && s.delta <= 1.0)) throw InvalidArgument("pigeonhole_interval: delta must lie in (0, 1]");
  if (!(s.epsilon > 0.0 && s.epsilon < 1.0)) {
    throw InvalidArgument("pigeonhole_interval: epsilon must satisfy 0 < epsilon < 1");
  }
  if (std::abs(a.side() - 1.0) > 1e-12) throw InvalidArgument("pigeonhole_interval: the set must live in [0, 1]^2");
  if (s.samples == 0) throw InvalidArgument("pigeonhole_interval: samples must be positive");
  const double mass = measure(a);
  if (mass < s.delta * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "pigeonhole_interval: measure(A) = " << mass << " is below delta = " << s.delta;
    throw InvalidArgument(msg.str());
  }
  if (std::ldexp(1.0, -2 * s.J + 1) <= a.resolution()) {
    throw InvalidArgument("pigeonhole_interval: the finest interval lies below the grid step; lower J or refine");
  }

  IntervalResult r;
  r.J = s.J;
  r.delta = s.delta;
  r.n = s.n;
  r.epsilon = s.epsilon;
  const double eps = s.epsilon;
  const DecompositionConstants& c = s.constants;
  r.pigeon_bound = c.c_err * std::pow(eps, -3.0 * s.n) * std::log(1.0 / eps) / s.J;
  r.structured_floor = c.c_str / 3.0 * std::pow(s.delta, std::ldexp(1.0, s.n));
  r.epsilon_admissible = c.c_uni * std::sqrt(eps) < r.structured_floor;
  r.J_admissible = r.pigeon_bound < r.structured_floor;
  r.log2_J_theory = log2_J_theory(s.n, s.delta, c);
  r.log2_J_bound = std::log2(s.c_J) - (3.0 * s.n + 1.0) * std::ldexp(1.0, s.n + 1) * std::log2(s.delta);
  r.J_within_bound = std::log2(static_cast<double>(s.J)) <= r.log2_J_bound;
  r.J_theory_within_bound = r.log2_J_theory <= r.log2_J_bound;

  FormSettings fs;
  fs.n = s.n;
  fs.quadrature_nodes = s.quadrature_nodes;
  fs.budget = s.budget;
  for (int j = 1; j <= s.J; ++j) {
    LadderRow row;
    row.j = j;
    row.lambda = std::exp2(-2.0 * j + 0.5);
    fs.lambda = row.lambda;
    fs.epsilon = 1.0;
    row.structured = counting_smooth(a, fs).value;
    fs.epsilon = eps;
    const double n_eps = counting_smooth(a, fs).value;
    row.n_zero = counting_sharp(a, fs).value;
    row.error = n_eps - row.structured;
    row.uniform = row.n_zero - n_eps;
    row.within_pigeon_bound = std::abs(row.error) <= r.pigeon_bound;
    r.ladder.push_back(row);
  }
  const auto argmin = std::min_element(r.ladder.begin(), r.ladder.end(), [](const LadderRow& x, const LadderRow& y) {
    return std::abs(x.error) < std::abs(y.error);
  });
  r.argmin_j = argmin->j;
  const auto first = std::find_if(r.ladder.begin(), r.ladder.end(), [](const LadderRow& x) { return x.within_pigeon_bound; });
  if (first != r.ladder.end()) {
    r.j = first->j;
    r.selected_by = "pigeon_bound";
  } else {
    r.j = r.argmin_j;
    r.selected_by = "argmin";
  }
  r.lo = std::ldexp(1.0, -2 * r.j);
  r.hi = std::ldexp(1.0, -2 * r.j + 1);
  r.length = r.hi - r.lo;

  const PlanarSet set = PlanarSet::from_bitmap(a);
  bool any = false;
  for (std::size_t i = 0; i < s.samples; ++i) {
    Witness w;
    w.lambda = r.lo + (static_cast<double>(i) + 0.5) * (r.hi - r.lo) / static_cast<double>(s.samples);
    const SearchResult found = find_copy(set, std::vector<double>(static_cast<std::size_t>(s.n), w.lambda), s.search);
    w.status = found.status;
    w.copy = found.copy;
    w.verified = found.copy && verify_copy(set, *found.copy);
    any = any || w.verified;
    r.witnesses.push_back(std::move(w));
  }
  r.witness_not_found_at_resolution = !any;
  return r;
}

ScanTable scale_scan(const PlanarSet& a, double lambda_min, double lambda_max, std::size_t steps, int n,
                     const SearchSpec& spec, const std::vector<double>& ratios) {
  if (n < 1 || n > 3) throw InvalidArgument("scale_scan: n must be 1, 2 or 3");
  if (!(lambda_min > 0.0) || lambda_max < lambda_min) throw InvalidArgument("scale_scan: need 0 < lambda_min <= lambda_max");
  if (steps == 0) throw InvalidArgument("scale_scan: steps must be positive");
  if (!ratios.empty() && ratios.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("scale_scan: need one length ratio per edge");
  }
  ScanTable t;
  t.n = n;
  for (std::size_t i = 0; i < steps; ++i) {
    ScanRow row;
    row.lambda = steps == 1 ? lambda_min
                            : lambda_min + (lambda_max - lambda_min) * static_cast<double>(i) / static_cast<double>(steps - 1);
    std::vector<double> lengths(static_cast<std::size_t>(n), row.lambda);
    for (std::size_t k = 0; k < ratios.size(); ++k) lengths[k] *= ratios[k];
    SearchResult res = find_copy(a, lengths, spec);
    row.status = res.status;
    row.copy = std::move(res.copy);
    t.rows.push_back(std::move(row));
  }
  for (std::size_t i = t.rows.size(); i-- > 0;) {
    if (t.rows[i].status != SearchStatus::found) break;
    t.lambda0 = t.rows[i].lambda;
  }
  return t;
}

namespace {

nlohmann::json point(Vec2 p) { return nlohmann::json::array({p.x, p.y}); }
Vec2 to_point(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

nlohmann::json to_json(const HypercubeCopy& c) {
  nlohmann::json j;
  j["base"] = point(c.base);
  j["edges"] = nlohmann::json::array();
  for (const Vec2& y : c.edges) j["edges"].push_back(point(y));
  j["lengths"] = c.lengths;
  j["vertices"] = nlohmann::json::array();
  for (const Vec2& v : c.vertices) j["vertices"].push_back(point(v));
  j["min_pairwise_gap"] = c.min_pairwise_gap;
  j["eta_len"] = c.eta_len;
  j["eta_gap"] = c.eta_gap;
  return j;
}

HypercubeCopy copy_from_json(const nlohmann::json& j) {
  std::vector<Vec2> edges;
  for (const auto& e : j.at("edges")) edges.push_back(to_point(e));
  HypercubeCopy c = make_copy(to_point(j.at("base")), std::move(edges), j.at("lengths").get<std::vector<double>>(),
                              j.at("eta_len").get<double>(), j.at("eta_gap").get<double>());
  if (j.contains("vertices")) {
    // Keep the stored vertices so that verify_copy sees what was recorded.
    c.vertices.clear();
    for (const auto& v : j.at("vertices")) c.vertices.push_back(to_point(v));
  }
  return c;
}

nlohmann::json to_json(const SearchResult& r) {
  nlohmann::json j;
  j["status"] = to_string(r.status);
  j["copy"] = r.copy ? to_json(*r.copy) : nlohmann::json(nullptr);
  j["cursor"] = r.cursor;
  j["base_points"] = r.base_points;
  j["membership_tests"] = r.membership_tests;
  j["search"] = {{"x_step", r.resolved.x_step},
                 {"angles", r.resolved.angles},
                 {"eta_len", r.resolved.eta_len},
                 {"eta_gap", r.resolved.eta_gap},
                 {"membership_budget", r.resolved.membership_budget}};
  return j;
}

nlohmann::json to_json(const IntervalResult& r) {
  nlohmann::json j;
  j["j"] = r.j;
  j["interval"] = {r.lo, r.hi};
  j["length"] = r.length;
  j["J"] = r.J;
  j["delta"] = r.delta;
  j["n"] = r.n;
  j["epsilon"] = r.epsilon;
  j["pigeon_bound"] = r.pigeon_bound;
  j["selected_by"] = r.selected_by;
  j["argmin_j"] = r.argmin_j;
  j["ladder"] = nlohmann::json::array();
  for (const auto& row : r.ladder) {
    j["ladder"].push_back({{"j", row.j},
                           {"lambda", row.lambda},
                           {"n_zero", row.n_zero},
                           {"structured", row.structured},
                           {"error", row.error},
                           {"uniform", row.uniform},
                           {"within_pigeon_bound", row.within_pigeon_bound}});
  }
  j["witnesses"] = nlohmann::json::array();
  for (const auto& w : r.witnesses) {
    j["witnesses"].push_back({{"lambda", w.lambda},
                              {"status", to_string(w.status)},
                              {"verified", w.verified},
                              {"copy", w.copy ? to_json(*w.copy) : nlohmann::json(nullptr)}});
  }
  j["witness_not_found_at_resolution"] = r.witness_not_found_at_resolution;
  j["structured_floor"] = r.structured_floor;
  j["epsilon_admissible"] = r.epsilon_admissible;
  j["J_admissible"] = r.J_admissible;
  j["log2_J_theory"] = r.log2_J_theory;
  j["log2_J_bound"] = r.log2_J_bound;
  j["J_within_bound"] = r.J_within_bound;
  j["J_theory_within_bound"] = r.J_theory_within_bound;
  return j;
}

nlohmann::json to_json(const ScanTable& t) {
  nlohmann::json j;
  j["n"] = t.n;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    j["rows"].push_back({{"lambda", row.lambda},
                         {"status", to_string(row.status)},
                         {"copy", row.copy ? to_json(*row.copy) : nlohmann::json(nullptr)}});
  }
  j["lambda0"] = t.lambda0 ? nlohmann::json(*t.lambda0) : nlohmann::json(nullptr);
  return j;
}

std::string to_csv(const ScanTable& t) {
  std::ostringstream out;
  out.precision(17);
  out << "lambda,found,status,x,y";
  for (int k = 1; k <= t.n; ++k) out << ",y" << k << "_x,y" << k << "_y";
  out << '\n';
  for (const auto& row : t.rows) {
    out << row.lambda << ',' << (row.status == SearchStatus::found ? 1 : 0) << ',' << to_string(row.status);
    if (row.copy) {
      out << ',' << row.copy->base.x << ',' << row.copy->base.y;
      for (const Vec2& y : row.copy->edges) out << ',' << y.x << ',' << y.y;
    } else {
      for (int k = 0; k < 2 * t.n + 2; ++k) out << ',';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace hdl
