#include "hdl/lattice_form.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hdl/errors.hpp"
#include "hdl/fft.hpp"
#include "hdl/numeric.hpp"
#include "hdl/parallel.hpp"

namespace hdl {
namespace {

using Complex = std::complex<double>;

struct IndexBox {
  long long x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open
  bool empty() const { return x1 <= x0 || y1 <= y0; }
};

long long mod(long long a, long long n) { return ((a % n) + n) % n; }

// Bounding box of the nonzero values of f, or the whole grid in periodic mode.
IndexBox support_box(const PlanarGrid& f) {
  const auto n = static_cast<long long>(f.node_count());
  if (f.boundary() == BoundaryMode::periodic) return {0, 0, n, n};
  IndexBox b{n, n, 0, 0};
  for (long long j = 0; j < n; ++j) {
    for (long long i = 0; i < n; ++i) {
      if (f(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) != 0.0) {
        b.x0 = std::min(b.x0, i), b.y0 = std::min(b.y0, j);
        b.x1 = std::max(b.x1, i + 1), b.y1 = std::max(b.y1, j + 1);
      }
    }
  }
  return b;
}

std::vector<Lag> subset_sums(std::span<const Lag> lags) {
  std::vector<Lag> sums(std::size_t{1} << lags.size(), Lag{0, 0});
  for (std::size_t r = 0; r < sums.size(); ++r) {
    for (std::size_t i = 0; i < lags.size(); ++i) {
      if (r >> i & 1u) {
        sums[r][0] += lags[i][0];
        sums[r][1] += lags[i][1];
      }
    }
  }
  return sums;
}

// Nodes x for which every vertex x + s lies in the support box.
IndexBox vertex_region(const IndexBox& support, const std::vector<Lag>& sums) {
  IndexBox b = support;
  for (const Lag& s : sums) {
    b.x0 = std::max(b.x0, support.x0 - s[0]);
    b.y0 = std::max(b.y0, support.y0 - s[1]);
    b.x1 = std::min(b.x1, support.x1 - s[0]);
    b.y1 = std::min(b.y1, support.y1 - s[1]);
  }
  return b;
}

// A weight box reduced to what the engine reads: lags folded mod N in
// periodic mode, entries below the pruning threshold dropped from the lists.
struct SlotTable {
  LagBox box;              // lookup table (folded in periodic mode)
  std::vector<Lag> active;  // lags with non-negligible weight
};

SlotTable make_table(const LagBox& in, bool periodic, long long n, double prune) {
  SlotTable t;
  if (periodic) {
    t.box.x0 = 0, t.box.y0 = 0;
    t.box.width = t.box.height = static_cast<std::size_t>(n);
    t.box.w.assign(static_cast<std::size_t>(n * n), 0.0);
    for (std::size_t iy = 0; iy < in.height; ++iy) {
      for (std::size_t ix = 0; ix < in.width; ++ix) {
        const long long kx = mod(in.x0 + static_cast<long long>(ix), n);
        const long long ky = mod(in.y0 + static_cast<long long>(iy), n);
        t.box.at(kx, ky) += in.w[iy * in.width + ix];
      }
    }
  } else {
    t.box = in;
  }
  const double cut = prune * t.box.max_abs();
  for (std::size_t iy = 0; iy < t.box.height; ++iy) {
    for (std::size_t ix = 0; ix < t.box.width; ++ix) {
      const double v = t.box.w[iy * t.box.width + ix];
      if (v != 0.0 && std::abs(v) > cut) {
        t.active.push_back({t.box.x0 + static_cast<long long>(ix), t.box.y0 + static_cast<long long>(iy)});
      }
    }
  }
  return t;
}

// Column-weighted real part of the last-slot spectrum, scaled so that a dot
// product with |G^|^2 over the half spectrum gives sum_k A_g(k) W(k).
std::vector<double> inner_spectrum(const LagBox& w, std::size_t p, bool periodic, double h) {
  const auto pp = static_cast<long long>(p);
  std::vector<double> grid(p * p, 0.0);
  for (std::size_t iy = 0; iy < w.height; ++iy) {
    const long long ky = w.y0 + static_cast<long long>(iy);
    if (!periodic && (ky <= -pp / 2 || ky >= pp / 2)) continue;
    for (std::size_t ix = 0; ix < w.width; ++ix) {
      const long long kx = w.x0 + static_cast<long long>(ix);
      if (!periodic && (kx <= -pp / 2 || kx >= pp / 2)) continue;
      grid[static_cast<std::size_t>(mod(ky, pp)) * p + static_cast<std::size_t>(mod(kx, pp))] +=
          w.w[iy * w.width + ix];
    }
  }
  const std::size_t hw = fft::half_width(p);
  std::vector<Complex> spec(p * hw);
  fft::r2c(p, grid, spec);
  std::vector<double> out(p * hw);
  const double scale = h * h / static_cast<double>(p * p);
  for (std::size_t q = 0; q < p; ++q) {
    for (std::size_t c = 0; c < hw; ++c) {
      const double col = (c == 0 || 2 * c == p) ? 1.0 : 2.0;
      out[q * hw + c] = col * scale * spec[q * hw + c].real();
    }
  }
  return out;
}

std::size_t transform_size(std::size_t extent) {
  return std::max<std::size_t>(2, next_power_of_two(2 * extent));
}

}  // namespace

double lattice_product_sum(const PlanarGrid& f, std::span<const Lag> lags) {
  const auto n = static_cast<long long>(f.node_count());
  const bool periodic = f.boundary() == BoundaryMode::periodic;
  const auto sums = subset_sums(lags);
  const IndexBox region = periodic ? IndexBox{0, 0, n, n} : vertex_region({0, 0, n, n}, sums);
  if (region.empty()) return 0.0;
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(region.y1 - region.y0));
  std::vector<double> terms(static_cast<std::size_t>(region.x1 - region.x0));
  for (long long y = region.y0; y < region.y1; ++y) {
    for (long long x = region.x0; x < region.x1; ++x) {
      double prod = 1.0;
      for (const Lag& s : sums) {
        const long long xi = periodic ? mod(x + s[0], n) : x + s[0];
        const long long yi = periodic ? mod(y + s[1], n) : y + s[1];
        prod *= f(static_cast<std::size_t>(xi), static_cast<std::size_t>(yi));
        if (prod == 0.0) break;
      }
      terms[static_cast<std::size_t>(x - region.x0)] = prod;
    }
    rows.push_back(pairwise_sum(terms));
  }
  const double h = f.resolution();
  return h * h * pairwise_sum(rows);
}

namespace {

struct Prepared {
  bool periodic = false;
  long long n = 0;
  std::size_t slots = 0;
  IndexBox support;
  std::vector<std::vector<SlotTable>> tables;  // [config][outer slot]
  std::vector<std::vector<Lag>> outer_lags;    // union per outer slot
  std::size_t tuple_count = 1;
  std::size_t max_transform = 2;
};

Prepared prepare(const PlanarGrid& f, const std::vector<FormConfig>& configs,
                 const EngineOptions& options) {
  Prepared p;
  if (configs.empty()) return p;
  p.slots = configs.front().slots.size();
  if (p.slots < 1 || p.slots > 4) throw InvalidArgument("evaluate_forms: need 1 to 4 slots");
  for (const auto& c : configs) {
    if (c.slots.size() != p.slots) throw InvalidArgument("evaluate_forms: slot counts differ");
    for (const auto* s : c.slots) {
      if (s == nullptr) throw InvalidArgument("evaluate_forms: null slot weights");
    }
  }
  p.periodic = f.boundary() == BoundaryMode::periodic;
  p.n = static_cast<long long>(f.node_count());
  p.support = support_box(f);
  const long long ext = std::max(p.support.x1 - p.support.x0, p.support.y1 - p.support.y0);
  p.max_transform = p.periodic ? f.node_count() : transform_size(static_cast<std::size_t>(std::max(1LL, ext)));

  const std::size_t outer = p.slots - 1;
  p.tables.resize(configs.size());
  p.outer_lags.resize(outer);
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (std::size_t i = 0; i < outer; ++i) {
      p.tables[c].push_back(make_table(*configs[c].slots[i], p.periodic, p.n, options.prune));
      for (const Lag& k : p.tables[c].back().active) {
        // Lags longer than the support extent give an empty product.
        if (!p.periodic && (std::abs(k[0]) >= ext || std::abs(k[1]) >= ext)) continue;
        p.outer_lags[i].push_back(k);
      }
    }
  }
  for (auto& lags : p.outer_lags) {
    std::sort(lags.begin(), lags.end());
    lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
    p.tuple_count *= lags.size();
  }
  if (p.support.empty()) p.tuple_count = 0;
  return p;
}

double cost_of(const Prepared& p, std::size_t config_count) {
  const double big = static_cast<double>(p.max_transform);
  const double per_tuple = 2.5 * big * big * std::log2(std::max(2.0, big)) +
                           static_cast<double>(config_count) * big * (big / 2 + 1) * 2.0 +
                           static_cast<double>(std::size_t{1} << p.slots) * big * big / 4.0;
  return static_cast<double>(p.tuple_count) * per_tuple;
}

}  // namespace

double estimate_form_cost(const PlanarGrid& f, const std::vector<FormConfig>& configs,
                          const EngineOptions& options) {
  return cost_of(prepare(f, configs, options), configs.size());
}

std::vector<double> evaluate_forms(const PlanarGrid& f, const std::vector<FormConfig>& configs,
                                   const EngineOptions& options) {
  const Prepared p = prepare(f, configs, options);
  const std::size_t nc = configs.size();
  std::vector<double> result(nc, 0.0);
  if (nc == 0 || p.tuple_count == 0) return result;

  const double cost = cost_of(p, nc);
  if (cost > options.budget) {
    std::ostringstream msg;
    msg << "multilinear form evaluation needs about " << cost << " operations (" << p.tuple_count
        << " outer lag tuples), budget is " << options.budget;
    throw BudgetExceeded(msg.str(), cost, options.budget);
  }

  const double h = f.resolution();
  // Last-slot spectra for every transform size a product grid can need.
  std::vector<std::size_t> sizes;
  if (p.periodic) {
    sizes.push_back(p.max_transform);
  } else {
    for (std::size_t s = 2; s <= p.max_transform; s *= 2) sizes.push_back(s);
  }
  std::vector<std::vector<std::vector<double>>> spectra(nc);  // [config][size index]
  parallel_for(nc, [&](std::size_t c) {
    const LagBox& last = *configs[c].slots.back();
    for (std::size_t s : sizes) spectra[c].push_back(inner_spectrum(last, s, p.periodic, h));
  });
  auto size_index = [&](std::size_t s) {
    return static_cast<std::size_t>(std::find(sizes.begin(), sizes.end(), s) - sizes.begin());
  };

  const std::size_t outer = p.slots - 1;
  constexpr std::size_t kChunk = 4096;
  std::vector<std::vector<double>> chunk_sums(nc);
  std::vector<double> contrib;

  for (std::size_t begin = 0; begin < p.tuple_count; begin += kChunk) {
    const std::size_t end = std::min(p.tuple_count, begin + kChunk);
    contrib.assign((end - begin) * nc, 0.0);
    parallel_for(end - begin, [&](std::size_t local) {
      std::size_t idx = begin + local;
      std::vector<Lag> lags(outer);
      for (std::size_t i = outer; i-- > 0;) {
        lags[i] = p.outer_lags[i][idx % p.outer_lags[i].size()];
        idx /= p.outer_lags[i].size();
      }
      // Outer weight product per configuration.
      std::vector<double> weight(nc, 1.0);
      bool any = false;
      for (std::size_t c = 0; c < nc; ++c) {
        for (std::size_t i = 0; i < outer && weight[c] != 0.0; ++i) {
          const Lag k = p.periodic ? Lag{mod(lags[i][0], p.n), mod(lags[i][1], p.n)} : lags[i];
          weight[c] *= p.tables[c][i].box(k[0], k[1]);
        }
        any = any || weight[c] != 0.0;
      }
      if (!any) return;

      // Product grid F_{n-1}(x; k_1..k_{n-1}) on the region where it can be
      // nonzero, then its tight support.
      const auto sums = subset_sums(lags);
      const IndexBox region = p.periodic ? IndexBox{0, 0, p.n, p.n} : vertex_region(p.support, sums);
      if (region.empty()) return;
      const auto rw = static_cast<std::size_t>(region.x1 - region.x0);
      const auto rh = static_cast<std::size_t>(region.y1 - region.y0);
      thread_local std::vector<double> prod;
      prod.assign(rw * rh, 0.0);
      IndexBox tight{region.x1, region.y1, region.x0, region.y0};
      for (long long y = region.y0; y < region.y1; ++y) {
        for (long long x = region.x0; x < region.x1; ++x) {
          double v = 1.0;
          for (const Lag& s : sums) {
            const long long xi = p.periodic ? mod(x + s[0], p.n) : x + s[0];
            const long long yi = p.periodic ? mod(y + s[1], p.n) : y + s[1];
            v *= f(static_cast<std::size_t>(xi), static_cast<std::size_t>(yi));
            if (v == 0.0) break;
          }
          if (v != 0.0) {
            prod[static_cast<std::size_t>(y - region.y0) * rw + static_cast<std::size_t>(x - region.x0)] = v;
            tight.x0 = std::min(tight.x0, x), tight.y0 = std::min(tight.y0, y);
            tight.x1 = std::max(tight.x1, x + 1), tight.y1 = std::max(tight.y1, y + 1);
          }
        }
      }
      if (tight.empty()) return;

      const std::size_t extent = static_cast<std::size_t>(std::max(tight.x1 - tight.x0, tight.y1 - tight.y0));
      const std::size_t tp = p.periodic ? p.max_transform : transform_size(extent);
      const std::size_t hw = fft::half_width(tp);
      thread_local std::vector<double> buf;
      thread_local std::vector<Complex> spec;
      thread_local std::vector<double> power;
      buf.assign(tp * tp, 0.0);
      spec.resize(tp * hw);
      power.resize(tp * hw);
      for (long long y = tight.y0; y < tight.y1; ++y) {
        for (long long x = tight.x0; x < tight.x1; ++x) {
          const double v =
              prod[static_cast<std::size_t>(y - region.y0) * rw + static_cast<std::size_t>(x - region.x0)];
          const std::size_t bx = p.periodic ? static_cast<std::size_t>(x) : static_cast<std::size_t>(x - tight.x0);
          const std::size_t by = p.periodic ? static_cast<std::size_t>(y) : static_cast<std::size_t>(y - tight.y0);
          buf[by * tp + bx] = v;
        }
      }
      fft::r2c(tp, buf, spec);
      for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(spec[k]);
      const std::size_t si = size_index(tp);
      double* out = &contrib[local * nc];
      for (std::size_t c = 0; c < nc; ++c) {
        if (weight[c] == 0.0) continue;
        const std::vector<double>& s = spectra[c][si];
        double acc = 0.0;
        for (std::size_t k = 0; k < power.size(); ++k) acc += power[k] * s[k];
        out[c] = weight[c] * acc;
      }
    });
    std::vector<double> column(end - begin);
    for (std::size_t c = 0; c < nc; ++c) {
      for (std::size_t l = 0; l < end - begin; ++l) column[l] = contrib[l * nc + c];
      chunk_sums[c].push_back(pairwise_sum(column));
    }
  }
  for (std::size_t c = 0; c < nc; ++c) result[c] = pairwise_sum(chunk_sums[c]);
  return result;
}

}  // namespace hdl
