#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdl/decomposition.hpp"
#include "hdl/planar_set.hpp"
#include "hdl/vec2.hpp"

namespace hdl {

/// An embedded copy of the box graph: vertices base + sum_{k in S} edges[k]
/// over all subsets S, in binary order of S.
struct HypercubeCopy {
  Vec2 base;
  std::vector<Vec2> edges;
  std::vector<double> lengths;  // target |edges[k]|
  std::vector<Vec2> vertices;
  double min_pairwise_gap = 0.0;
  double eta_len = 0.0;
  double eta_gap = 0.0;
};

/// Builds the vertex list and gap of a copy from its base and edges.
HypercubeCopy make_copy(Vec2 base, std::vector<Vec2> edges, std::vector<double> lengths, double eta_len,
                        double eta_gap);

struct SearchSpec {
  double x_step = 0.0;            // 0: grid step for bitmaps, longest side / 256 otherwise
  std::size_t angles = 0;         // directions per edge; 0: 720 for n <= 2, 180 for n = 3
  double eta_len = 0.0;           // 0: x_step
  double eta_gap = 0.0;           // 0: min length / 1000
  double membership_budget = 4e9;  // membership tests before a partial result
  std::size_t resume_from = 0;    // index of the first base point to scan
};

enum class SearchStatus { found, not_found, partial };
std::string to_string(SearchStatus s);

struct SearchResult {
  SearchStatus status = SearchStatus::not_found;
  std::optional<HypercubeCopy> copy;
  std::size_t cursor = 0;       // resume index when partial
  std::size_t base_points = 0;  // size of the base scan
  double membership_tests = 0.0;
  SearchSpec resolved;  // the spec with defaults filled in
};

/// Scans base points on a lattice over the bounds of A (x-major, then y),
/// then directions theta_1, ..., theta_n in increasing order, and returns the
/// first copy whose vertices all lie in A with pairwise gaps >= eta_gap. The
/// scan is exhaustive only at its resolution: not_found is no proof that A
/// avoids the configuration.
SearchResult find_copy(const PlanarSet& a, const std::vector<double>& lengths, const SearchSpec& spec = {});

/// Re-checks vertex membership, consistency with base and edges, edge
/// lengths within eta_len and pairwise gaps against eta_gap.
bool verify_copy(const PlanarSet& a, const HypercubeCopy& c);

struct DensityEstimate {
  std::vector<double> sides;
  std::vector<double> per_side;  // best window density for each side
  double value = 0.0;            // max over sides
};

/// Best density of A over translated windows x + [0, R]^d for each R, with
/// translates on a lattice of `cells` steps across the bounds of A. A lower
/// estimate of the upper Banach density.
DensityEstimate estimate_banach_density(const PlanarSet& a, const std::vector<double>& sides,
                                        std::size_t cells = 512);

struct PigeonholeSettings {
  int n = 1;
  double delta = 0.5;
  double epsilon = 0.5;
  int J = 3;
  DecompositionConstants constants;
  double c_J = 1.0;
  std::size_t quadrature_nodes = 256;
  double budget = 2e12;
  SearchSpec search;
  std::size_t samples = 5;
};

struct LadderRow {
  int j = 0;
  double lambda = 0.0;
  double n_zero = 0.0;
  double structured = 0.0;  // N^1
  double error = 0.0;       // N^eps - N^1
  double uniform = 0.0;     // N^0 - N^eps
  bool within_pigeon_bound = false;
};

struct Witness {
  double lambda = 0.0;
  SearchStatus status = SearchStatus::not_found;
  std::optional<HypercubeCopy> copy;
  bool verified = false;
};

struct IntervalResult {
  int j = 0;
  double lo = 0.0;  // I_j = [lo, hi)
  double hi = 0.0;
  double length = 0.0;
  int J = 0;
  double delta = 0.0;
  int n = 1;
  double epsilon = 0.0;
  std::vector<LadderRow> ladder;
  double pigeon_bound = 0.0;  // C_err eps^{-3n} log(1/eps) R^2 / J
  std::string selected_by;    // "pigeon_bound" or "argmin"
  int argmin_j = 0;
  std::vector<Witness> witnesses;
  bool witness_not_found_at_resolution = false;
  // Constraint checks on (eps, J) against the constants.
  double structured_floor = 0.0;  // (c_str / 3) delta^{2^n}
  bool epsilon_admissible = false;  // C_uni eps^{1/2} < (c_str / 3) delta^{2^n}
  bool J_admissible = false;        // C_err eps^{-3n} log(1/eps) / J < (c_str / 3) delta^{2^n}
  double log2_J_theory = 0.0;  // smallest admissible J at the largest admissible eps
  double log2_J_bound = 0.0;   // log2(c_J delta^{-(3n+1) 2^{n+1}})
  bool J_within_bound = false;       // configured J
  bool J_theory_within_bound = false;
};

/// Scale ladder lambda_j = 2^{-2j + 1/2} in I_j = [2^{-2j}, 2^{-2j+1}),
/// j = 1..J, on a bitmap over [0, 1]^2. Selects the first j whose error part
/// is within the pigeonhole bound (the argmin when none is) and searches for
/// copies at `samples` evenly spaced lambda in I_j.
IntervalResult pigeonhole_interval(const PlanarGrid& a, const PigeonholeSettings& s);

/// log2 of the smallest J meeting the error constraint, with eps the largest
/// value meeting the uniform constraint (halved, capped at 1/2).
double log2_J_theory(int n, double delta, const DecompositionConstants& c);

struct ScanRow {
  double lambda = 0.0;
  SearchStatus status = SearchStatus::not_found;
  std::optional<HypercubeCopy> copy;
};

struct ScanTable {
  int n = 1;
  std::vector<ScanRow> rows;
  std::optional<double> lambda0;  // smallest scanned lambda from which every row is found
};

/// Searches at `steps` evenly spaced lambda in [lambda_min, lambda_max].
/// Edge k has length lambda * ratios[k] (all ones when empty).
ScanTable scale_scan(const PlanarSet& a, double lambda_min, double lambda_max, std::size_t steps, int n,
                     const SearchSpec& spec = {}, const std::vector<double>& ratios = {});

nlohmann::json to_json(const HypercubeCopy& c);
HypercubeCopy copy_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SearchResult& r);
nlohmann::json to_json(const IntervalResult& r);
nlohmann::json to_json(const ScanTable& t);
std::string to_csv(const ScanTable& t);

}  // namespace hdl
