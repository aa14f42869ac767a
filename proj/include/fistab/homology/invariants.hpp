#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fistab/combinatorics.hpp"
#include "fistab/fi/functors.hpp"
#include "fistab/homology/koszul.hpp"

namespace fistab::homology {

using json = nlohmann::json;

// Two independent estimates of the stable degree on a finite window:
//  (a) the least n with Delta^{n+1} M observed-torsion;
//  (b) the value at which t0(Sigma^s M) settles, over shifts whose window
//      still extends past the observed generation degree.
// Certified when both exist, agree, and (b) has held for at least two shifts.
struct StableDegree {
  Degree value = -1;
  bool certified = false;
  std::optional<Degree> via_derivative;
  std::optional<Degree> via_shift;
  int plateau = 0;
  std::vector<Degree> shift_t0;  // t0(Sigma^s M) over the feasible prefix
};

inline StableDegree stable_degree(const TruncatedFIModule& M) {
  StableDegree r;
  const int N = M.width();
  TruncatedFIModule D = M;
  for (int j = 0; j <= N; ++j) {
    if (j > 0) D = fi::derivative(D, 1);
    if (D.dim(D.width()) == 0) {  // observed-torsion: everything dies by the top degree
      r.via_derivative = j - 1;
      break;
    }
  }
  TruncatedFIModule S = M;
  for (int s = 0; s <= N; ++s) {
    if (s > 0) S = fi::shift_once(S);
    const Degree t = generation_degree(S);
    if (t >= N - s && t >= 0) break;  // the top degree still generates: not informative
    r.shift_t0.push_back(t);
  }
  if (!r.shift_t0.empty()) {
    r.via_shift = r.shift_t0.back();
    for (auto it = r.shift_t0.rbegin(); it != r.shift_t0.rend() && *it == r.shift_t0.back(); ++it) ++r.plateau;
  }
  r.value = r.via_derivative ? *r.via_derivative : (r.via_shift ? *r.via_shift : N);
  r.certified = r.via_derivative && r.via_shift && *r.via_derivative == *r.via_shift && r.plateau >= 2;
  return r;
}

// h^max(M) = (least s with Sigma^s M semi-induced) - 1. Certified when the
// witnessing shift still has width >= delta + 1 and delta itself is certified.
struct LocalDegree {
  Degree value = -1;
  bool certified = false;
  int witness_shift = 0;
  int remaining_width = 0;
  std::optional<std::pair<int, int>> last_failure;  // (i, n) of the shift just below
};

inline LocalDegree local_degree(const TruncatedFIModule& M, const StableDegree& delta) {
  LocalDegree r;
  TruncatedFIModule S = M;
  for (int s = 0; s <= M.width(); ++s) {
    if (s > 0) S = fi::shift_once(S);
    auto si = is_semi_induced_window(S);
    if (si.semi_induced) {
      r.value = s - 1;
      r.witness_shift = s;
      r.remaining_width = S.width();
      r.certified = delta.certified && S.width() >= delta.value + 1;
      return r;
    }
    r.last_failure = si.first_failure;
  }
  throw WindowExhausted("no shift within the window is semi-induced");
}

struct PolynomialFit {
  std::vector<std::int64_t> coeffs;  // in the basis C(n, 0), C(n, 1), ...
  Degree degree = -1;
  int onset = 0;  // least n from which dims agree with the polynomial
  bool certified = false;

  std::int64_t eval(std::int64_t n) const {
    std::int64_t v = 0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) v += coeffs[j] * comb::binomial_signed(n, static_cast<std::int64_t>(j));
    return v;
  }
};

// Interpolates through the top delta+1 dimensions of the window.
inline PolynomialFit polynomial_fit(const TruncatedFIModule& M, Degree delta, Degree hmax, bool certified) {
  const int N = M.width();
  PolynomialFit f;
  f.certified = certified;
  if (delta >= 0) {
    const int n0 = N - delta;
    if (n0 < 0) throw WindowExhausted("window too short to interpolate degree " + std::to_string(delta));
    std::vector<std::int64_t> diff;
    for (int n = n0; n <= N; ++n) diff.push_back(static_cast<std::int64_t>(M.dim(n)));
    std::vector<std::int64_t> newton;  // forward differences at n0
    for (int j = 0; j <= delta; ++j) {
      newton.push_back(diff[0]);
      for (std::size_t k = 0; k + 1 < diff.size(); ++k) diff[k] = diff[k + 1] - diff[k];
      diff.pop_back();
    }
    // C(n - n0, j) = sum_i C(n, i) C(-n0, j - i)
    f.coeffs.assign(delta + 1, 0);
    for (int j = 0; j <= delta; ++j)
      for (int i = 0; i <= j; ++i) f.coeffs[i] += newton[j] * comb::binomial_signed(-n0, j - i);
    while (!f.coeffs.empty() && f.coeffs.back() == 0) f.coeffs.pop_back();
  }
  f.degree = static_cast<Degree>(f.coeffs.size()) - 1;
  f.onset = N + 1;
  for (int n = N; n >= 0 && f.eval(n) == static_cast<std::int64_t>(M.dim(n)); --n) f.onset = n;
  if (f.onset > hmax + 1)
    throw NoFit("dimensions disagree with the degree-" + std::to_string(delta) + " polynomial at n=" +
                std::to_string(f.onset - 1) + " > h^max + 1 = " + std::to_string(hmax + 1));
  return f;
}

struct InvariantReport {
  Degree t0 = -1, t1 = -1;
  StableDegree delta;
  LocalDegree hmax;
  bool certified = false;
  int trust_range = 0;
  HomologyTable tables;
};

inline InvariantReport invariants(const TruncatedFIModule& M, int i_max = 1) {
  InvariantReport r;
  r.tables = fi_homology_table(M, std::max(i_max, 1));
  auto pd = presentation_degrees(M, &r.tables);
  r.t0 = pd.t0;
  r.t1 = pd.t1;
  r.delta = stable_degree(M);
  r.hmax = local_degree(M, r.delta);
  r.certified = r.delta.certified && r.hmax.certified;
  r.trust_range = M.width();
  return r;
}

inline json to_json(const HomologyTable& t) {
  json rows = json::array();
  for (const auto& row : t.dims) rows.push_back(row);
  return rows;
}

inline json to_json(const InvariantReport& r) {
  auto opt = [](const std::optional<Degree>& d) { return d ? json(*d) : json(nullptr); };
  return {{"t0", r.t0},
          {"t1", r.t1},
          {"delta", r.delta.value},
          {"hmax", r.hmax.value},
          {"certified", r.certified},
          {"trust_range", r.trust_range},
          {"tables", to_json(r.tables)},
          {"details",
           {{"delta_certified", r.delta.certified},
            {"delta_via_derivative", opt(r.delta.via_derivative)},
            {"delta_via_shift", opt(r.delta.via_shift)},
            {"delta_plateau", r.delta.plateau},
            {"hmax_certified", r.hmax.certified},
            {"hmax_witness_shift", r.hmax.witness_shift},
            {"hmax_remaining_width", r.hmax.remaining_width}}}};
}

}  // namespace fistab::homology
