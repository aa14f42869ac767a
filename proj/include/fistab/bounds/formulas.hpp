#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fistab/error.hpp"

namespace fistab::bounds {

using json = nlohmann::json;
using Int = std::int64_t;

struct Bound {
  std::string name;
  Int value = 0;
  std::string formula;
};

struct BoundsReport {
  std::vector<Bound> entries;

  BoundsReport& add(std::string name, Int value, std::string formula) {
    entries.push_back({std::move(name), value, std::move(formula)});
    return *this;
  }
  std::optional<Int> find(const std::string& name) const {
    for (const auto& b : entries)
      if (b.name == name) return b.value;
    return std::nullopt;
  }
  Int at(const std::string& name) const {
    auto v = find(name);
    if (!v) throw InputError("no bound named " + name);
    return *v;
  }
};

inline json to_json(const BoundsReport& r) {
  json out = json::object(), formulas = json::object();
  for (const auto& b : r.entries) {
    out[b.name] = b.value;
    formulas[b.name] = b.formula;
  }
  out["formulas"] = formulas;
  return out;
}

inline void require_at_least(Int v, Int lo, const char* what) {
  if (v < lo) throw InputError(std::string(what) + " must be >= " + std::to_string(lo));
}

enum class StarMode { from_delta_hmax, from_t0_t1 };

inline BoundsReport star_bounds(StarMode mode, Int a, Int b) {
  require_at_least(a, -1, "a");
  require_at_least(b, -1, "b");
  BoundsReport r;
  if (mode == StarMode::from_delta_hmax) {
    r.add("t0", a + b + 1, "delta + hmax + 1");
    r.add("t1", a + 2 * b + 2, "delta + 2*hmax + 2");
  } else {
    r.add("delta", a, "t0");
    r.add("hmax", a + std::max(a, b) - 1, "t0 + max(t0, t1) - 1");
  }
  return r;
}

// h^i for i = 0..max(delta + 2, 2); every index beyond is negative as well.
inline BoundsReport local_cohomology_bounds(Int t0, Int t1, Int delta) {
  require_at_least(t0, -1, "t0");
  require_at_least(t1, -1, "t1");
  require_at_least(delta, -1, "delta");
  BoundsReport r;
  r.add("h0", std::min(t0, t1) + t1 - 1, "min(t0, t1) + t1 - 1");
  r.add("h1", delta + t0 - 1, "delta + t0 - 1");
  for (Int i = 2; i <= std::max<Int>(delta + 2, 2); ++i)
    r.add("h" + std::to_string(i), 2 * delta - 2 * (i - 1), "2*delta - 2*(i - 1)");
  return r;
}

inline BoundsReport kercoker_bounds(Int deltaA, Int hA, Int deltaB, Int hB) {
  for (Int v : {deltaA, hA, deltaB, hB}) require_at_least(v, -1, "invariant");
  const Int h = std::max({2 * deltaA - 2, hA, hB});
  BoundsReport r;
  r.add("delta_ker", deltaA, "delta(A)");
  r.add("delta_coker", deltaB, "delta(B)");
  r.add("hmax_ker", h, "max(2*delta(A) - 2, hmax(A), hmax(B))");
  r.add("hmax_coker", h, "max(2*delta(A) - 2, hmax(A), hmax(B))");
  return r;
}

// A first-quadrant spectral sequence from page d on: D[l] bounds the stable
// degree and eta[l] the local degree of every E_d^{p,q} with p + q = l.
struct SpectralInput {
  Int d = 2;
  std::vector<Int> D, eta;
};

inline BoundsReport typeA_propagate(const SpectralInput& S, Int k) {
  if (S.d < 0) throw InputError("page d must be >= 0");
  if (k < 0) throw InputError("k must be >= 0");
  for (Int v : S.D) require_at_least(v, -1, "D_l");
  for (Int v : S.eta) require_at_least(v, -1, "eta_l");
  const Int s = std::max(k + 2, S.d);
  const Int eta_top = k + s - S.d, D_top = 2 * k - S.d + 1;
  auto need = [](const std::vector<Int>& v, Int top, const char* what) {
    if (top >= static_cast<Int>(v.size()))
      throw InputError(std::string("missing diagonal: ") + what + " needed up to l=" + std::to_string(top) +
                       ", got " + std::to_string(v.size()) + " values");
  };
  need(S.D, std::max(k, D_top), "D");
  need(S.eta, eta_top, "eta");
  Int h = -1;  // an empty range contributes nothing
  for (Int l = 0; l <= eta_top; ++l) h = std::max(h, S.eta[l]);
  for (Int l = 0; l <= D_top; ++l) h = std::max(h, 2 * S.D[l] - 2);
  BoundsReport r;
  r.add("delta", S.D[k], "D_k");
  r.add("hmax", h, "max(max_{l <= k+s-d} eta_l, max_{l <= 2k-d+1} (2*D_l - 2)), s = max(k+2, d)");
  return r;
}

inline BoundsReport typeA_semiinduced(Int mu, Int d, Int k) {
  require_at_least(mu, 0, "mu");
  require_at_least(d, 1, "d");
  require_at_least(k, 0, "k");
  const Int mk = mu * k;
  BoundsReport r;
  r.add("delta", mk, "mu*k");
  r.add("hmax", std::max<Int>(-1, 4 * mk - 2 * mu * (d - 1) - 2), "max(-1, 4*mu*k - 2*mu*(d-1) - 2)");
  r.add("t0", std::max(mk, 5 * mk - 2 * mu * (d - 1) - 1), "max(mu*k, 5*mu*k - 2*mu*(d-1) - 1)");
  r.add("t1", std::max(mk, 9 * mk - 4 * mu * (d - 1) - 2), "max(mu*k, 9*mu*k - 4*mu*(d-1) - 2)");
  return r;
}

// Cohomology of ordered configuration spaces of a connected manifold.
inline BoundsReport config_bounds(Int dim, bool orientable, bool two_vector_fields, Int k) {
  require_at_least(dim, 2, "dim");
  require_at_least(k, 0, "k");
  const Int mu = dim == 2 ? 2 : 1, lambda = orientable ? 1 : 0, mk = mu * k;
  BoundsReport r;
  r.add("delta", mk, "mu*k");
  if (two_vector_fields) {
    r.add("hmax", 0, "0");
    r.add("t0", mk + 1, "mu*k + 1");
    r.add("t1", mk + 2, "mu*k + 2");
  } else {
    r.add("hmax", std::max<Int>(-1, 4 * mk - 2 * mu * lambda - 2), "max(-1, 4*mu*k - 2*mu*lambda - 2)");
    r.add("t0", std::max(mk, 5 * mk - 2 * mu * lambda - 1), "max(mu*k, 5*mu*k - 2*mu*lambda - 1)");
    r.add("t1", std::max(mk, 9 * mk - 4 * mu * lambda - 2), "max(mu*k, 9*mu*k - 4*mu*lambda - 2)");
  }
  return r;
}

// Homology of a complex whose k-th hyper-homology has top degree <= a*k + b.
inline BoundsReport typeB_growth(Int a, Int b, Int k) {
  require_at_least(a, 0, "a");
  require_at_least(b, 0, "b");
  require_at_least(k, 0, "k");
  BoundsReport r;
  r.add("delta", a * k + b, "a*k + b");
  r.add("hmax", a * k * k + 2 * (a + b) * k + a + 2 * b, "a*k^2 + 2(a+b)k + a + 2b");
  r.add("t0", a * k * k + (3 * a + 2 * b) * k + a + 3 * b + 1, "a*k^2 + (3a+2b)k + a + 3b + 1");
  r.add("t1", 2 * a * k * k + (5 * a + 4 * b) * k + 2 * a + 5 * b + 2, "2a*k^2 + (5a+4b)k + 2a + 5b + 2");
  return r;
}

// One step of the local-degree recursion: prev_h is the max over q < k.
inline Int typeB_step(Int t_k, Int t_k1, Int prev_h) { return prev_h + std::max(t_k, t_k1) + t_k; }

inline BoundsReport congruence_bounds(Int d, Int k) {
  require_at_least(d, 0, "d");
  require_at_least(k, 0, "k");
  BoundsReport r;
  r.add("delta", 2 * k + d, "2k + d");
  r.add("hmax", 2 * k * k + 2 * (d + 2) * k + 2 * (d + 1), "2k^2 + 2(d+2)k + 2(d+1)");
  r.add("t0", 2 * k * k + (2 * d + 6) * k + 3 * (d + 1), "2k^2 + (2d+6)k + 3(d+1)");
  r.add("t1", 4 * k * k + (4 * d + 10) * k + 5 * d + 6, "4k^2 + (4d+10)k + 5d + 6");
  return r;
}

}  // namespace fistab::bounds
