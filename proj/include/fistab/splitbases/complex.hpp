#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fistab/error.hpp"
#include "fistab/exactlin/smith.hpp"
#include "fistab/exactlin/sparse.hpp"
#include "fistab/splitbases/group.hpp"

namespace fistab::splitbases {

using json = nlohmann::json;

// A simplicial complex given by its maximal simplices. Vertex labels are
// opaque JSON values; simplices are sorted tuples of vertex indices.
struct SimplicialComplex {
  std::vector<json> labels;
  std::vector<std::vector<std::uint32_t>> maximal;

  std::size_t vertices() const { return labels.size(); }
  int dim() const {
    int d = -1;
    for (const auto& s : maximal) d = std::max(d, static_cast<int>(s.size()) - 1);
    return d;
  }

  // Sorts each simplex and the list, dropping duplicates. Listing a face of
  // another simplex is harmless: faces are always derived by closure.
  void canonicalize() {
    for (auto& s : maximal) {
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw InputError("simplex repeats a vertex");
      for (auto v : s)
        if (v >= labels.size()) throw InputError("simplex refers to vertex " + std::to_string(v) + " out of range");
    }
    std::sort(maximal.begin(), maximal.end());
    maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());
  }
};

inline json to_json(const SimplicialComplex& X) {
  return {{"kind", "simplicial"}, {"vertices", X.labels}, {"maximal", X.maximal}};
}

inline SimplicialComplex complex_from_json(const json& j) {
  if (!j.is_object() || j.value("kind", "") != "simplicial") throw InputError("expected kind \"simplicial\"");
  if (!j.contains("vertices") || !j["vertices"].is_array()) throw InputError("missing vertex list");
  if (!j.contains("maximal") || !j["maximal"].is_array()) throw InputError("missing maximal simplices");
  SimplicialComplex X;
  for (const auto& v : j["vertices"]) X.labels.push_back(v);
  for (const auto& s : j["maximal"]) {
    if (!s.is_array() || s.empty()) throw InputError("maximal simplices must be non-empty index lists");
    std::vector<std::uint32_t> t;
    for (const auto& v : s) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw InputError("vertex index must be a non-negative integer");
      t.push_back(v.get<std::uint32_t>());
    }
    X.maximal.push_back(std::move(t));
  }
  X.canonicalize();
  return X;
}

// All faces of dimension <= max_dim, each level sorted. A face is packed into
// one 64-bit key, `bits` per vertex.
class FaceTable {
 public:
  FaceTable(const SimplicialComplex& X, int max_dim) {
    const std::size_t V = std::max<std::size_t>(X.vertices(), 2);
    bits_ = static_cast<int>(std::ceil(std::log2(static_cast<double>(V))));
    top_ = std::min(max_dim, X.dim());
    if (top_ >= 0 && bits_ * (top_ + 1) > 64)
      throw FeasibilityError("faces of dimension " + std::to_string(top_) + " on " + std::to_string(X.vertices()) +
                             " vertices do not fit the packed representation");
    levels_.resize(top_ + 1);
    for (int k = 0; k <= top_; ++k) {
      double raw = 0;
      for (const auto& s : X.maximal)
        if (static_cast<int>(s.size()) > k) raw += static_cast<double>(comb::binomial(s.size(), k + 1));
      if (raw > static_cast<double>(max_cells()) * 8)
        throw FeasibilityError("enumerating " + std::to_string(static_cast<long long>(raw)) + " faces of dimension " +
                               std::to_string(k) + " exceeds the face guard of " + max_cells_text());
      auto& L = levels_[k];
      L.reserve(static_cast<std::size_t>(raw));
      for (const auto& s : X.maximal) {
        const int sz = static_cast<int>(s.size());
        if (sz <= k) continue;
        // k+1 subsets of s via index combinations
        std::vector<int> idx(k + 1);
        for (int i = 0; i <= k; ++i) idx[i] = i;
        while (true) {
          std::uint64_t key = 0;
          for (int i = 0; i <= k; ++i) key = (key << bits_) | s[idx[i]];
          L.push_back(key);
          int i = k;
          while (i >= 0 && idx[i] == sz - k - 1 + i) --i;
          if (i < 0) break;
          ++idx[i];
          for (int t = i + 1; t <= k; ++t) idx[t] = idx[t - 1] + 1;
        }
      }
      std::sort(L.begin(), L.end());
      L.erase(std::unique(L.begin(), L.end()), L.end());
      L.shrink_to_fit();
      if (L.size() > max_cells())
        throw FeasibilityError(std::to_string(L.size()) + " faces of dimension " + std::to_string(k) +
                               " exceed the face guard of " + max_cells_text());
    }
  }

  int top() const { return top_; }
  std::size_t count(int k) const { return k < 0 ? 1 : (k <= top_ ? levels_[k].size() : 0); }
  std::vector<std::size_t> f_vector() const {
    std::vector<std::size_t> f;
    for (int k = 0; k <= top_; ++k) f.push_back(levels_[k].size());
    return f;
  }
  std::uint64_t key(int k, std::size_t i) const { return levels_[k][i]; }
  std::vector<std::uint32_t> vertices(int k, std::size_t i) const {
    std::vector<std::uint32_t> v(k + 1);
    std::uint64_t x = levels_[k][i];
    const std::uint64_t mask = (std::uint64_t{1} << bits_) - 1;
    for (int t = k; t >= 0; --t) {
      v[t] = static_cast<std::uint32_t>(x & mask);
      x >>= bits_;
    }
    return v;
  }
  std::uint64_t pack(const std::vector<std::uint32_t>& s) const {
    std::uint64_t key = 0;
    for (auto v : s) key = (key << bits_) | v;
    return key;
  }
  // Index of the face with the given sorted vertices, or -1.
  std::int64_t find(const std::vector<std::uint32_t>& s) const {
    const int k = static_cast<int>(s.size()) - 1;
    if (k < 0 || k > top_) return -1;
    const auto& L = levels_[k];
    const std::uint64_t key = pack(s);
    auto it = std::lower_bound(L.begin(), L.end(), key);
    return it != L.end() && *it == key ? it - L.begin() : -1;
  }

  // Boundary C_k -> C_{k-1} with coefficients in F_p; k = 0 is the augmentation.
  exactlin::SparseMatrixFp boundary(int k, std::uint32_t p) const {
    exactlin::SparseMatrixFp d(count(k - 1), count(k), p);
    if (k == 0) {
      for (std::size_t c = 0; c < count(0); ++c) d.set_column(c, {{0u, 1u % p}});
      return d;
    }
    const auto& below = levels_[k - 1];
    for (std::size_t c = 0; c < count(k); ++c) {
      const std::uint64_t x = levels_[k][c];
      exactlin::SparseMatrixFp::Column col;
      for (int i = 0; i <= k; ++i) {
        // drop the i-th vertex (from the left): bits of slot k - i
        const int shift = bits_ * (k - i);
        const std::uint64_t high = shift + bits_ >= 64 ? 0 : x >> (shift + bits_);
        const std::uint64_t low = x & ((std::uint64_t{1} << shift) - 1);
        const std::uint64_t face = (high << shift) | low;
        auto it = std::lower_bound(below.begin(), below.end(), face);
        if (it == below.end() || *it != face) throw ConsistencyError("face table is not closed");
        col.emplace_back(static_cast<std::uint32_t>(it - below.begin()), i % 2 ? p - 1 : 1u % p);
      }
      d.set_column(c, exactlin::SparseMatrixFp::make_column(std::move(col), p));
    }
    return d;
  }

  exactlin::IntMatrix integer_boundary(int k) const {
    const std::size_t rows = count(k - 1), cols = count(k);
    if (static_cast<double>(rows) * static_cast<double>(cols) > static_cast<double>(std::size_t{1} << 24))
      throw FeasibilityError("integral boundary matrix of size " + std::to_string(rows) + "x" + std::to_string(cols) +
                             " is too large for dense Smith normal form");
    exactlin::IntMatrix m(rows, cols);
    // reuse the F_3 pattern: entries are +-1, and -1 = 2 mod 3
    const auto d = boundary(k, 3);
    for (std::size_t c = 0; c < cols; ++c)
      for (const auto& [r, v] : d.column(c)) m(r, c) = v == 1 ? 1 : -1;
    return m;
  }

 private:
  int bits_ = 1;
  int top_ = -1;
  std::vector<std::vector<std::uint64_t>> levels_;
};

struct ReducedHomology {
  std::vector<std::size_t> f_vector;          // faces of dimension 0..top
  std::vector<std::size_t> betti;             // reduced, index k + 1 for k = -1..kmax
  std::vector<std::vector<std::string>> torsion;  // over Z: invariant factors > 1, same indexing
  bool integral = false;

  std::size_t at(int k) const { return k + 1 < static_cast<int>(betti.size()) ? betti[k + 1] : 0; }
};

// Reduced homology over F_p in degrees -1..kmax. Ranks are computed from the
// top down so that pivots of d_{k+1} clear columns of d_k.
inline ReducedHomology reduced_homology_fp(const SimplicialComplex& X, std::uint32_t p, int kmax) {
  if (!exactlin::is_prime(p)) throw InputError("modulus must be prime");
  const int top = std::min(kmax + 1, X.dim());
  FaceTable F(X, top);
  ReducedHomology H;
  H.f_vector = F.f_vector();
  std::vector<std::size_t> rank(top + 2, 0);  // rank[k] = rank d_k, k = 0..top
  std::vector<char> skip;
  for (int k = top; k >= 0; --k) {
    const auto d = F.boundary(k, p);
    std::vector<std::uint32_t> pivots;
    rank[k] = exactlin::rank_and_kernel(d, false, skip.empty() ? nullptr : &skip, &pivots).rank;
    skip.assign(F.count(k - 1), 0);
    for (auto r : pivots) skip[r] = 1;
  }
  for (int k = -1; k <= kmax; ++k) {
    const std::size_t below = k >= 0 && k <= top ? rank[k] : 0;
    const std::size_t above = k + 1 <= top ? rank[k + 1] : 0;
    H.betti.push_back(F.count(k) - below - above);
  }
  return H;
}

// Reduced homology over Z: ranks and torsion from Smith normal forms.
inline ReducedHomology reduced_homology_z(const SimplicialComplex& X, int kmax) {
  const int top = std::min(kmax + 1, X.dim());
  FaceTable F(X, top);
  ReducedHomology H;
  H.integral = true;
  H.f_vector = F.f_vector();
  std::vector<std::vector<exactlin::BigInt>> inv(top + 2);
  std::vector<std::size_t> rank(top + 2, 0);
  for (int k = 0; k <= top; ++k) {
    inv[k] = exactlin::smith_normal_form(F.integer_boundary(k));
    rank[k] = inv[k].size();
  }
  for (int k = -1; k <= kmax; ++k) {
    const std::size_t below = k >= 0 && k <= top ? rank[k] : 0;
    const std::size_t above = k + 1 <= top ? rank[k + 1] : 0;
    H.betti.push_back(F.count(k) - below - above);
    std::vector<std::string> t;
    if (k + 1 <= top)
      for (const auto& d : inv[k + 1])
        if (d > 1) t.push_back(d.str());
    H.torsion.push_back(std::move(t));
  }
  return H;
}

inline json to_json(const ReducedHomology& H) {
  json betti = json::object();
  for (std::size_t i = 0; i < H.betti.size(); ++i) betti[std::to_string(static_cast<int>(i) - 1)] = H.betti[i];
  json out{{"f_vector", H.f_vector}, {"betti", betti}};
  if (H.integral) {
    json tor = json::object();
    for (std::size_t i = 0; i < H.torsion.size(); ++i) tor[std::to_string(static_cast<int>(i) - 1)] = H.torsion[i];
    out["torsion"] = tor;
  }
  return out;
}

}  // namespace fistab::splitbases
