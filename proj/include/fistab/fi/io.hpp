#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fistab/error.hpp"
#include "fistab/exactlin/field.hpp"
#include "fistab/fi/module.hpp"

namespace fistab::fi {

using json = nlohmann::json;

inline json encode_matrix(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline DenseMatrix decode_matrix(const json& j, std::size_t rows, std::size_t cols, std::uint32_t p, int n,
                                 const std::string& what) {
  if (!j.is_array()) throw InputError(what + " at n=" + std::to_string(n) + " is not an array");
  if (j.size() != rows)
    throw DimensionMismatch(n, what + " has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
  exactlin::PrimeField f(p);
  DenseMatrix m(rows, cols, p);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != cols)
      throw DimensionMismatch(n, what + " row " + std::to_string(r) + " does not have " + std::to_string(cols) +
                                     " entries");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number_integer()) throw InputError(what + " at n=" + std::to_string(n) + " has a non-integer");
      m(r, c) = f.reduce(row[c].get<std::int64_t>());
    }
  }
  return m;
}

inline json encode(const TruncatedFIModule& M) {
  json levels = json::array();
  for (int n = 0; n <= M.width(); ++n) {
    json t = json::array();
    for (const auto& a : M.transpositions(n)) t.push_back(encode_matrix(a));
    levels.push_back({{"n", n},
                      {"dim", M.dim(n)},
                      {"transpositions", t},
                      {"inclusion", n ? encode_matrix(M.inclusion(n)) : json(nullptr)}});
  }
  return {{"kind", "fi_module"}, {"p", M.p()}, {"N", M.width()}, {"levels", levels}};
}

inline std::uint32_t decode_modulus(const json& j) {
  if (!j.contains("p") || !j["p"].is_number_integer()) throw InputError("missing modulus p");
  const auto p = j["p"].get<std::int64_t>();
  if (p < 2 || p >= (1LL << 31) || !exactlin::is_prime(static_cast<std::uint64_t>(p)))
    throw InputError("modulus must be prime");
  return static_cast<std::uint32_t>(p);
}

inline TruncatedFIModule decode_fi_module(const json& j) {
  if (!j.is_object() || j.value("kind", "") != "fi_module") throw InputError("expected kind \"fi_module\"");
  const std::uint32_t p = decode_modulus(j);
  if (!j.contains("N") || !j["N"].is_number_integer() || j["N"].get<int>() < 0) throw InputError("missing width N");
  const int N = j["N"].get<int>();
  const auto& levels = j.at("levels");
  if (!levels.is_array() || levels.size() != static_cast<std::size_t>(N + 1))
    throw InputError("expected " + std::to_string(N + 1) + " levels");
  TruncatedFIModule M(p, N);
  for (int n = 0; n <= N; ++n) {
    const auto& L = levels[n];
    if (L.value("n", -1) != n) throw InputError("level " + std::to_string(n) + " is out of order");
    const auto d = L.at("dim").get<std::int64_t>();
    if (d < 0) throw DimensionMismatch(n, "negative dimension");
    const auto dim = static_cast<std::size_t>(d);
    const auto& tj = L.at("transpositions");
    if (!tj.is_array() || tj.size() != static_cast<std::size_t>(n ? n - 1 : 0))
      throw DimensionMismatch(n, "expected " + std::to_string(n ? n - 1 : 0) + " transpositions");
    std::vector<DenseMatrix> t;
    for (std::size_t i = 0; i < tj.size(); ++i)
      t.push_back(decode_matrix(tj[i], dim, dim, p, n, "transposition " + std::to_string(i)));
    DenseMatrix phi(dim, 0, p);
    if (n > 0) {
      if (L.at("inclusion").is_null()) throw DimensionMismatch(n, "inclusion is null");
      phi = decode_matrix(L["inclusion"], dim, M.dim(n - 1), p, n, "inclusion");
    }
    M.set_level(n, dim, std::move(t), std::move(phi));
  }
  return M;
}

inline json encode(const FIComplexWindow& C) {
  json mods = json::array(), diffs = json::array();
  for (const auto& m : C.modules) mods.push_back(encode(m));
  for (const auto& d : C.differentials) {
    json levels = json::array();
    for (const auto& m : d) levels.push_back(encode_matrix(m));
    diffs.push_back(levels);
  }
  return {{"kind", "fi_complex"}, {"jmin", C.jmin}, {"jmax", C.jmax}, {"modules", mods}, {"differentials", diffs}};
}

inline FIComplexWindow decode_fi_complex(const json& j) {
  if (!j.is_object() || j.value("kind", "") != "fi_complex") throw InputError("expected kind \"fi_complex\"");
  FIComplexWindow C;
  C.jmin = j.at("jmin").get<int>();
  C.jmax = j.at("jmax").get<int>();
  if (C.jmax < C.jmin) throw InputError("jmax < jmin");
  for (const auto& m : j.at("modules")) C.modules.push_back(decode_fi_module(m));
  if (C.modules.size() != static_cast<std::size_t>(C.jmax - C.jmin + 1))
    throw InputError("expected " + std::to_string(C.jmax - C.jmin + 1) + " modules");
  const auto& diffs = j.at("differentials");
  if (!diffs.is_array() || diffs.size() != static_cast<std::size_t>(C.jmax - C.jmin))
    throw InputError("expected " + std::to_string(C.jmax - C.jmin) + " differentials");
  for (int t = 0; t < C.jmax - C.jmin; ++t) {
    const int jj = C.jmin + 1 + t;
    const auto& src = C.modules[t + 1];
    const auto& dst = C.modules[t];
    if (!diffs[t].is_array() || diffs[t].size() != static_cast<std::size_t>(src.width() + 1))
      throw InputError("differential " + std::to_string(jj) + " has the wrong number of levels");
    std::vector<DenseMatrix> levels;
    for (int n = 0; n <= src.width(); ++n)
      levels.push_back(decode_matrix(diffs[t][n], dst.dim(n), src.dim(n), src.p(), n,
                                     "differential " + std::to_string(jj)));
    C.differentials.push_back(std::move(levels));
  }
  C.check_shapes();
  return C;
}

}  // namespace fistab::fi
