#pragma once

#include <cstddef>
#include <string>

namespace fistab {

// Largest basis of any single chain group or face level that a computation
// may build before raising FeasibilityError. Process-wide; the CLI sets it
// from --max-cells.
inline std::size_t& max_cells() {
  static std::size_t limit = std::size_t{1} << 24;
  return limit;
}

inline std::string max_cells_text() { return std::to_string(max_cells()) + " cells"; }

}  // namespace fistab
