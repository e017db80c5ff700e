#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace xxzlr {

/// Ground-state phase labels shared by the spin-wave and entanglement
/// classifiers. `boundary` marks points neither rule set can place.
enum class Phase { fm, tll, xy_ssb, boundary };

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::fm: return "FM";
    case Phase::tll: return "TLL";
    case Phase::xy_ssb: return "XY_SSB";
    case Phase::boundary: return "Boundary";
  }
  return "Boundary";
}

inline std::optional<Phase> phase_from_string(std::string_view s) {
  if (s == "FM") return Phase::fm;
  if (s == "TLL") return Phase::tll;
  if (s == "XY_SSB") return Phase::xy_ssb;
  if (s == "Boundary") return Phase::boundary;
  return std::nullopt;
}

}  // namespace xxzlr
