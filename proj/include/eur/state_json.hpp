#pragma once

#include <string_view>

#include "json.hpp"

#include "eur/state.hpp"

namespace eur {

/// Reads the state schema
///   {"family": "grid" | "periodic" | "fock" | "finite",
///    "grid": {"n": N, "x_min": a, "x_max": b},       (grid family only)
///    "first_level": j,                                (periodic and fock, optional)
///    "amplitudes": [[re, im], ...]  or  "matrix": [[[re, im], ...], ...]}
/// Amplitudes may also be given as plain reals. Structural problems throw
/// ParseError without a position.
AnyState state_from_json(const nlohmann::json& document);

/// Parses text first; syntax errors throw ParseError with line and column.
AnyState parse_state(std::string_view text);

nlohmann::ordered_json state_to_json(const AnyState& state);

std::string family_name(const AnyState& state);

}  // namespace eur
