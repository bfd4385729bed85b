#pragma once

#include "tilelab/cyclotomic.hpp"
#include "tilelab/reduction.hpp"
#include "tilelab/splitting.hpp"
#include "tilelab/tiling.hpp"

#include "json.hpp"

#include <string>

namespace tilelab {

using Json = nlohmann::ordered_json;

// {"M": int, "A": [...], "B": [...]}
Json to_json(const Tiling& T);
Json to_json(const TileSet& S);
Json to_json(const CycloProfile& prof);
Json to_json(const SplitReport& rep, const ZmContext& ctx);
Json to_json(const SlabVerdict& v, const ZmContext& ctx);
Json to_json(const SplittingSlabVerdict& v, const ZmContext& ctx);
Json to_json(const T2Certificate& cert);

// Validated residue lists; InvalidInput names the offending field.
Int modulus_from_json(const Json& j);
TileSet tileset_from_json(const Context& ctx, const Json& j, const char* field);
// Both sets of a tiling object, without requiring that they tile.
std::pair<TileSet, TileSet> tile_pair_from_json(const Json& j);
Json parse_json(const std::string& text); // InvalidInput with line and column on syntax errors

// Hex SHA-256 of the compact serialization.
std::string input_hash(const Json& j);

} // namespace tilelab
