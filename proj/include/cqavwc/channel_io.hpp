#pragma once

#include <string>

#include <json.hpp>

#include "cqavwc/channel.hpp"

namespace cqavwc {

/**
 * Channel description file (JSON, schema_version 1):
 *
 *   {
 *     "schema_version": 1,
 *     "dim_legal": 2, "dim_eve": 2,
 *     "inputs": ["0", "1"], "states": ["a", "b"],
 *     "rho":   { "0|a": [[[1,0],[0,0]], [[0,0],[0,0]]], ... },
 *     "sigma": { "0|a": ..., ... }
 *   }
 *
 * Matrices are row-major arrays of rows; each entry is a [real, imaginary]
 * pair. Structural problems raise ParseError with the offending key; state
 * invariants are left to validate_channel().
 */
RawChannel parse_channel_json(const std::string& text);
RawChannel load_channel_file(const std::string& path);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& context);

nlohmann::json channel_to_json(const CqavwcChannel& ch);

}  // namespace cqavwc
