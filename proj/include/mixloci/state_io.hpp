#pragma once

// JSON state files.
//
//   {"m": 2, "n": 2,
//    "ensemble": [{"p": 0.5, "amps": [[re, im], ...]}, ...]}      or
//   {"m": 2, "n": 2, "matrix": [[re, im], ...]}                   (mn*mn entries, row-major)
//
// Optional "normalize" (default true) rescales amplitudes to unit norm, weights
// to unit sum and a matrix to unit trace. With "normalize": false the input
// must already satisfy those constraints.

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "mixloci/loci.hpp"
#include "mixloci/states.hpp"

namespace mixloci {

struct StateDocument {
    BipartiteShape shape;
    std::variant<Ensemble, DensityMatrix> content;
    bool normalize = true;

    DensityMatrix density() const;
    bool is_ensemble() const { return std::holds_alternative<Ensemble>(content); }
};

/// Throws Error(InvalidInput, ...) for schema violations; state errors propagate with their own codes.
StateDocument parse_state(const nlohmann::json& doc);
StateDocument load_state(const std::filesystem::path& path);

nlohmann::json to_json(const Ensemble& e);
nlohmann::json to_json(const DensityMatrix& rho);
nlohmann::json to_json(const StateDocument& doc);

nlohmann::json complex_to_json(cplx z);
nlohmann::json vector_to_json(std::span<const cplx> v);
nlohmann::json point_to_json(const ProjectivePoint& p);
CVector vector_from_json(const nlohmann::json& arr);

/// FNV-1a 64-bit digest of raw bytes, as 16 hex digits.
std::string content_digest(std::string_view bytes);

} // namespace mixloci
