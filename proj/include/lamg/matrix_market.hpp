#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string_view>

#include "lamg/laplacian.hpp"

namespace lamg {

/// How the entries of a Matrix Market file are interpreted.
enum class IngestMode {
  Adjacency,  // off-diagonals are edge weights; (M + M^T)/2, diagonal ignored
  Laplacian,  // entries are Laplacian entries, validated as-is
};

std::optional<IngestMode> parse_ingest_mode(std::string_view name);

/// Relative tolerance for the symmetry and zero-row-sum checks in Laplacian mode.
inline constexpr double kLaplacianValidationTol = 1e-8;

GraphLaplacian read_matrix_market(std::istream& in, IngestMode mode);
GraphLaplacian load_matrix_market(const std::filesystem::path& path, IngestMode mode);

}  // namespace lamg
