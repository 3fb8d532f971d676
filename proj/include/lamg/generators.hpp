#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "lamg/laplacian.hpp"

namespace lamg {

/// Grid operators. Node (i, j) with 0 <= i < n1 (x) and 0 <= j < n2 (y) is
/// numbered i + n1 * j.
enum class Stencil {
  FivePoint,           // Neumann 5-point Laplacian
  FourthOrder13,       // 13-point fourth-order Laplacian, folded boundary legs
  AnisoRotAgnostic,    // rotated anisotropic operator, diagonal cross term
  AnisoRotMisaligned,  // rotated anisotropic operator, NE/SW cross term
  StretchedFE,         // bilinear FE on stretched quads, periodic
  Biharmonic,          // 13-point biharmonic (square of the Neumann 5-point)
  UnweightedGrid2D,    // unit-weight grid graph
  PathGraph,           // 1-D chain of n1 nodes (n2 ignored)
};

struct GridOptions {
  double aniso_angle = -std::numbers::pi / 4.0;
  double aniso_epsilon = 1e-4;
  /// (h_y / h_x)^2 for the stretched elements; 0 is the degenerate limit.
  double stretch_epsilon = 1e-4;
  /// Wrap-around edges for UnweightedGrid2D.
  bool periodic = false;
};

GraphLaplacian generate_grid(Stencil kind, Index n1, Index n2, const GridOptions& opts = {});

std::optional<Stencil> parse_stencil(std::string_view name);
std::string stencil_name(Stencil kind);

GraphLaplacian path_graph(Index n);
GraphLaplacian complete_graph(Index n);
/// Star with node 0 as center.
GraphLaplacian star_graph(Index leaves);

/// Connected random graph: a random spanning tree plus `extra_edges` distinct
/// chords, weights uniform in [w_min, w_max].
GraphLaplacian random_connected_graph(Index n, std::size_t extra_edges, std::uint64_t seed,
                                      double w_min = 0.5, double w_max = 2.0);

/// Preferential-attachment graph with `links` edges per new node (unit weights).
GraphLaplacian power_law_graph(Index n, Index links, std::uint64_t seed);

/**
 * Parses generator specs of the form `kind:N` or `kind:N1xN2`, e.g.
 * `fivepoint:512x512`, `path:1000`, `powerlaw:20000`, `random:500`.
 * Throws lamg::Error on malformed specs.
 */
GraphLaplacian generate_from_spec(std::string_view spec, std::uint64_t seed);

}  // namespace lamg
