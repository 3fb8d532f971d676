#include "lamg/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "lamg/error.hpp"
#include "lamg/random.hpp"

namespace lamg {

namespace {

struct Leg {
  int di;
  int dj;
  double entry;  // matrix entry a_uv of the interior stencil
};

enum class Boundary { Drop, Fold, Periodic };

GraphLaplacian assemble_stencil(const std::vector<Leg>& legs, Index n1, Index n2,
                                Boundary bc) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n1) * n2 * legs.size());
  for (Index j = 0; j < n2; ++j) {
    for (Index i = 0; i < n1; ++i) {
      const Index u = i + n1 * j;
      for (const Leg& leg : legs) {
        Index ii = i + leg.di;
        Index jj = j + leg.dj;
        switch (bc) {
          case Boundary::Drop:
            if (ii < 0 || jj < 0 || ii >= n1 || jj >= n2) continue;
            break;
          case Boundary::Fold:
            ii = std::clamp(ii, Index{0}, n1 - 1);
            jj = std::clamp(jj, Index{0}, n2 - 1);
            break;
          case Boundary::Periodic:
            ii = (ii % n1 + n1) % n1;
            jj = (jj % n2 + n2) % n2;
            break;
        }
        const Index v = ii + n1 * jj;
        if (v == u) continue;
        // Each interior pair is visited from both endpoints.
        edges.push_back({u, v, -0.5 * leg.entry});
      }
    }
  }
  return GraphLaplacian::from_summed_edges(n1 * n2, std::move(edges), 1e-14);
}

std::vector<Leg> five_point_legs() {
  return {{1, 0, -1.0}, {-1, 0, -1.0}, {0, 1, -1.0}, {0, -1, -1.0}};
}

GraphLaplacian biharmonic(Index n1, Index n2) {
  const GraphLaplacian lap = assemble_stencil(five_point_legs(), n1, n2, Boundary::Drop);
  const Index n = lap.size();
  std::vector<Edge> edges;
  std::vector<double> row(n, 0.0);
  std::vector<char> marked(n, 0);
  std::vector<Index> touched;
  auto add = [&](Index v, double val) {
    if (!marked[v]) {
      marked[v] = 1;
      touched.push_back(v);
    }
    row[v] += val;
  };
  for (Index u = 0; u < n; ++u) {
    touched.clear();
    // Row u of L*L, with L = D - W.
    auto nu = lap.neighbors(u);
    auto wu = lap.weights(u);
    add(u, lap.diagonal(u) * lap.diagonal(u));
    for (std::size_t a = 0; a < nu.size(); ++a) {
      const Index k = nu[a];
      const double luk = -wu[a];
      add(k, lap.diagonal(u) * luk + luk * lap.diagonal(k));
      auto nk = lap.neighbors(k);
      auto wk = lap.weights(k);
      for (std::size_t b = 0; b < nk.size(); ++b) add(nk[b], luk * -wk[b]);
    }
    for (Index v : touched) {
      if (v > u && row[v] != 0.0) edges.push_back({u, v, -row[v]});
      row[v] = 0.0;
      marked[v] = 0;
    }
  }
  return GraphLaplacian::from_summed_edges(n, std::move(edges), 1e-14);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(what);
}

}  // namespace

GraphLaplacian generate_grid(Stencil kind, Index n1, Index n2, const GridOptions& opts) {
  if (kind == Stencil::PathGraph) return path_graph(n1);
  require(n1 >= 2 && n2 >= 2, "grid dimensions must be at least 2x2");

  const double s = std::sin(opts.aniso_angle);
  const double c = std::cos(opts.aniso_angle);
  const double eps = opts.aniso_epsilon;
  const double cxx = c * c + eps * s * s;
  const double cyy = eps * c * c + s * s;
  const double cxy = (1.0 - eps) * std::sin(2.0 * opts.aniso_angle);

  switch (kind) {
    case Stencil::FivePoint:
      return assemble_stencil(five_point_legs(), n1, n2, Boundary::Drop);
    case Stencil::UnweightedGrid2D:
      if (opts.periodic) {
        require(n1 >= 3 && n2 >= 3, "periodic grid needs at least 3x3 nodes");
        return assemble_stencil(five_point_legs(), n1, n2, Boundary::Periodic);
      }
      return assemble_stencil(five_point_legs(), n1, n2, Boundary::Drop);
    case Stencil::FourthOrder13:
      require(n1 >= 3 && n2 >= 3, "13-point stencil needs at least 3x3 nodes");
      return assemble_stencil({{1, 0, -16.0},
                               {-1, 0, -16.0},
                               {0, 1, -16.0},
                               {0, -1, -16.0},
                               {2, 0, 1.0},
                               {-2, 0, 1.0},
                               {0, 2, 1.0},
                               {0, -2, 1.0}},
                              n1, n2, Boundary::Fold);
    case Stencil::AnisoRotAgnostic:
      return assemble_stencil({{1, 0, -cxx},
                               {-1, 0, -cxx},
                               {0, 1, -cyy},
                               {0, -1, -cyy},
                               {1, 1, -0.25 * cxy},
                               {-1, -1, -0.25 * cxy},
                               {-1, 1, 0.25 * cxy},
                               {1, -1, 0.25 * cxy}},
                              n1, n2, Boundary::Drop);
    case Stencil::AnisoRotMisaligned:
      return assemble_stencil({{1, 0, -cxx + 0.5 * cxy},
                               {-1, 0, -cxx + 0.5 * cxy},
                               {0, 1, -cyy + 0.5 * cxy},
                               {0, -1, -cyy + 0.5 * cxy},
                               {1, 1, -0.5 * cxy},
                               {-1, -1, -0.5 * cxy}},
                              n1, n2, Boundary::Drop);
    case Stencil::StretchedFE: {
      require(n1 >= 3 && n2 >= 3, "periodic grid needs at least 3x3 nodes");
      const double e = opts.stretch_epsilon;
      const double ew = 2.0 - 4.0 * e;
      const double ns = -4.0 + 2.0 * e;
      const double diag = -1.0 - e;
      return assemble_stencil({{1, 0, ew},
                               {-1, 0, ew},
                               {0, 1, ns},
                               {0, -1, ns},
                               {1, 1, diag},
                               {-1, -1, diag},
                               {-1, 1, diag},
                               {1, -1, diag}},
                              n1, n2, Boundary::Periodic);
    }
    case Stencil::Biharmonic:
      require(n1 >= 3 && n2 >= 3, "13-point stencil needs at least 3x3 nodes");
      return biharmonic(n1, n2);
    case Stencil::PathGraph:
      break;
  }
  throw Error("unknown stencil kind");
}

namespace {

const std::vector<std::pair<std::string_view, Stencil>>& stencil_names() {
  static const std::vector<std::pair<std::string_view, Stencil>> names = {
      {"fivepoint", Stencil::FivePoint},
      {"fourthorder13", Stencil::FourthOrder13},
      {"anisorot-agnostic", Stencil::AnisoRotAgnostic},
      {"anisorot-misaligned", Stencil::AnisoRotMisaligned},
      {"stretched-fe", Stencil::StretchedFE},
      {"biharmonic", Stencil::Biharmonic},
      {"grid2d", Stencil::UnweightedGrid2D},
      {"path", Stencil::PathGraph},
  };
  return names;
}

}  // namespace

std::optional<Stencil> parse_stencil(std::string_view name) {
  for (const auto& [key, kind] : stencil_names()) {
    if (key == name) return kind;
  }
  return std::nullopt;
}

std::string stencil_name(Stencil kind) {
  for (const auto& [key, k] : stencil_names()) {
    if (k == kind) return std::string(key);
  }
  return "unknown";
}

GraphLaplacian path_graph(Index n) {
  require(n >= 1, "path graph needs at least one node");
  EdgeList list{n, {}};
  for (Index u = 0; u + 1 < n; ++u) list.edges.push_back({u, u + 1, 1.0});
  return build_laplacian(list);
}

GraphLaplacian complete_graph(Index n) {
  EdgeList list{n, {}};
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) list.edges.push_back({u, v, 1.0});
  }
  return build_laplacian(list);
}

GraphLaplacian star_graph(Index leaves) {
  EdgeList list{leaves + 1, {}};
  for (Index v = 1; v <= leaves; ++v) list.edges.push_back({0, v, 1.0});
  return build_laplacian(list);
}

GraphLaplacian random_connected_graph(Index n, std::size_t extra_edges, std::uint64_t seed,
                                      double w_min, double w_max) {
  require(n >= 1, "random graph needs at least one node");
  Rng rng(seed);
  std::set<std::pair<Index, Index>> seen;
  EdgeList list{n, {}};
  auto weight = [&] { return w_min + (w_max - w_min) * rng.uniform(); };
  for (Index v = 1; v < n; ++v) {
    const auto u = static_cast<Index>(rng.below(static_cast<std::uint64_t>(v)));
    seen.insert({u, v});
    list.edges.push_back({u, v, weight()});
  }
  const std::size_t max_edges = static_cast<std::size_t>(n) * (n - 1) / 2;
  const std::size_t target = std::min(max_edges, list.edges.size() + extra_edges);
  while (list.edges.size() < target) {
    auto u = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    auto v = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) continue;
    list.edges.push_back({u, v, weight()});
  }
  return build_laplacian(list);
}

GraphLaplacian power_law_graph(Index n, Index links, std::uint64_t seed) {
  require(n > links && links >= 1, "power-law graph needs n > links >= 1");
  Rng rng(seed);
  std::vector<Index> endpoints;  // node repeated once per incident edge
  std::vector<Edge> edges;
  // Seed clique on links+1 nodes.
  for (Index u = 0; u <= links; ++u) {
    for (Index v = u + 1; v <= links; ++v) {
      edges.push_back({u, v, 1.0});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::vector<Index> chosen;
  for (Index v = links + 1; v < n; ++v) {
    chosen.clear();
    while (static_cast<Index>(chosen.size()) < links) {
      const Index t = endpoints[rng.below(endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (Index t : chosen) {
      edges.push_back({t, v, 1.0});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return GraphLaplacian::from_edges(EdgeList{n, std::move(edges)});
}

GraphLaplacian generate_from_spec(std::string_view spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  require(colon != std::string_view::npos, "generator spec must look like kind:N or kind:N1xN2");
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view dims = spec.substr(colon + 1);

  auto parse_int = [&](std::string_view text) {
    Index value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    require(ec == std::errc{} && ptr == text.data() + text.size() && value > 0,
            "bad dimension '" + std::string(text) + "' in generator spec");
    return value;
  };
  Index n1 = 0;
  Index n2 = 1;
  if (const auto x = dims.find('x'); x != std::string_view::npos) {
    n1 = parse_int(dims.substr(0, x));
    n2 = parse_int(dims.substr(x + 1));
  } else {
    n1 = parse_int(dims);
  }

  if (kind == "complete") return complete_graph(n1);
  if (kind == "star") return star_graph(n1);
  if (kind == "powerlaw") return power_law_graph(n1, n2 > 1 ? n2 : 2, seed);
  if (kind == "random") return random_connected_graph(n1, static_cast<std::size_t>(n1), seed);
  if (kind == "path") return path_graph(n1 * n2);
  const auto stencil = parse_stencil(kind);
  require(stencil.has_value(), "unknown generator '" + std::string(kind) + "'");
  if (n2 == 1) n2 = n1;
  return generate_grid(*stencil, n1, n2);
}

}  // namespace lamg
