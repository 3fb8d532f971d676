#include "lamg/matrix_market.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lamg/error.hpp"

namespace lamg {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct Header {
  bool pattern = false;
  bool symmetric = false;
};

Header parse_header(const std::string& line) {
  std::istringstream ss(line);
  std::string banner, object, format, field, symmetry;
  ss >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw Error("missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix" || format != "coordinate") {
    throw Error("only 'matrix coordinate' Matrix Market files are supported");
  }
  Header h;
  if (field == "pattern") {
    h.pattern = true;
  } else if (field != "real" && field != "integer" && field != "double") {
    throw Error("unsupported Matrix Market field '" + field + "'");
  }
  if (symmetry == "symmetric") {
    h.symmetric = true;
  } else if (symmetry != "general") {
    throw Error("unsupported Matrix Market symmetry '" + symmetry + "'");
  }
  return h;
}

struct Entry {
  Index i;
  Index j;
  double value;
};

GraphLaplacian laplacian_from_entries(Index n, const Header& h, const std::vector<Entry>& entries) {
  if (h.pattern) throw Error("pattern files carry no Laplacian values");
  std::vector<double> diag(n, 0.0);
  std::map<std::pair<Index, Index>, double> off;
  for (const Entry& e : entries) {
    if (e.i == e.j) {
      diag[e.i] += e.value;
    } else if (h.symmetric) {
      off[{std::min(e.i, e.j), std::max(e.i, e.j)}] += e.value;
    } else {
      off[{e.i, e.j}] += e.value;
    }
  }
  std::vector<Edge> edges;
  if (h.symmetric) {
    for (const auto& [key, a] : off) edges.push_back({key.first, key.second, -a});
  } else {
    for (const auto& [key, a] : off) {
      const auto [i, j] = key;
      auto it = off.find({j, i});
      const double mirror = it == off.end() ? 0.0 : it->second;
      if (std::abs(a - mirror) > kLaplacianValidationTol * std::max(std::abs(a), std::abs(mirror))) {
        throw Error("matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                    std::to_string(j + 1) + ")");
      }
      if (i < j) edges.push_back({i, j, -0.5 * (a + mirror)});
      if (i > j && it == off.end()) edges.push_back({j, i, -0.5 * a});
    }
  }
  GraphLaplacian lap = GraphLaplacian::from_summed_edges(n, std::move(edges));
  for (Index u = 0; u < n; ++u) {
    double abs_sum = std::abs(diag[u]);
    for (double w : lap.weights(u)) abs_sum += std::abs(w);
    if (std::abs(diag[u] - lap.diagonal(u)) > kLaplacianValidationTol * abs_sum) {
      throw Error("row " + std::to_string(u + 1) + " does not sum to zero");
    }
  }
  return lap;
}

}  // namespace

std::optional<IngestMode> parse_ingest_mode(std::string_view name) {
  if (name == "adjacency") return IngestMode::Adjacency;
  if (name == "laplacian") return IngestMode::Laplacian;
  return std::nullopt;
}

GraphLaplacian read_matrix_market(std::istream& in, IngestMode mode) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty Matrix Market input");
  const Header h = parse_header(line);

  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%' && line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  long long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz)) throw Error("malformed Matrix Market size line");
  }
  if (rows != cols) throw Error("Matrix Market matrix is not square");
  if (rows < 0 || nnz < 0) throw Error("negative Matrix Market dimensions");
  const auto n = static_cast<Index>(rows);

  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  for (long long k = 0; k < nnz; ++k) {
    if (!std::getline(in, line)) throw Error("Matrix Market file ended after " + std::to_string(k) + " entries");
    if (line.empty() || line[0] == '%') {
      --k;
      continue;
    }
    std::istringstream ss(line);
    long long i = 0, j = 0;
    double value = 1.0;
    if (!(ss >> i >> j)) throw Error("malformed Matrix Market entry: '" + line + "'");
    if (!h.pattern && !(ss >> value)) throw Error("missing value in entry: '" + line + "'");
    if (i < 1 || j < 1 || i > rows || j > cols) throw Error("entry index out of range: '" + line + "'");
    entries.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), value});
  }

  if (mode == IngestMode::Laplacian) return laplacian_from_entries(n, h, entries);

  std::vector<Edge> edges;
  edges.reserve(entries.size());
  for (const Entry& e : entries) {
    if (e.i == e.j) continue;
    // General files contribute each direction with half weight: (M + M^T)/2.
    edges.push_back({e.i, e.j, h.symmetric ? e.value : 0.5 * e.value});
  }
  return GraphLaplacian::from_summed_edges(n, std::move(edges));
}

GraphLaplacian load_matrix_market(const std::filesystem::path& path, IngestMode mode) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_matrix_market(in, mode);
}

}  // namespace lamg
