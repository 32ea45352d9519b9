#include "hfactor/edge_list.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "hfactor/common.hpp"

namespace hfactor {
namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::uint64_t parse_index(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw Error("line " + std::to_string(line_no) + ": expected a non-negative integer, got '" +
                std::string(token) + "'");
  }
  return value;
}

}  // namespace

EdgeListFile parse_edge_list(std::string_view text) {
  EdgeListFile file;
  bool have_header = false;
  std::set<std::vector<std::uint64_t>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;

    if (!have_header) {
      if (tokens[0] == "graph" && tokens.size() == 2) {
        file.arity = 2;
        file.vertex_count = parse_index(tokens[1], line_no);
      } else if (tokens[0] == "hypergraph" && tokens.size() == 3) {
        const auto k = parse_index(tokens[1], line_no);
        if (k < 2 || k > 16) throw Error("line " + std::to_string(line_no) + ": arity must be in [2, 16]");
        file.arity = static_cast<int>(k);
        file.vertex_count = parse_index(tokens[2], line_no);
      } else {
        throw Error("line " + std::to_string(line_no) +
                    ": header must be 'graph <v>' or 'hypergraph <k> <v>'");
      }
      have_header = true;
      continue;
    }

    if (tokens.size() != static_cast<std::size_t>(file.arity)) {
      throw Error("line " + std::to_string(line_no) + ": edge arity mismatch (expected " +
                  std::to_string(file.arity) + " vertices, got " + std::to_string(tokens.size()) + ")");
    }
    std::vector<std::uint64_t> edge;
    edge.reserve(tokens.size());
    for (const auto token : tokens) {
      const auto x = parse_index(token, line_no);
      if (x >= file.vertex_count) {
        throw Error("line " + std::to_string(line_no) + ": vertex index " + std::to_string(x) +
                    " out of range (vertex count " + std::to_string(file.vertex_count) + ")");
      }
      edge.push_back(x);
    }
    std::sort(edge.begin(), edge.end());
    if (std::adjacent_find(edge.begin(), edge.end()) != edge.end()) {
      throw Error("line " + std::to_string(line_no) + ": repeated vertex inside an edge");
    }
    if (!seen.insert(edge).second) {
      throw Error("line " + std::to_string(line_no) + ": duplicate edge");
    }
    file.edges.push_back(std::move(edge));
  }
  if (!have_header) throw Error("missing header line");
  return file;
}

std::string format_edge_list(int arity, std::uint64_t vertex_count,
                             const std::vector<std::vector<std::uint64_t>>& edges) {
  std::ostringstream out;
  if (arity == 2) {
    out << "graph " << vertex_count << '\n';
  } else {
    out << "hypergraph " << arity << ' ' << vertex_count << '\n';
  }
  for (const auto& edge : edges) {
    for (std::size_t i = 0; i < edge.size(); ++i) out << (i ? " " : "") << edge[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace hfactor
