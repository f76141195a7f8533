#pragma once

// Port-labeled regular graphs and the glued-trees family G'n.
//
// Every vertex v carries `degree` ports 0..k-1. The port map sends the end
// (v, c) of an edge to the opposite end (w, c'). A self loop is a port that
// maps to itself.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gluewalk {

using Vertex = std::size_t;
using Label = std::size_t;

struct Port {
  Vertex vertex = std::numeric_limits<Vertex>::max();
  Label label = 0;

  [[nodiscard]] bool defined() const { return vertex != std::numeric_limits<Vertex>::max(); }
  friend bool operator==(const Port&, const Port&) = default;
  friend auto operator<=>(const Port&, const Port&) = default;
};

class PortLabeledGraph {
 public:
  PortLabeledGraph() = default;

  /// Graph with every port unset; fill it with connect() / self_loop().
  PortLabeledGraph(std::size_t num_vertices, std::size_t degree)
      : num_vertices_(num_vertices), degree_(degree), ports_(num_vertices * degree) {
    if (degree == 0) throw std::invalid_argument("graph degree must be positive");
  }

  [[nodiscard]] std::size_t num_vertices() const { return num_vertices_; }
  [[nodiscard]] std::size_t degree() const { return degree_; }

  /// Basis index of (v, c) in position (x) coin space.
  [[nodiscard]] std::size_t index(Vertex v, Label c) const { return v * degree_ + c; }

  [[nodiscard]] const Port& port(Vertex v, Label c) const {
    check_end(v, c);
    return ports_[index(v, c)];
  }

  /// Assigns both directions. Overwrites whatever the ends pointed at before.
  void connect(Vertex a, Label ca, Vertex b, Label cb) {
    check_end(a, ca);
    check_end(b, cb);
    ports_[index(a, ca)] = Port{b, cb};
    ports_[index(b, cb)] = Port{a, ca};
  }

  void self_loop(Vertex v, Label c) { connect(v, c, v, c); }

  /// Assigns one direction only. Used by the importer and by tests that need
  /// to build broken graphs.
  void set_port(Vertex v, Label c, Port target) {
    check_end(v, c);
    ports_[index(v, c)] = target;
  }

  friend bool operator==(const PortLabeledGraph&, const PortLabeledGraph&) = default;

 private:
  void check_end(Vertex v, Label c) const {
    if (v >= num_vertices_ || c >= degree_) {
      std::ostringstream msg;
      msg << "edge end (" << v << ", " << c << ") out of range for graph with " << num_vertices_
          << " vertices of degree " << degree_;
      throw std::out_of_range(msg.str());
    }
  }

  std::size_t num_vertices_ = 0;
  std::size_t degree_ = 0;
  std::vector<Port> ports_;
};

enum class Gluing { alternating, random_cycle };

struct GluedTreesSpec {
  std::size_t layers = 6;
  Gluing gluing = Gluing::alternating;
  std::uint64_t seed = 0;

  /// 2^(n+2) - 2
  [[nodiscard]] std::size_t num_vertices() const { return (std::size_t{1} << (layers + 2)) - 2; }
  [[nodiscard]] Vertex entrance() const { return 0; }
  [[nodiscard]] Vertex target() const { return num_vertices() - 1; }
  [[nodiscard]] std::size_t leaves_per_side() const { return std::size_t{1} << layers; }
};

/// Two binary trees of depth `layers` glued leaf-to-leaf by a cycle that
/// alternates sides, with a self loop on each root.
///
/// Numbering: the left tree is stored in heap order (root 0, children of h at
/// 2h+1 and 2h+2); the right tree mirrors it, so heap slot h on the right is
/// vertex N-1-h and the right root is the last vertex.
///
/// Labels: roots carry their self loop on port 0; every non-root vertex
/// reaches its parent through port 0; internal vertices reach their children
/// through ports 1 and 2. On the cycle L_0 R_0 L_1 R_1 ... L_{m-1} R_{m-1} L_0,
/// the edge L_i R_i uses port 1 on both ends and the edge R_i L_{i+1} uses
/// port 2 on both ends. Random gluing shuffles the leaf order on each side
/// before forming the same alternating cycle.
[[nodiscard]] inline PortLabeledGraph build_glued_trees(const GluedTreesSpec& spec) {
  if (spec.layers < 1) throw std::invalid_argument("glued trees need at least one layer (n >= 1)");
  if (spec.layers > 24) throw std::invalid_argument("glued trees with more than 24 layers are not supported");

  const std::size_t n_total = spec.num_vertices();
  const std::size_t internal = (std::size_t{1} << spec.layers) - 1;  // heap slots with children
  const std::size_t m = spec.leaves_per_side();
  const auto mirror = [n_total](std::size_t h) { return n_total - 1 - h; };

  PortLabeledGraph g(n_total, 3);
  g.self_loop(spec.entrance(), 0);
  g.self_loop(spec.target(), 0);

  for (std::size_t h = 0; h < internal; ++h) {
    for (Label j = 1; j <= 2; ++j) {
      const std::size_t child = 2 * h + j;
      g.connect(h, j, child, 0);
      g.connect(mirror(h), j, mirror(child), 0);
    }
  }

  std::vector<Vertex> left(m), right(m);
  for (std::size_t i = 0; i < m; ++i) {
    left[i] = internal + i;
    right[i] = mirror(internal + i);
  }
  if (spec.gluing == Gluing::random_cycle) {
    std::mt19937_64 rng(spec.seed);
    std::shuffle(left.begin(), left.end(), rng);
    std::shuffle(right.begin(), right.end(), rng);
  }
  for (std::size_t i = 0; i < m; ++i) {
    g.connect(left[i], 1, right[i], 1);
    g.connect(right[i], 2, left[(i + 1) % m], 2);
  }
  return g;
}

enum class ViolationKind { undefined_port, port_out_of_range, not_involution, disconnected };

struct Violation {
  ViolationKind kind;
  std::string message;
};

/// Reports every undefined or dangling port, every end whose partner does not
/// point back, and disconnection. An empty result means the graph is a valid
/// walk terrain.
[[nodiscard]] inline std::vector<Violation> validate(const PortLabeledGraph& g) {
  std::vector<Violation> out;
  const auto n = g.num_vertices();
  const auto k = g.degree();

  bool ports_sane = true;
  for (Vertex v = 0; v < n; ++v) {
    for (Label c = 0; c < k; ++c) {
      const Port& p = g.port(v, c);
      std::ostringstream msg;
      if (!p.defined()) {
        msg << "port (" << v << ", " << c << ") is undefined";
        out.push_back({ViolationKind::undefined_port, msg.str()});
        ports_sane = false;
        continue;
      }
      if (p.vertex >= n || p.label >= k) {
        msg << "port (" << v << ", " << c << ") points outside the graph at (" << p.vertex << ", " << p.label << ")";
        out.push_back({ViolationKind::port_out_of_range, msg.str()});
        ports_sane = false;
        continue;
      }
      const Port& back = g.port(p.vertex, p.label);
      if (!(back == Port{v, c})) {
        msg << "port map is not an involution at (" << v << ", " << c << "): maps to (" << p.vertex << ", "
            << p.label << ") which maps to (";
        if (back.defined()) {
          msg << back.vertex << ", " << back.label << ")";
        } else {
          msg << "undefined)";
        }
        out.push_back({ViolationKind::not_involution, msg.str()});
      }
    }
  }

  if (n > 0 && ports_sane) {
    std::vector<bool> seen(n, false);
    std::queue<Vertex> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
      const Vertex v = frontier.front();
      frontier.pop();
      for (Label c = 0; c < k; ++c) {
        const Vertex w = g.port(v, c).vertex;
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          frontier.push(w);
        }
      }
    }
    if (reached != n) {
      std::ostringstream msg;
      msg << "graph is disconnected: vertex 0 reaches " << reached << " of " << n << " vertices";
      out.push_back({ViolationKind::disconnected, msg.str()});
    }
  }
  return out;
}

/// Thrown by import_edge_list; `line()` is 1-based.
class EdgeListParseError : public std::runtime_error {
 public:
  EdgeListParseError(std::size_t line, const std::string& what)
      : std::runtime_error("edge list line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One `v,port_v,w,port_w` line per edge, written from its lower end, sorted
/// by (v, port_v). Self loops appear once as `v,c,v,c`.
[[nodiscard]] inline std::string export_edge_list(const PortLabeledGraph& g) {
  std::string out;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (Label c = 0; c < g.degree(); ++c) {
      const Port& p = g.port(v, c);
      if (Port{v, c} <= p) {
        out += std::to_string(v) + ',' + std::to_string(c) + ',' + std::to_string(p.vertex) + ',' +
               std::to_string(p.label) + '\n';
      }
    }
  }
  return out;
}

namespace detail {

inline std::size_t parse_index(std::string_view field, std::size_t line) {
  if (field.empty()) throw EdgeListParseError(line, "empty field");
  std::size_t value = 0;
  for (char ch : field) {
    if (ch < '0' || ch > '9') throw EdgeListParseError(line, "not a non-negative integer: '" + std::string(field) + "'");
    value = value * 10 + static_cast<std::size_t>(ch - '0');
    if (value > (std::size_t{1} << 40)) throw EdgeListParseError(line, "index too large");
  }
  return value;
}

}  // namespace detail

/// Inverse of export_edge_list. The vertex count is one past the largest
/// vertex mentioned; the degree is one past the largest label, unless
/// `degree` is given. Blank lines are ignored. Does not validate the result.
[[nodiscard]] inline PortLabeledGraph import_edge_list(std::string_view text, std::size_t degree = 0) {
  struct Row {
    std::size_t v, cv, w, cw, line;
  };
  std::vector<Row> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) {
      throw EdgeListParseError(line_no, "expected 4 comma-separated fields, got " + std::to_string(fields.size()));
    }
    rows.push_back({detail::parse_index(fields[0], line_no), detail::parse_index(fields[1], line_no),
                    detail::parse_index(fields[2], line_no), detail::parse_index(fields[3], line_no), line_no});
    if (eol == text.size()) break;
  }

  std::size_t n = 0, k = degree;
  for (const auto& r : rows) {
    n = std::max({n, r.v + 1, r.w + 1});
    if (degree == 0) k = std::max({k, r.cv + 1, r.cw + 1});
  }
  if (k == 0) k = 1;
  PortLabeledGraph g(n, k);
  for (const auto& r : rows) {
    if (r.cv >= k || r.cw >= k) throw EdgeListParseError(r.line, "label exceeds degree " + std::to_string(k));
    if (g.port(r.v, r.cv).defined() || g.port(r.w, r.cw).defined()) {
      throw EdgeListParseError(r.line, "edge end already assigned");
    }
    g.connect(r.v, r.cv, r.w, r.cw);
  }
  return g;
}

}  // namespace gluewalk
