#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gammaflow/expr.hpp"
#include "gammaflow/graph.hpp"

namespace gammaflow {

enum class Flavor {
  combinatorial,  // m == 1
  normalized,     // m(x) = sum_y mu_xy
  custom,         // measure from the family itself (birth_death m_sequence)
};

enum class FamilyKind { path, cycle, complete, hypercube, lattice_box, tree, star, birth_death };

/// Parameters of a generated graph family.  Only the fields relevant to
/// `kind` are read.  Vertex ids:
///   path/cycle/complete/star/birth_death   "0", "1", ...  (star center "0")
///   hypercube(d)                            d-bit binary strings
///   lattice_box(d, R)                       comma-joined coordinates in [-R, R]
///   tree(branching, depth)                  breadth-first index, root "0"
struct FamilySpec {
  FamilyKind kind = FamilyKind::path;
  std::int64_t n = 0;          // path/cycle/complete vertex count; star leaves; birth_death last index
  int dimension = 0;           // hypercube, lattice_box
  std::int64_t radius = 0;     // lattice_box
  int branching = 0;           // tree
  int depth = 0;               // tree
  std::optional<SequenceExpr> m_sequence;  // birth_death measure m(k)
  std::optional<SequenceExpr> b_sequence;  // birth_death weight mu_{k,k+1}
  Flavor flavor = Flavor::combinatorial;

  static FamilySpec path(std::int64_t n, Flavor f = Flavor::combinatorial);
  static FamilySpec cycle(std::int64_t n, Flavor f = Flavor::combinatorial);
  static FamilySpec complete(std::int64_t n, Flavor f = Flavor::combinatorial);
  static FamilySpec star(std::int64_t leaves, Flavor f = Flavor::combinatorial);
  static FamilySpec hypercube(int d, Flavor f = Flavor::combinatorial);
  static FamilySpec lattice_box(int d, std::int64_t R, Flavor f = Flavor::combinatorial);
  static FamilySpec tree(int branching, int depth, Flavor f = Flavor::combinatorial);
  /// Custom flavor: measure m_k from `m`.  Other flavors override it.
  static FamilySpec birth_death(std::int64_t n, SequenceExpr m, SequenceExpr b, Flavor f = Flavor::custom);

  /// Canonical text form, e.g. "path:10", "birth_death:400[m=1;b=(k+1)^3]".
  std::string describe() const;
};

WeightedGraph generate_family(const FamilySpec& spec);

/// Parses "path:3", "cycle:12", "complete:4", "star:25", "hypercube:3",
/// "lattice_box:2:10" (alias "lattice"), "tree:2:5", "birth_death:400".
/// birth_death sequences come from m_expr and b_expr.
FamilySpec parse_family_spec(std::string_view text, std::string_view m_expr = "1", std::string_view b_expr = "1",
                             std::optional<Flavor> flavor = std::nullopt);

Flavor parse_flavor(std::string_view text);
std::string_view to_string(Flavor f) noexcept;

/// Vertex the family treats as its center/root: lattice origin, tree root,
/// birth_death 0, path 0, first vertex otherwise.
std::string family_origin(const FamilySpec& spec);

/// Vertices where a finite member of an infinite family is cut off
/// (lattice faces, deepest tree level, last birth_death vertex).  Empty for
/// families that are finite objects in their own right.
std::vector<std::string> truncation_boundary(const FamilySpec& spec);

/// Same family, grown so that the hop ball of radius `max_radius` around
/// family_origin is strictly interior.  InvalidSpec for intrinsically
/// finite families.
FamilySpec grow_for_exhaustion(const FamilySpec& spec, std::int64_t max_radius);

struct RandomGraphOptions {
  std::size_t vertices = 8;
  double extra_edge_probability = 0.3;
  double weight_lo = 0.1;  // mu and m drawn log-uniform in [lo, hi]
  double weight_hi = 10.0;
  bool random_measure = true;
};

/// Random spanning tree plus independent extra edges; connected by
/// construction.  Ids "0".."n-1".
WeightedGraph random_connected_graph(const RandomGraphOptions& opts, std::uint64_t seed);

}  // namespace gammaflow
