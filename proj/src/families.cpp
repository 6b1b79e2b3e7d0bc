#include "gammaflow/families.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "gammaflow/error.hpp"

namespace gammaflow {

namespace {

struct RawGraph {
  std::vector<std::string> ids;
  std::vector<double> measure;  // used only for custom flavor
  std::vector<IndexedEdge> edges;
};

std::string binary_id(std::uint64_t v, int d) {
  std::string s(static_cast<std::size_t>(d), '0');
  for (int b = 0; b < d; ++b)
    if (v & (std::uint64_t{1} << b)) s[static_cast<std::size_t>(d - 1 - b)] = '1';
  return s;
}

std::string coord_id(const std::vector<std::int64_t>& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(c[i]);
  }
  return s;
}

void require(bool ok, const FamilySpec& spec, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidSpec, spec.describe() + ": " + what);
}

std::vector<std::string> numbered(std::int64_t n) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

RawGraph raw_family(const FamilySpec& spec) {
  RawGraph raw;
  auto& E = raw.edges;
  switch (spec.kind) {
    case FamilyKind::path: {
      require(spec.n >= 2, spec, "path needs at least 2 vertices");
      raw.ids = numbered(spec.n);
      for (std::int64_t i = 0; i + 1 < spec.n; ++i)
        E.push_back({static_cast<VertexIndex>(i), static_cast<VertexIndex>(i + 1), 1.0});
      break;
    }
    case FamilyKind::cycle: {
      require(spec.n >= 3, spec, "cycle needs at least 3 vertices");
      raw.ids = numbered(spec.n);
      for (std::int64_t i = 0; i < spec.n; ++i)
        E.push_back({static_cast<VertexIndex>(i), static_cast<VertexIndex>((i + 1) % spec.n), 1.0});
      break;
    }
    case FamilyKind::complete: {
      require(spec.n >= 2, spec, "complete graph needs at least 2 vertices");
      raw.ids = numbered(spec.n);
      for (std::int64_t i = 0; i < spec.n; ++i)
        for (std::int64_t j = i + 1; j < spec.n; ++j)
          E.push_back({static_cast<VertexIndex>(i), static_cast<VertexIndex>(j), 1.0});
      break;
    }
    case FamilyKind::star: {
      require(spec.n >= 1, spec, "star needs at least 1 leaf");
      raw.ids = numbered(spec.n + 1);
      for (std::int64_t i = 1; i <= spec.n; ++i) E.push_back({0, static_cast<VertexIndex>(i), 1.0});
      break;
    }
    case FamilyKind::hypercube: {
      require(spec.dimension >= 1 && spec.dimension <= 24, spec, "hypercube dimension must be in [1, 24]");
      const std::uint64_t count = std::uint64_t{1} << spec.dimension;
      raw.ids.reserve(count);
      for (std::uint64_t v = 0; v < count; ++v) raw.ids.push_back(binary_id(v, spec.dimension));
      for (std::uint64_t v = 0; v < count; ++v)
        for (int b = 0; b < spec.dimension; ++b) {
          const std::uint64_t w = v ^ (std::uint64_t{1} << b);
          if (v < w) E.push_back({v, w, 1.0});
        }
      break;
    }
    case FamilyKind::lattice_box: {
      require(spec.dimension >= 1 && spec.radius >= 1, spec, "lattice_box needs d >= 1 and R >= 1");
      const std::int64_t side = 2 * spec.radius + 1;
      double total = std::pow(static_cast<double>(side), spec.dimension);
      require(total <= 5e6, spec, "lattice_box too large");
      const auto count = static_cast<std::uint64_t>(total);
      std::vector<std::int64_t> c(static_cast<std::size_t>(spec.dimension));
      std::vector<std::uint64_t> stride(static_cast<std::size_t>(spec.dimension));
      // Index = mixed-radix number with the last coordinate fastest.
      std::uint64_t s = 1;
      for (int i = spec.dimension - 1; i >= 0; --i) {
        stride[static_cast<std::size_t>(i)] = s;
        s *= static_cast<std::uint64_t>(side);
      }
      raw.ids.reserve(count);
      for (std::uint64_t v = 0; v < count; ++v) {
        std::uint64_t rem = v;
        for (int i = 0; i < spec.dimension; ++i) {
          const auto q = rem / stride[static_cast<std::size_t>(i)];
          rem %= stride[static_cast<std::size_t>(i)];
          c[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(q) - spec.radius;
        }
        raw.ids.push_back(coord_id(c));
        for (int i = 0; i < spec.dimension; ++i)
          if (c[static_cast<std::size_t>(i)] < spec.radius) E.push_back({v, v + stride[static_cast<std::size_t>(i)], 1.0});
      }
      break;
    }
    case FamilyKind::tree: {
      require(spec.branching >= 1 && spec.depth >= 1, spec, "tree needs branching >= 1 and depth >= 1");
      double total = 0.0;
      for (int l = 0; l <= spec.depth; ++l) total += std::pow(spec.branching, l);
      require(total <= 5e6, spec, "tree too large");
      std::uint64_t next = 1;
      std::vector<std::uint64_t> level{0};
      for (int l = 0; l < spec.depth; ++l) {
        std::vector<std::uint64_t> children;
        for (auto parent : level)
          for (int b = 0; b < spec.branching; ++b) {
            E.push_back({parent, next, 1.0});
            children.push_back(next++);
          }
        level = std::move(children);
      }
      raw.ids = numbered(static_cast<std::int64_t>(next));
      break;
    }
    case FamilyKind::birth_death: {
      require(spec.n >= 1, spec, "birth_death needs n >= 1");
      require(spec.b_sequence.has_value(), spec, "birth_death needs a b sequence");
      raw.ids = numbered(spec.n + 1);
      for (std::int64_t k = 0; k < spec.n; ++k) {
        const double b = (*spec.b_sequence)(k);
        require(std::isfinite(b) && b > 0.0, spec, "b sequence must be positive");
        E.push_back({static_cast<VertexIndex>(k), static_cast<VertexIndex>(k + 1), b});
      }
      if (spec.flavor == Flavor::custom) {
        require(spec.m_sequence.has_value(), spec, "custom flavor needs an m sequence");
        raw.measure.reserve(static_cast<std::size_t>(spec.n + 1));
        for (std::int64_t k = 0; k <= spec.n; ++k) raw.measure.push_back((*spec.m_sequence)(k));
      }
      break;
    }
  }
  return raw;
}

const char* kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::path: return "path";
    case FamilyKind::cycle: return "cycle";
    case FamilyKind::complete: return "complete";
    case FamilyKind::hypercube: return "hypercube";
    case FamilyKind::lattice_box: return "lattice_box";
    case FamilyKind::tree: return "tree";
    case FamilyKind::star: return "star";
    case FamilyKind::birth_death: return "birth_death";
  }
  return "?";
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::InvalidSpec, "family '" + std::string(whole) + "': '" + std::string(s) + "' is not an integer");
  return v;
}

}  // namespace

FamilySpec FamilySpec::path(std::int64_t n, Flavor f) {
  FamilySpec s;
  s.kind = FamilyKind::path;
  s.n = n;
  s.flavor = f;
  return s;
}
FamilySpec FamilySpec::cycle(std::int64_t n, Flavor f) {
  auto s = path(n, f);
  s.kind = FamilyKind::cycle;
  return s;
}
FamilySpec FamilySpec::complete(std::int64_t n, Flavor f) {
  auto s = path(n, f);
  s.kind = FamilyKind::complete;
  return s;
}
FamilySpec FamilySpec::star(std::int64_t leaves, Flavor f) {
  auto s = path(leaves, f);
  s.kind = FamilyKind::star;
  return s;
}
FamilySpec FamilySpec::hypercube(int d, Flavor f) {
  FamilySpec s;
  s.kind = FamilyKind::hypercube;
  s.dimension = d;
  s.flavor = f;
  return s;
}
FamilySpec FamilySpec::lattice_box(int d, std::int64_t R, Flavor f) {
  FamilySpec s;
  s.kind = FamilyKind::lattice_box;
  s.dimension = d;
  s.radius = R;
  s.flavor = f;
  return s;
}
FamilySpec FamilySpec::tree(int branching, int depth, Flavor f) {
  FamilySpec s;
  s.kind = FamilyKind::tree;
  s.branching = branching;
  s.depth = depth;
  s.flavor = f;
  return s;
}
FamilySpec FamilySpec::birth_death(std::int64_t n, SequenceExpr m, SequenceExpr b, Flavor f) {
  FamilySpec s;
  s.kind = FamilyKind::birth_death;
  s.n = n;
  s.m_sequence = std::move(m);
  s.b_sequence = std::move(b);
  s.flavor = f;
  return s;
}

std::string FamilySpec::describe() const {
  std::string s = kind_name(kind);
  switch (kind) {
    case FamilyKind::path:
    case FamilyKind::cycle:
    case FamilyKind::complete:
    case FamilyKind::star: s += ":" + std::to_string(n); break;
    case FamilyKind::hypercube: s += ":" + std::to_string(dimension); break;
    case FamilyKind::lattice_box: s += ":" + std::to_string(dimension) + ":" + std::to_string(radius); break;
    case FamilyKind::tree: s += ":" + std::to_string(branching) + ":" + std::to_string(depth); break;
    case FamilyKind::birth_death:
      s += ":" + std::to_string(n) + "[m=" + (m_sequence ? m_sequence->text() : std::string("-")) +
           ";b=" + (b_sequence ? b_sequence->text() : std::string("-")) + "]";
      break;
  }
  if (flavor != Flavor::combinatorial || kind == FamilyKind::birth_death) s += "/" + std::string(to_string(flavor));
  return s;
}

WeightedGraph generate_family(const FamilySpec& spec) {
  RawGraph raw = raw_family(spec);
  const std::size_t n = raw.ids.size();
  std::vector<double> measure;
  switch (spec.flavor) {
    case Flavor::combinatorial: measure.assign(n, 1.0); break;
    case Flavor::normalized: {
      measure.assign(n, 0.0);
      for (const auto& e : raw.edges) {
        measure[e.u] += e.mu;
        if (e.u != e.v) measure[e.v] += e.mu;
      }
      break;
    }
    case Flavor::custom:
      require(spec.kind == FamilyKind::birth_death, spec, "custom flavor is only defined for birth_death");
      measure = std::move(raw.measure);
      break;
  }
  return build_graph(std::move(raw.ids), std::move(measure), std::move(raw.edges));
}

Flavor parse_flavor(std::string_view text) {
  if (text == "combinatorial") return Flavor::combinatorial;
  if (text == "normalized") return Flavor::normalized;
  if (text == "custom") return Flavor::custom;
  throw Error(ErrorCode::InvalidSpec, "unknown flavor '" + std::string(text) + "'");
}

std::string_view to_string(Flavor f) noexcept {
  switch (f) {
    case Flavor::combinatorial: return "combinatorial";
    case Flavor::normalized: return "normalized";
    case Flavor::custom: return "custom";
  }
  return "?";
}

FamilySpec parse_family_spec(std::string_view text, std::string_view m_expr, std::string_view b_expr,
                             std::optional<Flavor> flavor) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  const std::string_view name = parts[0];
  auto arg = [&](std::size_t i) {
    if (i >= parts.size())
      throw Error(ErrorCode::InvalidSpec, "family '" + std::string(text) + "' is missing parameter " + std::to_string(i));
    return parse_int(parts[i], text);
  };
  auto arity = [&](std::size_t k) {
    if (parts.size() != k + 1)
      throw Error(ErrorCode::InvalidSpec, "family '" + std::string(text) + "' expects " + std::to_string(k) + " parameter(s)");
  };
  const Flavor fl = flavor.value_or(Flavor::combinatorial);
  if (name == "path") { arity(1); return FamilySpec::path(arg(1), fl); }
  if (name == "cycle") { arity(1); return FamilySpec::cycle(arg(1), fl); }
  if (name == "complete") { arity(1); return FamilySpec::complete(arg(1), fl); }
  if (name == "star") { arity(1); return FamilySpec::star(arg(1), fl); }
  if (name == "hypercube") { arity(1); return FamilySpec::hypercube(static_cast<int>(arg(1)), fl); }
  if (name == "lattice_box" || name == "lattice") {
    arity(2);
    return FamilySpec::lattice_box(static_cast<int>(arg(1)), arg(2), fl);
  }
  if (name == "tree") { arity(2); return FamilySpec::tree(static_cast<int>(arg(1)), static_cast<int>(arg(2)), fl); }
  if (name == "birth_death") {
    // Size may be omitted; exhaustion workflows resize the family anyway.
    const std::int64_t n = parts.size() >= 2 ? arg(1) : 1;
    if (parts.size() > 2) arity(1);
    return FamilySpec::birth_death(n, SequenceExpr::parse(m_expr), SequenceExpr::parse(b_expr),
                                   flavor.value_or(Flavor::custom));
  }
  throw Error(ErrorCode::InvalidSpec, "unknown family '" + std::string(name) + "'");
}

std::string family_origin(const FamilySpec& spec) {
  if (spec.kind == FamilyKind::lattice_box) return coord_id(std::vector<std::int64_t>(static_cast<std::size_t>(spec.dimension), 0));
  if (spec.kind == FamilyKind::hypercube) return binary_id(0, spec.dimension);
  return "0";
}

std::vector<std::string> truncation_boundary(const FamilySpec& spec) {
  std::vector<std::string> out;
  switch (spec.kind) {
    case FamilyKind::lattice_box: {
      const WeightedGraph g = generate_family(spec);
      const double full = 2.0 * spec.dimension;
      for (VertexIndex x = 0; x < g.size(); ++x)
        if (g.total_weight(x) < full) out.push_back(g.id(x));
      break;
    }
    case FamilyKind::tree: {
      double first_leaf = 0.0;
      for (int l = 0; l < spec.depth; ++l) first_leaf += std::pow(spec.branching, l);
      double total = first_leaf + std::pow(spec.branching, spec.depth);
      for (auto i = static_cast<std::int64_t>(first_leaf); i < static_cast<std::int64_t>(total); ++i)
        out.push_back(std::to_string(i));
      break;
    }
    case FamilyKind::birth_death: out.push_back(std::to_string(spec.n)); break;
    default: break;
  }
  return out;
}

FamilySpec grow_for_exhaustion(const FamilySpec& spec, std::int64_t max_radius) {
  if (max_radius < 0) throw Error(ErrorCode::InvalidArgument, "radius must be nonnegative");
  FamilySpec grown = spec;
  switch (spec.kind) {
    case FamilyKind::lattice_box: grown.radius = max_radius + 1; break;
    case FamilyKind::birth_death: grown.n = max_radius + 1; break;
    case FamilyKind::tree: grown.depth = static_cast<int>(max_radius + 1); break;
    case FamilyKind::path: grown.n = max_radius + 2; break;
    default:
      throw Error(ErrorCode::InvalidSpec,
                  spec.describe() + " is a finite family; supply a host graph for exhaustion instead");
  }
  return grown;
}

WeightedGraph random_connected_graph(const RandomGraphOptions& opts, std::uint64_t seed) {
  if (opts.vertices < 2) throw Error(ErrorCode::InvalidSpec, "random graph needs at least 2 vertices");
  if (!(opts.weight_lo > 0.0 && opts.weight_hi >= opts.weight_lo))
    throw Error(ErrorCode::InvalidSpec, "random graph weight range must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double llo = std::log(opts.weight_lo), lhi = std::log(opts.weight_hi);
  auto weight = [&] { return std::exp(llo + (lhi - llo) * unit(rng)); };

  const std::size_t n = opts.vertices;
  std::vector<IndexedEdge> edges;
  std::vector<std::vector<char>> present(n, std::vector<char>(n, 0));
  for (std::size_t v = 1; v < n; ++v) {
    const auto parent = static_cast<std::size_t>(unit(rng) * static_cast<double>(v)) % v;
    edges.push_back({parent, v, weight()});
    present[parent][v] = present[v][parent] = 1;
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (!present[u][v] && unit(rng) < opts.extra_edge_probability) edges.push_back({u, v, weight()});

  std::vector<double> measure(n, 1.0);
  if (opts.random_measure)
    for (auto& m : measure) m = weight();
  return build_graph(numbered(static_cast<std::int64_t>(n)), std::move(measure), std::move(edges));
}

}  // namespace gammaflow
