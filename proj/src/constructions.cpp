#include "scaled/constructions.hpp"

#include "scaled/errors.hpp"
#include "scaled/strat.hpp"

namespace scaled {

namespace {

// Repeat mask of the constant surjection [d] -> [0].
std::uint32_t full_mask(int d) { return d <= 0 ? 0u : (((1u << (d + 1)) - 1u) & ~1u); }

// The assignment `key` (a map S -> X) precomposed with phi: S' -> S.
std::vector<Simplex> precompose(const FiniteSimplicialSet& x, const Key& key, const SimplicialMap& phi) {
  std::vector<Simplex> out;
  const auto& src = *phi.source;
  out.reserve(std::size_t(src.size()));
  for (CellIndex c = 0; c < src.size(); ++c) {
    Simplex s = phi.assign[std::size_t(c)];
    Simplex img = decode(key[std::size_t(s.cell)]);
    out.push_back(s.degenerate() ? x.degenerate(img, s.repeats, src.dim(c)) : img);
  }
  return out;
}

std::string join_refs(const FiniteSimplicialSet& x, const std::vector<Simplex>& refs) {
  std::string out;
  for (std::size_t k = 0; k < refs.size(); ++k) {
    if (k) out += "|";
    out += x.ref_string(refs[k]);
  }
  return out;
}

// Slice of x over f; when `fiber` is set the Delta^n part is pinned to that
// vertex as well.
Slice slice_impl(const Decorated& x, const DecoratedMap& f, int max_dim, std::optional<CellIndex> fiber) {
  if (auto err = validate(f)) throw DecorationError("slice needs a scaled map: " + *err);
  if (!same_complex(f.target.complex(), x.complex())) throw ParameterError("slice map must land in X");
  const auto& k = f.source;
  const auto& cx = x.complex();
  int bound = max_dim;
  if (bound < 0) bound = k.complex().size() <= 1 ? cx.max_dim() : (cx.max_dim() + 1) * (k.complex().size() + 1) - 1;
  bound = std::max(bound, 0);

  Slice out;
  std::vector<DecoratedJoin> djs;
  for (int n = 0; n <= bound + 1; ++n) {
    Decorated simplex(standard_simplex(n), Kind::marked_scaled);
    djs.push_back(join_marked_scaled(simplex, k));
    out.joins.push_back(djs.back().join);
  }
  auto id_k = identity_map(k.carrier());
  using Operators = std::vector<std::vector<SimplicialMap>>;
  auto faces = std::make_shared<Operators>(std::size_t(bound) + 2);
  auto degens = std::make_shared<Operators>(std::size_t(bound) + 2);
  for (int n = 1; n <= bound + 1; ++n)
    for (int i = 0; i <= n; ++i)
      (*faces)[std::size_t(n)].push_back(join_map(out.joins[std::size_t(n) - 1], out.joins[std::size_t(n)], coface_map(n, i), id_k));
  for (int n = 0; n <= bound; ++n)
    for (int j = 0; j <= n; ++j)
      (*degens)[std::size_t(n)].push_back(join_map(out.joins[std::size_t(n) + 1], out.joins[std::size_t(n)], codegeneracy_map(n, j), id_k));
  auto carrier = x.carrier();
  auto top_of = [](int n) { return standard_simplex(n)->end_of_dim(n) - 1; };

  PresentationSpec spec;
  spec.max_dim = bound;
  spec.simplices = [&, fiber](int n) {
    const auto& dj = djs[std::size_t(n)];
    const auto& jn = dj.join;
    MapSearch s;
    s.source = &dj.object;
    s.target = &x;
    s.fixed.assign(std::size_t(jn.complex->size()), std::nullopt);
    for (CellIndex c = 0; c < k.complex().size(); ++c) s.fixed[std::size_t(jn.cell(-1, c))] = f.assign[std::size_t(c)];
    if (fiber) {
      auto d = standard_simplex(n);
      for (CellIndex c = 0; c < d->size(); ++c) s.fixed[std::size_t(jn.cell(c, -1))] = Simplex{*fiber, full_mask(d->dim(c))};
    }
    std::vector<Key> keys;
    for (const auto& a : all_maps(s)) keys.push_back(encode(a));
    return keys;
  };
  spec.face = [faces, carrier](const Key& key, int n, int i) {
    return encode(precompose(*carrier, key, (*faces)[std::size_t(n)][std::size_t(i)]));
  };
  spec.degeneracy = [degens, carrier](const Key& key, int n, int j) {
    return encode(precompose(*carrier, key, (*degens)[std::size_t(n)][std::size_t(j)]));
  };
  spec.id = [&](const Key& key, int n) {
    const auto& jn = out.joins[std::size_t(n)];
    std::vector<Simplex> refs;
    if (k.complex().empty()) refs.push_back(decode(key[std::size_t(jn.cell(top_of(n), -1))]));
    for (CellIndex c = 0; c < k.complex().size(); ++c) refs.push_back(decode(key[std::size_t(jn.cell(top_of(n), c))]));
    return join_refs(cx, refs);
  };
  out.presentation = std::make_shared<Presentation>(spec);

  const auto& sc = *out.presentation->complex();
  std::vector<char> marks(std::size_t(sc.size()), 0);
  DecoratedMap proj;
  proj.target = x;
  for (CellIndex c = 0; c < sc.size(); ++c) {
    int n = sc.dim(c);
    const auto& key = out.presentation->key(c);
    const auto& jn = out.joins[std::size_t(n)];
    proj.assign.push_back(decode(key[std::size_t(jn.cell(top_of(n), -1))]));
    if (n == 1) {
      bool ok = true;
      for (CellIndex v = 0; v < k.complex().end_of_dim(0); ++v) ok = ok && x.distinguished(decode(key[std::size_t(jn.cell(top_of(1), v))]));
      marks[std::size_t(c)] = ok;
    } else if (n == 2) {
      marks[std::size_t(c)] = x.distinguished(proj.assign.back());
    }
  }
  out.object = Decorated(out.presentation->complex(), Kind::marked_scaled, std::move(marks));
  proj.source = out.object;
  out.projection = std::move(proj);
  return out;
}

DecoratedMap point_map(const Decorated& x, CellIndex y) {
  DecoratedMap f;
  f.source = Decorated(standard_point(), x.kind() == Kind::marked_scaled ? Kind::marked_scaled : Kind::scaled);
  f.target = x;
  f.assign = {Simplex{y, 0}};
  return f;
}

void check_vertex(const Decorated& c, CellIndex v) {
  if (v < 0 || v >= c.complex().size() || c.complex().dim(v) != 0) throw ParameterError("expected a vertex");
}

struct GrayData {
  std::vector<DecoratedProduct> prisms;
  std::vector<std::vector<SimplicialMap>> faces, degens;
};

std::shared_ptr<GrayData> gray_prisms(int bound) {
  auto g = std::make_shared<GrayData>();
  auto d1 = standard_simplex(1);
  for (int n = 0; n <= bound + 1; ++n) g->prisms.push_back(gray_product(d1, standard_simplex(n)));
  auto id1 = identity_map(d1);
  g->faces.resize(std::size_t(bound) + 2);
  g->degens.resize(std::size_t(bound) + 2);
  for (int n = 1; n <= bound + 1; ++n)
    for (int i = 0; i <= n; ++i)
      g->faces[std::size_t(n)].push_back(product_map(g->prisms[std::size_t(n) - 1].product, g->prisms[std::size_t(n)].product, id1, coface_map(n, i)));
  for (int n = 0; n <= bound; ++n)
    for (int j = 0; j <= n; ++j)
      g->degens[std::size_t(n)].push_back(product_map(g->prisms[std::size_t(n) + 1].product, g->prisms[std::size_t(n)].product, id1, codegeneracy_map(n, j)));
  return g;
}

}  // namespace

DecoratedProduct product_scaled(const Decorated& x, const Decorated& y) {
  if (x.kind() != y.kind()) throw DecorationError("product factors have different decoration kinds");
  DecoratedProduct out{product(x.carrier(), y.carrier()), Decorated()};
  const auto& pc = *out.product.complex;
  std::vector<char> marks(std::size_t(pc.size()), 0);
  for (CellIndex c = 0; c < pc.size(); ++c) {
    if (!tracks(x.kind(), pc.dim(c))) continue;
    auto [a, b] = out.product.parts[std::size_t(c)];
    marks[std::size_t(c)] = x.distinguished(a) && y.distinguished(b);
  }
  out.object = Decorated(out.product.complex, x.kind(), std::move(marks));
  return out;
}

bool gray_thin(const Product& p, CellIndex triangle) {
  auto [a, b] = p.parts[std::size_t(triangle)];
  const auto& k = *p.pr1.target;
  const auto& l = *p.pr2.target;
  if (!a.degenerate() || !b.degenerate()) return false;
  return k.face(a, 0).degenerate() || l.face(b, 2).degenerate();
}

DecoratedProduct gray_product(const ComplexPtr& k, const ComplexPtr& l) {
  DecoratedProduct out{product(k, l), Decorated()};
  const auto& pc = *out.product.complex;
  std::vector<char> marks(std::size_t(pc.size()), 0);
  for (CellIndex c = pc.begin_of_dim(2); c < pc.end_of_dim(2); ++c) marks[std::size_t(c)] = gray_thin(out.product, c);
  out.object = Decorated(out.product.complex, Kind::scaled, std::move(marks));
  return out;
}

DecoratedJoin join_marked_scaled(const Decorated& z, const Decorated& k) {
  DecoratedJoin out{join(z.carrier(), k.carrier()), Decorated()};
  const auto& jc = *out.join.complex;
  std::vector<char> marks(std::size_t(jc.size()), 0);
  auto z_thin = [&](CellIndex c) { return tracks(z.kind(), 2) && z.marked(c); };
  auto z_marked_edge = [&](CellIndex c) { return tracks(z.kind(), 1) && z.marked(c); };
  auto k_thin = [&](CellIndex c) { return tracks(k.kind(), 2) && k.marked(c); };
  for (CellIndex c = jc.begin_of_dim(2); c < jc.end_of_dim(2); ++c) {
    auto p = out.join.parts[std::size_t(c)];
    bool thin = false;
    if (p.right < 0)
      thin = z_thin(p.left);
    else if (p.left < 0)
      thin = k_thin(p.right);
    else
      thin = z.complex().dim(p.left) == 1 && z_marked_edge(p.left);
    marks[std::size_t(c)] = thin;
  }
  out.object = Decorated(out.join.complex, Kind::scaled, std::move(marks));
  return out;
}

Slice slice(const Decorated& x, const DecoratedMap& f, int max_dim) { return slice_impl(x, f, max_dim, std::nullopt); }

Slice slice_at(const Decorated& x, CellIndex y, int max_dim) {
  check_vertex(x, y);
  return slice_impl(x, point_map(x, y), max_dim, std::nullopt);
}

MappingSpace hom_slice(const Decorated& c, CellIndex x, CellIndex y, int max_dim) {
  check_vertex(c, x);
  check_vertex(c, y);
  auto s = slice_impl(c, point_map(c, y), max_dim < 0 ? c.complex().max_dim() : max_dim, x);
  return {s.presentation, underlying_marked(s.object)};
}

MappingSpace hom_gray(const Decorated& c, CellIndex x, CellIndex y, int max_dim) {
  check_vertex(c, x);
  check_vertex(c, y);
  int bound = std::max(0, max_dim < 0 ? c.complex().max_dim() : max_dim);
  auto g = gray_prisms(bound);
  const auto& cx = c.complex();
  auto carrier = c.carrier();
  auto d1 = standard_simplex(1);
  const CellIndex v0 = d1->at("0"), v1 = d1->at("1");

  PresentationSpec spec;
  spec.max_dim = bound;
  spec.simplices = [&](int n) {
    const auto& dp = g->prisms[std::size_t(n)];
    const auto& pc = *dp.product.complex;
    MapSearch s;
    s.source = &dp.object;
    s.target = &c;
    s.fixed.assign(std::size_t(pc.size()), std::nullopt);
    for (CellIndex q = 0; q < pc.size(); ++q) {
      auto first = dp.product.parts[std::size_t(q)].first;
      if (first.cell == v0) s.fixed[std::size_t(q)] = Simplex{x, full_mask(pc.dim(q))};
      if (first.cell == v1) s.fixed[std::size_t(q)] = Simplex{y, full_mask(pc.dim(q))};
    }
    std::vector<Key> keys;
    for (const auto& a : all_maps(s)) keys.push_back(encode(a));
    return keys;
  };
  spec.face = [g, carrier](const Key& key, int n, int i) {
    return encode(precompose(*carrier, key, g->faces[std::size_t(n)][std::size_t(i)]));
  };
  spec.degeneracy = [g, carrier](const Key& key, int n, int j) {
    return encode(precompose(*carrier, key, g->degens[std::size_t(n)][std::size_t(j)]));
  };
  spec.id = [&](const Key& key, int n) {
    const auto& pc = *g->prisms[std::size_t(n)].product.complex;
    std::vector<Simplex> refs;
    for (CellIndex q = pc.begin_of_dim(n + 1); q < pc.end_of_dim(n + 1); ++q) refs.push_back(decode(key[std::size_t(q)]));
    return join_refs(cx, refs);
  };
  auto pres = std::make_shared<Presentation>(spec);
  const auto& hc = *pres->complex();
  std::vector<char> marks(std::size_t(hc.size()), 0);
  const auto& square = *g->prisms[1].product.complex;
  for (CellIndex e = hc.begin_of_dim(1); e < hc.end_of_dim(1); ++e) {
    const auto& key = pres->key(e);
    bool ok = true;
    for (CellIndex t = square.begin_of_dim(2); t < square.end_of_dim(2); ++t) ok = ok && c.distinguished(decode(key[std::size_t(t)]));
    marks[std::size_t(e)] = ok;
  }
  return {pres, Decorated(pres->complex(), Kind::marked, std::move(marks))};
}

Comparison hom_comparison(const Decorated& c, CellIndex x, CellIndex y, int max_dim) {
  check_vertex(c, x);
  check_vertex(c, y);
  int bound = std::max(0, max_dim < 0 ? c.complex().max_dim() : max_dim);
  auto s = slice_impl(c, point_map(c, y), bound, x);
  Comparison out;
  out.source = {s.presentation, underlying_marked(s.object)};
  out.target = hom_gray(c, x, y, bound);
  auto d1 = standard_simplex(1);
  const CellIndex v0 = d1->at("0");
  const auto& sc = *s.presentation->complex();

  // pi_n : Delta^1 x Delta^n -> Delta^n * Delta^0.
  std::vector<SimplicialMap> pis;
  for (int n = 0; n <= bound; ++n) {
    auto pr = product(d1, standard_simplex(n));
    const auto& jn = s.joins[std::size_t(n)];
    VertexLookup lookup(*jn.complex);
    SimplicialMap pi{pr.complex, jn.complex, {}};
    for (CellIndex q = 0; q < pr.complex->size(); ++q) {
      std::vector<CellIndex> seq;
      for (auto v : pr.complex->vertices_of_cell(q)) {
        auto [a, b] = pr.parts[std::size_t(v)];
        seq.push_back(a.cell == v0 ? jn.cell(b.cell, -1) : jn.cell(-1, 0));
      }
      pi.assign.push_back(lookup.at(seq));
    }
    pis.push_back(std::move(pi));
  }
  out.map.source = out.source.object;
  out.map.target = out.target.object;
  for (CellIndex q = 0; q < sc.size(); ++q) {
    int n = sc.dim(q);
    auto key = encode(precompose(c.complex(), s.presentation->key(q), pis[std::size_t(n)]));
    out.map.assign.push_back(out.target.presentation->locate(key, n));
  }
  out.problem = validate(out.map);
  const auto& tc = out.target.object.complex();
  std::vector<char> hit(std::size_t(tc.size()), 0);
  bool injective = true;
  for (CellIndex v = 0; v < sc.end_of_dim(0); ++v) {
    auto img = out.map.assign[std::size_t(v)];
    if (hit[std::size_t(img.cell)]) injective = false;
    hit[std::size_t(img.cell)] = 1;
  }
  out.vertex_bijective = injective && sc.count(0) == tc.count(0);
  bool detects = true;
  for (CellIndex e = sc.begin_of_dim(1); e < sc.end_of_dim(1); ++e)
    detects = detects && (out.source.object.marked(e) == out.target.object.distinguished(out.map.assign[std::size_t(e)]));
  out.detects_marked_edges = detects;
  return out;
}

PushoutProduct pushout_product(const DecoratedMap& i, const DecoratedMap& j) {
  Kind kind = i.source.kind();
  if (i.target.kind() != kind || j.source.kind() != kind || j.target.kind() != kind)
    throw DecorationError("pushout-product needs maps of a single decoration kind");
  if (!is_mono(i) || !is_mono(j)) throw PreconditionError("pushout-product needs monos");
  auto inverse = [](const DecoratedMap& f) {
    std::vector<CellIndex> inv(std::size_t(f.target.complex().size()), -1);
    for (CellIndex a = 0; a < f.source.complex().size(); ++a) inv[std::size_t(f.assign[std::size_t(a)].cell)] = a;
    return inv;
  };
  auto a_of_b = inverse(i);
  auto c_of_d = inverse(j);
  PushoutProduct out{product_scaled(i.target, j.target), Decorated(), DecoratedMap()};
  const auto& pc = *out.ambient.product.complex;
  std::vector<char> keep(std::size_t(pc.size()), 0);
  for (CellIndex q = 0; q < pc.size(); ++q) {
    auto [b, d] = out.ambient.product.parts[std::size_t(q)];
    keep[std::size_t(q)] = a_of_b[std::size_t(b.cell)] >= 0 || c_of_d[std::size_t(d.cell)] >= 0;
  }
  auto sub = subcomplex(out.ambient.product.complex, keep);
  std::vector<char> marks(std::size_t(sub.complex->size()), 0);
  for (CellIndex s = 0; s < sub.complex->size(); ++s) {
    CellIndex q = sub.inclusion.assign[std::size_t(s)].cell;
    if (!tracks(kind, pc.dim(q))) continue;
    auto [b, d] = out.ambient.product.parts[std::size_t(q)];
    CellIndex a = a_of_b[std::size_t(b.cell)], cc = c_of_d[std::size_t(d.cell)];
    bool from_ad = a >= 0 && (b.degenerate() || i.source.marked(a)) && j.target.distinguished(d);
    bool from_bc = cc >= 0 && i.target.distinguished(b) && (d.degenerate() || j.source.marked(cc));
    marks[std::size_t(s)] = from_ad || from_bc;
  }
  out.corner = Decorated(sub.complex, kind, std::move(marks));
  out.map = decorated(sub.inclusion, out.corner, out.ambient.object);
  return out;
}

}  // namespace scaled
