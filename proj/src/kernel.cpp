#include "scaled/kernel.hpp"

#include <algorithm>
#include <bit>
#include <mutex>

#include "scaled/errors.hpp"

namespace scaled {

std::string subset_id(std::uint32_t subset, int n) {
  std::string s;
  for (int v = 0; v <= n; ++v) {
    if (!((subset >> v) & 1u)) continue;
    if (n >= 10 && !s.empty()) s += '.';
    s += std::to_string(v);
  }
  return s;
}

ComplexPtr simplex_subcomplex(int n, const std::function<bool(std::uint32_t)>& keep) {
  if (n < 0 || n > 20) throw ParameterError("simplex dimension out of range");
  ComplexBuilder b;
  std::vector<int> handle(std::size_t(1) << (n + 1), -1);
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t s = 1; s < (1u << (n + 1)); ++s)
    if (keep(s)) subsets.push_back(s);
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](std::uint32_t a, std::uint32_t c) { return std::popcount(a) < std::popcount(c); });
  for (auto s : subsets) {
    std::vector<ComplexBuilder::Ref> faces;
    int d = std::popcount(s) - 1;
    if (d > 0) {
      for (int v = 0; v <= n; ++v) {
        if (!((s >> v) & 1u)) continue;
        int h = handle[s & ~(1u << v)];
        if (h < 0) throw ConstraintError("subset family is not closed under faces");
        faces.push_back({h, 0});
      }
    }
    handle[s] = b.add_cell(subset_id(s, n), d, faces);
  }
  return b.finish_shared();
}

ComplexPtr standard_simplex(int n) {
  // Shared so that maps between standard simplices agree on their endpoints.
  static std::mutex mutex;
  static std::map<int, ComplexPtr> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto x = simplex_subcomplex(n, [](std::uint32_t) { return true; });
  cache.emplace(n, x);
  return x;
}

ComplexPtr standard_boundary(int n) {
  std::uint32_t full = (1u << (n + 1)) - 1u;
  return simplex_subcomplex(n, [full](std::uint32_t s) { return s != full; });
}

ComplexPtr standard_horn(int n, int i) {
  if (n < 1 || i < 0 || i > n) throw ParameterError("horn index out of range");
  std::uint32_t full = (1u << (n + 1)) - 1u;
  std::uint32_t opposite = full & ~(1u << i);
  return simplex_subcomplex(n, [=](std::uint32_t s) { return s != full && s != opposite; });
}

ComplexPtr standard_face(int n, std::uint32_t subset) {
  if (subset == 0) throw ParameterError("face needs a nonempty vertex set");
  if (subset >> (n + 1)) throw ParameterError("face vertex out of range");
  return simplex_subcomplex(n, [subset](std::uint32_t s) { return (s & ~subset) == 0; });
}

ComplexPtr standard_point() { return standard_simplex(0); }

ComplexPtr empty_complex() { return std::make_shared<const FiniteSimplicialSet>(); }

std::optional<CellIndex> find_subset(const FiniteSimplicialSet& x, std::uint32_t subset, int n) {
  return x.find(subset_id(subset, n));
}

// ---- vertex lookups ---------------------------------------------------------

int vertex_number(const FiniteSimplicialSet& x, CellIndex v) { return std::stoi(x.id(v)); }

SimplicialMap simplex_operator(int m, int n, const std::vector<int>& theta) {
  if (int(theta.size()) != m + 1) throw ParameterError("simplex operator needs m+1 values");
  for (int a = 0; a <= m; ++a)
    if (theta[std::size_t(a)] < 0 || theta[std::size_t(a)] > n || (a > 0 && theta[std::size_t(a)] < theta[std::size_t(a) - 1]))
      throw ParameterError("simplex operator must be monotone into [n]");
  auto src = standard_simplex(m);
  auto tgt = standard_simplex(n);
  Simplex top{tgt->end_of_dim(n) - 1, 0};
  SimplicialMap f{src, tgt, {}};
  f.assign.reserve(std::size_t(src->size()));
  for (CellIndex c = 0; c < src->size(); ++c) {
    std::vector<int> t;
    for (auto v : src->vertices_of_cell(c)) t.push_back(theta[std::size_t(vertex_number(*src, v))]);
    f.assign.push_back(tgt->apply(top, t));
  }
  return f;
}

SimplicialMap coface_map(int n, int i) {
  std::vector<int> t;
  for (int a = 0; a <= n; ++a)
    if (a != i) t.push_back(a);
  return simplex_operator(n - 1, n, t);
}

SimplicialMap codegeneracy_map(int n, int j) {
  std::vector<int> t;
  for (int a = 0; a <= n + 1; ++a) t.push_back(a <= j ? a : a - 1);
  return simplex_operator(n + 1, n, t);
}

std::size_t VertexLookup::Hash::operator()(const std::vector<CellIndex>& v) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (auto c : v) {
    h ^= std::uint64_t(std::uint32_t(c));
    h *= 1099511628211ull;
  }
  return std::size_t(h);
}

VertexLookup::VertexLookup(const FiniteSimplicialSet& x) {
  for (CellIndex c = 0; c < x.size(); ++c) {
    auto v = x.vertices_of_cell(c);
    std::vector<CellIndex> key(v.begin(), v.end());
    if (!cells_.emplace(std::move(key), c).second) ambiguous_ = true;
  }
}

std::optional<Simplex> VertexLookup::find(const std::vector<CellIndex>& seq) const {
  std::vector<CellIndex> key;
  std::uint32_t rep = 0;
  for (std::size_t j = 0; j < seq.size(); ++j) {
    if (j > 0 && seq[j] == seq[j - 1]) {
      rep |= 1u << j;
      continue;
    }
    key.push_back(seq[j]);
  }
  auto it = cells_.find(key);
  if (it == cells_.end()) return std::nullopt;
  return Simplex{it->second, rep};
}

Simplex VertexLookup::at(const std::vector<CellIndex>& seq) const {
  auto s = find(seq);
  if (!s) throw ReferenceError("no simplex with the requested vertex sequence");
  return *s;
}

// ---- products ---------------------------------------------------------------

namespace {

// Removes the positions in `common` from a repeat mask of a k-simplex.
std::uint32_t squeeze(std::uint32_t mask, std::uint32_t common, int k) {
  std::uint32_t out = 0;
  int pos = 0;
  for (int j = 1; j <= k; ++j) {
    if ((common >> j) & 1u) continue;
    ++pos;
    if ((mask >> j) & 1u) out |= 1u << pos;
  }
  return out;
}

std::vector<std::uint32_t> masks_with(int bits, int k) {
  std::vector<std::uint32_t> out;
  if (bits < 0 || bits > k) return out;
  std::vector<int> pick(std::size_t(k), 0);
  std::fill(pick.begin() + (k - bits), pick.end(), 1);
  do {
    std::uint32_t m = 0;
    for (int j = 0; j < k; ++j)
      if (pick[std::size_t(j)]) m |= 1u << (j + 1);
    out.push_back(m);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return out;
}

}  // namespace

Simplex Product::pair(Simplex a, Simplex b) const {
  int k = pr1.target->dim_of(a);
  std::uint32_t common = a.repeats & b.repeats;
  Simplex ra{a.cell, squeeze(a.repeats, common, k)};
  Simplex rb{b.cell, squeeze(b.repeats, common, k)};
  auto it = lookup.find({ra, rb});
  if (it == lookup.end()) throw ReferenceError("product simplex not found");
  return {it->second, common};
}

Product product(const ComplexPtr& x, const ComplexPtr& y) {
  ComplexBuilder b;
  std::unordered_map<std::pair<Simplex, Simplex>, int, Product::PairHash> handles;
  std::vector<std::pair<Simplex, Simplex>> handle_parts;
  const int px = x->max_dim(), py = y->max_dim();
  auto pair_handle = [&](Simplex a, Simplex c, int k) -> ComplexBuilder::Ref {
    std::uint32_t common = a.repeats & c.repeats;
    Simplex ra{a.cell, squeeze(a.repeats, common, k)};
    Simplex rc{c.cell, squeeze(c.repeats, common, k)};
    return {handles.at({ra, rc}), common};
  };
  if (px >= 0 && py >= 0) {
    for (int k = 0; k <= px + py; ++k) {
      for (int p = 0; p <= std::min(k, px); ++p)
        for (int q = std::max(0, k - p); q <= std::min(k, py); ++q) {
          auto ma = masks_with(k - p, k);
          auto mb = masks_with(k - q, k);
          for (CellIndex cx = x->begin_of_dim(p); cx < x->end_of_dim(p); ++cx)
            for (CellIndex cy = y->begin_of_dim(q); cy < y->end_of_dim(q); ++cy)
              for (auto fa : ma)
                for (auto fb : mb) {
                  if (fa & fb) continue;
                  Simplex a{cx, fa}, c{cy, fb};
                  std::vector<ComplexBuilder::Ref> faces;
                  for (int i = 0; k > 0 && i <= k; ++i) faces.push_back(pair_handle(x->face(a, i), y->face(c, i), k - 1));
                  std::string id = "(" + x->ref_string(a) + "," + y->ref_string(c) + ")";
                  int h = b.add_cell(std::move(id), k, faces);
                  handles.emplace(std::pair{a, c}, h);
                  handle_parts.push_back({a, c});
                }
        }
    }
  }
  std::vector<CellIndex> final_index;
  Product out;
  out.complex = b.finish_shared(&final_index);
  out.parts.resize(handle_parts.size());
  for (std::size_t h = 0; h < handle_parts.size(); ++h) {
    out.parts[std::size_t(final_index[h])] = handle_parts[h];
    out.lookup.emplace(handle_parts[h], final_index[h]);
  }
  out.pr1 = {out.complex, x, {}};
  out.pr2 = {out.complex, y, {}};
  for (const auto& [a, c] : out.parts) {
    out.pr1.assign.push_back(a);
    out.pr2.assign.push_back(c);
  }
  return out;
}

SimplicialMap product_map(const Product& from, const Product& to, const SimplicialMap& u, const SimplicialMap& v) {
  SimplicialMap m{from.complex, to.complex, {}};
  for (const auto& [a, c] : from.parts) m.assign.push_back(to.pair(u.apply(a), v.apply(c)));
  return m;
}

// ---- joins ------------------------------------------------------------------

CellIndex Join::cell(CellIndex l, CellIndex r) const {
  auto it = lookup.find({l, r});
  if (it == lookup.end()) throw ReferenceError("join cell not found");
  return it->second;
}

Join join(const ComplexPtr& x, const ComplexPtr& y) {
  ComplexBuilder b;
  std::map<std::pair<CellIndex, CellIndex>, int> h;
  std::vector<JoinCell> hparts;
  auto add = [&](CellIndex l, CellIndex r, std::string id, int dim, const std::vector<ComplexBuilder::Ref>& faces) {
    int handle = b.add_cell(std::move(id), dim, faces);
    h[{l, r}] = handle;
    hparts.push_back({l, r});
  };
  const int px = x->max_dim(), py = y->max_dim();
  const int top = std::max({px, py, px + py + 1});
  for (int n = 0; n <= top; ++n) {
    // cells of X
    for (CellIndex c = x->begin_of_dim(n); n <= px && c < x->end_of_dim(n); ++c) {
      std::vector<ComplexBuilder::Ref> faces;
      for (auto f : x->faces(c)) faces.push_back({h.at({f.cell, -1}), f.repeats});
      add(c, -1, x->id(c) + "*", n, faces);
    }
    for (CellIndex c = y->begin_of_dim(n); n <= py && c < y->end_of_dim(n); ++c) {
      std::vector<ComplexBuilder::Ref> faces;
      for (auto f : y->faces(c)) faces.push_back({h.at({-1, f.cell}), f.repeats});
      add(-1, c, "*" + y->id(c), n, faces);
    }
    for (int p = 0; p <= std::min(px, n - 1); ++p) {
      int q = n - 1 - p;
      if (q > py) continue;
      for (CellIndex cx = x->begin_of_dim(p); cx < x->end_of_dim(p); ++cx)
        for (CellIndex cy = y->begin_of_dim(q); cy < y->end_of_dim(q); ++cy) {
          std::vector<ComplexBuilder::Ref> faces;
          for (int i = 0; i <= p; ++i) {
            if (p == 0) {
              faces.push_back({h.at({-1, cy}), 0});
            } else {
              Simplex f = x->faces(cx)[std::size_t(i)];
              faces.push_back({h.at({f.cell, cy}), f.repeats});
            }
          }
          for (int j = 0; j <= q; ++j) {
            if (q == 0) {
              faces.push_back({h.at({cx, -1}), 0});
            } else {
              Simplex f = y->faces(cy)[std::size_t(j)];
              faces.push_back({h.at({cx, f.cell}), f.repeats << (p + 1)});
            }
          }
          add(cx, cy, x->id(cx) + "*" + y->id(cy), n, faces);
        }
    }
  }
  std::vector<CellIndex> final_index;
  Join out;
  out.complex = b.finish_shared(&final_index);
  out.parts.resize(hparts.size());
  for (std::size_t k = 0; k < hparts.size(); ++k) {
    out.parts[std::size_t(final_index[k])] = hparts[k];
    out.lookup[{hparts[k].left, hparts[k].right}] = final_index[k];
  }
  out.left = {x, out.complex, {}};
  for (CellIndex c = 0; c < x->size(); ++c) out.left.assign.push_back({out.cell(c, -1), 0});
  out.right = {y, out.complex, {}};
  for (CellIndex c = 0; c < y->size(); ++c) out.right.assign.push_back({out.cell(-1, c), 0});
  return out;
}

SimplicialMap join_map(const Join& from, const Join& to, const SimplicialMap& u, const SimplicialMap& v) {
  SimplicialMap m{from.complex, to.complex, {}};
  const auto& x = *u.source;
  for (const auto& part : from.parts) {
    if (part.right < 0) {
      Simplex a = u.assign[std::size_t(part.left)];
      m.assign.push_back({to.cell(a.cell, -1), a.repeats});
    } else if (part.left < 0) {
      Simplex c = v.assign[std::size_t(part.right)];
      m.assign.push_back({to.cell(-1, c.cell), c.repeats});
    } else {
      Simplex a = u.assign[std::size_t(part.left)];
      Simplex c = v.assign[std::size_t(part.right)];
      int p = x.dim(part.left);
      m.assign.push_back({to.cell(a.cell, c.cell), a.repeats | (c.repeats << (p + 1))});
    }
  }
  return m;
}

// ---- pushouts -----------------------------------------------------------------

namespace {

Kind joint_kind(Kind a, Kind b) {
  if (a == Kind::plain) return b;
  if (b == Kind::plain) return a;
  if (a != b) throw DecorationError("pushout of differently decorated sets");
  return a;
}

Pushout pushout_mono(const DecoratedMap& f, const DecoratedMap& g) {
  // f: A -> X mono, g: A -> Y arbitrary.
  const auto& x = f.target.complex();
  const auto& y = g.target.complex();
  std::vector<CellIndex> preimage(std::size_t(x.size()), -1);
  for (CellIndex a = 0; a < f.source.complex().size(); ++a) preimage[std::size_t(f.assign[std::size_t(a)].cell)] = a;

  ComplexBuilder b;
  std::vector<int> yh(std::size_t(y.size()));
  for (CellIndex c = 0; c < y.size(); ++c) {
    std::vector<ComplexBuilder::Ref> faces;
    for (auto fc : y.faces(c)) faces.push_back({yh[std::size_t(fc.cell)], fc.repeats});
    yh[std::size_t(c)] = b.add_cell(y.id(c), y.dim(c), faces);
  }
  std::vector<int> xh(std::size_t(x.size()), -1);
  for (CellIndex c = 0; c < x.size(); ++c) {
    if (preimage[std::size_t(c)] >= 0) continue;
    std::vector<ComplexBuilder::Ref> faces;
    for (auto fc : x.faces(c)) {
      if (preimage[std::size_t(fc.cell)] < 0) {
        faces.push_back({xh[std::size_t(fc.cell)], fc.repeats});
      } else {
        Simplex img = g.assign[std::size_t(preimage[std::size_t(fc.cell)])];
        Simplex s = y.degenerate(img, fc.repeats, x.dim(c) - 1);
        faces.push_back({yh[std::size_t(s.cell)], s.repeats});
      }
    }
    std::string id = x.id(c);
    while (b.has_id(id)) id += "'";
    xh[std::size_t(c)] = b.add_cell(id, x.dim(c), faces);
  }
  std::vector<CellIndex> fin;
  auto p = b.finish_shared(&fin);
  Pushout out;
  Kind kind = joint_kind(f.target.kind(), g.target.kind());
  std::vector<char> marks(std::size_t(p->size()), 0);
  DecoratedMap from_x{f.target, {}, {}}, from_y{g.target, {}, {}};
  for (CellIndex c = 0; c < y.size(); ++c) from_y.assign.push_back({fin[std::size_t(yh[std::size_t(c)])], 0});
  for (CellIndex c = 0; c < x.size(); ++c) {
    if (preimage[std::size_t(c)] >= 0) {
      Simplex img = g.assign[std::size_t(preimage[std::size_t(c)])];
      from_x.assign.push_back({fin[std::size_t(yh[std::size_t(img.cell)])], img.repeats});
    } else {
      from_x.assign.push_back({fin[std::size_t(xh[std::size_t(c)])], 0});
    }
  }
  for (CellIndex c = 0; c < y.size(); ++c)
    if (g.target.marked(c)) marks[std::size_t(from_y.assign[std::size_t(c)].cell)] = 1;
  for (CellIndex c = 0; c < x.size(); ++c)
    if (f.target.marked(c) && !from_x.assign[std::size_t(c)].degenerate())
      marks[std::size_t(from_x.assign[std::size_t(c)].cell)] = 1;
  for (CellIndex c = 0; c < p->size(); ++c)
    if (marks[std::size_t(c)] && !tracks(kind, p->dim(c))) marks[std::size_t(c)] = 0;
  out.object = Decorated(p, kind, marks);
  from_x.target = out.object;
  from_y.target = out.object;
  out.from_x = std::move(from_x);
  out.from_y = std::move(from_y);
  out.from_y_cell.assign(std::size_t(p->size()), -1);
  out.from_x_cell.assign(std::size_t(p->size()), -1);
  for (CellIndex c = 0; c < y.size(); ++c) out.from_y_cell[std::size_t(fin[std::size_t(yh[std::size_t(c)])])] = c;
  for (CellIndex c = 0; c < x.size(); ++c)
    if (xh[std::size_t(c)] >= 0) out.from_x_cell[std::size_t(fin[std::size_t(xh[std::size_t(c)])])] = c;
  return out;
}

}  // namespace

DecoratedMap Pushout::induced(const DecoratedMap& u, const DecoratedMap& v) const {
  DecoratedMap m{object, u.target, {}};
  for (CellIndex c = 0; c < object.complex().size(); ++c) {
    if (from_y_cell[std::size_t(c)] >= 0)
      m.assign.push_back(v.assign[std::size_t(from_y_cell[std::size_t(c)])]);
    else
      m.assign.push_back(u.assign[std::size_t(from_x_cell[std::size_t(c)])]);
  }
  return m;
}

Pushout pushout(const DecoratedMap& f, const DecoratedMap& g) {
  if (f.source.carrier() != g.source.carrier() && !same_complex(f.source.complex(), g.source.complex()))
    throw PreconditionError("pushout legs do not share a source");
  if (is_mono(f)) return pushout_mono(f, g);
  if (is_mono(g)) {
    Pushout p = pushout_mono(g, f);
    std::swap(p.from_x, p.from_y);
    std::swap(p.from_x_cell, p.from_y_cell);
    return p;
  }
  throw PreconditionError("pushout needs one leg to be a mono");
}

Pushout pushout(const SimplicialMap& f, const SimplicialMap& g) {
  Decorated a(f.source, Kind::plain), x(f.target, Kind::plain), y(g.target, Kind::plain);
  return pushout(DecoratedMap{a, x, f.assign}, DecoratedMap{a, y, g.assign});
}

// ---- opposites ------------------------------------------------------------------

namespace {

std::uint32_t reverse_mask(std::uint32_t m, int k) {
  std::uint32_t out = 0;
  for (int j = 1; j <= k; ++j)
    if ((m >> j) & 1u) out |= 1u << (k + 1 - j);
  return out;
}

}  // namespace

ComplexPtr opposite(const ComplexPtr& x) {
  ComplexBuilder b;
  for (CellIndex c = 0; c < x->size(); ++c) {
    int n = x->dim(c);
    std::vector<ComplexBuilder::Ref> faces;
    auto fc = x->faces(c);
    for (int i = 0; n > 0 && i <= n; ++i) {
      Simplex f = fc[std::size_t(n - i)];
      faces.push_back({f.cell, reverse_mask(f.repeats, n - 1)});
    }
    b.add_cell(x->id(c), n, faces);
  }
  b.set_coskeletal0(x->coskeletal0());
  return b.finish_shared();
}

Decorated opposite(const Decorated& x) { return Decorated(opposite(x.carrier()), x.kind(), x.marks()); }

DecoratedMap opposite(const DecoratedMap& f, const Decorated& source_op, const Decorated& target_op) {
  DecoratedMap m{source_op, target_op, {}};
  const auto& y = f.target.complex();
  for (auto s : f.assign) m.assign.push_back({s.cell, reverse_mask(s.repeats, y.dim_of(s))});
  return m;
}

// ---- subcomplexes -----------------------------------------------------------

std::vector<char> face_closure(const FiniteSimplicialSet& x, std::vector<char> keep) {
  for (CellIndex c = x.size(); c-- > 0;)
    if (keep[std::size_t(c)])
      for (auto f : x.faces(c)) keep[std::size_t(f.cell)] = 1;
  return keep;
}

Subcomplex subcomplex(const ComplexPtr& x, std::vector<char> keep) {
  keep = face_closure(*x, std::move(keep));
  ComplexBuilder b;
  std::vector<int> h(std::size_t(x->size()), -1);
  for (CellIndex c = 0; c < x->size(); ++c) {
    if (!keep[std::size_t(c)]) continue;
    std::vector<ComplexBuilder::Ref> faces;
    for (auto f : x->faces(c)) faces.push_back({h[std::size_t(f.cell)], f.repeats});
    h[std::size_t(c)] = b.add_cell(x->id(c), x->dim(c), faces);
  }
  b.set_coskeletal0(x->coskeletal0());
  std::vector<CellIndex> fin;
  Subcomplex out;
  out.complex = b.finish_shared(&fin);
  out.index_in_sub.assign(std::size_t(x->size()), -1);
  out.inclusion = {out.complex, x, std::vector<Simplex>(std::size_t(out.complex->size()))};
  for (CellIndex c = 0; c < x->size(); ++c)
    if (h[std::size_t(c)] >= 0) {
      CellIndex s = fin[std::size_t(h[std::size_t(c)])];
      out.index_in_sub[std::size_t(c)] = s;
      out.inclusion.assign[std::size_t(s)] = {c, 0};
    }
  return out;
}

Decorated restrict_decoration(const Decorated& ambient, const Subcomplex& sub) {
  std::vector<char> marks(std::size_t(sub.complex->size()), 0);
  for (CellIndex s = 0; s < sub.complex->size(); ++s) marks[std::size_t(s)] = ambient.marks()[std::size_t(sub.inclusion.assign[std::size_t(s)].cell)];
  return Decorated(sub.complex, ambient.kind(), marks);
}

ComplexPtr skeleton(const ComplexPtr& x, int n) {
  std::vector<char> keep(std::size_t(x->size()), 0);
  for (CellIndex c = 0; c < x->size(); ++c) keep[std::size_t(c)] = x->dim(c) <= n;
  return subcomplex(x, keep).complex;
}

std::optional<Assignment> find_isomorphism(const Decorated& a, const Decorated& b, const PartialAssignment& partial) {
  const auto& x = a.complex();
  const auto& y = b.complex();
  if (x.size() != y.size() || x.max_dim() != y.max_dim()) return std::nullopt;
  for (int d = 0; d <= x.max_dim(); ++d) {
    if (x.count(d) != y.count(d)) return std::nullopt;
    if (a.marked_cells(d).size() != b.marked_cells(d).size()) return std::nullopt;
  }
  MapSearch s{&a, &b, partial, nullptr, {}, true, true};
  return first_map(s);
}

}  // namespace scaled
