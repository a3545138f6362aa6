#include "scaled/simplicial.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

#include "scaled/errors.hpp"

namespace scaled {

namespace degeneracy {

std::vector<int> word(std::uint32_t repeats) {
  std::vector<int> w;
  for (int j = 31; j >= 1; --j)
    if ((repeats >> j) & 1u) w.push_back(j - 1);
  return w;
}

std::uint32_t from_word(const std::vector<int>& w, int target_dim) {
  std::uint32_t m = 0;
  for (std::size_t a = 0; a < w.size(); ++a) {
    if (a > 0 && w[a] >= w[a - 1]) throw ParameterError("degeneracy word not strictly decreasing");
    if (w[a] < 0) throw ParameterError("negative degeneracy index");
  }
  // s_{i1} ... s_{ir} x with i1 > ... > ir acts last with s_{i1}; the
  // innermost operator s_{ir} needs ir <= dim x, then each next index must be
  // admissible for the dimension it acts on.
  int d = target_dim;
  for (std::size_t a = w.size(); a-- > 0;) {
    if (w[a] > d) throw ParameterError("degeneracy index out of range");
    ++d;
    m |= 1u << (w[a] + 1);
  }
  if (d > kMaxDimension) throw ParameterError("dimension too large");
  return m;
}

}  // namespace degeneracy

struct FiniteSimplicialSet::Cache {
  std::mutex mutex;
  std::vector<std::unique_ptr<BoundaryIndex>> by_dim;
};

FiniteSimplicialSet::FiniteSimplicialSet() : dim_start_{0}, cache_(std::make_shared<Cache>()) {}

std::span<const Simplex> FiniteSimplicialSet::faces(CellIndex c) const {
  auto b = face_start_[std::size_t(c)], e = face_start_[std::size_t(c) + 1];
  return {faces_.data() + b, faces_.data() + e};
}

std::span<const CellIndex> FiniteSimplicialSet::vertices_of_cell(CellIndex c) const {
  auto b = vert_start_[std::size_t(c)], e = vert_start_[std::size_t(c) + 1];
  return {verts_.data() + b, verts_.data() + e};
}

CellIndex FiniteSimplicialSet::begin_of_dim(int n) const {
  if (n < 0) return 0;
  if (n > max_dim()) return size();
  return dim_start_[std::size_t(n)];
}

CellIndex FiniteSimplicialSet::end_of_dim(int n) const {
  if (n < 0) return 0;
  if (n > max_dim()) return size();
  return dim_start_[std::size_t(n) + 1];
}

std::optional<CellIndex> FiniteSimplicialSet::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

CellIndex FiniteSimplicialSet::at(std::string_view id) const {
  auto c = find(id);
  if (!c) throw ReferenceError("unknown cell id '" + std::string(id) + "'");
  return *c;
}

Simplex FiniteSimplicialSet::degenerate(Simplex s, std::uint32_t repeats, int k) const {
  if (repeats == 0) return s;
  const int m = dim_of(s);
  int g[kMaxDimension + 2], f[kMaxDimension + 2], h[kMaxDimension + 2];
  degeneracy::values(s.repeats, m, g);
  degeneracy::values(repeats, k, f);
  for (int j = 0; j <= k; ++j) h[j] = g[f[j]];
  return {s.cell, degeneracy::mask_of(h, k)};
}

Simplex FiniteSimplicialSet::face(Simplex s, int i) const {
  const int k = dim_of(s);
  const int d = dim(s.cell);
  int a[kMaxDimension + 2], b[kMaxDimension + 2];
  degeneracy::values(s.repeats, k, a);
  int t = a[i];
  bool still_onto = (i > 0 && a[i - 1] == t) || (i < k && a[i + 1] == t);
  int n = 0;
  for (int j = 0; j <= k; ++j)
    if (j != i) b[n++] = a[j];
  if (still_onto) return {s.cell, degeneracy::mask_of(b, k - 1)};
  // The j-th face lands in the face d_t of the cell.
  for (int j = 0; j < k; ++j)
    if (b[j] > t) --b[j];
  Simplex f = faces(s.cell)[std::size_t(t)];
  (void)d;
  std::uint32_t m = degeneracy::mask_of(b, k - 1);
  return degenerate(f, m, k - 1);
}

Simplex FiniteSimplicialSet::degeneracy(Simplex s, int j) const {
  const int k = dim_of(s);
  // s_j: precompose with sigma^j : [k+1] -> [k].
  std::uint32_t low = s.repeats & ((1u << (j + 1)) - 1u);
  std::uint32_t high = (s.repeats >> (j + 1)) << (j + 2);
  (void)k;
  return {s.cell, low | high | (1u << (j + 1))};
}

Simplex FiniteSimplicialSet::apply(Simplex s, std::span<const int> theta) const {
  const int n = dim_of(s);
  const int k = int(theta.size()) - 1;
  int f[kMaxDimension + 2];
  degeneracy::values(s.repeats, n, f);
  int phi[kMaxDimension + 2];
  for (int j = 0; j <= k; ++j) phi[j] = f[theta[std::size_t(j)]];
  const int d = dim(s.cell);
  bool hit[kMaxDimension + 2] = {};
  for (int j = 0; j <= k; ++j) hit[phi[j]] = true;
  Simplex base{s.cell, 0};
  int remap[kMaxDimension + 2];
  int r = 0;
  for (int v = 0; v <= d; ++v) remap[v] = hit[v] ? r++ : -1;
  for (int v = d; v >= 0; --v)
    if (!hit[v]) base = face(base, v);
  for (int j = 0; j <= k; ++j) phi[j] = remap[phi[j]];
  return degenerate(base, degeneracy::mask_of(phi, k), k);
}

Simplex FiniteSimplicialSet::restrict(Simplex s, std::span<const int> positions) const {
  return apply(s, positions);
}

std::vector<CellIndex> FiniteSimplicialSet::vertices(Simplex s) const {
  const int k = dim_of(s);
  int f[kMaxDimension + 2];
  degeneracy::values(s.repeats, k, f);
  auto cv = vertices_of_cell(s.cell);
  std::vector<CellIndex> out(std::size_t(k) + 1);
  for (int j = 0; j <= k; ++j) out[std::size_t(j)] = cv[std::size_t(f[j])];
  return out;
}

std::vector<Simplex> FiniteSimplicialSet::boundary(Simplex s) const {
  const int k = dim_of(s);
  std::vector<Simplex> out;
  if (k == 0) return out;
  out.reserve(std::size_t(k) + 1);
  for (int i = 0; i <= k; ++i) out.push_back(face(s, i));
  return out;
}

std::string FiniteSimplicialSet::ref_string(Simplex s) const {
  if (!s.degenerate()) return id(s.cell);
  std::ostringstream os;
  os << "s{";
  auto w = degeneracy::word(s.repeats);
  for (std::size_t a = 0; a < w.size(); ++a) os << (a ? "," : "") << w[a];
  os << "}(" << id(s.cell) << ")";
  return os.str();
}

const BoundaryIndex& FiniteSimplicialSet::boundary_index(int k) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (cache_->by_dim.size() <= std::size_t(k)) cache_->by_dim.resize(std::size_t(k) + 1);
  auto& slot = cache_->by_dim[std::size_t(k)];
  if (slot) return *slot;
  auto idx = std::make_unique<BoundaryIndex>();
  for (int d = 0; d <= std::min(k, max_dim()); ++d) {
    // masks with k-d bits among positions 1..k
    std::vector<int> pick(std::size_t(k), 0);
    std::fill(pick.begin() + (k - (k - d)), pick.end(), 1);
    do {
      std::uint32_t m = 0;
      for (int j = 0; j < k; ++j)
        if (pick[std::size_t(j)]) m |= 1u << (j + 1);
      for (CellIndex c = begin_of_dim(d); c < end_of_dim(d); ++c) idx->all.push_back({c, m});
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  std::sort(idx->all.begin(), idx->all.end());
  if (k > 0)
    for (const auto& s : idx->all) idx->by_boundary[boundary(s)].push_back(s);
  slot = std::move(idx);
  return *slot;
}

int ComplexBuilder::add_cell(std::string id, int dim, const std::vector<Ref>& faces) {
  if (dim < 0 || dim > kMaxDimension) throw ParameterError("cell dimension out of range");
  if (by_id_.count(id)) throw ConstraintError("duplicate cell id '" + id + "'");
  if (dim == 0 ? !faces.empty() : faces.size() != std::size_t(dim) + 1)
    throw ConstraintError("cell '" + id + "' has the wrong number of faces");
  for (const auto& f : faces) {
    if (f.handle < 0 || f.handle >= size()) throw ReferenceError("face of '" + id + "' refers to an unknown cell");
    int fd = dims_[std::size_t(f.handle)] + degeneracy::count(f.repeats);
    if (fd != dim - 1) throw ConstraintError("face of '" + id + "' has the wrong dimension");
    if (f.repeats >> dim) throw ConstraintError("face word of '" + id + "' is not admissible");
  }
  int h = size();
  dims_.push_back(dim);
  ids_.push_back(id);
  faces_.push_back(faces);
  by_id_.emplace(std::move(id), h);
  return h;
}

int ComplexBuilder::handle_of(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw ReferenceError("unknown cell id '" + id + "'");
  return it->second;
}

FiniteSimplicialSet ComplexBuilder::finish(std::vector<CellIndex>* final_index) const {
  const int n = size();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (dims_[std::size_t(a)] != dims_[std::size_t(b)]) return dims_[std::size_t(a)] < dims_[std::size_t(b)];
    return ids_[std::size_t(a)] < ids_[std::size_t(b)];
  });
  std::vector<CellIndex> pos(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pos[std::size_t(order[std::size_t(i)])] = i;

  FiniteSimplicialSet x;
  x.coskeletal0_ = coskeletal0_;
  int maxd = -1;
  for (int d : dims_) maxd = std::max(maxd, d);
  x.dim_start_.assign(std::size_t(maxd + 2), 0);
  x.dims_.reserve(std::size_t(n));
  x.face_start_.push_back(0);
  for (int i = 0; i < n; ++i) {
    int h = order[std::size_t(i)];
    x.dims_.push_back(dims_[std::size_t(h)]);
    x.ids_.push_back(ids_[std::size_t(h)]);
    for (const auto& f : faces_[std::size_t(h)]) x.faces_.push_back({pos[std::size_t(f.handle)], f.repeats});
    x.face_start_.push_back(std::uint32_t(x.faces_.size()));
    x.by_id_.emplace(ids_[std::size_t(h)], i);
  }
  for (int d = 0; d <= maxd; ++d) {
    x.dim_start_[std::size_t(d) + 1] = x.dim_start_[std::size_t(d)];
    for (int v : x.dims_)
      if (v == d) ++x.dim_start_[std::size_t(d) + 1];
  }
  // Vertex lists: the j-th vertex of an n-cell is the j-th vertex of its last
  // face for j < n, and the last vertex of its 0-th face otherwise.
  x.vert_start_.push_back(0);
  for (int i = 0; i < n; ++i) {
    int d = x.dims_[std::size_t(i)];
    if (d == 0) {
      x.verts_.push_back(i);
    } else {
      auto f_last = x.faces_[x.face_start_[std::size_t(i)] + std::uint32_t(d)];
      auto f_first = x.faces_[x.face_start_[std::size_t(i)]];
      auto a = x.vertices(f_last);
      auto b = x.vertices(f_first);
      for (auto v : a) x.verts_.push_back(v);
      x.verts_.push_back(b.back());
    }
    x.vert_start_.push_back(std::uint32_t(x.verts_.size()));
  }
  if (final_index) *final_index = pos;
  return x;
}

ComplexPtr ComplexBuilder::finish_shared(std::vector<CellIndex>* final_index) const {
  return std::make_shared<const FiniteSimplicialSet>(finish(final_index));
}

std::optional<std::string> check_simplicial_identities(const FiniteSimplicialSet& x) {
  for (CellIndex c = 0; c < x.size(); ++c) {
    int n = x.dim(c);
    Simplex s{c, 0};
    for (int j = 1; j <= n; ++j)
      for (int i = 0; i < j; ++i) {
        if (n < 2) continue;
        auto lhs = x.face(x.face(s, j), i);
        auto rhs = x.face(x.face(s, i), j - 1);
        if (lhs != rhs)
          return "cell '" + x.id(c) + "': d" + std::to_string(i) + " d" + std::to_string(j) + " != d" +
                 std::to_string(j - 1) + " d" + std::to_string(i);
      }
  }
  return std::nullopt;
}

Simplex SimplicialMap::apply(Simplex s) const {
  Simplex img = assign[std::size_t(s.cell)];
  if (!s.degenerate()) return img;
  return target->degenerate(img, s.repeats, source->dim_of(s));
}

std::optional<std::string> check_simplicial_map(const SimplicialMap& f) {
  const auto& x = *f.source;
  const auto& y = *f.target;
  if (f.assign.size() != std::size_t(x.size())) return "assignment size does not match source";
  for (CellIndex c = 0; c < x.size(); ++c) {
    Simplex img = f.assign[std::size_t(c)];
    if (img.cell < 0 || img.cell >= y.size()) return "cell '" + x.id(c) + "' has no image";
    if (y.dim_of(img) != x.dim(c)) return "cell '" + x.id(c) + "' maps to a simplex of the wrong dimension";
    auto fc = x.faces(c);
    for (std::size_t i = 0; i < fc.size(); ++i)
      if (f.apply(fc[i]) != y.face(img, int(i)))
        return "face " + std::to_string(i) + " of cell '" + x.id(c) + "' does not commute";
  }
  return std::nullopt;
}

bool is_mono(const SimplicialMap& f) {
  std::vector<char> hit(std::size_t(f.target->size()), 0);
  for (auto s : f.assign) {
    if (s.degenerate()) return false;
    if (hit[std::size_t(s.cell)]) return false;
    hit[std::size_t(s.cell)] = 1;
  }
  return true;
}

SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f) {
  SimplicialMap h{f.source, g.target, {}};
  h.assign.reserve(f.assign.size());
  for (auto s : f.assign) h.assign.push_back(g.apply(s));
  return h;
}

SimplicialMap identity_map(const ComplexPtr& x) {
  SimplicialMap m{x, x, {}};
  for (CellIndex c = 0; c < x->size(); ++c) m.assign.push_back({c, 0});
  return m;
}

bool same_complex(const FiniteSimplicialSet& a, const FiniteSimplicialSet& b) {
  if (a.size() != b.size()) return false;
  for (CellIndex c = 0; c < a.size(); ++c) {
    if (a.dim(c) != b.dim(c) || a.id(c) != b.id(c)) return false;
    auto fa = a.faces(c), fb = b.faces(c);
    for (std::size_t i = 0; i < fa.size(); ++i)
      if (a.id(fa[i].cell) != b.id(fb[i].cell) || fa[i].repeats != fb[i].repeats) return false;
  }
  return true;
}

}  // namespace scaled
