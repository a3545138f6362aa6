#include "scaled/presentation.hpp"

#include <algorithm>

#include "scaled/errors.hpp"

namespace scaled {

Key encode(const std::vector<Simplex>& a) {
  Key k;
  k.reserve(a.size());
  for (auto s : a) k.push_back(encode(s));
  return k;
}

std::vector<Simplex> decode(const Key& k) {
  std::vector<Simplex> a;
  a.reserve(k.size());
  for (auto v : k) a.push_back(decode(v));
  return a;
}

namespace {

struct Root {
  Key key;
  int dim;
  std::uint32_t repeats;
};

// Strips degeneracies: repeat position j+1 for every j with k == s_j d_j k.
Root root_of(const PresentationSpec& spec, const Key& k, int n) {
  std::vector<int> js;
  for (int j = 0; j < n; ++j)
    if (spec.degeneracy(spec.face(k, n, j), n - 1, j) == k) js.push_back(j);
  Root r{k, n, 0};
  for (auto it = js.rbegin(); it != js.rend(); ++it) {
    r.key = spec.face(r.key, r.dim, *it);
    --r.dim;
  }
  for (int j : js) r.repeats |= 1u << (j + 1);
  return r;
}

}  // namespace

Presentation::Presentation(PresentationSpec spec) : spec_(std::move(spec)) {
  ComplexBuilder b;
  std::vector<std::unordered_map<Key, int, KeyHash>> handles(std::size_t(spec_.max_dim) + 1);
  std::vector<Key> handle_keys;
  for (int n = 0; n <= spec_.max_dim; ++n) {
    auto cands = spec_.simplices(n);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (const auto& k : cands) {
      if (n > 0 && is_degenerate(k, n)) continue;
      std::vector<ComplexBuilder::Ref> faces;
      if (n > 0)
        for (int i = 0; i <= n; ++i) {
          auto r = root_of(spec_, spec_.face(k, n, i), n - 1);
          auto it = handles[std::size_t(r.dim)].find(r.key);
          if (it == handles[std::size_t(r.dim)].end())
            throw ReferenceError("face of a simplex is missing from the presentation");
          faces.push_back({it->second, r.repeats});
        }
      int h = b.add_cell(spec_.id(k, n), n, faces);
      handles[std::size_t(n)].emplace(k, h);
      handle_keys.push_back(k);
    }
  }
  std::vector<CellIndex> fin;
  complex_ = b.finish_shared(&fin);
  // Only the operators are needed from here on; the enumerators may refer to
  // the caller's locals.
  spec_.simplices = nullptr;
  spec_.id = nullptr;
  keys_.resize(handle_keys.size());
  index_.resize(std::size_t(spec_.max_dim) + 1);
  for (std::size_t h = 0; h < handle_keys.size(); ++h) {
    CellIndex c = fin[h];
    keys_[std::size_t(c)] = handle_keys[h];
    index_[std::size_t(complex_->dim(c))].emplace(handle_keys[h], c);
  }
}

bool Presentation::is_degenerate(const Key& k, int n) const {
  for (int j = 0; j < n; ++j)
    if (spec_.degeneracy(spec_.face(k, n, j), n - 1, j) == k) return true;
  return false;
}

Simplex Presentation::locate(const Key& k, int n) const {
  auto r = root_of(spec_, k, n);
  if (r.dim > spec_.max_dim) throw ReferenceError("simplex lies above the presented dimension");
  auto it = index_[std::size_t(r.dim)].find(r.key);
  if (it == index_[std::size_t(r.dim)].end()) throw ReferenceError("simplex is missing from the presentation");
  return {it->second, r.repeats};
}

}  // namespace scaled
