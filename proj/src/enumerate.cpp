#include "scaled/enumerate.hpp"

#include <algorithm>

#include "scaled/errors.hpp"

namespace scaled {

namespace {

struct Engine {
  const MapSearch& s;
  const FiniteSimplicialSet& x;
  const FiniteSimplicialSet& y;
  std::vector<CellIndex> order;
  std::vector<char> pinned;
  Assignment assign;
  const std::function<bool(const Assignment&)>& visit;
  std::vector<char> used;
  bool stopped = false;
  bool impossible = false;

  Engine(const MapSearch& search, const std::function<bool(const Assignment&)>& v)
      : s(search), x(search.source->complex()), y(search.target->complex()), visit(v) {}

  bool admissible(CellIndex c, Simplex cand) const {
    if (s.check_decorations && s.source->marked(c) && tracks(s.target->kind(), x.dim(c)) &&
        !s.target->distinguished(cand))
      return false;
    if (s.over && s.over->apply(cand) != s.over_required[std::size_t(c)]) return false;
    if (s.injective && (cand.degenerate() || used[std::size_t(cand.cell)])) return false;
    return true;
  }

  Simplex face_image(CellIndex c, std::size_t i) const {
    Simplex ref = x.faces(c)[i];
    return y.degenerate(assign[std::size_t(ref.cell)], ref.repeats, x.dim(c) - 1);
  }

  // Pins faces of pinned cells, checking consistency.
  void close_pins() {
    std::vector<CellIndex> work;
    for (CellIndex c = x.size(); c-- > 0;)
      if (pinned[std::size_t(c)]) work.push_back(c);
    // Process from high dimension to low so that pins can only propagate down.
    std::sort(work.begin(), work.end(), [&](CellIndex a, CellIndex b) { return x.dim(a) > x.dim(b); });
    for (std::size_t w = 0; w < work.size(); ++w) {
      CellIndex c = work[w];
      Simplex img = assign[std::size_t(c)];
      if (img.cell < 0 || img.cell >= y.size() || y.dim_of(img) != x.dim(c))
        throw ConstraintError("pinned image of '" + x.id(c) + "' has the wrong dimension");
      auto fc = x.faces(c);
      for (std::size_t i = 0; i < fc.size(); ++i) {
        Simplex want = y.face(img, int(i));
        Simplex ref = fc[i];
        int fd = x.dim(ref.cell);
        int k = x.dim(c) - 1;
        int sv[kMaxDimension + 2];
        degeneracy::values(ref.repeats, k, sv);
        std::vector<int> section(std::size_t(fd) + 1, -1);
        for (int j = k; j >= 0; --j) section[std::size_t(sv[j])] = j;
        Simplex base = y.apply(want, section);
        if (y.degenerate(base, ref.repeats, k) != want)
          throw ConstraintError("partial assignment is inconsistent at '" + x.id(c) + "'");
        if (pinned[std::size_t(ref.cell)]) {
          if (assign[std::size_t(ref.cell)] != base)
            throw ConstraintError("partial assignment is inconsistent at '" + x.id(ref.cell) + "'");
        } else {
          pinned[std::size_t(ref.cell)] = 1;
          assign[std::size_t(ref.cell)] = base;
          work.push_back(ref.cell);
          std::sort(work.begin() + std::ptrdiff_t(w) + 1, work.end(),
                    [&](CellIndex a, CellIndex b) { return x.dim(a) > x.dim(b); });
        }
      }
    }
    for (CellIndex c = 0; c < x.size(); ++c)
      if (pinned[std::size_t(c)]) {
        if (!admissible(c, assign[std::size_t(c)])) impossible = true;
        if (s.injective) used[std::size_t(assign[std::size_t(c)].cell)] = 1;
      }
  }

  void build_order() {
    const CellIndex n = x.size();
    std::vector<char> placed(pinned);
    std::size_t remaining = 0;
    for (CellIndex c = 0; c < n; ++c)
      if (!placed[std::size_t(c)]) ++remaining;
    auto ready = [&](CellIndex c) {
      for (auto f : x.faces(c))
        if (!placed[std::size_t(f.cell)]) return false;
      return true;
    };
    while (remaining > 0) {
      bool progress = true;
      while (progress) {
        progress = false;
        for (CellIndex c = x.begin_of_dim(1); c < n; ++c)
          if (!placed[std::size_t(c)] && ready(c)) {
            placed[std::size_t(c)] = 1;
            order.push_back(c);
            --remaining;
            progress = true;
          }
      }
      if (remaining == 0) break;
      // Next vertex: the one with the most edges to already placed vertices.
      CellIndex best = -1;
      int best_score = -1;
      for (CellIndex v = x.begin_of_dim(0); v < x.end_of_dim(0); ++v) {
        if (placed[std::size_t(v)]) continue;
        int score = 0;
        for (CellIndex e = x.begin_of_dim(1); e < x.end_of_dim(1); ++e) {
          auto f = x.faces(e);
          if (f[0].cell == v && placed[std::size_t(f[1].cell)]) ++score;
          if (f[1].cell == v && placed[std::size_t(f[0].cell)]) ++score;
        }
        if (score > best_score) {
          best = v;
          best_score = score;
        }
      }
      if (best < 0) throw ConstraintError("internal: no placeable cell");
      placed[std::size_t(best)] = 1;
      order.push_back(best);
      --remaining;
    }
  }

  void dfs(std::size_t p) {
    if (stopped) return;
    if (p == order.size()) {
      if (!visit(assign)) stopped = true;
      return;
    }
    CellIndex c = order[p];
    const int n = x.dim(c);
    const std::vector<Simplex>* cands = nullptr;
    if (n == 0) {
      cands = &y.boundary_index(0).all;
    } else {
      std::vector<Simplex> key;
      key.reserve(std::size_t(n) + 1);
      for (std::size_t i = 0; i <= std::size_t(n); ++i) key.push_back(face_image(c, i));
      const auto& idx = y.boundary_index(n);
      auto it = idx.by_boundary.find(key);
      if (it == idx.by_boundary.end()) return;
      cands = &it->second;
    }
    for (const auto& cand : *cands) {
      if (!admissible(c, cand)) continue;
      assign[std::size_t(c)] = cand;
      if (s.injective) used[std::size_t(cand.cell)] = 1;
      dfs(p + 1);
      if (s.injective) used[std::size_t(cand.cell)] = 0;
      if (stopped) return;
    }
    assign[std::size_t(c)] = Simplex{};
  }

  void run() {
    const CellIndex n = x.size();
    assign.assign(std::size_t(n), Simplex{});
    pinned.assign(std::size_t(n), 0);
    used.assign(std::size_t(y.size()), 0);
    if (!s.fixed.empty()) {
      if (s.fixed.size() != std::size_t(n)) throw ConstraintError("partial assignment size mismatch");
      for (CellIndex c = 0; c < n; ++c)
        if (s.fixed[std::size_t(c)]) {
          pinned[std::size_t(c)] = 1;
          assign[std::size_t(c)] = *s.fixed[std::size_t(c)];
        }
      close_pins();
      if (impossible) return;
    }
    build_order();
    dfs(0);
  }
};

}  // namespace

void search_maps(const MapSearch& search, const std::function<bool(const Assignment&)>& visit) {
  if (!search.source || !search.target) throw ParameterError("map search needs a source and a target");
  if (search.over && search.over_required.size() != std::size_t(search.source->complex().size()))
    throw ParameterError("over-constraint size mismatch");
  Engine e(search, visit);
  e.run();
}

std::vector<Assignment> all_maps(const MapSearch& search) {
  std::vector<Assignment> out;
  search_maps(search, [&](const Assignment& a) {
    out.push_back(a);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Assignment> first_map(const MapSearch& search) {
  std::optional<Assignment> out;
  search_maps(search, [&](const Assignment& a) {
    out = a;
    return false;
  });
  return out;
}

std::size_t count_maps(const MapSearch& search) {
  std::size_t n = 0;
  search_maps(search, [&](const Assignment&) {
    ++n;
    return true;
  });
  return n;
}

PartialAssignment partial_from_ids(const FiniteSimplicialSet& source, const FiniteSimplicialSet& target,
                                   const std::map<std::string, std::string>& ids) {
  PartialAssignment p(std::size_t(source.size()));
  for (const auto& [a, b] : ids) p[std::size_t(source.at(a))] = Simplex{target.at(b), 0};
  return p;
}

std::vector<SimplicialMap> enumerate_maps(const ComplexPtr& source, const ComplexPtr& target,
                                          const PartialAssignment& partial) {
  Decorated ds(source, Kind::plain), dt(target, Kind::plain);
  MapSearch s{&ds, &dt, partial, nullptr, {}, false};
  std::vector<SimplicialMap> out;
  for (auto& a : all_maps(s)) out.push_back({source, target, std::move(a)});
  return out;
}

std::vector<DecoratedMap> enumerate_maps(const Decorated& source, const Decorated& target,
                                         const PartialAssignment& partial) {
  MapSearch s{&source, &target, partial, nullptr, {}, true};
  std::vector<DecoratedMap> out;
  for (auto& a : all_maps(s)) out.push_back({source, target, std::move(a)});
  return out;
}

}  // namespace scaled
