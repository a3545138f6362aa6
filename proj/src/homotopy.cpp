#include "scaled/homotopy.hpp"

#include <atomic>
#include <thread>

#include "scaled/errors.hpp"
#include "scaled/generators.hpp"
#include "scaled/strat.hpp"

namespace scaled {

namespace {

Decorated scaled_view(const Decorated& x) {
  if (x.kind() == Kind::scaled) return x;
  if (x.kind() == Kind::stratified) return underlying_scaled(x);
  throw DecorationError("expected a scaled or stratified set, got " + kind_name(x.kind()));
}

const Decorated& witness_shape() {
  static const Decorated shape = special_object("th1_E2").with_kind(Kind::scaled);
  return shape;
}

std::optional<DecoratedMap> witness_in(const Decorated& sx, Simplex edge) {
  if (sx.complex().dim_of(edge) != 1) throw ParameterError("equivalence witness needs an edge");
  const auto& e2 = witness_shape();
  MapSearch s;
  s.source = &e2;
  s.target = &sx;
  s.fixed.assign(std::size_t(e2.complex().size()), std::nullopt);
  s.fixed[std::size_t(e2.complex().at("01"))] = edge;
  auto a = first_map(s);
  if (!a) return std::nullopt;
  return DecoratedMap{e2, sx, *a};
}

// Thin-triangle pins on a generator's target and the image of its top cell.
std::optional<Simplex> fill_top(const Decorated& shape, const Decorated& c,
                                const std::vector<std::pair<std::string, Simplex>>& pins) {
  MapSearch s;
  s.source = &shape;
  s.target = &c;
  s.fixed.assign(std::size_t(shape.complex().size()), std::nullopt);
  for (const auto& [id, v] : pins) s.fixed[std::size_t(shape.complex().at(id))] = v;
  auto a = first_map(s);
  if (!a) return std::nullopt;
  return a->back();
}

}  // namespace

std::optional<DecoratedMap> equivalence_witness(const Decorated& x, Simplex edge) {
  return witness_in(scaled_view(x), edge);
}

bool is_equivalence(const Decorated& x, Simplex edge) { return equivalence_witness(x, edge).has_value(); }

std::vector<Simplex> equivalence_edges(const Decorated& x, int jobs) {
  auto sx = scaled_view(x);
  const auto& cx = sx.complex();
  std::vector<Simplex> out;
  for (CellIndex v = cx.begin_of_dim(0); v < cx.end_of_dim(0); ++v) out.push_back(cx.degeneracy({v, 0}, 0));
  const CellIndex lo = cx.begin_of_dim(1), hi = cx.end_of_dim(1);
  std::vector<char> ok(std::size_t(hi - lo), 0);
  std::atomic<CellIndex> next{lo};
  auto work = [&] {
    for (CellIndex e = next++; e < hi; e = next++) ok[std::size_t(e - lo)] = witness_in(sx, {e, 0}).has_value();
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (CellIndex e = lo; e < hi; ++e)
    if (ok[std::size_t(e - lo)]) out.push_back({e, 0});
  return out;
}

Subcomplex core(const Decorated& x) {
  auto sx = scaled_view(x);
  const auto& cx = sx.complex();
  std::vector<char> keep(std::size_t(cx.size()), 0);
  for (CellIndex c = 0; c < cx.size(); ++c) {
    int d = cx.dim(c);
    if (d <= 1) {
      keep[std::size_t(c)] = 1;
    } else if (d == 2) {
      keep[std::size_t(c)] = sx.marked(c);
    } else {
      bool all = true;
      for (auto f : cx.faces(c)) all = all && keep[std::size_t(f.cell)];
      keep[std::size_t(c)] = all;
    }
  }
  return subcomplex(sx.carrier(), std::move(keep));
}

Decorated fibrant_replacement(const Decorated& x, int jobs) {
  auto sx = scaled_view(x);
  auto st = iota(sx);
  for (auto e : equivalence_edges(sx, jobs))
    if (!e.degenerate()) st.mark(e.cell);
  return bold_th(st, 2);
}

NormalizedTriangle normalize_triangle(const Decorated& c, Simplex alpha) {
  auto sc = scaled_view(c);
  const auto& cx = sc.complex();
  if (cx.dim_of(alpha) != 2) throw ParameterError("normalize_triangle needs a triangle");
  if (alpha.degenerate()) {
    auto up = cx.degeneracy(alpha, 0);
    return {up, cx.face(up, 2)};
  }
  auto f = cx.face(alpha, 2), g = cx.face(alpha, 0);
  static const Decorated thin2 = generator("scaled-S:inner:n=2,i=1").map.target;
  static const Decorated thin123 = generator("scaled-S:inner:n=3,i=2").map.target;
  auto tau = fill_top(thin2, sc, {{"01", f}, {"12", g}});
  if (!tau) throw FibrancyError("no thin filler for the horn (" + cx.ref_string(f) + ", " + cx.ref_string(g) + ")");
  auto up = fill_top(thin123, sc, {{"012", cx.degeneracy(f, 0)}, {"023", alpha}, {"123", *tau}});
  if (!up) throw FibrancyError("no filler for the 3-horn normalizing " + cx.ref_string(alpha));
  return {*up, cx.face(*up, 2)};
}

}  // namespace scaled
