#include "scaled/decompose.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <sstream>
#include <thread>
#include <tuple>
#include <unordered_set>

#include "scaled/errors.hpp"
#include "scaled/strat.hpp"

namespace scaled {

namespace {

std::vector<std::string> split_families(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, '+'))
    if (!item.empty()) out.push_back(item);
  return out;
}

bool family_accepts(const std::string& families, const std::string& name) {
  for (const auto& f : split_families(families))
    if (in_family(f, name)) return true;
  return false;
}

std::vector<GeneratorInstance> family_union(const std::string& families, int nmax) {
  std::vector<GeneratorInstance> out;
  std::unordered_set<std::string> seen;
  for (const auto& f : split_families(families))
    for (auto& g : family(f, nmax))
      if (seen.insert(g.name).second) out.push_back(std::move(g));
  return out;
}

std::uint32_t full_set(int n) { return (2u << n) - 1u; }

// Vertex numbers of a cell of a standard simplex, ascending.
std::vector<int> positions_of(const FiniteSimplicialSet& simplex, CellIndex c) {
  std::vector<int> out;
  for (auto v : simplex.vertices({c, 0})) out.push_back(vertex_number(simplex, v));
  return out;
}

std::vector<int> bits_of(std::uint32_t s) {
  std::vector<int> out;
  for (int b = 0; s >> b; ++b)
    if ((s >> b) & 1u) out.push_back(b);
  return out;
}

int top_bit(std::uint32_t s) { return 31 - std::countl_zero(s); }

// Sub-chain of `chain` on the listed positions of its vertices.
std::uint32_t sub_chain(std::uint32_t chain, const std::vector<int>& positions) {
  auto v = bits_of(chain);
  std::uint32_t out = 0;
  for (int p : positions) out |= 1u << v[std::size_t(p)];
  return out;
}

std::vector<int> positions_in_mask(std::uint32_t mask) { return bits_of(mask); }

// The smallest solution by image of the top cell, then lexicographically.
std::optional<Assignment> best_by_top(const MapSearch& search) {
  std::optional<Assignment> best;
  search_maps(search, [&](const Assignment& a) {
    if (!best || std::make_pair(a.back(), a) < std::make_pair(best->back(), *best)) best = a;
    return true;
  });
  return best;
}

Decorated scaled_simplex(int d, bool thin_top) {
  auto s = standard_simplex(d);
  Decorated out(s, Kind::scaled);
  if (thin_top && d == 2) out.mark(s->size() - 1);
  return out;
}

Prism prism_of(Product product) {
  Prism p;
  const auto& left = *product.pr1.target;
  const auto& right = *product.pr2.target;
  p.n = right.max_dim();
  const auto& x = *product.complex;
  p.cell_of.assign(std::size_t(1) << (2 * (p.n + 1)), -1);
  for (CellIndex c = 0; c < x.size(); ++c) {
    std::uint32_t chain = 0;
    for (auto v : x.vertices({c, 0})) {
      const auto& part = product.parts[std::size_t(v)];
      chain |= Prism::vertex(vertex_number(left, part.first.cell), vertex_number(right, part.second.cell), p.n);
    }
    p.chain_of.push_back(chain);
    p.cell_of[chain] = c;
  }
  p.product = std::move(product);
  return p;
}

std::string fail_text(const std::exception& e) { return e.what(); }

}  // namespace

// ---- certificates ---------------------------------------------------------------

json Certificate::to_json() const {
  json st = json::array();
  for (const auto& s : steps) st.push_back({{"generator", s.generator}, {"attach", s.attach}});
  json j{{"schema", kSchema}, {"type", "certificate"}, {"family", family}, {"goal", map_to_json(goal)}, {"steps", st}};
  j["retract"] = retract ? json{{"section", retract->section}, {"retraction", retract->retraction}} : json(nullptr);
  return j;
}

Certificate Certificate::from_json(const json& j) {
  if (!j.is_object() || j.value("type", "") != "certificate") throw FormatError("not a certificate document");
  try {
    Certificate c;
    c.goal = map_from_json(j.at("goal"));
    c.family = j.value("family", "");
    for (const auto& s : j.at("steps")) c.steps.push_back({s.at("generator").get<std::string>(), s.at("attach")});
    if (j.contains("retract") && !j.at("retract").is_null())
      c.retract = Retract{j.at("retract").at("section"), j.at("retract").at("retraction")};
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed certificate: ") + e.what());
  }
}

json Verification::to_json() const {
  return json{{"schema", kSchema},
              {"check", "certificate"},
              {"verdict", pass ? "pass" : "fail"},
              {"step", step ? json(*step) : json(nullptr)},
              {"detail", detail}};
}

namespace {

struct StepFailure {
  int step;
  std::string detail;
};

// Replays steps; on failure returns the stages so far and the failure.
std::vector<Stage> replay(const DecoratedMap& goal, const Certificate& cert, const std::string* family,
                          std::optional<StepFailure>& failure) {
  std::vector<Stage> stages;
  stages.push_back({goal.source, identity_map(goal.source)});
  for (std::size_t k = 0; k < cert.steps.size(); ++k) {
    int index = int(k) + 1;
    const auto& step = cert.steps[k];
    const Stage& cur = stages.back();
    GeneratorInstance gen;
    try {
      gen = generator(step.generator);
    } catch (const Error& e) {
      failure = StepFailure{index, fail_text(e)};
      return stages;
    }
    if (family && !family_accepts(*family, gen.name)) {
      failure = StepFailure{index, "generator '" + gen.name + "' is not in " + *family};
      return stages;
    }
    DecoratedMap attach{gen.map.source, cur.object, {}};
    try {
      attach.assign = assignment_from_json(gen.map.source.complex(), cur.object.complex(), step.attach);
    } catch (const std::exception& e) {
      failure = StepFailure{index, std::string("attaching map: ") + e.what()};
      return stages;
    }
    if (auto why = validate(attach)) {
      failure = StepFailure{index, "attaching map: " + *why};
      return stages;
    }
    try {
      auto p = pushout(gen.map, attach);
      stages.push_back({p.object, compose(p.from_y, cur.from_source)});
    } catch (const Error& e) {
      failure = StepFailure{index, std::string("pushout: ") + e.what()};
      return stages;
    }
  }
  return stages;
}

}  // namespace

std::vector<Stage> replay_certificate(const DecoratedMap& goal, const Certificate& cert) {
  std::optional<StepFailure> failure;
  auto stages = replay(goal, cert, nullptr, failure);
  if (failure) throw ConstraintError("step " + std::to_string(failure->step) + ": " + failure->detail);
  return stages;
}

Verification verify_certificate(const DecoratedMap& goal, const Certificate& cert, const std::string& family) {
  Verification v;
  auto fail = [&](std::optional<int> step, std::string detail) {
    v.pass = false;
    v.step = step;
    v.detail = std::move(detail);
    return v;
  };
  if (auto why = validate(goal)) return fail(std::nullopt, "goal: " + *why);
  if (!is_mono(goal)) return fail(std::nullopt, "goal is not a mono");
  const std::string fam = family.empty() ? cert.family : family;
  std::optional<StepFailure> failure;
  auto stages = replay(goal, cert, &fam, failure);
  if (failure) return fail(failure->step, failure->detail);
  const Stage& last = stages.back();
  const auto& t = goal.target;
  if (cert.retract) {
    DecoratedMap section{t, last.object, {}}, retraction{last.object, t, {}};
    try {
      section.assign = assignment_from_json(t.complex(), last.object.complex(), cert.retract->section);
      retraction.assign = assignment_from_json(last.object.complex(), t.complex(), cert.retract->retraction);
    } catch (const std::exception& e) {
      return fail(std::nullopt, std::string("retract: ") + e.what());
    }
    if (auto why = validate(section)) return fail(std::nullopt, "section: " + *why);
    if (auto why = validate(retraction)) return fail(std::nullopt, "retraction: " + *why);
    if (compose(retraction, section).assign != identity_map(t).assign)
      return fail(std::nullopt, "retraction does not split the section");
    if (compose(section, goal).assign != last.from_source.assign)
      return fail(std::nullopt, "section does not commute with the goal");
    if (compose(retraction, last.from_source).assign != goal.assign)
      return fail(std::nullopt, "retraction does not commute with the goal");
    return v;
  }
  if (last.object.kind() != t.kind()) return fail(std::nullopt, "final object has a different decoration kind");
  PartialAssignment pins(std::size_t(last.object.complex().size()));
  for (CellIndex c = 0; c < goal.source.complex().size(); ++c)
    pins[std::size_t(last.from_source.assign[std::size_t(c)].cell)] = goal.assign[std::size_t(c)];
  if (!find_isomorphism(last.object, t, pins))
    return fail(std::nullopt, "the composite is not isomorphic to the goal");
  return v;
}

// ---- search ---------------------------------------------------------------------

json SearchResult::to_json() const {
  json j{{"schema", kSchema}, {"check", "search"}, {"states", states}};
  j["verdict"] = certificate ? "found" : "exhausted";
  j["certificate"] = certificate ? certificate->to_json() : json(nullptr);
  return j;
}

namespace {

struct SearchNode {
  Decorated object;
  Assignment embed;  // object -> goal target
  int parent = -1;
  Certificate::Step step;
};

struct Expansion {
  SearchNode node;
  std::string key;
  bool complete = false;
};

std::string state_key(const Decorated& object, const Assignment& embed, CellIndex target_size) {
  std::string key(std::size_t(target_size), '0');
  for (CellIndex c = 0; c < object.complex().size(); ++c)
    key[std::size_t(embed[std::size_t(c)].cell)] = object.marked(c) ? '2' : '1';
  return key;
}

struct GeneratorData {
  GeneratorInstance gen;
  std::vector<CellIndex> fresh;          // cells of the target outside the image
  std::vector<std::pair<CellIndex, CellIndex>> marked_image;  // (source cell, target cell) marked in the target
};

std::vector<Expansion> expand(const SearchNode& node, int parent, const std::vector<GeneratorData>& gens,
                              const Decorated& target) {
  std::vector<Expansion> out;
  const auto& c = node.object;
  std::vector<char> hit(std::size_t(target.complex().size()), 0);
  for (auto s : node.embed) hit[std::size_t(s.cell)] = 1;
  SimplicialMap e{c.carrier(), target.carrier(), node.embed};
  for (const auto& gd : gens) {
    const auto& g = gd.gen.map;
    MapSearch ms;
    ms.source = &g.source;
    ms.target = &c;
    for (const auto& a : all_maps(ms)) {
      bool adds_mark = false;
      for (auto [x, y] : gd.marked_image) {
        (void)y;
        auto s = a[std::size_t(x)];
        if (!s.degenerate() && !c.marked(s.cell)) adds_mark = true;
      }
      if (gd.fresh.empty() && !adds_mark) continue;
      MapSearch mb;
      mb.source = &g.target;
      mb.target = &target;
      mb.fixed.assign(std::size_t(g.target.complex().size()), std::nullopt);
      for (CellIndex x = 0; x < g.source.complex().size(); ++x)
        mb.fixed[std::size_t(g.assign[std::size_t(x)].cell)] = e.apply(a[std::size_t(x)]);
      for (const auto& b : all_maps(mb)) {
        bool ok = true;
        std::unordered_set<CellIndex> used;
        for (CellIndex y : gd.fresh) {
          auto s = b[std::size_t(y)];
          if (s.degenerate() || hit[std::size_t(s.cell)] || !used.insert(s.cell).second) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        DecoratedMap attach{g.source, c, a};
        auto p = pushout(g, attach);
        Expansion ex;
        ex.node.object = p.object;
        ex.node.embed = p.induced(DecoratedMap{g.target, target, b}, DecoratedMap{c, target, node.embed}).assign;
        ex.node.parent = parent;
        ex.node.step = {gd.gen.name, assignment_to_json(g.source.complex(), c.complex(), a)};
        ex.key = state_key(p.object, ex.node.embed, target.complex().size());
        ex.complete = p.object.complex().size() == target.complex().size() && p.object.mark_count() == target.mark_count();
        bool complete = ex.complete;
        out.push_back(std::move(ex));
        if (complete) return out;
      }
    }
  }
  return out;
}

}  // namespace

SearchResult search_certificate(const DecoratedMap& goal, const std::string& family_name, const SearchBudget& budget) {
  SearchResult result;
  if (auto why = validate(goal)) throw ConstraintError("goal: " + *why);
  if (!is_mono(goal)) throw PreconditionError("goal is not a mono");
  const auto& target = goal.target;
  if (std::size_t(target.complex().size()) > budget.max_cells) return result;
  int nmax = budget.nmax >= 0 ? budget.nmax : std::max(target.complex().max_dim(), 4);
  std::vector<GeneratorData> gens;
  for (auto& g : family_union(family_name, nmax)) {
    GeneratorData gd{std::move(g), {}, {}};
    const auto& m = gd.gen.map;
    std::vector<CellIndex> pre(std::size_t(m.target.complex().size()), -1);
    for (CellIndex x = 0; x < m.source.complex().size(); ++x) pre[std::size_t(m.assign[std::size_t(x)].cell)] = x;
    for (CellIndex y = 0; y < m.target.complex().size(); ++y) {
      if (pre[std::size_t(y)] < 0) gd.fresh.push_back(y);
      else if (m.target.marked(y) && !m.source.marked(pre[std::size_t(y)])) gd.marked_image.push_back({pre[std::size_t(y)], y});
    }
    gens.push_back(std::move(gd));
  }

  std::vector<SearchNode> nodes;
  nodes.push_back({goal.source, goal.assign, -1, {}});
  std::unordered_set<std::string> seen{state_key(goal.source, goal.assign, target.complex().size())};
  auto certificate_for = [&](int index) {
    Certificate cert;
    cert.goal = goal;
    cert.family = family_name;
    for (int k = index; nodes[std::size_t(k)].parent >= 0; k = nodes[std::size_t(k)].parent)
      cert.steps.push_back(nodes[std::size_t(k)].step);
    std::reverse(cert.steps.begin(), cert.steps.end());
    return cert;
  };
  result.states = 1;
  if (goal.source.complex().size() == target.complex().size() && goal.source.mark_count() == target.mark_count()) {
    result.certificate = certificate_for(0);
    return result;
  }
  std::vector<int> frontier{0};
  for (int depth = 0; depth < budget.max_steps && !frontier.empty(); ++depth) {
    std::vector<std::vector<Expansion>> found(frontier.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t k; (k = next.fetch_add(1)) < frontier.size();)
        found[k] = expand(nodes[std::size_t(frontier[k])], frontier[k], gens, target);
    };
    int jobs = std::max(1, std::min<int>(budget.jobs, int(frontier.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < jobs; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    std::vector<int> next_frontier;
    for (auto& list : found)
      for (auto& ex : list) {
        if (!seen.insert(ex.key).second) continue;
        nodes.push_back(std::move(ex.node));
        ++result.states;
        int index = int(nodes.size()) - 1;
        if (ex.complete) {
          result.certificate = certificate_for(index);
          return result;
        }
        next_frontier.push_back(index);
      }
    frontier = std::move(next_frontier);
  }
  return result;
}

// ---- prisms ---------------------------------------------------------------------

Prism make_prism(int n) {
  if (n < 0 || n > 7) throw ParameterError("prism dimension out of range");
  return prism_of(product(standard_simplex(1), standard_simplex(n)));
}

bool SigmaRho::in_image(int i) const { return std::find(sigma.begin(), sigma.end(), i) != sigma.end(); }

SigmaRho sigma_rho(const std::vector<int>& rho) {
  if (rho.empty() || rho.size() > 8 || rho[0] != 0) throw ParameterError("rho must be a monotone surjection starting at 0");
  for (std::size_t i = 1; i < rho.size(); ++i)
    if (rho[i] != rho[i - 1] && rho[i] != rho[i - 1] + 1) throw ParameterError("rho must be a monotone surjection");
  SigmaRho sr;
  sr.rho = rho;
  sr.n = int(rho.size()) - 1;
  sr.m = rho.back();
  sr.sigma.assign(std::size_t(sr.m + 1), -1);
  for (int i = 0; i <= sr.n; ++i)
    if (sr.sigma[std::size_t(rho[std::size_t(i)])] < 0) sr.sigma[std::size_t(rho[std::size_t(i)])] = i;
  return sr;
}

FaceSet FaceSet::none(int n) {
  if (n < 0 || n > 7) throw ParameterError("face set dimension out of range");
  return FaceSet{n, std::vector<char>(std::size_t(2u << n), 0)};
}

FaceSet FaceSet::full(int n) {
  auto f = none(n);
  for (std::uint32_t s = 1; s <= full_set(n); ++s) f.has[s] = 1;
  return f;
}

FaceSet FaceSet::boundary(int n) {
  auto f = full(n);
  f.has[full_set(n)] = 0;
  return f;
}

FaceSet FaceSet::horn(int n, int i) {
  if (i < 0 || i > n) throw ParameterError("horn index out of range");
  auto f = boundary(n);
  f.has[full_set(n) & ~(1u << i)] = 0;
  return f;
}

FaceSet FaceSet::generated(int n, const std::vector<std::uint32_t>& subsets) {
  auto f = none(n);
  for (auto s : subsets) {
    if (s == 0 || s > full_set(n)) throw ParameterError("face outside the simplex");
    for (std::uint32_t t = s; t; t = (t - 1) & s) f.has[t] = 1;
  }
  return f;
}

std::vector<std::uint32_t> FaceSet::maximal() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 1; s < has.size(); ++s) {
    if (!has[s]) continue;
    bool top = true;
    for (int v = 0; v <= n && top; ++v)
      if (!((s >> v) & 1u) && has[s | (1u << v)]) top = false;
    if (top) out.push_back(s);
  }
  return out;
}

bool admissible(const SigmaRho& sr, const FaceSet& a) {
  if (a.n != sr.n) throw ParameterError("face set and rho disagree on n");
  for (std::uint32_t s = 1; s < a.has.size(); ++s) {
    if (!a.has[s]) continue;
    std::uint32_t img = 0;
    for (int v : bits_of(s)) img |= 1u << sr.sigma[std::size_t(sr.rho[std::size_t(v)])];
    if (!a.contains(img)) return false;
  }
  for (int i = 0; i <= a.n; ++i) {
    if (!a.contains(1u << i) || sr.in_image(i)) continue;
    for (std::uint32_t s = 1; s < a.has.size(); ++s)
      if (top_bit(s) == i && !a.has[s]) return false;
  }
  return true;
}

bool in_l_scaling(const SigmaRho& sr, std::uint32_t chain, int n) {
  if (std::popcount(chain) != 3) return false;
  std::uint32_t lo = chain & ((1u << (n + 1)) - 1), hi = chain >> (n + 1);
  if (std::popcount(lo) == 1 && std::popcount(hi) == 2) return (lo & hi) == lo;  // {(0,i),(1,i),(1,j)}
  if (std::popcount(lo) == 2 && std::popcount(hi) == 1 && (lo & hi) == hi) {    // {(0,i),(0,j),(1,j)}
    int i = std::countr_zero(lo), j = top_bit(lo);
    return sr.in_image(j) || (j == i + 1 && sr.rho[std::size_t(i)] == sr.rho[std::size_t(j)]);
  }
  return false;
}

Decorated prism_l_scaled(const Prism& p, const SigmaRho& sr) {
  if (sr.n != p.n) throw ParameterError("rho and prism disagree on n");
  Decorated out(p.product.complex, Kind::scaled);
  const auto& x = *p.product.complex;
  for (CellIndex c = x.begin_of_dim(2); c < x.end_of_dim(2); ++c)
    if (in_l_scaling(sr, p.chain_of[std::size_t(c)], p.n)) out.mark(c);
  return out;
}

PrismVariant parse_prism_variant(const std::string& name) {
  std::string s;
  for (char ch : name) s += ch == '-' ? '_' : char(std::tolower(static_cast<unsigned char>(ch)));
  if (s == "z_upper") return PrismVariant::z_upper;
  if (s == "z_lower") return PrismVariant::z_lower;
  if (s == "scaled_l") return PrismVariant::scaled_l;
  throw ParameterError("unknown prism variant '" + name + "'");
}

std::string prism_variant_name(PrismVariant v) {
  switch (v) {
    case PrismVariant::z_upper: return "Z_upper";
    case PrismVariant::z_lower: return "Z_lower";
    case PrismVariant::scaled_l: return "scaled_L";
  }
  return "";
}

PrismFiltration prism_filtration(int n, PrismVariant variant, const std::vector<int>& rho_in) {
  if (n < 1 || n > 6) throw ParameterError("prism filtration needs 1 <= n <= 6");
  Prism p;
  Decorated target;
  if (variant == PrismVariant::scaled_l) {
    if (n < 2) throw ParameterError("the L-scaled filtration needs n >= 2");
    std::vector<int> rho = rho_in;
    if (rho.empty())
      for (int i = 0; i <= n; ++i) rho.push_back(i);
    auto sr = sigma_rho(rho);
    if (sr.n != n) throw ParameterError("rho must be defined on [n]");
    p = make_prism(n);
    target = prism_l_scaled(p, sr);
  } else {
    auto dp = product_scaled(flat(standard_simplex(1), Kind::scaled), flat(standard_simplex(n), Kind::scaled));
    target = dp.object;
    p = prism_of(std::move(dp.product));
  }
  const auto& t = target.complex();
  const std::uint32_t full = full_set(n);
  std::vector<char> keep(std::size_t(t.size()), 0);
  for (CellIndex c = 0; c < t.size(); ++c) {
    auto ch = p.chain_of[std::size_t(c)];
    bool side = variant == PrismVariant::z_lower ? p.lower(ch) == 0 : p.upper(ch) == 0;
    keep[std::size_t(c)] = p.projection(ch) != full || side;
  }
  PrismFiltration out;
  auto goal = inclusion_of(target, keep);
  out.certificate.goal = goal;
  out.certificate.family = variant == PrismVariant::scaled_l ? "scaled_S_inner+prism_horns" : "prism_horns";
  std::vector<int> order;
  if (variant == PrismVariant::z_lower)
    for (int k = 0; k <= n; ++k) order.push_back(k);
  else
    for (int k = n; k >= 0; --k) order.push_back(k);

  Decorated cur = goal.source;
  Assignment embed = goal.assign;
  out.stages.push_back({cur, target, embed});
  const int top = n + 1;
  for (int k : order) {
    std::string name;
    if (variant == PrismVariant::z_upper) name = "horn-T:n=" + std::to_string(top) + ",k=" + std::to_string(k) + ",h=" + std::to_string(k);
    else if (variant == PrismVariant::z_lower) name = "horn-T:n=" + std::to_string(top) + ",k=" + std::to_string(k) + ",h=" + std::to_string(k + 1);
    else if (k > 0) name = "scaled-S:inner:n=" + std::to_string(top) + ",i=" + std::to_string(k);
    else name = "horn-T:n=" + std::to_string(top) + ",k=0,h=0";
    auto gen = generator(name);
    const auto& b = gen.map.target;
    // tau_k on the cells of Delta^{n+1}.
    DecoratedMap tau{b, target, {}};
    for (CellIndex y = 0; y < b.complex().size(); ++y) {
      std::uint32_t chain = 0;
      for (int m : positions_of(b.complex(), y)) chain |= m <= k ? Prism::vertex(0, m, n) : Prism::vertex(1, m - 1, n);
      tau.assign.push_back({p.cell(chain), 0});
    }
    std::vector<CellIndex> back(std::size_t(t.size()), -1);
    for (CellIndex c = 0; c < cur.complex().size(); ++c) back[std::size_t(embed[std::size_t(c)].cell)] = c;
    DecoratedMap attach{gen.map.source, cur, {}};
    for (CellIndex x = 0; x < gen.map.source.complex().size(); ++x) {
      CellIndex img = back[std::size_t(tau.assign[std::size_t(gen.map.assign[std::size_t(x)].cell)].cell)];
      if (img < 0) throw ConstraintError("prism filtration: horn of " + name + " is not in the current stage");
      attach.assign.push_back({img, 0});
    }
    if (auto why = validate(attach)) throw ConstraintError("prism filtration: " + *why);
    auto po = pushout(gen.map, attach);
    out.certificate.steps.push_back({name, assignment_to_json(gen.map.source.complex(), cur.complex(), attach.assign)});
    embed = po.induced(tau, DecoratedMap{cur, target, embed}).assign;
    cur = po.object;
    out.stages.push_back({cur, target, embed});
  }
  return out;
}

// ---- pushout-joins ---------------------------------------------------------------

PushoutJoin pushout_join_cells(int which, int m, int n, int i, bool thin_codomain, const SearchBudget& budget) {
  std::string fname;
  switch (which) {
    case 1: fname = "AS:inner:n=" + std::to_string(m) + ",i=" + std::to_string(i); break;
    case 2: fname = "AS:last:n=" + std::to_string(m); break;
    case 3: fname = "AS:collapsed:n=" + std::to_string(m); break;
    case 4: fname = "AS:thin"; break;
    default: throw ParameterError("pushout-join case must be 1, 2, 3 or 4");
  }
  if (!thin_codomain && (n < 0 || n > 3)) throw ParameterError("pushout-join needs 0 <= n <= 3");
  if (which != 4 && m > 3) throw ParameterError("pushout-join needs m <= 3");
  auto f = generator(fname).map;
  auto g = generator(thin_codomain ? "thin-triangle" : "boundary:n=" + std::to_string(n)).map;
  auto xb = join_marked_scaled(f.source, g.target);
  auto xa = join_marked_scaled(f.source, g.source);
  auto ya = join_marked_scaled(f.target, g.source);
  auto yb = join_marked_scaled(f.target, g.target);
  auto id_x = identity_map(f.source.carrier());
  auto id_y = identity_map(f.target.carrier());
  auto id_a = identity_map(g.source.carrier());
  auto id_b = identity_map(g.target.carrier());
  DecoratedMap xa_xb{xa.object, xb.object, join_map(xa.join, xb.join, id_x, g.underlying()).assign};
  DecoratedMap xa_ya{xa.object, ya.object, join_map(xa.join, ya.join, f.underlying(), id_a).assign};
  DecoratedMap xb_yb{xb.object, yb.object, join_map(xb.join, yb.join, f.underlying(), id_b).assign};
  DecoratedMap ya_yb{ya.object, yb.object, join_map(ya.join, yb.join, id_y, g.underlying()).assign};
  auto corner = pushout(xa_xb, xa_ya);
  PushoutJoin out;
  out.goal = corner.induced(xb_yb, ya_yb);
  const auto& src = out.goal.source;
  const auto& tgt = out.goal.target;
  out.isomorphism = is_mono(out.goal) && src.complex().size() == tgt.complex().size() && src.mark_count() == tgt.mark_count();
  if (out.isomorphism) {
    Certificate cert;
    cert.goal = out.goal;
    cert.family = "scaled_S_13";
    out.certificate = cert;
  } else {
    out.certificate = search_certificate(out.goal, "scaled_S_13", budget).certificate;
  }
  return out;
}

// ---- transformations ---------------------------------------------------------------

namespace {

std::string chain_text(const Prism& p, std::uint32_t chain) {
  CellIndex c = p.cell(chain);
  return c >= 0 ? p.product.complex->id(c) : "?";
}

// The retraction Delta^J -> Delta^{J - {from}} sending `from` to `to`, as a
// monotone map on vertex positions.
std::vector<int> retraction(std::uint32_t chain, std::uint32_t from, std::uint32_t to) {
  auto verts = bits_of(chain);
  auto rest = bits_of(chain & ~from);
  std::vector<int> theta;
  for (int v : verts) {
    int w = (1u << v) == from ? top_bit(to) : v;
    theta.push_back(int(std::find(rest.begin(), rest.end(), w) - rest.begin()));
  }
  return theta;
}

}  // namespace

TransformationCheck check_transformation(const Decorated& c, const SigmaRho& sr, const FaceSet& a, const Prism& p,
                                         const PartialAssignment& h) {
  if (c.kind() != Kind::scaled) throw DecorationError("transformations take values in a scaled set");
  if (a.n != p.n || sr.n != p.n) throw ParameterError("prism, face set and rho disagree on n");
  const auto& cx = c.complex();
  const int n = p.n;
  auto value = [&](std::uint32_t chain) -> Simplex {
    CellIndex cell = p.cell(chain);
    if (cell < 0 || !h[std::size_t(cell)]) throw ConstraintError("transformation undefined on " + chain_text(p, chain));
    return *h[std::size_t(cell)];
  };
  TransformationCheck out;
  for (std::size_t idx = 0; idx < p.chain_of.size(); ++idx) {
    std::uint32_t j = p.chain_of[idx];
    if (!a.contains(p.projection(j))) continue;
    std::uint32_t j0 = p.lower(j), j1 = p.upper(j);
    if (j0 == 0) continue;
    int i = top_bit(j0);
    std::uint32_t from = Prism::vertex(0, i, n);
    if (sr.in_image(i) && j1 == (1u << i) && !out.conditions[0]) {
      auto expect = cx.apply(value(j & ~from), retraction(j, from, Prism::vertex(1, i, n)));
      if (value(j) != expect) out.conditions[0] = "does not factor through the retraction on " + chain_text(p, j);
    }
    if (!sr.in_image(i) && i >= 1 && ((j0 >> (i - 1)) & 1u) && (j1 == 0 || j1 == (1u << i)) && !out.conditions[1]) {
      auto expect = cx.apply(value(j & ~from), retraction(j, from, Prism::vertex(0, i - 1, n)));
      if (value(j) != expect) out.conditions[1] = "does not factor through the retraction on " + chain_text(p, j);
    }
  }
  for (int i = 0; i <= n && !out.conditions[2]; ++i)
    for (int k = i + 1; k <= n && !out.conditions[2]; ++k) {
      if (!a.contains((1u << i) | (1u << k))) continue;
      std::uint32_t tri = Prism::vertex(0, i, n) | Prism::vertex(1, i, n) | Prism::vertex(1, k, n);
      if (!c.distinguished(value(tri))) out.conditions[2] = "triangle " + chain_text(p, tri) + " is not thin";
    }
  return out;
}

PartialAssignment extend_sigma_rho_transformation(const Decorated& c, const SigmaRho& sr, const FaceSet& a,
                                                  const FaceSet& b, const Prism& p, const PartialAssignment& g) {
  if (c.kind() != Kind::scaled) throw DecorationError("transformations take values in a scaled set");
  if (a.n != p.n || b.n != p.n || sr.n != p.n) throw ParameterError("prism, face sets and rho disagree on n");
  if (!admissible(sr, a)) throw PreconditionError("A is not admissible");
  if (!admissible(sr, b)) throw PreconditionError("B is not admissible");
  for (std::uint32_t s = 1; s < a.has.size(); ++s)
    if (a.has[s] && !b.has[s]) throw PreconditionError("A is not contained in B");
  const auto& px = *p.product.complex;
  const auto& cx = c.complex();
  const int n = p.n;
  if (g.size() != std::size_t(px.size())) throw PreconditionError("g must assign every prism cell or none");
  auto domain = [&](std::uint32_t ch) {
    return a.contains(p.projection(ch)) || (p.lower(ch) == 0 && b.contains(p.upper(ch)));
  };
  auto image = [&](const PartialAssignment& h, Simplex s) -> std::optional<Simplex> {
    if (!h[std::size_t(s.cell)]) return std::nullopt;
    return cx.degenerate(*h[std::size_t(s.cell)], s.repeats, px.dim_of(s));
  };
  for (CellIndex cell = 0; cell < px.size(); ++cell) {
    bool in = domain(p.chain_of[std::size_t(cell)]);
    if (in != g[std::size_t(cell)].has_value())
      throw PreconditionError(std::string(in ? "g undefined on " : "g defined outside its domain on ") + px.id(cell));
    if (!in) continue;
    const Simplex v = *g[std::size_t(cell)];
    if (v.cell < 0 || v.cell >= cx.size() || cx.dim_of(v) != px.dim(cell)) throw PreconditionError("g has a bad value on " + px.id(cell));
    for (int i = 0; px.dim(cell) > 0 && i <= px.dim(cell); ++i)
      if (image(g, px.face({cell, 0}, i)) != cx.face(v, i)) throw PreconditionError("g is not simplicial at " + px.id(cell));
  }
  auto pre = check_transformation(c, sr, a, p, g);
  for (const auto& why : pre.conditions)
    if (why) throw PreconditionError("g is not a transformation on A: " + *why);

  struct Item {
    std::uint32_t chain;
    int type, dim, index, upper_count;
    std::vector<int> verts;
  };
  std::vector<Item> items;
  for (CellIndex cell = 0; cell < px.size(); ++cell) {
    std::uint32_t j = p.chain_of[std::size_t(cell)];
    if (!b.contains(p.projection(j)) || domain(j)) continue;
    std::uint32_t j0 = p.lower(j), j1 = p.upper(j);
    int i = top_bit(j0);
    int type = 0;
    if (sr.in_image(i) && j1 == (1u << i)) type = 1;
    else if (!sr.in_image(i) && i >= 1 && ((j0 >> (i - 1)) & 1u) && (j1 == 0 || j1 == (1u << i))) type = 2;
    else if (std::popcount(j1) >= 2 && ((j1 >> i) & 1u)) type = 3;
    if (type) items.push_back({j, type, std::popcount(j) - 1, i, std::popcount(j1), bits_of(j)});
  }
  std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
    return std::tie(x.dim, x.index, x.upper_count, x.verts) < std::tie(y.dim, y.index, y.upper_count, y.verts);
  });

  PartialAssignment h = g;
  auto assign_faces = [&](std::uint32_t j, Simplex top) {
    const int d = std::popcount(j) - 1;
    for (std::uint32_t s = 1; s < (2u << d); ++s) {
      auto pos = positions_in_mask(s);
      CellIndex cell = p.cell(sub_chain(j, pos));
      auto v = cx.restrict(top, pos);
      if (!h[std::size_t(cell)]) h[std::size_t(cell)] = v;
      else if (*h[std::size_t(cell)] != v) throw ConstraintError("inconsistent extension at " + px.id(cell));
    }
  };
  for (const auto& it : items) {
    const std::uint32_t j = it.chain;
    const int i = it.index;
    const std::uint32_t from = Prism::vertex(0, i, n);
    Simplex value;
    if (it.type != 3) {
      CellIndex rest = p.cell(j & ~from);
      if (!h[std::size_t(rest)]) throw ConstraintError("missing face " + px.id(rest) + " in the extension");
      value = cx.apply(*h[std::size_t(rest)], retraction(j, from, it.type == 1 ? Prism::vertex(1, i, n) : Prism::vertex(0, i - 1, n)));
    } else {
      const int d = it.dim;
      const int hollow = std::popcount(p.lower(j));  // position of (1, i)
      auto src = scaled_simplex(d, true);
      MapSearch ms;
      ms.source = &src;
      ms.target = &c;
      ms.fixed.assign(std::size_t(src.complex().size()), std::nullopt);
      for (int f = 0; f <= d; ++f) {
        if (f == hollow) continue;
        std::vector<int> pos;
        for (int q = 0; q <= d; ++q)
          if (q != f) pos.push_back(q);
        CellIndex cell = p.cell(sub_chain(j, pos));
        if (!h[std::size_t(cell)]) throw ConstraintError("missing face " + px.id(cell) + " in the extension");
        ms.fixed[std::size_t(*find_subset(src.complex(), full_set(d) & ~(1u << f), d))] = h[std::size_t(cell)];
      }
      auto best = best_by_top(ms);
      if (!best) throw FibrancyError("no filler for the inner horn of " + chain_text(p, j) + " at its vertex (1," + std::to_string(i) + ")");
      value = best->back();
    }
    assign_faces(j, value);
  }
  PartialAssignment out(std::size_t(px.size()));
  for (CellIndex cell = 0; cell < px.size(); ++cell) {
    if (!b.contains(p.projection(p.chain_of[std::size_t(cell)]))) continue;
    if (!h[std::size_t(cell)]) throw ConstraintError("extension left " + px.id(cell) + " undefined");
    out[std::size_t(cell)] = h[std::size_t(cell)];
  }
  return out;
}

// ---- natural transformations ------------------------------------------------------

Product natural_prism(const ComplexPtr& b) { return product(standard_simplex(1), b); }

Assignment lift_transformation(const NaturalLiftProblem& pr, const CheckOptions& opt) {
  const auto& x = pr.p.source;
  const auto& xc = x.complex();
  const auto& bc = *pr.b;
  const auto& px = *pr.prism.complex;
  const auto& interval = *pr.prism.pr1.target;
  if (pr.prism.pr2.target.get() != pr.b.get() && !same_complex(*pr.prism.pr2.target, bc))
    throw PreconditionError("prism is not Delta^1 x B");
  if (pr.a.size() != std::size_t(bc.size()) || pr.f.size() != std::size_t(px.size()) || pr.h.size() != std::size_t(px.size()) ||
      pr.lifts.size() != bc.count(0))
    throw PreconditionError("lifting data has the wrong shape");
  const CellIndex one = *find_subset(interval, 2u, 1), zero = *find_subset(interval, 1u, 1);
  const CellIndex unit = *find_subset(interval, 3u, 1);
  SimplicialMap p_map = pr.p.underlying();
  SimplicialMap h_map{pr.prism.complex, pr.p.target.carrier(), pr.h};
  auto in_domain = [&](CellIndex c) {
    const auto& part = pr.prism.parts[std::size_t(c)];
    return pr.a[std::size_t(part.second.cell)] || (part.first.cell == one);
  };
  PartialAssignment lift(std::size_t(px.size()));
  for (CellIndex c = 0; c < px.size(); ++c) {
    if (in_domain(c) != pr.f[std::size_t(c)].has_value()) throw PreconditionError("f must be given exactly on {1} x B u Delta^1 x A");
    if (!in_domain(c)) continue;
    if (p_map.apply(*pr.f[std::size_t(c)]) != pr.h[std::size_t(c)]) throw PreconditionError("f does not lie over h at " + px.id(c));
    lift[std::size_t(c)] = pr.f[std::size_t(c)];
  }
  auto edge_over = [&](CellIndex v) { return pr.prism.pair({unit, 0}, bc.degeneracy({v, 0}, 0)); };
  auto vertex_at = [&](CellIndex e, CellIndex v) { return pr.prism.pair({e, 0}, {v, 0}); };
  auto image = [&](Simplex s) -> Simplex {
    if (!lift[std::size_t(s.cell)]) throw ConstraintError("lift undefined on " + px.id(s.cell));
    return xc.degenerate(*lift[std::size_t(s.cell)], s.repeats, px.dim_of(s));
  };
  for (CellIndex v = bc.begin_of_dim(0); v < bc.end_of_dim(0); ++v) {
    Simplex edge = edge_over(v);
    if (pr.a[std::size_t(v)]) {
      if (!is_cartesian_edge(pr.p, *lift[std::size_t(edge.cell)], opt).pass)
        throw PreconditionError("f is not cartesian on the edge over " + bc.id(v));
      continue;
    }
    const auto& given = pr.lifts[std::size_t(v)];
    if (!given) throw PreconditionError("missing cartesian lift over " + bc.id(v));
    if (p_map.apply(*given) != pr.h[std::size_t(edge.cell)]) throw PreconditionError("prescribed lift over " + bc.id(v) + " does not lie over h");
    if (xc.face(*given, 0) != image(vertex_at(one, v))) throw PreconditionError("prescribed lift over " + bc.id(v) + " has the wrong target");
    if (!is_cartesian_edge(pr.p, *given, opt).pass) throw PreconditionError("prescribed lift over " + bc.id(v) + " is not cartesian");
    lift[std::size_t(edge.cell)] = *given;
    lift[std::size_t(vertex_at(zero, v).cell)] = xc.face(*given, 1);
  }
  for (int d = 1; d <= bc.max_dim(); ++d) {
    auto simplex = standard_simplex(d);
    auto local = prism_of(product(standard_simplex(1), simplex));
    for (CellIndex bcell = bc.begin_of_dim(d); bcell < bc.end_of_dim(d); ++bcell) {
      if (pr.a[std::size_t(bcell)]) continue;
      SimplicialMap chr{simplex, pr.b, {}};
      for (CellIndex y = 0; y < simplex->size(); ++y) chr.assign.push_back(bc.restrict({bcell, 0}, positions_of(*simplex, y)));
      SimplicialMap id1{local.product.pr1.target, pr.prism.pr1.target, identity_map(local.product.pr1.target).assign};
      auto into = product_map(local.product, pr.prism, id1, chr);
      for (int k = 0; k <= d; ++k) {
        std::uint32_t chain = 0;
        for (int q = 0; q <= k; ++q) chain |= Prism::vertex(0, q, d);
        for (int q = k; q <= d; ++q) chain |= Prism::vertex(1, q, d);
        Simplex t = into.assign[std::size_t(local.cell(chain))];
        if (t.degenerate()) throw ConstraintError("degenerate prism simplex over " + bc.id(bcell));
        auto gen = generator("horn-T:n=" + std::to_string(d + 1) + ",k=" + std::to_string(k) + ",h=" + std::to_string(k + 1));
        const auto& src = gen.map.target;
        const auto& sc = src.complex();
        MapSearch ms;
        ms.source = &src;
        ms.target = &x;
        ms.over = &pr.p;
        ms.fixed.assign(std::size_t(sc.size()), std::nullopt);
        for (CellIndex y = 0; y < sc.size(); ++y) ms.over_required.push_back(h_map.apply(px.restrict(t, positions_of(sc, y))));
        for (int f = 0; f <= d + 1; ++f) {
          if (f == k + 1) continue;
          CellIndex facet = *find_subset(sc, full_set(d + 1) & ~(1u << f), d + 1);
          ms.fixed[std::size_t(facet)] = image(px.restrict(t, positions_of(sc, facet)));
        }
        auto best = best_by_top(ms);
        if (!best) throw FibrancyError("no lift for the prism simplex " + std::to_string(k) + " over " + bc.id(bcell));
        for (CellIndex y = 0; y < sc.size(); ++y) {
          Simplex s = px.restrict(t, positions_of(sc, y));
          if (!s.degenerate() && !lift[std::size_t(s.cell)]) lift[std::size_t(s.cell)] = (*best)[std::size_t(y)];
        }
      }
    }
  }
  Assignment out;
  for (CellIndex c = 0; c < px.size(); ++c) {
    if (!lift[std::size_t(c)]) throw ConstraintError("lift left " + px.id(c) + " undefined");
    out.push_back(*lift[std::size_t(c)]);
  }
  return out;
}

}  // namespace scaled
