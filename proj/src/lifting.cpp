#include "scaled/lifting.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <mutex>
#include <thread>

#include "scaled/errors.hpp"

namespace scaled {

json Report::to_json() const {
  json j;
  j["schema"] = kSchema;
  j["check"] = check;
  j["verdict"] = pass ? "pass" : "fail";
  j["bound"] = bound;
  if (counterexample) {
    json c;
    c["generator"] = counterexample->generator;
    c["map"] = counterexample->map;
    if (!counterexample->base.is_null()) c["base"] = counterexample->base;
    if (!counterexample->detail.empty()) c["detail"] = counterexample->detail;
    j["counterexample"] = c;
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

std::optional<std::size_t> first_failure(std::size_t count, int jobs, const std::function<bool(std::size_t)>& ok) {
  if (count == 0) return std::nullopt;
  std::size_t workers = std::size_t(std::max(1, jobs));
  workers = std::min(workers, count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i)
      if (!ok(i)) return i;
    return std::nullopt;
  }
  std::atomic<std::size_t> best{count};
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count || i >= best.load()) return;
        bool good = true;
        try {
          good = ok(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          good = false;
        }
        if (!good) {
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  if (best.load() == count) return std::nullopt;
  return best.load();
}

namespace {

PartialAssignment pins_along(const DecoratedMap& f, const DecoratedMap& i) {
  PartialAssignment fixed(std::size_t(i.target.complex().size()));
  for (CellIndex a = 0; a < i.source.complex().size(); ++a) {
    Simplex s = i.assign[std::size_t(a)];
    if (s.degenerate()) throw PreconditionError("extension along a map that is not a mono");
    fixed[std::size_t(s.cell)] = f.assign[std::size_t(a)];
  }
  return fixed;
}

void require_kinds(const Decorated& b, const Decorated& x) {
  if (b.kind() != x.kind())
    throw DecorationError("lifting problem mixes " + kind_name(b.kind()) + " and " + kind_name(x.kind()) + " data");
}

// Every tracked nondegenerate cell is distinguished.
bool all_marked(const Decorated& x) {
  for (CellIndex c = 0; c < x.complex().size(); ++c)
    if (tracks(x.kind(), x.complex().dim(c)) && !x.marked(c)) return false;
  return true;
}

// Extensions into a 0-coskeletal set are determined by vertices and always
// exist below its truncation dimension, as long as decorations impose nothing.
bool coskeletal_shortcut(const Decorated& x, const Decorated& b) {
  return x.complex().coskeletal0() && !x.complex().empty() && b.complex().max_dim() <= x.complex().max_dim() && all_marked(x);
}

json assignment_json(const Decorated& source, const Decorated& target, const Assignment& a) {
  return assignment_to_json(source.complex(), target.complex(), a);
}

Report start(const std::string& check, int bound) {
  Report r;
  r.check = check;
  r.bound = bound;
  return r;
}

}  // namespace

std::vector<DecoratedMap> extensions(const DecoratedMap& f, const DecoratedMap& i) {
  require_kinds(i.target, f.target);
  MapSearch s{&i.target, &f.target, pins_along(f, i), nullptr, {}, true};
  std::vector<DecoratedMap> out;
  for (auto& a : all_maps(s)) out.push_back({i.target, f.target, std::move(a)});
  return out;
}

bool has_extension(const DecoratedMap& f, const DecoratedMap& i) {
  require_kinds(i.target, f.target);
  if (coskeletal_shortcut(f.target, i.target)) return true;
  MapSearch s{&i.target, &f.target, pins_along(f, i), nullptr, {}, true};
  return first_map(s).has_value();
}

Report has_rlp(const Decorated& x, const std::vector<GeneratorInstance>& gens, const CheckOptions& opt) {
  Report r = start("rlp", opt.nmax);
  for (const auto& g : gens) {
    if (g.dimension() > opt.nmax) continue;
    require_kinds(g.map.target, x);
    if (coskeletal_shortcut(x, g.map.target)) continue;
    MapSearch tops{&g.map.source, &x, {}, nullptr, {}, true};
    auto fs = all_maps(tops);
    auto bad = first_failure(fs.size(), opt.jobs, [&](std::size_t k) {
      DecoratedMap f{g.map.source, x, fs[k]};
      MapSearch s{&g.map.target, &x, pins_along(f, g.map), nullptr, {}, true};
      return first_map(s).has_value();
    });
    if (bad) {
      r.pass = false;
      r.counterexample = Counterexample{g.name, assignment_json(g.map.source, x, fs[*bad]), nullptr, ""};
      return r;
    }
  }
  return r;
}

Report has_rlp(const Decorated& x, const std::string& fam, const CheckOptions& opt) {
  auto r = has_rlp(x, family(fam, opt.nmax), opt);
  r.check = "rlp:" + fam;
  return r;
}

namespace {

// First failing square (f, g) for one generator against p, or nullopt.
std::optional<Counterexample> rel_failure(const DecoratedMap& p, const GeneratorInstance& g, const CheckOptions& opt,
                                          const std::function<bool(const Assignment&)>& top_filter = {}) {
  const Decorated& x = p.source;
  const Decorated& y = p.target;
  require_kinds(g.map.target, x);
  MapSearch tops{&g.map.source, &x, {}, nullptr, {}, true};
  auto fs = all_maps(tops);
  if (top_filter) fs.erase(std::remove_if(fs.begin(), fs.end(), [&](const Assignment& a) { return !top_filter(a); }), fs.end());
  // Bottom maps B -> Y are decorated with the kind of B; Y may track less.
  auto first_bad_bottom = [&](std::size_t k) -> std::optional<Assignment> {
    DecoratedMap f{g.map.source, x, fs[k]};
    DecoratedMap pf = compose(p, f);
    MapSearch bottoms{&g.map.target, &y, pins_along(pf, g.map), nullptr, {}, true};
    std::optional<Assignment> bad;
    std::vector<Assignment> gs = all_maps(bottoms);
    auto fixed = pins_along(f, g.map);
    for (const auto& b : gs) {
      MapSearch lift{&g.map.target, &x, fixed, &p, b, true};
      if (!first_map(lift)) return b;
    }
    return std::nullopt;
  };
  auto bad = first_failure(fs.size(), opt.jobs, [&](std::size_t k) { return !first_bad_bottom(k).has_value(); });
  if (!bad) return std::nullopt;
  auto b = first_bad_bottom(*bad);
  return Counterexample{g.name, assignment_json(g.map.source, x, fs[*bad]), assignment_json(g.map.target, y, *b), ""};
}

}  // namespace

Report has_rlp_rel(const DecoratedMap& p, const std::vector<GeneratorInstance>& gens, const CheckOptions& opt) {
  Report r = start("relative-rlp", opt.nmax);
  for (const auto& g : gens) {
    if (g.dimension() > opt.nmax) continue;
    if (auto c = rel_failure(p, g, opt)) {
      r.pass = false;
      r.counterexample = std::move(c);
      return r;
    }
  }
  return r;
}

Report has_rlp_rel(const DecoratedMap& p, const std::string& fam, const CheckOptions& opt) {
  auto r = has_rlp_rel(p, family(fam, opt.nmax), opt);
  r.check = "relative-rlp:" + fam;
  return r;
}

namespace {

std::string normalize_class(std::string c) {
  std::replace(c.begin(), c.end(), '_', '-');
  return c;
}

// k of "k-trivial(k)" / "k-trivial:k=K", or -1.
int trivial_level(const std::string& c) {
  for (const std::string prefix : {"k-trivial(", "k-trivial:k="}) {
    if (c.rfind(prefix, 0) != 0) continue;
    std::string rest = c.substr(prefix.size());
    if (prefix.back() == '(') {
      if (rest.empty() || rest.back() != ')') return -1;
      rest.pop_back();
    }
    if (rest.empty() || !std::all_of(rest.begin(), rest.end(), ::isdigit)) return -1;
    return std::stoi(rest);
  }
  return -1;
}

}  // namespace

std::vector<std::string> class_families(const std::string& cls_raw) {
  std::string cls = normalize_class(cls_raw);
  if (cls == "weak-inf-bicat") return {"scaled_S"};
  if (cls == "complicial") return {"complicial_horn", "thinness"};
  if (cls == "complicial2") return {"complicial_horn", "thinness_2trivial", "trivializer(2)", "saturation"};
  if (cls == "saturated") return {"saturation"};
  int k = trivial_level(cls);
  if (k >= 0) return {"trivializer(" + std::to_string(k) + ")"};
  throw ParameterError("unknown class '" + cls_raw + "'");
}

Report classify(const Decorated& x, const std::string& cls, const CheckOptions& opt) {
  auto fams = class_families(cls);
  Kind want = normalize_class(cls) == "weak-inf-bicat" ? Kind::scaled : Kind::stratified;
  if (x.kind() != want)
    throw DecorationError("class '" + cls + "' needs a " + kind_name(want) + " set, got " + kind_name(x.kind()));
  std::vector<GeneratorInstance> gens;
  for (const auto& f : fams) {
    auto part = family(f, opt.nmax);
    gens.insert(gens.end(), part.begin(), part.end());
  }
  auto r = has_rlp(x, gens, opt);
  r.check = normalize_class(cls);
  return r;
}

namespace {

Decorated as_scaled(const Decorated& x) {
  if (x.kind() == Kind::scaled) return x;
  if (!tracks(x.kind(), 2)) throw DecorationError("expected a set with thin triangles");
  return x.with_kind(Kind::scaled);
}

DecoratedMap scaled_part(const DecoratedMap& p) { return {as_scaled(p.source), as_scaled(p.target), p.assign}; }

DecoratedMap plain_part(const DecoratedMap& p) {
  return {p.source.with_kind(Kind::plain), p.target.with_kind(Kind::plain), p.assign};
}

}  // namespace

Report is_cartesian_edge(const DecoratedMap& p_raw, Simplex edge, const CheckOptions& opt) {
  auto p = scaled_part(p_raw);
  Report r = start("cartesian-edge", opt.nmax);
  for (int n = 2; n <= opt.nmax; ++n) {
    auto g = generator("cartesian:n=" + std::to_string(n));
    // The horn's last edge {n-1, n}.
    CellIndex last = g.map.source.complex().at(std::to_string(n - 1) + std::to_string(n));
    if (n >= 10) last = g.map.source.complex().at(std::to_string(n - 1) + "." + std::to_string(n));
    auto c = rel_failure(p, g, opt, [&](const Assignment& a) { return a[std::size_t(last)] == edge; });
    if (c) {
      r.pass = false;
      r.counterexample = std::move(c);
      return r;
    }
  }
  return r;
}

namespace {

Report outer_fibration(const DecoratedMap& p, const CheckOptions& opt) {
  auto sp = scaled_part(p);
  Report r = start("outer-fib", opt.nmax);
  const auto& x = sp.source.complex();
  for (CellIndex t = x.begin_of_dim(2); t < x.end_of_dim(2); ++t) {
    bool thin = sp.source.marked(t);
    bool image_thin = sp.target.distinguished(sp.assign[std::size_t(t)]);
    if (thin != image_thin) {
      r.pass = false;
      json m;
      m[x.id(t)] = ref_to_json(sp.target.complex(), sp.assign[std::size_t(t)]);
      r.counterexample = Counterexample{"thin-detection", m, nullptr,
                                        std::string("triangle '") + x.id(t) + "' is " + (thin ? "thin" : "not thin") +
                                            " but its image is " + (image_thin ? "thin" : "not thin")};
      return r;
    }
  }
  for (const char* fam : {"weak_fib", "outer_collapsed"}) {
    auto rr = std::string(fam) == "weak_fib" ? has_rlp_rel(sp, fam, opt) : has_rlp_rel(plain_part(p), fam, opt);
    if (!rr.pass) {
      rr.check = "outer-fib";
      return rr;
    }
  }
  return r;
}

Report outer_cartesian(const DecoratedMap& p, const CheckOptions& opt) {
  Report r = outer_fibration(p, opt);
  r.check = "outer-cartesian";
  if (!r.pass) return r;
  const auto& x = p.source.complex();
  const auto& y = p.target.complex();
  // Edges of Y, degenerate ones included, then lifts of their targets.
  for (CellIndex e = 0; e < y.end_of_dim(1); ++e) {
    Simplex ey = y.dim(e) == 0 ? y.degeneracy({e, 0}, 0) : Simplex{e, 0};
    Simplex ytgt = y.face(ey, 0);
    for (CellIndex v = x.begin_of_dim(0); v < x.end_of_dim(0); ++v) {
      if (p.assign[std::size_t(v)] != ytgt) continue;
      bool found = false;
      for (const auto& cand : x.boundary_index(1).all) {
        if (x.face(cand, 0) != Simplex{v, 0} || p.apply(cand) != ey) continue;
        if (is_cartesian_edge(p, cand, opt).pass) {
          found = true;
          break;
        }
      }
      if (!found) {
        r.pass = false;
        json m;
        m["edge"] = ref_to_json(y, ey);
        m["target"] = x.id(v);
        r.counterexample = Counterexample{"cartesian-lift", m, nullptr, "no cartesian lift of the edge ending at the vertex"};
        return r;
      }
    }
  }
  return r;
}

}  // namespace

Report classify_map(const DecoratedMap& p, const std::string& cls_raw, const CheckOptions& opt) {
  std::string cls = normalize_class(cls_raw);
  if (cls == "weak-fib") {
    auto r = has_rlp_rel(scaled_part(p), "weak_fib", opt);
    r.check = cls;
    return r;
  }
  if (cls == "outer-fib") return outer_fibration(p, opt);
  if (cls == "outer-cartesian") return outer_cartesian(p, opt);
  if (cls == "outer-cocartesian") {
    auto sp = scaled_part(p);
    auto xo = opposite(sp.source);
    auto yo = opposite(sp.target);
    auto r = outer_cartesian(opposite(sp, xo, yo), opt);
    r.check = cls;
    return r;
  }
  throw ParameterError("unknown map class '" + cls_raw + "'");
}

}  // namespace scaled
