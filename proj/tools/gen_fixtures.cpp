// Writes the checked-in fixtures, or with --check compares them to a fresh
// build of each document.
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "scaled/decompose.hpp"
#include "scaled/json_io.hpp"
#include "scaled/strat.hpp"
#include "scaled/twocat.hpp"

using namespace scaled;

namespace {

// The one-step certificate of j_i: the Delta^4 generator collapsed along the
// degeneracy repeating vertex i.
Certificate j_certificate(int i) {
  auto goal = generator("j:i=" + std::to_string(i)).map;
  auto gen = generator("scaled-S:delta4");
  std::vector<int> theta{0, 1, 2, 3};
  theta.insert(theta.begin() + i, i);
  Certificate c;
  c.goal = goal;
  c.family = "scaled_S";
  c.steps.push_back({gen.name, assignment_to_json(gen.map.source.complex(), goal.source.complex(), simplex_operator(4, 3, theta).assign)});
  return c;
}

// Moving-lemma input over the walking isomorphism: a collapsing rho, B the
// whole simplex and a nondegenerate end triangle.
json move_example(const Decorated& c) {
  auto src = flat(standard_simplex(2), Kind::scaled);
  MapSearch ms;
  ms.source = &src;
  ms.target = &c;
  ms.check_decorations = false;
  ms.fixed.assign(std::size_t(src.complex().size()), std::nullopt);
  json end = json::object();
  for (const auto& m : all_maps(ms)) {
    if (m.back().degenerate()) continue;
    for (CellIndex y = 0; y < src.complex().size(); ++y) end[src.complex().id(y)] = ref_to_json(c.complex(), m[std::size_t(y)]);
    break;
  }
  return json{{"schema", kSchema}, {"type", "move-data"}, {"rho", {0, 1, 1}}, {"a", json::array()}, {"b", {{0, 1, 2}}}, {"end", end}};
}

std::map<std::string, json> fixtures() {
  std::map<std::string, json> out;
  auto iso = nerve2(walking_isomorphism(), 4).object;
  out["nerve_walking_iso.json"] = decoration_to_json(iso);
  out["boundary2_flat.json"] = decoration_to_json(flat(standard_boundary(2), Kind::scaled));
  for (int i = 1; i <= 2; ++i) {
    auto c = j_certificate(i);
    out["j" + std::to_string(i) + "_goal.json"] = map_to_json(c.goal);
    out["j" + std::to_string(i) + "_cert.json"] = c.to_json();
  }
  for (auto v : {PrismVariant::z_upper, PrismVariant::z_lower, PrismVariant::scaled_l})
    for (int n = v == PrismVariant::scaled_l ? 2 : 1; n <= 4; ++n) {
      auto f = prism_filtration(n, v);
      std::string stem = "prism_" + prism_variant_name(v) + "_n" + std::to_string(n);
      out[stem + "_goal.json"] = map_to_json(f.certificate.goal);
      out[stem + "_cert.json"] = f.certificate.to_json();
    }
  for (const auto& [name, d] : two_category_fixtures()) out["twocat_" + name + ".json"] = two_category_to_json(d);
  out["move_example.json"] = move_example(iso);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  bool check = argc == 3 && std::string(argv[1]) == "--check";
  if (argc != 2 && !check) {
    std::cerr << "usage: gen_fixtures DIR | gen_fixtures --check DIR\n";
    return 2;
  }
  const std::filesystem::path dir = argv[argc - 1];
  int stale = 0;
  try {
    if (!check) std::filesystem::create_directories(dir);
    for (const auto& [name, doc] : fixtures()) {
      auto path = (dir / name).string();
      if (!check) {
        write_json_file(path, doc);
        continue;
      }
      if (!std::filesystem::exists(path) || read_json_file(path) != doc) {
        std::cerr << "stale fixture: " << name << "\n";
        ++stale;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return stale ? 1 : 0;
}
