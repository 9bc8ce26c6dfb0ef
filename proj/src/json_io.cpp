#include "monoproj/json_io.hpp"

namespace monoproj {

using nlohmann::json;

json graph_to_json(const FunctionalGraph& g) {
  json verts = json::array();
  for (int v = 0; v < g.size(); ++v) {
    json entry;
    entry["label"] = g.label.empty() ? "v" + std::to_string(v) : g.label[static_cast<size_t>(v)];
    if (g.succ[static_cast<size_t>(v)] >= 0)
      entry["succ"] = g.succ[static_cast<size_t>(v)];
    else
      entry["tag"] = g.tag[static_cast<size_t>(v)] == Tag::Zero ? "zero" : "free";
    verts.push_back(std::move(entry));
  }
  return json{{"vertices", std::move(verts)}};
}

json presentation_to_json(const TPresentation& p) {
  json rels = json::array();
  for (const TRel& r : p.rels) {
    json entry;
    entry["lhs"] = json{{"gen", p.gens[static_cast<size_t>(r.gi)]}, {"pow", r.a}};
    if (r.to_zero)
      entry["rhs"] = nullptr;
    else
      entry["rhs"] = json{{"gen", p.gens[static_cast<size_t>(r.gj)]}, {"pow", r.b}};
    rels.push_back(std::move(entry));
  }
  return json{{"gens", p.gens}, {"rels", std::move(rels)}};
}

json graded_to_json(const GradedPresentation& m) {
  json gens = json::array();
  for (int i = 0; i < m.ngens(); ++i)
    gens.push_back(json{{"name", m.gens[static_cast<size_t>(i)]},
                        {"degree", m.deg[static_cast<size_t>(i)]}});
  json rels = json::array();
  for (const GRel& r : m.rels) {
    json entry;
    entry["lhs"] = json{{"gen", m.gens[static_cast<size_t>(r.gi)]},
                        {"coef", to_string(m.ambient, r.a)}};
    if (r.to_zero)
      entry["rhs"] = nullptr;
    else
      entry["rhs"] = json{{"gen", m.gens[static_cast<size_t>(r.gj)]},
                          {"coef", to_string(m.ambient, r.b)}};
    rels.push_back(std::move(entry));
  }
  return json{{"r", m.r()}, {"gens", std::move(gens)}, {"rels", std::move(rels)}};
}

json sheaf_to_json(const P1Sheaf& F) {
  json matching = json::array();
  for (const MatchedPair& mp : F.matching) {
    const Orbit& op = F.zplus.orbits[static_cast<size_t>(mp.plus_orbit)];
    json entry{{"plus_orbit", mp.plus_orbit},
               {"minus_orbit", mp.minus_orbit},
               {"kind", op.cycle ? "cycle" : "line"},
               {"shift", mp.shift}};
    if (op.cycle) entry["cycle_len"] = op.k;
    matching.push_back(std::move(entry));
  }
  return json{{"plus", graph_to_json(F.plus)},
              {"minus", graph_to_json(F.minus)},
              {"matching", std::move(matching)}};
}

json sections_to_json(const P1Sheaf& F, const std::vector<GlobalSection>& secs) {
  json out = json::array();
  for (const GlobalSection& s : secs)
    out.push_back(json{{"plus", elem_label(F.plus, s.plus)},
                       {"minus", elem_label(F.minus, s.minus)}});
  return out;
}

json report_to_json(const LinearSystemReport& rep) {
  json basis = json::array();
  for (const BasisVector& bv : rep.gamma_basis) {
    json vec = json::array();
    for (const auto& [label, coef] : bv.terms) vec.push_back(json::array({label, coef}));
    basis.push_back(std::move(vec));
  }
  json kernel = json::array();
  for (const auto& combo : rep.kernel) {
    json vec = json::array();
    for (const auto& [idx, coef] : combo) vec.push_back(json::array({idx, coef}));
    kernel.push_back(std::move(vec));
  }
  return json{{"field", rep.field.name()},
              {"dim", rep.gamma_dim},
              {"basis", std::move(basis)},
              {"sections", rep.sections},
              {"rank", rep.rank},
              {"kernel_dim", rep.kernel_dim},
              {"surjective", rep.surjective},
              {"kernel", std::move(kernel)}};
}

}  // namespace monoproj
