#include "parafree/io.hpp"

#include "parafree/error.hpp"

#include <map>

namespace parafree {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::Json, path + "." + key + " missing");
  return *it;
}

std::string string_field(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_string()) throw Error(ErrorCode::Json, path + "." + key + ": expected a string");
  return v.get<std::string>();
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  if (!obj.is_object()) throw Error(ErrorCode::Json, path + ": expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw Error(ErrorCode::Json, path + ": unexpected key '" + k + "'");
  }
}

std::string path_of(std::string_view array, std::size_t i) {
  return std::string(array) + "[" + std::to_string(i) + "]";
}

}  // namespace

GraphOfGroups parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Json, "invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  only_keys(doc, {"vertices", "edges"}, "$");
  const json& vertices = field(doc, "vertices", "$");
  if (!vertices.is_array()) throw Error(ErrorCode::Json, "$.vertices: expected an array");

  RawGraphOfGroups raw;
  std::map<std::string, Alphabet> alphabets;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string path = path_of("vertices", i);
    const json& v = vertices[i];
    only_keys(v, {"id", "generators"}, path);
    RawVertex rv;
    rv.id = string_field(v, "id", path);
    const json& gens = field(v, "generators", path);
    if (!gens.is_array()) throw Error(ErrorCode::Json, path + ".generators: expected an array");
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (!gens[j].is_string())
        throw Error(ErrorCode::Json, path + ".generators[" + std::to_string(j) + "]: expected a string");
      rv.generators.push_back(gens[j].get<std::string>());
    }
    try {
      alphabets.emplace(rv.id, Alphabet(rv.generators));
    } catch (const Error& e) {
      throw Error(e.code(), path + ".generators: " + e.what());
    }
    raw.vertices.push_back(std::move(rv));
  }

  if (auto it = doc.find("edges"); it != doc.end()) {
    if (!it->is_array()) throw Error(ErrorCode::Json, "$.edges: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = path_of("edges", i);
      const json& e = (*it)[i];
      only_keys(e, {"id", "from", "to", "edge_group", "u", "v"}, path);
      RawEdge re;
      re.id = string_field(e, "id", path);
      re.from = string_field(e, "from", path);
      re.to = string_field(e, "to", path);
      const std::string group = string_field(e, "edge_group", path);
      if (group == "Z")
        re.group = EdgeGroup::InfiniteCyclic;
      else if (group == "trivial")
        re.group = EdgeGroup::Trivial;
      else
        throw Error(ErrorCode::Json, path + ".edge_group: expected \"trivial\" or \"Z\"");
      auto parse_side = [&](const char* key, const std::string& vertex) -> std::optional<std::vector<Letter>> {
        if (!e.contains(key)) return std::nullopt;
        const std::string text = string_field(e, key, path);
        auto a = alphabets.find(vertex);
        if (a == alphabets.end())
          throw Error(ErrorCode::UnknownVertexRef,
                      path + "." + (key[0] == 'u' ? "from" : "to") + ": unknown vertex '" + vertex + "'");
        try {
          return parse_letters(text, a->second);
        } catch (const WordSyntaxError& w) {
          throw WordSyntaxError(w.position(), path + "." + key + ": " + w.what());
        }
      };
      re.u = parse_side("u", re.from);
      re.v = parse_side("v", re.to);
      raw.edges.push_back(std::move(re));
    }
  }
  return validate(raw);
}

json instance_to_json(const GraphOfGroups& g) {
  json vertices = json::array();
  for (const auto& v : g.vertices()) vertices.push_back({{"id", v.id}, {"generators", v.alphabet.names()}});
  json edges = json::array();
  for (const auto& e : g.edges()) {
    json je = {{"id", e.id},
               {"from", g.vertices()[e.from].id},
               {"to", g.vertices()[e.to].id},
               {"edge_group", e.group == EdgeGroup::InfiniteCyclic ? "Z" : "trivial"}};
    if (e.group == EdgeGroup::InfiniteCyclic) {
      je["u"] = format_word(e.u, g.vertices()[e.from].alphabet);
      je["v"] = format_word(e.v, g.vertices()[e.to].alphabet);
    }
    edges.push_back(std::move(je));
  }
  return {{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

std::string serialize_instance(const GraphOfGroups& g) { return dump(instance_to_json(g)); }

json to_json(const Integer& x) {
  static const Integer limit = Integer(1) << 53;
  if (abs(x) < limit) return x.get_si();
  return to_string(x);
}

namespace {

json count_json(std::uint64_t x) {
  if (x < (std::uint64_t{1} << 53)) return x;
  return std::to_string(x);
}

json integer_list(const std::vector<Integer>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(to_json(x));
  return out;
}

json integer_list(const IntVector& xs) {
  json out = json::array();
  for (Eigen::Index i = 0; i < xs.size(); ++i) out.push_back(to_json(xs(i)));
  return out;
}

struct EvidenceJson {
  json operator()(const std::monostate&) const { return nullptr; }
  json operator()(const Note& n) const { return {{"kind", "note"}, {"text", n.text}}; }
  json operator()(const ContentCertificate& c) const {
    return {{"kind", "content"},
            {"vector", integer_list(c.vector)},
            {"cofactors", integer_list(c.cofactors)},
            {"content", to_json(c.content)}};
  }
  json operator()(const RootCertificate& r) const {
    return {{"kind", "root"},
            {"group", r.group},
            {"word", format_word(r.word, r.alphabet)},
            {"conjugator", format_word(r.decomposition.conjugator, r.alphabet)},
            {"root", format_word(r.decomposition.root, r.alphabet)},
            {"exponent", r.decomposition.exponent}};
  }
  json operator()(const AbelianCertificate& a) const {
    return {{"kind", "abelianization"},
            {"group", to_json(a.invariants)},
            {"expected_rank", a.expected_rank}};
  }
  json operator()(const AbelianImageCertificate& a) const {
    json out = {{"kind", "abelian_image"},
                {"group", to_json(a.group)},
                {"image", {{"free", integer_list(a.image.free)}, {"torsion", integer_list(a.image.torsion)}}}};
    out["power_divisor"] = a.power_divisor ? to_json(*a.power_divisor) : json(nullptr);
    return out;
  }
  json operator()(const SurvivalCertificate& s) const {
    return {{"kind", "abelian_survival"},
            {"coordinate", s.coordinate},
            {"value", to_json(s.value)},
            {"prime", to_json(s.prime)},
            {"modulus", to_json(s.modulus)}};
  }
  json operator()(const DeterminantCertificate& d) const {
    json rows = json::array();
    for (Eigen::Index i = 0; i < d.rows.rows(); ++i) rows.push_back(integer_list(IntVector(d.rows.row(i).transpose())));
    return {{"kind", "determinant"}, {"rows", std::move(rows)}, {"determinant", to_json(d.determinant)}};
  }
  json operator()(const NilWitness& w) const { return parafree::to_json(w); }
  json operator()(const SearchReport& r) const { return parafree::to_json(r); }
};

}  // namespace

json to_json(const CokernelInvariants& inv) {
  return {{"free_rank", inv.free_rank}, {"torsion", integer_list(inv.torsion)}};
}

json to_json(const Determination& d) {
  json out = {{"value", std::string(to_string(d.value))}, {"rule", d.rule}};
  if (!d.label.empty()) out["label"] = d.label;
  json ev = std::visit(EvidenceJson{}, d.evidence);
  if (!ev.is_null()) out["evidence"] = std::move(ev);
  if (!d.parts.empty()) {
    json parts = json::array();
    for (const auto& p : d.parts) parts.push_back(to_json(p));
    out["parts"] = std::move(parts);
  }
  return out;
}

json to_json(const NilWitness& w) {
  json images = json::object();
  for (std::size_t i = 0; i < w.generators.size() && i < w.images.size(); ++i) {
    json digits = json::array();
    const auto& m = w.images[i].matrix();
    for (int r = 0; r < w.n; ++r)
      for (int c = 0; c < w.n; ++c) digits.push_back(m(r, c));
    images[w.generators[i]] = std::move(digits);
  }
  std::string survivor;
  try {
    survivor = format_word(w.surviving_word, Alphabet(w.generators));
  } catch (const Error&) {
    survivor = "";
  }
  return {{"kind", "nil_witness"},
          {"n", w.n},
          {"p", w.p},
          {"images", std::move(images)},
          {"edge", w.edge},
          {"surviving_word", survivor},
          {"checked_relations", w.checked_relations}};
}

json to_json(const SearchReport& r) {
  json targets = json::array();
  for (const auto& t : r.targets)
    targets.push_back({{"n", t.n},
                       {"p", t.p},
                       {"nodes", count_json(t.nodes)},
                       {"samples", count_json(t.samples)},
                       {"exhausted", t.exhausted}});
  return {{"kind", "search"}, {"targets", std::move(targets)}};
}

json to_json(const SearchBounds& b) {
  return {{"dims", b.dims},
          {"primes", b.primes},
          {"exhaustive_cap", count_json(b.exhaustive_cap)},
          {"sample_count", count_json(b.sample_count)},
          {"seed", std::to_string(b.seed)}};
}

json verdict_report(const Verdict& v) {
  json conditions = json::object();
  json evidence = json::object();
  for (const auto& [id, d] : v.conditions) {
    conditions[id] = std::string(to_string(d.value));
    evidence[id] = to_json(d);
  }
  json steps = json::array();
  for (const auto& s : v.trace) {
    json sc = json::object();
    for (const auto& d : s.conditions) sc[d.label] = to_json(d);
    steps.push_back({{"edge", s.edge},
                     {"kind", s.kind == DecompositionKind::Amalgam ? "amalgam" : "hnn"},
                     {"edge_group", s.group == EdgeGroup::InfiniteCyclic ? "Z" : "trivial"},
                     {"left", s.left},
                     {"right", s.right},
                     {"conditions", std::move(sc)}});
  }
  return {{"verdict", std::string(to_string(v.status))},
          {"conditions", std::move(conditions)},
          {"certificate", {{"conditions", std::move(evidence)}, {"decomposition", std::move(steps)}}},
          {"bounds_used", to_json(v.bounds)},
          {"tool_version", std::string(kToolVersion)}};
}

json abelianization_report(const GraphOfGroups& g) {
  const Abelianization ab = abelianization(g);
  return {{"abelianization", to_json(ab.invariants)},
          {"expected_rank", expected_rank(g)},
          {"stable_letters", ab.stable_letters},
          {"torsion_free", ab.invariants.torsion_free()},
          {"tool_version", std::string(kToolVersion)}};
}

json witness_report(const GraphOfGroups& g, std::string_view edge, const SearchBounds& bounds,
                    const SearchOptions& options) {
  bounds.validate();
  const Determination abelian = abelian_witness(g, edge);
  const SearchOutcome outcome = search_witness(g, edge, bounds, options);
  if (outcome.witness && !verify_witness(g, *outcome.witness))
    throw Error(ErrorCode::Internal, "search returned a witness that fails verification");
  return {{"edge", std::string(edge)},
          {"abelian", to_json(abelian)},
          {"result", outcome.found() ? "witness" : "no_witness_up_to_bound"},
          {"witness", outcome.witness ? to_json(*outcome.witness) : json(nullptr)},
          {"search", to_json(outcome.report)},
          {"bounds_used", to_json(bounds)},
          {"tool_version", std::string(kToolVersion)}};
}

json normal_form_report(const GraphOfGroups& g, std::string_view word) {
  const MixedWord mw = parse_mixed_word(word, g);
  const Determination nontrivial = is_nontrivial(g, mw);
  const auto nf = reduce(g, mw);
  json out = {{"word", std::string(word)},
              {"nontrivial", to_json(nontrivial)},
              {"tool_version", std::string(kToolVersion)}};
  if (nf) {
    out["normal_form"] = format_mixed_word(nf->reduced, g);
    out["trivial"] = nf->trivial;
  } else {
    out["normal_form"] = nullptr;
    out["trivial"] = nullptr;
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace parafree
