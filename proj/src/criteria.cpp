#include "parafree/criteria.hpp"

#include "parafree/error.hpp"
#include "parafree/normal_form.hpp"

#include <algorithm>
#include <functional>

namespace parafree {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Parafree: return "parafree";
    case Status::NotParafree: return "not_parafree";
    case Status::Unknown: return "unknown";
  }
  return "unknown";
}

Status status_of(Truth t) {
  switch (t) {
    case Truth::Yes: return Status::Parafree;
    case Truth::No: return Status::NotParafree;
    case Truth::Unknown: return Status::Unknown;
  }
  return Status::Unknown;
}

namespace {

bool is_free_vertex(const GraphOfGroups& g) {
  return g.vertices().size() == 1 && g.edges().empty();
}

std::string piece_name(const GraphOfGroups& g) {
  std::string out = "{";
  for (const auto& v : g.vertices()) out += (out.size() > 1 ? "," : "") + v.id;
  return out + "}";
}

std::vector<std::string> vertex_ids(const GraphOfGroups& g) {
  std::vector<std::string> out;
  for (const auto& v : g.vertices()) out.push_back(v.id);
  return out;
}

IntVector to_integer(const ExponentVector& x) {
  IntVector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = static_cast<long>(x(i));
  return out;
}

// Yes iff the image of x in Z^n / rowspace(relations) is not a proper power.
Determination abelian_non_power(const IntMatrix& relations, const IntVector& x) {
  const Cokernel c(relations, x.size());
  const CokernelElement image = c.image(x);
  if (c.invariants().torsion_free()) {
    IntVector coords(static_cast<Eigen::Index>(image.free.size()));
    for (std::size_t i = 0; i < image.free.size(); ++i)
      coords(static_cast<Eigen::Index>(i)) = image.free[i];
    ContentCertificate cert = content_certificate(coords);
    return cert.primitive() ? Determination::yes("abelian_content", std::move(cert))
                            : Determination::no("abelian_content", std::move(cert));
  }
  auto divisor = proper_power_divisor(image, c.invariants());
  AbelianImageCertificate cert{c.invariants(), image, divisor};
  return divisor ? Determination::no("abelian_power_test", std::move(cert))
                 : Determination::yes("abelian_power_test", std::move(cert));
}

IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out = IntMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// Assumes w nontrivial.
Determination non_power(const GraphOfGroups& g, const Presentation& p, const Word& w) {
  const std::size_t rank = p.generators.rank();
  if (is_free_vertex(g)) {
    RootDecomposition rd = primitive_root(w);
    const bool primitive = rd.exponent == 1;
    RootCertificate cert{piece_name(g), p.generators, w, std::move(rd)};
    return primitive ? Determination::yes("primitive_root", std::move(cert))
                     : Determination::no("primitive_root", std::move(cert));
  }
  Determination ab = abelian_non_power(relation_matrix(p), to_integer(exponent_vector(w, rank)));
  if (ab.value == Truth::Yes) return ab;
  RootDecomposition rd = primitive_root(w);
  if (rd.is_proper_power())
    return Determination::no("syntactic_power",
                             RootCertificate{piece_name(g), p.generators, w, std::move(rd)});
  ab.value = Truth::Unknown;
  ab.rule = "composite_power";
  return ab;
}

void require_nontrivial(const GraphOfGroups& g, const Presentation& p, const Word& w,
                        const std::string& name) {
  if (w.support_rank() > p.generators.rank())
    throw Error(ErrorCode::UnknownGenerator, name + " uses a generator outside its group");
  const Determination d = is_nontrivial(g, to_mixed_word(g, p, w));
  if (d.value == Truth::No) throw Error(ErrorCode::Precondition, name + " is trivial");
  if (d.value == Truth::Unknown)
    throw Error(ErrorCode::Precondition, "cannot establish that " + name + " is nontrivial");
}

Determination amalgam_cond2(const Presentation& pl, const Presentation& pr, const Word& u,
                            const Word& v) {
  const auto rl = static_cast<Eigen::Index>(pl.generators.rank());
  const auto rr = static_cast<Eigen::Index>(pr.generators.rank());
  IntVector x(rl + rr);
  x.head(rl) = to_integer(exponent_vector(u, pl.generators.rank()));
  x.tail(rr) = -to_integer(exponent_vector(v, pr.generators.rank()));
  return abelian_non_power(block_diagonal(relation_matrix(pl), relation_matrix(pr)), x)
      .labelled("cond2");
}

Determination hnn_cond2(const Presentation& base, const Word& u, const Word& v) {
  const std::size_t r = base.generators.rank();
  const IntVector x = to_integer(exponent_vector(u, r) - exponent_vector(v, r));
  return abelian_non_power(relation_matrix(base), x).labelled("cond2");
}

Determination either_non_power(const GraphOfGroups& gu, const Presentation& pu, const Word& u,
                               const GraphOfGroups& gv, const Presentation& pv, const Word& v) {
  return any_of("either_not_proper_power",
                {non_power(gu, pu, u).labelled("u"), non_power(gv, pv, v).labelled("v")})
      .labelled("cond3");
}

Presentation hnn_presentation(const Presentation& base, const std::string& stable, const Word& u,
                              const Word& v) {
  Presentation p = base;
  auto names = base.generators.names();
  const Letter t = make_letter(names.size(), 1);
  names.push_back(stable);
  p.generators = Alphabet(std::move(names));
  const Letter tt[] = {t};
  const Letter ti[] = {-t};
  const Word tw = Word::from_letters(tt);
  const Word tinv = Word::from_letters(ti);
  p.relations.push_back({stable, tw * u * tinv * v.inverse()});
  ++p.stable_letters;
  return p;
}

std::string fresh_stable_name(const Alphabet& a) {
  if (!a.index_of("t")) return "t";
  for (int i = 1;; ++i) {
    std::string name = "t" + std::to_string(i);
    if (!a.index_of(name)) return name;
  }
}

// Everything condition 4 of one HNN step needs.
struct HnnStep {
  GraphOfGroups base;
  Presentation base_presentation;
  std::string stable;
  Word u;
  Word v;
  std::function<SearchOutcome()> search;
};

Determination hnn_cond4(const HnnStep& s, Truth cond2, Truth cond3, bool settled,
                        const CheckOptions& options) {
  const Presentation wp = hnn_presentation(s.base_presentation, s.stable, s.u, s.v);
  Determination ab = abelian_survival(wp, s.u);
  if (ab.value == Truth::Yes) return ab.labelled("cond4");

  const bool free_base = is_free_vertex(s.base);
  const std::size_t rank = s.base_presentation.generators.rank();
  if (free_base && rank == 2 && options.rank2_fast_path) {
    IntMatrix rows(2, 2);
    rows.row(0) = to_integer(exponent_vector(s.u, 2)).transpose();
    rows.row(1) = to_integer(exponent_vector(s.v, 2)).transpose();
    const Integer det = determinant(rows);
    DeterminantCertificate cert{rows, det};
    if (det != 0) return Determination::yes("rank2_determinant", std::move(cert)).labelled("cond4");
    if (cond2 == Truth::Yes && cond3 == Truth::Yes)
      return Determination::no("rank2_determinant", std::move(cert)).labelled("cond4");
    return Determination::unknown("rank2_determinant_vanishes", std::move(cert)).labelled("cond4");
  }
  if (free_base && rank == 1) {
    const std::int64_t m = exponent_vector(s.u, 1)(0);
    const std::int64_t n = exponent_vector(s.v, 1)(0);
    if ((m == 2 * n || n == 2 * m) && (m * m == 1 || n * n == 1))
      return Determination::no("rank1_descent",
                               Note{"the relation gives [t,a] = a up to orientation, so a lies "
                                    "in every term of the lower central series"})
          .labelled("cond4");
  }
  if (settled)
    return Determination::unknown("search_skipped", Note{"search skipped: verdict already determined"})
        .labelled("cond4");
  SearchOutcome outcome = s.search();
  if (outcome.witness) return Determination::yes("nil_witness", std::move(*outcome.witness)).labelled("cond4");
  return Determination::unknown("search_bounds_exhausted", std::move(outcome.report)).labelled("cond4");
}

Determination from_verdict(const Verdict& v, std::string label) {
  const Truth t = v.status == Status::Parafree      ? Truth::Yes
                  : v.status == Status::NotParafree ? Truth::No
                                                    : Truth::Unknown;
  Determination d{std::move(label), t, "recursive_check", Note{std::string(to_string(v.status))}, {}};
  for (const auto& [id, c] : v.conditions) d.parts.push_back(c);
  return d;
}

Truth verdict_truth(const std::map<std::string, Determination>& conditions) {
  std::vector<Truth> values;
  for (const auto& [id, c] : conditions) values.push_back(c.value);
  return conjunction(values);
}

std::vector<std::string> removal_order(const GraphOfGroups& g, const CheckOptions& options) {
  std::vector<std::string> ids;
  for (std::size_t e : g.edges_by_id()) ids.push_back(g.edges()[e].id);
  if (!options.edge_order) return ids;
  std::vector<std::string> given = *options.edge_order;
  std::vector<std::string> sorted = given;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != ids)
    throw Error(ErrorCode::UnknownEdge, "edge order must list every edge exactly once");
  return given;
}

}  // namespace

Determination not_proper_power_in(const GraphOfGroups& group, const Word& w) {
  const Presentation p = present(group);
  require_nontrivial(group, p, w, "w");
  return non_power(group, p, w);
}

Verdict check_gog(const GraphOfGroups& g, const CheckOptions& options) {
  const auto order = removal_order(g, options);
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;

  Verdict out;
  out.bounds = options.bounds;
  const Abelianization ab = abelianization(g);
  const std::int64_t expected = expected_rank(g);
  AbelianCertificate ab_cert{ab.invariants, expected};
  const bool cond2_holds = ab.invariants.torsion_free() &&
                           static_cast<std::int64_t>(ab.invariants.free_rank) == expected;
  Determination cond2 = cond2_holds ? Determination::yes("abelianization", ab_cert)
                                    : Determination::no("abelianization", ab_cert);

  std::vector<std::pair<std::size_t, HnnStep>> pending;  // (trace index, step)
  std::function<void(const GraphOfGroups&)> walk = [&](const GraphOfGroups& h) {
    if (h.edges().empty()) return;
    const Edge* first = &h.edges().front();
    for (const auto& e : h.edges())
      if (position.at(e.id) < position.at(first->id)) first = &e;
    Decomposition d = decompose(h, first->id);
    Step step{d.removed_edge, d.kind, d.group, vertex_ids(d.left),
              d.right ? vertex_ids(*d.right) : std::vector<std::string>{}, {}};
    if (d.group == EdgeGroup::InfiniteCyclic) {
      const Presentation pl = present(d.left);
      if (d.kind == DecompositionKind::Amalgam) {
        const Presentation pr = present(*d.right);
        step.conditions.push_back(amalgam_cond2(pl, pr, d.u, d.v));
        step.conditions.push_back(either_non_power(d.left, pl, d.u, *d.right, pr, d.v));
      } else {
        step.conditions.push_back(hnn_cond2(pl, d.u, d.v));
        step.conditions.push_back(either_non_power(d.left, pl, d.u, d.left, pl, d.v));
        const std::string edge = d.removed_edge;
        pending.emplace_back(out.trace.size(),
                             HnnStep{d.left, pl, edge, d.u, d.v, [&g, edge, &options]() {
                                       return search_witness(g, edge, options.bounds, options.search);
                                     }});
      }
    }
    out.trace.push_back(std::move(step));
    walk(d.left);
    if (d.right) walk(*d.right);
  };
  walk(g);

  std::vector<Determination> cond3_parts;
  bool settled = cond2.value == Truth::No;
  for (const Step& s : out.trace) {
    if (s.conditions.empty()) continue;
    if (cond2.value == Truth::Yes && s.conditions[0].value != Truth::Yes)
      throw Error(ErrorCode::Internal, "abelianization condition holds globally but fails at edge " + s.edge);
    cond3_parts.push_back(s.conditions[1]);
    cond3_parts.back().label = s.edge;
    if (s.conditions[1].value == Truth::No) settled = true;
  }

  std::vector<Determination> cond4_parts;
  for (auto& [index, hnn] : pending) {
    Step& s = out.trace[index];
    Determination c4 = hnn_cond4(hnn, s.conditions[0].value, s.conditions[1].value, settled, options);
    if (c4.value == Truth::No) settled = true;
    s.conditions.push_back(c4);
    cond4_parts.push_back(std::move(c4));
    cond4_parts.back().label = s.edge;
  }

  out.conditions["cond1"] = Determination::yes("free_vertex_groups").labelled("cond1");
  out.conditions["cond2"] = std::move(cond2.labelled("cond2"));
  if (cond3_parts.empty()) {
    out.conditions["cond3"] = Determination::yes("no_cyclic_edges").labelled("cond3");
  } else {
    Determination c3 = all_of("edge_decomposition", std::move(cond3_parts));
    c3.evidence = Note{"centralizer condition evaluated edge by edge along the decomposition"};
    out.conditions["cond3"] = std::move(c3.labelled("cond3"));
  }
  out.conditions["cond4"] = cond4_parts.empty()
                                ? Determination::yes("no_cyclic_hnn_edges").labelled("cond4")
                                : all_of("hnn_edges", std::move(cond4_parts)).labelled("cond4");
  out.status = status_of(verdict_truth(out.conditions));
  return out;
}

Verdict check_amalgam(const GraphOfGroups& U, const GraphOfGroups& V, const Word& u,
                      const Word& v, const CheckOptions& options) {
  const Presentation pu = present(U);
  const Presentation pv = present(V);
  require_nontrivial(U, pu, u, "u");
  require_nontrivial(V, pv, v, "v");

  CheckOptions sub = options;
  sub.edge_order.reset();
  const Verdict vu = check_gog(U, sub);
  const Verdict vv = check_gog(V, sub);

  Verdict out;
  out.bounds = options.bounds;
  out.trace = vu.trace;
  out.trace.insert(out.trace.end(), vv.trace.begin(), vv.trace.end());
  out.conditions["cond1"] =
      all_of("factors_parafree", {from_verdict(vu, "U"), from_verdict(vv, "V")}).labelled("cond1");
  out.conditions["cond2"] = amalgam_cond2(pu, pv, u, v);
  out.conditions["cond3"] = either_non_power(U, pu, u, V, pv, v);
  out.status = status_of(verdict_truth(out.conditions));
  return out;
}

Verdict check_hnn(const GraphOfGroups& U, const Word& u, const Word& v,
                  const CheckOptions& options) {
  const Presentation pu = present(U);
  require_nontrivial(U, pu, u, "u");
  require_nontrivial(U, pu, v, "v");

  CheckOptions sub = options;
  sub.edge_order.reset();
  const Verdict vu = check_gog(U, sub);

  Verdict out;
  out.bounds = options.bounds;
  out.trace = vu.trace;
  out.conditions["cond1"] = from_verdict(vu, "cond1");
  out.conditions["cond2"] = hnn_cond2(pu, u, v);
  out.conditions["cond3"] = either_non_power(U, pu, u, U, pu, v);

  const std::string stable = fresh_stable_name(pu.generators);
  const Presentation wp = hnn_presentation(pu, stable, u, v);
  HnnStep step{U, pu, stable, u, v, [&]() {
                 return search_witness(wp, u, stable, options.bounds, options.search);
               }};
  bool settled = false;
  for (const auto& [id, c] : out.conditions) settled = settled || c.value == Truth::No;
  out.conditions["cond4"] = hnn_cond4(step, out.conditions["cond2"].value,
                                      out.conditions["cond3"].value, settled, options);
  out.status = status_of(verdict_truth(out.conditions));
  return out;
}

}  // namespace parafree
