#include "parafree/determination.hpp"

#include <algorithm>

namespace parafree {

std::string_view to_string(Truth t) {
  switch (t) {
    case Truth::Yes: return "yes";
    case Truth::No: return "no";
    case Truth::Unknown: return "unknown";
  }
  return "unknown";
}

Truth conjunction(const std::vector<Truth>& values) {
  Truth out = Truth::Yes;
  for (Truth t : values) out = std::min(out, t);
  return out;
}

Truth disjunction(const std::vector<Truth>& values) {
  Truth out = Truth::No;
  for (Truth t : values) out = std::max(out, t);
  return out;
}

Truth conjunction(std::initializer_list<Truth> values) {
  return conjunction(std::vector<Truth>(values));
}

Truth disjunction(std::initializer_list<Truth> values) {
  return disjunction(std::vector<Truth>(values));
}

bool RootCertificate::verify() const {
  const auto& d = decomposition;
  if (d.exponent < 1 || d.root.empty()) return false;
  if (d.conjugator * d.root.pow(d.exponent) * d.conjugator.inverse() != word) return false;
  // The root must itself be cyclically reduced and not a proper power.
  auto [core, conj] = cyclic_reduce(d.root);
  if (!conj.empty()) return false;
  const std::size_t n = core.size();
  for (std::size_t period = 1; period < n; ++period) {
    if (n % period != 0) continue;
    bool repeats = true;
    for (std::size_t i = period; i < n && repeats; ++i) repeats = core[i] == core[i - period];
    if (repeats) return false;
  }
  return true;
}

Determination Determination::yes(std::string rule, Evidence evidence) {
  return {"", Truth::Yes, std::move(rule), std::move(evidence), {}};
}

Determination Determination::no(std::string rule, Evidence evidence) {
  return {"", Truth::No, std::move(rule), std::move(evidence), {}};
}

Determination Determination::unknown(std::string rule, Evidence evidence) {
  return {"", Truth::Unknown, std::move(rule), std::move(evidence), {}};
}

Determination all_of(std::string rule, std::vector<Determination> parts) {
  std::vector<Truth> values;
  for (const auto& p : parts) values.push_back(p.value);
  return {"", conjunction(values), std::move(rule), {}, std::move(parts)};
}

Determination any_of(std::string rule, std::vector<Determination> parts) {
  std::vector<Truth> values;
  for (const auto& p : parts) values.push_back(p.value);
  return {"", disjunction(values), std::move(rule), {}, std::move(parts)};
}

}  // namespace parafree
