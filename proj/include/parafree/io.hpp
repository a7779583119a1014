#pragma once

// Instance files and JSON reports.
//
// Reports are byte-stable: object keys are sorted, integers wider than 53
// bits are written as decimal strings, and nothing depends on time or on
// the number of worker threads.

#include "parafree/criteria.hpp"
#include "parafree/graph_of_groups.hpp"
#include "parafree/nil_witness.hpp"
#include "parafree/normal_form.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace parafree {

inline constexpr std::string_view kToolVersion = "parafree 0.1.0";

/// Throws Error(Json) naming the byte offset or field path, WordSyntaxError
/// prefixed with the field path, or the validation errors of the graph.
GraphOfGroups parse_instance(std::string_view text);

nlohmann::json instance_to_json(const GraphOfGroups& g);
std::string serialize_instance(const GraphOfGroups& g);

nlohmann::json to_json(const Integer& x);
nlohmann::json to_json(const Determination& d);
nlohmann::json to_json(const NilWitness& w);
nlohmann::json to_json(const SearchReport& r);
nlohmann::json to_json(const SearchBounds& b);
nlohmann::json to_json(const CokernelInvariants& inv);

nlohmann::json verdict_report(const Verdict& v);
nlohmann::json abelianization_report(const GraphOfGroups& g);
nlohmann::json witness_report(const GraphOfGroups& g, std::string_view edge,
                              const SearchBounds& bounds, const SearchOptions& options = {});
nlohmann::json normal_form_report(const GraphOfGroups& g, std::string_view word);

/// Two-space indentation and a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace parafree
