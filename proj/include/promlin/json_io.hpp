#pragma once

#include <json.hpp>

#include "promlin/classify.hpp"
#include "promlin/reduce.hpp"
#include "promlin/solve.hpp"

namespace promlin {

using nlohmann::json;

/// {"kind": ..., "elements": [...], "table": [[...]], "identity": i,
///  "inverse": [...]} — inverse optional, recomputed when absent.
AlgebraPtr algebra_from_json(const json& j);
json algebra_to_json(const Algebra& a);

/// {"domain": [indices], "map": {"src": tgt}}
PartialHom partial_hom_from_json(const json& j, AlgebraPtr source,
                                 AlgebraPtr target);
json partial_hom_to_json(const PartialHom& h);

/// {"m1": ..., "m2": ..., "phi": ...}
PLinTemplate template_from_json(const json& j);
json template_to_json(const PLinTemplate& t);

/// {"variables": [...], "equations": [{"mul": [x,y,z]} | {"fix": [x, label]}]}
EquationSystem system_from_json(const json& j, const Algebra& constants_in);
json system_to_json(const EquationSystem& sys, const Algebra& constants_in);

/// One equation per line: atoms separated by spaces, "=" between sides,
/// constants written c:<label>, inverses x^-1.
GeneralSystem general_system_from_text(const std::string& text,
                                       const Algebra& constants_in);
std::string general_system_to_text(const GeneralSystem& sys,
                                   const Algebra& constants_in);

Digraph digraph_from_json(const json& j);
json digraph_to_json(const Digraph& d);
SigmaPlusStructure sigma_plus_from_json(const json& j);
json sigma_plus_to_json(const SigmaPlusStructure& s);

json classification_to_json(const ClassificationResult& r, const PLinTemplate& t);
json solve_report_to_json(const SolveReport& r, const EquationSystem& sys,
                          const Algebra& s2);
json assignment_to_json(const Assignment& a, const EquationSystem& sys,
                        const Algebra& over);
Assignment assignment_from_json(const json& j, const EquationSystem& sys,
                                const Algebra& over);

json load_json_file(const std::string& path);

}  // namespace promlin
