#pragma once

// JSON encoding of states, reports and certificates.
//
// State: {"N": int, "a": [...], "b": [...], "c": [{"re": x, "im": y}, ...]}
// with c[i] holding c_{i+1}.

#include <string>

#include <json.hpp>

#include "jcbound/criteria.hpp"
#include "jcbound/harness.hpp"
#include "jcbound/jc_dynamics.hpp"
#include "jcbound/normal_form.hpp"
#include "jcbound/range_certifier.hpp"
#include "jcbound/state_core.hpp"

namespace jcbound {

using Json = nlohmann::ordered_json;

/// Throws StructuralError on schema mismatch and InvalidStateError on
/// non-finite or negative populations.
SymmetricState state_from_json(const Json& j);
SymmetricState state_from_string(const std::string& text);

Json to_json(const SymmetricState& s);
Json to_json(const ValidityReport& r);
Json to_json(const CriteriaReport& r);
Json to_json(const NormalForm& nf);
Json to_json(const DenseVector& v);  // [{"re","im"}, ...]
Json to_json(const ProductVector& p);
Json to_json(const Certificate& c);
Json to_json(const GenerationCertificate& c);
Json to_json(const StudyReport& r);
Json to_json(const HullDecomposition& h);

}  // namespace jcbound
