#pragma once

#include <string>

#include <json.hpp>

#include "specdiag/construct_compact.hpp"
#include "specdiag/dense_matrix.hpp"
#include "specdiag/majorization.hpp"
#include "specdiag/oracle.hpp"
#include "specdiag/seqspec.hpp"
#include "specdiag/verify.hpp"

namespace specdiag {

inline constexpr const char* kSchemaVersion = "specdiag/1";

using Json = nlohmann::json;

Json seqspec_to_json(const SequenceSpec& x);
SequenceSpec seqspec_from_json(const Json& j);

Json matrix_to_json(const DenseMatrix& m);
DenseMatrix matrix_from_json(const Json& j);

Json report_to_json(const MajorizationReport& r);
Json report_to_json(const KadisonReport& r);
Json report_to_json(const VerificationReport& r);
Json certificate_to_json(const Certificate& c);
Json plan_to_json(const CasePlan& p);
CasePlan plan_from_json(const Json& j);
Json sample_to_json(const OrbitSample& s);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

} // namespace specdiag
