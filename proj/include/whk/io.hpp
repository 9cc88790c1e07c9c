#pragma once

#include "whk/constructions.hpp"
#include "whk/hierarchy.hpp"
#include "whk/order.hpp"

#include <json.hpp>

#include <string>

namespace whk::io {

using json = nlohmann::json;

// {"dims":[a,b],"re":[[..]],"im":[[..]]}, row-major.
json to_json(const HermitianOperator& op);
HermitianOperator operator_from_json(const json& j);

// Complex vectors as lists of [re, im] pairs.
json to_json(const Vector& v);
Vector vector_from_json(const json& j, const std::string& field);

json to_json(const ProductVector& v);
json to_json(const ProductDecomposition& d);

// {"dims":[a,b],"vectors":[{"e":[..],"f":[..]}]}
json to_json(const UPBSpec& upb);
UPBSpec upb_from_json(const json& j, const SeeSawOptions& options = {});

json to_json(const BlockPositivityReport& r);
json to_json(const DecompositionCertificate& c);
json to_json(const ClassLabel& label);
json to_json(const SeparatorResult& s);
json to_json(const DeltaResult& d);
json to_json(const FinerVerdict& f);
json to_json(const OptimalityVerdict& o);
json to_json(const BSAResult& b);
json to_json(const MeasureResult& m);

json read_file(const std::string& path);
HermitianOperator read_operator(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace whk::io
